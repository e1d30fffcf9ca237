"""Counter-based uniform streams and life-testing sample generators."""
