"""Command implementations, table catalogue and result files."""
