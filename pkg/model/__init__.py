"""Domain types, errors and validation."""
