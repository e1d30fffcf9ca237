"""Closed-form constants and point estimators."""
