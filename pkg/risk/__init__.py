"""Linex loss, analytic risks and the Monte Carlo risk engine."""
