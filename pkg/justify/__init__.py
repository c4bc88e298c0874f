"""Fit, test and simulate justifiability models of choice."""

__version__ = "0.1.0"
