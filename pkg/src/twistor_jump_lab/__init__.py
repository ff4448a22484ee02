"""Exact computations for jumping twistor lines and hyper-Kahler metrics."""

__version__ = "0.1.0"
