"""Polarity-based autofocus for event cameras."""

__version__ = "0.1.0"
