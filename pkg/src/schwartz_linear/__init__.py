"""Schwartz families and S-linear operators on tempered distributions."""

__version__ = "0.1.0"
