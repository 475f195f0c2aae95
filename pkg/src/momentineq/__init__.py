"""Exact randomization tests of many moment inequalities."""

__version__ = "0.1.0"
