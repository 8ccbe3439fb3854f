"""Unitary group generated by the conjugated Dunkl operator on the real line."""

__version__ = "0.1.0"
