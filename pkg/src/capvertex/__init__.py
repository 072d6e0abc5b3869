"""Wreath Macdonald polynomials and capped vertex identities, computed exactly."""

__version__ = "0.1.0"
