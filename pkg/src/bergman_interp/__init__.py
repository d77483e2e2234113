"""Constructive interpolation in weighted Bergman spaces and checkers for
weighted differentiation composition operators."""

__version__ = "0.1.0"
