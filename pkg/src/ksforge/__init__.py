"""Toolkit for finite-alphabet Kochen-Specker colorings, their gadgets and games."""
__version__ = "0.1.0"
