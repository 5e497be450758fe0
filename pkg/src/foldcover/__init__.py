"""Paperfolding curves, plane coverings and their derivation calculus."""

__version__ = "0.1.0"
