"""Exact exponent bookkeeping for Maxwell-Klein-Gordon regularity bootstraps."""

__version__ = "0.1.0"
