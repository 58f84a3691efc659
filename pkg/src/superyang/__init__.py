"""Exact verification engine for the rational double super Yangian."""

__version__ = "0.1.0"
