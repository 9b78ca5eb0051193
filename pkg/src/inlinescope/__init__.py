"""Toolkit for measuring, explaining, and amplifying compiler function inlining."""

__version__ = "0.1.0"
