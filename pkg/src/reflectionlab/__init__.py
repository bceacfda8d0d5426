"""Reflection subgroups of finite Coxeter groups up to conjugacy."""

__version__ = "0.1.0"
