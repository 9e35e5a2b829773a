"""Numerical laboratory for Lieb-Thirring inequalities with surface and
relativistic potentials."""

__version__ = "0.1.0"
