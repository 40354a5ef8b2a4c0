"""Clifford algebra, constant-length Killing fields and generalized normal
homogeneous metrics on spheres."""

__version__ = "0.1.0"
