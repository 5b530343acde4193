"""Pairwise intersecting Minkowski arrangements of homothets of convex bodies."""

__version__ = "0.1.0"
