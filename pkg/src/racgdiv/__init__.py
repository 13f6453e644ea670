"""Word combinatorics and divergence measurements for right-angled Coxeter groups."""
__version__ = "0.1.0"
