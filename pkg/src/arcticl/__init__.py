"""arcticl: arctic curves of the free-fermion six-vertex model on L-shaped domains."""

__version__ = "0.1.0"
