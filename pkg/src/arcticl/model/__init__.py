"""Six-vertex model on the L-shaped domain: geometry, weights and exact enumeration."""
