"""Exact cohomology-ring computations behind non-projectivity obstructions for Kahler manifolds."""

__version__ = "0.1.0"
