"""Orbit, Fourier and sieve computations for two prehomogeneous lattices
(binary cubic forms; pairs of ternary symmetric matrices)."""

__version__ = "0.1.0"
