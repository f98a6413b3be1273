"""Exact truncated BRST computations for quantum Hamiltonian reductions of Weyl algebras."""

__version__ = "0.1.0"
