"""Exact computations with double affine Hecke algebras: polynomial
representations, Macdonald polynomials, Verlinde modules, degenerations,
the p-adic limit and Gaussian-sum identities."""

__version__ = "0.1.0"
