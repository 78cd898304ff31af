"""Exact polynomial identity testing over plane-curve normalizations.

Subpackage map:
  fields     coefficient fields and tracked rational functions
  polys      sparse multivariate polynomials and monomial orders
  groebner   Groebner bases, elimination, ideal arithmetic
  zerodim    zero-dimensional ideals: maximal ideals, primitive elements
  curves     plane-curve orders, discriminants, normalization
  pit        circuits, restrictions, certificates, hitting sets
  bruteforce independent dense oracles used for cross-checking
  cli        command-line front end
"""

__version__ = "0.1.0"
