"""Exact-arithmetic toolkit for local-global obstruction computations.

The package certifies, at desk scale, that certain plane quartic and cubic
curves have points over every completion of Q while global points (or global
sections of the fundamental exact sequence) are ruled out by a sum of local
invariants.  Everything is computed with exact integer, rational, p-adic and
cyclotomic-integer arithmetic; no floating point enters any verdict.
"""

__version__ = "0.1.0"
