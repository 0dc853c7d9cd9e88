"""Exact computations around weights and defects of F_q-subspaces of
F_{q^m}-vector spaces: Delsarte duality in the quotient model, rank-metric
codes (supports, generalized weights, duality-closed families, symbolic
weight distributions) and q-matroids (direct sums, rank generating
functions, representability checks).  Everything is verifiable at desk
scale by brute-force enumeration.
"""

from .fields import FieldElement, FieldTower, make_tower

__all__ = ["FieldElement", "FieldTower", "make_tower"]
__version__ = "0.1.0"
