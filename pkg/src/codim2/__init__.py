"""Construction kit for codimension-2 subvarieties of projective space.

Builds smooth surfaces in P^4 and 3-folds in P^5 from syzygies of
finite-length graded modules over a prime field, links them by complete
intersections, and certifies degrees, genera and adjoint dimensions
against closed-form double-point formulas.
"""

from .kernel import PrimeField, AmbientSpace, Polynomial, GradedFreeModule, PolyMatrix

__version__ = "0.1.0"

__all__ = [
    "PrimeField",
    "AmbientSpace",
    "Polynomial",
    "GradedFreeModule",
    "PolyMatrix",
]
