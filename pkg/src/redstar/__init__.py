"""redstar: exact homological reduction of star products on singular quotients.

A computer-algebra engine that builds Koszul resolutions of singular
constraint surfaces, quantizes the ghost/antighost complex with a
Moyal-type graded star product, and transfers the product to the invariant
functions of the quotient, verifying every algebraic identity exactly over
the rationals (or Gaussian rationals).
"""

__version__ = "0.1.0"

from .poly import Poly, VarContext, poly_ring
from .scalars import QQ, QQ_I, GaussianRational
from .series import Series
from .superalg import LieAlgebraData, StarProduct, SuperElement

__all__ = [
    "Poly",
    "VarContext",
    "poly_ring",
    "QQ",
    "QQ_I",
    "GaussianRational",
    "Series",
    "LieAlgebraData",
    "StarProduct",
    "SuperElement",
    "__version__",
]
