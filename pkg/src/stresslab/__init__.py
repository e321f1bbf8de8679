"""Exact computations in Artinian reductions of face rings."""
__version__ = "0.1.0"

from .complex import SimplicialComplex
from .exactla import GF, QQ
from .realization import Realization, random_realization
from .artinian import GradedAlgebra, build

__all__ = ["SimplicialComplex", "GF", "QQ", "Realization", "random_realization", "GradedAlgebra", "build",
           "__version__"]
