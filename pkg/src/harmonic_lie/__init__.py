"""Codazzi operators, harmonic curvature and Ricci-parallel metrics on Lie algebras.

Submodules
----------
lie_algebra   structure constants, brackets, subalgebras, JSON I/O
geometry      Levi-Civita, curvature, Ricci, Codazzi defects
structure     eigenspace splittings of Codazzi operators
catalog       named algebras, the six-dimensional family, random generators
probe         numerical search for harmonic, non-parallel metrics
cli           command-line entry point
"""

from .geometry import MetricLieAlgebra, SymmetricOperator, codazzi_defect, ricci
from .lie_algebra import LieAlgebra, Subspace

__all__ = ["LieAlgebra", "MetricLieAlgebra", "Subspace", "SymmetricOperator", "codazzi_defect", "ricci"]
__version__ = "0.1.0"
