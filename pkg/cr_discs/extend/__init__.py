"""
Holomorphic extension engines built on attached discs.
"""

from .approximation import MaximallyRealPatch, approximation_table, gauss_approx
from .cauchy import CauchyExtension, cauchy_extension
from .continuity import PolydiscChain, bilipschitz_constants, continuity_extend, continuity_extend_family
from .isotopy import IsotopyPath, Recipe, isotopy_to_point
from .singular import ComplementOracle, EmptySet, SingularSet, SubmanifoldSet, TubeOracle

__all__ = [
    "MaximallyRealPatch",
    "approximation_table",
    "gauss_approx",
    "CauchyExtension",
    "cauchy_extension",
    "PolydiscChain",
    "bilipschitz_constants",
    "continuity_extend",
    "continuity_extend_family",
    "IsotopyPath",
    "Recipe",
    "isotopy_to_point",
    "ComplementOracle",
    "EmptySet",
    "SingularSet",
    "SubmanifoldSet",
    "TubeOracle",
]
