"""Projective models of constant-curvature geometries, parametrized polytope
families, and their rescaled limits across geometric transitions."""

from .forms import (
    DegenerateHyperplaneError, Direction, DualHalfSpace, GeometryError, ProjectiveMap,
    ProjectivePoint, QuadraticForm, classify_direction, dual_pairing, is_isometry, pairing,
    reflection_in_hyperplane,
)
from .gallery import FAMILIES, SCHEMES, UnknownNameError, make_family, pairing_scheme
from .halfpipe import (
    HpIsometry, MinkIsometry, classify_hp, hp_to_mink, mink_to_hp,
)
from .holonomy import LoopWord, cone_angle, detect_singularity, edge_cycle, holonomy
from .param import DomainError, HalfSpaceFamily, NoLimitError, dual_rescale, rescaled_limit
from .polytope import (
    Polytope, adjacency, cross_section, dihedral_angle, enumerate_vertices, wall_distance,
)
from .qsqrt2 import SQRT2, QSqrt2
from .transition import IsometryPath, RescalingMap, limit_conjugated_isometry

__version__ = "0.1.0"

__all__ = [
    "adjacency", "classify_direction", "classify_hp", "cone_angle", "cross_section",
    "DegenerateHyperplaneError", "detect_singularity", "dihedral_angle", "Direction",
    "DomainError", "dual_pairing", "dual_rescale", "DualHalfSpace", "edge_cycle",
    "enumerate_vertices", "FAMILIES", "GeometryError", "HalfSpaceFamily", "holonomy", "hp_to_mink",
    "HpIsometry", "is_isometry", "IsometryPath", "limit_conjugated_isometry", "LoopWord",
    "make_family", "mink_to_hp", "MinkIsometry", "NoLimitError", "pairing",
    "pairing_scheme", "Polytope", "ProjectiveMap", "ProjectivePoint", "QSqrt2",
    "QuadraticForm", "reflection_in_hyperplane", "rescaled_limit", "RescalingMap",
    "SCHEMES", "SQRT2", "UnknownNameError", "wall_distance",
]
