"""Exact toric Mori theory on complete simplicial fans.

Multiplicities, wall relations, intersection numbers, the cone of
curves with extremal-ray lengths, and detection of projective-bundle
structure for fiber-type contractions; everything in exact integer and
rational arithmetic.
"""

from .fan import (
    Fan,
    IncompleteFanError,
    Wall,
    conjugate_fan,
    fans_isomorphic,
    is_complete,
    is_projective,
    multiplicity,
    picard_number,
    validate_fan,
    walls,
)
from .intersection import (
    CurveClass,
    InvariantViolation,
    WallRelation,
    anticanonical_degree,
    curve_class,
    divisor_curve_degree,
    divisor_degree,
    wall_relation,
)
from .moricone import ExtremalRay, MoriCone, classify_ray_kind, mori_cone, ray_length

__all__ = [
    "Fan",
    "IncompleteFanError",
    "Wall",
    "conjugate_fan",
    "fans_isomorphic",
    "is_complete",
    "is_projective",
    "multiplicity",
    "picard_number",
    "validate_fan",
    "walls",
    "CurveClass",
    "InvariantViolation",
    "WallRelation",
    "anticanonical_degree",
    "curve_class",
    "divisor_curve_degree",
    "divisor_degree",
    "wall_relation",
    "ExtremalRay",
    "MoriCone",
    "classify_ray_kind",
    "mori_cone",
    "ray_length",
]
