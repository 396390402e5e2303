"""Cone of curve classes and its extremal rays.

For a complete simplicial projective fan, the cone of curves is
spanned by the wall-curve classes.  Classes proportional up to a
positive scalar are grouped (their primitive integer vectors agree)
and a group is extremal exactly when its generator is not a
nonnegative combination of the remaining generators, decided by exact
feasibility.

The length of an extremal ray is the minimum anticanonical degree over
the wall curves lying on it; the per-wall degrees are kept so reports
can show the whole multiset, not just the minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fan import Fan, is_complete, is_projective, validate_fan, walls
from .intersection import (
    CurveClass,
    InvariantViolation,
    anticanonical_degree,
    curve_class,
    wall_relation,
)
from .linprog import in_cone

FIBER = "fiber"
DIVISORIAL = "divisorial"
SMALL = "small"


@dataclass(frozen=True)
class ExtremalRay:
    """One extremal ray of the cone of curves.

    member_walls indexes into walls(fan); member_degrees are the
    anticanonical degrees of those wall curves, aligned with it.
    """

    generator: CurveClass
    member_walls: tuple[int, ...]
    member_degrees: tuple[Fraction, ...]
    length: Fraction
    kind: str


@dataclass(frozen=True)
class MoriCone:
    generators: tuple[CurveClass, ...]
    rays: tuple[ExtremalRay, ...]
    wall_count: int


def _require_projective_setup(fan: Fan) -> None:
    report = validate_fan(fan)
    if not report.ok:
        raise ValueError(f"fan failed validation: {report.problems[0]}")
    if not is_complete(fan):
        raise ValueError("fan is not complete")
    if not is_projective(fan):
        raise ValueError("fan admits no strictly convex support function")


def classify_ray_kind(fan: Fan, member_walls: tuple[int, ...]) -> str:
    """fiber / divisorial / small from the wall-relation sign patterns.

    Every member wall must agree on fiber vs birational; the size of
    the union of negative-coefficient rays separates divisorial (one
    contracted divisor) from small.
    """
    ws = walls(fan)
    negative_rays: set[int] = set()
    verdicts = []
    for wi in member_walls:
        rel = wall_relation(fan, ws[wi])
        negs = {i for i, c in rel.tau_coeffs if c < 0}
        verdicts.append(not negs)
        negative_rays |= negs
    if all(verdicts):
        return FIBER
    if any(verdicts):
        raise InvariantViolation(
            "member walls of one extremal ray disagree on fiber vs birational"
        )
    return DIVISORIAL if len(negative_rays) == 1 else SMALL


@lru_cache(maxsize=None)
def mori_cone(fan: Fan) -> MoriCone:
    """Wall classes grouped by proportionality, extremality by feasibility.

    Refuses fans that are invalid, incomplete, or not projective: the
    cone of curves of a non-projective fan is not pointed and extremal
    rays would be meaningless.
    """
    _require_projective_setup(fan)
    ws = walls(fan)
    groups: dict[tuple[int, ...], list[int]] = {}
    for wi, w in enumerate(ws):
        groups.setdefault(curve_class(fan, w).primitive(), []).append(wi)
    primitives = sorted(groups)
    rays = []
    generators = []
    for prim in primitives:
        generators.append(CurveClass(degrees=tuple(Fraction(x) for x in prim)))
    for prim in primitives:
        others = [p for p in primitives if p != prim]
        if in_cone(others, prim) is not None:
            continue
        member = tuple(groups[prim])
        degrees = tuple(anticanonical_degree(fan, ws[wi]) for wi in member)
        rays.append(
            ExtremalRay(
                generator=CurveClass(degrees=tuple(Fraction(x) for x in prim)),
                member_walls=member,
                member_degrees=degrees,
                length=min(degrees),
                kind=classify_ray_kind(fan, member),
            )
        )
    return MoriCone(generators=tuple(generators), rays=tuple(rays), wall_count=len(ws))


def ray_length(ray: ExtremalRay) -> Fraction:
    """Minimum anticanonical degree over curves on the ray."""
    return ray.length
