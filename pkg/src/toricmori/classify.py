"""Picard-number-one fans: constructors and recognizers.

Covers the varieties that show up as fibers of the contractions this
package analyzes: projective space and the weighted projective spaces
with leading weight 1.  Recognition is up to lattice automorphism, via
the brute-force fan isomorphism search.

The headline check: for a complete simplicial projective fan of Picard
number one with extremal length l in dimension n,

    l > n          forces projective n-space, and
    l >= n, not P^n forces P(1, 1, 2, ..., 2).

``theorem_1_1_check`` evaluates both implications and reports the
outcomes together with the classification verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .fan import Fan, fans_isomorphic, multiplicity, picard_number
from .intersection import InvariantViolation
from .moricone import mori_cone

PROJECTIVE_SPACE = "projective_space"
P112_TYPE = "p112_type"
OTHER = "other"


class UnsupportedConstruction(ValueError):
    """Weight vectors outside the constructor's documented range."""


@lru_cache(maxsize=None)
def projective_space_fan(n: int) -> Fan:
    """Standard fan of P^n: e_1..e_n and minus their sum, all n-subsets."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan.create(n, rays, cones)


def build_weighted_projective(weights: Sequence[int]) -> Fan:
    """Fan of P(w_0, ..., w_n) for w_0 = 1.

    Rays are e_1, ..., e_n and -(w_1 e_1 + ... + w_n e_n); maximal cones
    are all n-subsets.  Requires w_0 = 1 and gcd(w_1, ..., w_n) = 1;
    otherwise the last ray would not be primitive and the stated ray set
    would not be a valid fan (such weight vectors have a well-formed
    rescaling, which the caller should supply instead).
    """
    ws = [int(w) for w in weights]
    if len(ws) < 2:
        raise UnsupportedConstruction("need at least two weights")
    if ws[0] != 1:
        raise UnsupportedConstruction("leading weight must be 1")
    if any(w < 1 for w in ws):
        raise UnsupportedConstruction("weights must be positive")
    tail_gcd = 0
    for w in ws[1:]:
        tail_gcd = gcd(tail_gcd, w)
    if tail_gcd != 1:
        raise UnsupportedConstruction(
            f"gcd of trailing weights is {tail_gcd}; ray would not be primitive"
        )
    n = len(ws) - 1
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-w for w in ws[1:]))
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan.create(n, rays, cones)


@lru_cache(maxsize=None)
def p112_fan(n: int) -> Fan:
    """Fan of P(1, 1, 2, ..., 2) in dimension n (n - 1 trailing twos)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return build_weighted_projective((1, 1) + (2,) * (n - 1))


def is_projective_space(fan: Fan) -> bool:
    """Recognize P^n two ways and insist the answers agree.

    Route one: n+1 rays, Picard number one, and every maximal cone of
    multiplicity one (smooth).  Route two: explicit fan isomorphism
    with the standard fan.  A disagreement would be a bug in one of
    them, so it raises instead of picking a side.
    """
    by_counts = (
        len(fan.rays) == fan.dim + 1
        and picard_number(fan) == 1
        and all(multiplicity(fan, c) == 1 for c in fan.max_cones)
    )
    by_iso = fans_isomorphic(fan, projective_space_fan(fan.dim)) is not None
    if by_counts != by_iso:
        raise InvariantViolation(
            "multiplicity profile and isomorphism search disagree on P^n"
        )
    return by_iso


def recognize_p112(fan: Fan) -> bool:
    """Is the fan isomorphic to that of P(1, 1, 2, ..., 2)?"""
    if fan.dim < 2:
        return False
    return fans_isomorphic(fan, p112_fan(fan.dim)) is not None


@dataclass(frozen=True)
class Rho1Report:
    rho: int
    length: Fraction
    verdict: str
    long_ray_forces_pn: bool
    boundary_forces_p112: bool

    @property
    def assertions_ok(self) -> bool:
        return self.long_ray_forces_pn and self.boundary_forces_p112


def theorem_1_1_check(fan: Fan) -> Rho1Report:
    """Classify a Picard-number-one fan and test the length implications.

    Raises ValueError when the Picard number is not one.  The two
    assertion fields record whether this fan is consistent with the
    implications (vacuously true when the hypothesis fails).
    """
    rho = picard_number(fan)
    if rho != 1:
        raise ValueError(f"fan has Picard number {rho}, expected 1")
    cone = mori_cone(fan)
    if len(cone.rays) != 1:
        raise InvariantViolation("Picard number one but not exactly one extremal ray")
    length = cone.rays[0].length
    n = fan.dim
    if is_projective_space(fan):
        verdict = PROJECTIVE_SPACE
    elif recognize_p112(fan):
        verdict = P112_TYPE
    else:
        verdict = OTHER
    long_ray_forces_pn = length <= n or verdict == PROJECTIVE_SPACE
    boundary_forces_p112 = length < n or verdict in (PROJECTIVE_SPACE, P112_TYPE)
    return Rho1Report(
        rho=rho,
        length=length,
        verdict=verdict,
        long_ray_forces_pn=long_ray_forces_pn,
        boundary_forces_p112=boundary_forces_p112,
    )
