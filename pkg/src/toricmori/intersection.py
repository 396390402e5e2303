"""Intersection numbers of prime divisors with wall curves.

Every wall of a complete simplicial fan carries an invariant curve.
Its intersection number with the prime divisor of a ray v is

  * mult(wall) / mult(cone)  when v together with the wall spans one of
    the two incident maximal cones,
  * a multiple of the wall-relation coefficient of v when v lies on the
    wall (pinned down by linear equivalence), and
  * 0 for every other ray.

The class of the wall curve, i.e. the full vector of such degrees, is
proportional to the coefficient vector of the wall relation; the
multiplicity ratio fixes the scale.  Anchoring the scale on the left
cone or on the right cone must give the same answer, which is the
package's standing cross-check on the formula (the acceptance suite
compares the two on whole fans).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping, Sequence

from .fan import Fan, Wall, multiplicity, opposite_ray, walls
from .lattice import one_dim_kernel


class InvariantViolation(AssertionError):
    """An internal cross-check failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class WallRelation:
    """Primitive integer relation among the n+1 rays around a wall.

    coeff_u * u + coeff_u2 * u2 + sum tau_coeffs[i] * ray_i == 0, where
    u and u2 are the rays opposite the wall in its left and right cones.
    Both opposite coefficients are positive; tau coefficients carry the
    contraction-type information (all nonnegative: fiber type).
    """

    wall: Wall
    u: int
    u2: int
    coeff_u: int
    coeff_u2: int
    tau_coeffs: tuple[tuple[int, int], ...]

    def coeff(self, ray_index: int) -> int:
        if ray_index == self.u:
            return self.coeff_u
        if ray_index == self.u2:
            return self.coeff_u2
        for i, c in self.tau_coeffs:
            if i == ray_index:
                return c
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted((self.u, self.u2) + tuple(i for i, _ in self.tau_coeffs)))

    @property
    def positive_support(self) -> tuple[int, ...]:
        pos = [self.u, self.u2]
        pos.extend(i for i, c in self.tau_coeffs if c > 0)
        return tuple(sorted(pos))


@dataclass(frozen=True)
class CurveClass:
    """Degrees of every prime divisor on one curve, indexed like fan.rays."""

    degrees: tuple[Fraction, ...]

    def primitive(self) -> tuple[int, ...]:
        """Integer vector spanning the same ray of the class lattice.

        Positive rescaling only, so proportional classes (and nothing
        else) collapse to the same primitive vector.
        """
        denom = lcm(*(d.denominator for d in self.degrees))
        ints = [int(d * denom) for d in self.degrees]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g == 0:
            raise ValueError("zero curve class")
        return tuple(x // g for x in ints)


@lru_cache(maxsize=None)
def wall_relation(fan: Fan, wall: Wall) -> WallRelation:
    u = opposite_ray(fan, wall, wall.left)
    u2 = opposite_ray(fan, wall, wall.right)
    cols = [u, u2, *wall.tau]
    mat = [[fan.rays[i][coord] for i in cols] for coord in range(fan.dim)]
    k = one_dim_kernel(mat)
    if k[0] < 0:
        k = tuple(-x for x in k)
    if k[0] <= 0 or k[1] <= 0:
        raise InvariantViolation(
            f"opposite rays of wall {wall.tau} do not lie on opposite sides"
        )
    return WallRelation(
        wall=wall,
        u=u,
        u2=u2,
        coeff_u=k[0],
        coeff_u2=k[1],
        tau_coeffs=tuple(zip(wall.tau, k[2:])),
    )


def divisor_curve_degree(fan: Fan, ray_index: int, wall: Wall) -> Fraction:
    """Degree of the prime divisor of ``ray_index`` on the wall's curve."""
    mult_tau = multiplicity(fan, wall.tau)
    u = opposite_ray(fan, wall, wall.left)
    u2 = opposite_ray(fan, wall, wall.right)
    if ray_index == u:
        return Fraction(mult_tau, multiplicity(fan, fan.max_cones[wall.left]))
    if ray_index == u2:
        return Fraction(mult_tau, multiplicity(fan, fan.max_cones[wall.right]))
    if ray_index in wall.tau:
        rel = wall_relation(fan, wall)
        anchor = Fraction(mult_tau, multiplicity(fan, fan.max_cones[wall.left]))
        return anchor * rel.coeff(ray_index) / rel.coeff_u
    return Fraction(0)


@lru_cache(maxsize=None)
def curve_class(fan: Fan, wall: Wall) -> CurveClass:
    return CurveClass(
        degrees=tuple(divisor_curve_degree(fan, i, wall) for i in range(len(fan.rays)))
    )


def curve_class_by_relation(fan: Fan, wall: Wall) -> CurveClass:
    """Same class, scale anchored on the right cone instead of the left.

    Independent route for cross-checking: the relation coefficients give
    the ratios, the right-cone multiplicity ratio gives the scale.
    """
    rel = wall_relation(fan, wall)
    mult_tau = multiplicity(fan, wall.tau)
    scale = Fraction(mult_tau, multiplicity(fan, fan.max_cones[wall.right]))
    scale /= rel.coeff_u2
    return CurveClass(
        degrees=tuple(scale * rel.coeff(i) for i in range(len(fan.rays)))
    )


def anticanonical_degree(fan: Fan, wall: Wall) -> Fraction:
    """-K . C for the wall curve: the sum of all prime-divisor degrees."""
    return sum(curve_class(fan, wall).degrees, Fraction(0))


def divisor_degree(
    fan: Fan, coefficients: Mapping[int, int | Fraction] | Sequence[int | Fraction], wall: Wall
) -> Fraction:
    """Degree of an arbitrary ray-supported divisor on the wall curve."""
    cls = curve_class(fan, wall)
    if isinstance(coefficients, Mapping):
        items = coefficients.items()
    else:
        if len(coefficients) != len(fan.rays):
            raise ValueError("coefficient vector has wrong length")
        items = enumerate(coefficients)
    return sum((Fraction(c) * cls.degrees[i] for i, c in items), Fraction(0))
