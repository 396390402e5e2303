"""Extremal rays: extraction, kinds, lengths, gating."""

from fractions import Fraction

import pytest

from toricmori.classify import projective_space_fan
from toricmori.fan import Fan, picard_number, walls
from toricmori.intersection import curve_class
from toricmori.lattice import rank
from toricmori.moricone import (
    DIVISORIAL,
    FIBER,
    SMALL,
    mori_cone,
    ray_length,
)

from test_intersection import F1, FLOP, P2, P112, TWISTED


def test_p2_single_ray():
    mc = mori_cone(P2)
    assert len(mc.rays) == 1
    (ray,) = mc.rays
    assert ray.generator.primitive() == (1, 1, 1)
    assert ray.length == 3
    assert ray.kind == FIBER
    assert set(ray.member_walls) == {0, 1, 2}
    assert mc.wall_count == 3


def test_p112_single_ray():
    mc = mori_cone(P112)
    (ray,) = mc.rays
    assert ray.generator.primitive() == (1, 2, 1)
    assert ray.length == 2
    assert ray.kind == FIBER
    # lengths of individual member walls differ from the minimum
    degrees = [sum(d.degrees, Fraction(0)) for d in ray.member_degrees]
    assert sorted(degrees) == [2, 2, 4]


def test_hirzebruch_two_rays():
    mc = mori_cone(F1)
    assert len(mc.rays) == 2
    by_kind = {r.kind: r for r in mc.rays}
    assert by_kind[FIBER].generator.primitive() == (0, 1, 1, 0)
    assert by_kind[FIBER].length == 2
    assert by_kind[DIVISORIAL].generator.primitive() == (1, 0, -1, 1)
    assert by_kind[DIVISORIAL].length == 1
    # the section class 'fiber + exceptional' is not extremal
    gens = {r.generator.primitive() for r in mc.rays}
    assert (1, 1, 0, 1) not in gens


def test_twisted_fibration_two_rays():
    mc = mori_cone(TWISTED)
    assert len(mc.rays) == 2
    by_kind = {r.kind: r for r in mc.rays}
    assert by_kind[FIBER].generator.primitive() == (1, 0, 1, 0)
    assert by_kind[FIBER].length == 1
    assert set(by_kind[FIBER].member_walls) == {1, 3}
    assert by_kind[DIVISORIAL].generator.primitive() == (0, 2, -1, 1)
    assert by_kind[DIVISORIAL].length == 1
    assert (1, 2, 0, 1) not in {r.generator.primitive() for r in mc.rays}


def test_flop_fan_has_small_ray():
    mc = mori_cone(FLOP)
    assert len(mc.rays) == 2
    by_kind = {r.kind: r for r in mc.rays}
    small = by_kind[SMALL]
    assert small.generator.primitive() == (0, -1, 1, 1, -1)
    assert small.length == 0
    assert small.member_walls == (6,)
    fiber = by_kind[FIBER]
    assert fiber.generator.primitive() == (1, 1, 0, 0, 1)
    assert fiber.length == 3
    assert len(fiber.member_walls) == 6


def test_ray_length_is_min_over_member_walls():
    for fan in (P2, P112, F1, TWISTED, FLOP):
        for ray in mori_cone(fan).rays:
            degrees = [sum(d.degrees, Fraction(0)) for d in ray.member_degrees]
            assert ray.length == min(degrees)
            assert ray_length(ray) == ray.length


def test_class_matrix_rank_equals_picard_number():
    for fan in (P2, P112, F1, TWISTED, FLOP, projective_space_fan(4)):
        all_classes = [list(curve_class(fan, w).primitive()) for w in walls(fan)]
        assert rank(all_classes) == picard_number(fan)
        extremal = [list(r.generator.primitive()) for r in mori_cone(fan).rays]
        assert rank(extremal) <= picard_number(fan)


def test_gates():
    incomplete = Fan.create(2, P2.rays, P2.max_cones[:2])
    with pytest.raises(ValueError, match="complete"):
        mori_cone(incomplete)
    invalid = Fan.create(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="validation"):
        mori_cone(invalid)

    from test_fan import CUBE_TWISTED

    with pytest.raises(ValueError, match="projective"):
        mori_cone(CUBE_TWISTED)


def test_extremal_count_bounds():
    # between rho and the wall count, never more classes than walls
    for fan in (P2, P112, F1, TWISTED, FLOP):
        mc = mori_cone(fan)
        assert picard_number(fan) <= len(walls(fan))
        assert 1 <= len(mc.rays) <= len(walls(fan))
