"""Fan validation, walls, completeness, projectivity, isomorphism."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricmori.classify import build_weighted_projective, p112_fan, projective_space_fan
from toricmori.fan import (
    Fan,
    IncompleteFanError,
    conjugate_fan,
    fans_isomorphic,
    is_complete,
    is_projective,
    multiplicity,
    opposite_ray,
    picard_number,
    validate_fan,
    walls,
)
from toricmori.intersection import curve_class
from toricmori.linprog import solve_eq_nonneg


P2 = projective_space_fan(2)
P112 = build_weighted_projective((1, 1, 2))

# complete simplicial 3-fan over the cube with twisted face diagonals;
# not projective, frozen from an exhaustive sweep of all 64 diagonal
# patterns (18 of which fail projectivity, this one among them)
CUBE_TWISTED = Fan.create(
    3,
    [
        (-1, -1, -1),
        (-1, -1, 1),
        (-1, 1, -1),
        (-1, 1, 1),
        (1, -1, -1),
        (1, -1, 1),
        (1, 1, -1),
        (1, 1, 1),
    ],
    [
        (0, 1, 2),
        (0, 1, 5),
        (0, 2, 4),
        (0, 4, 5),
        (1, 2, 3),
        (1, 3, 7),
        (1, 5, 7),
        (2, 3, 6),
        (2, 4, 6),
        (3, 6, 7),
        (4, 5, 6),
        (5, 6, 7),
    ],
)


def mori_cone_is_salient(fan: Fan) -> bool:
    """Dual route to projectivity, independent of the support-function LP.

    The fan is projective iff no nonzero nonnegative combination of
    wall curve classes vanishes.
    """
    classes = [curve_class(fan, w).degrees for w in walls(fan)]
    rows = [[cls[coord] for cls in classes] for coord in range(len(fan.rays))]
    rhs = [Fraction(0)] * len(fan.rays)
    rows.append([Fraction(1)] * len(classes))
    rhs.append(Fraction(1))
    return solve_eq_nonneg(rows, rhs) is None


def test_create_canonicalizes():
    f = Fan.create(2, [(0, 1), (1, 0), (0, 1)], [(1, 0), (2, 1)])
    assert f.rays == ((0, 1), (1, 0))
    assert f.max_cones == ((0, 1),)


def test_create_rejects_bad_index():
    with pytest.raises(ValueError, match="out of range"):
        Fan.create(2, [(1, 0), (0, 1)], [(0, 2)])


def test_p2_is_valid_complete_projective():
    assert validate_fan(P2).ok
    assert is_complete(P2)
    assert is_projective(P2)
    assert picard_number(P2) == 1
    assert len(walls(P2)) == 3
    assert all(multiplicity(P2, c) == 1 for c in P2.max_cones)


def test_p112_multiplicities():
    # rays sort to (-1,-2), (0,1), (1,0); the cone on rays 0 and 2 is
    # the singular chart
    assert P112.rays == ((-1, -2), (0, 1), (1, 0))
    assert multiplicity(P112, (0, 1)) == 1
    assert multiplicity(P112, (0, 2)) == 2
    assert multiplicity(P112, (1, 2)) == 1
    assert is_complete(P112) and is_projective(P112)


def test_subfan_valid_but_incomplete():
    f = Fan.create(2, P2.rays, P2.max_cones[:2])
    assert validate_fan(f).ok
    assert not is_complete(f)
    with pytest.raises(IncompleteFanError):
        walls(f)


def test_validation_flags_problems():
    bad = Fan.create(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert any("not primitive" in p for p in validate_fan(bad).problems)

    zero = Fan.create(2, [(0, 0), (0, 1), (1, 0)], [(0, 1), (1, 2), (0, 2)])
    assert any("is zero" in p for p in validate_fan(zero).problems)

    unused = Fan.create(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1)])
    assert any("no maximal cone" in p for p in validate_fan(unused).problems)

    short = Fan.create(2, [(1, 0), (0, 1)], [(0,), (0, 1)])
    assert any("expected 2" in p for p in validate_fan(short).problems)

    dependent = Fan.create(2, [(1, 1), (-1, -1)], [(0, 1)])
    assert any("dependent" in p for p in validate_fan(dependent).problems)

    overlapping = Fan.create(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    assert any("common face" in p for p in validate_fan(overlapping).problems)


def test_walls_are_sorted_and_two_sided():
    ws = walls(P2)
    assert [w.tau for w in ws] == [(0,), (1,), (2,)]
    for w in ws:
        assert w.left < w.right
        left_extra = opposite_ray(P2, w, w.left)
        right_extra = opposite_ray(P2, w, w.right)
        assert left_extra != right_extra
        assert set(w.tau) | {left_extra} == set(P2.max_cones[w.left])


def test_wall_count_matches_cone_count():
    # every maximal cone has dim facets, each shared by exactly two
    for fan in (P2, P112, projective_space_fan(3), p112_fan(3), CUBE_TWISTED):
        assert fan.dim * len(fan.max_cones) == 2 * len(walls(fan))
        assert len(fan.max_cones) >= fan.dim + 1


def test_twisted_cube_fan_is_complete_but_not_projective():
    assert validate_fan(CUBE_TWISTED).ok
    assert is_complete(CUBE_TWISTED)
    assert not is_projective(CUBE_TWISTED)
    assert not mori_cone_is_salient(CUBE_TWISTED)


def test_projectivity_agrees_with_mori_salience_on_cube_sweep():
    """All 64 diagonal patterns, both routes; 18 must fail."""
    verts = sorted(product((1, -1), repeat=3))
    vi = {v: i for i, v in enumerate(verts)}
    nonprojective = 0
    for pattern in product((0, 1), repeat=6):
        cones = []
        for (axis, sign), diag in zip(product(range(3), (1, -1)), pattern):
            quad = [v for v in verts if v[axis] == sign]
            others = [t for t in range(3) if t != axis]
            quad.sort(key=lambda v: (v[others[0]] + v[others[1]], v[others[0]]))
            a, b, c, d = quad  # b, c adjacent to a; d opposite a
            if diag:
                cones += [(vi[a], vi[b], vi[d]), (vi[a], vi[c], vi[d])]
            else:
                cones += [(vi[a], vi[b], vi[c]), (vi[b], vi[c], vi[d])]
        fan = Fan.create(3, verts, cones)
        assert validate_fan(fan).ok and is_complete(fan)
        lp = is_projective(fan)
        assert lp == mori_cone_is_salient(fan)
        nonprojective += not lp
    assert nonprojective == 18


def test_fans_isomorphic_positive_and_negative():
    m = [[1, 2], [0, 1]]
    moved = conjugate_fan(P2, m)
    iso = fans_isomorphic(P2, moved)
    assert iso is not None
    assert fans_isomorphic(P2, P112) is None
    with pytest.raises(ValueError):
        fans_isomorphic(P2, projective_space_fan(3))


@st.composite
def unimodular(draw, dim):
    m = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for _ in range(draw(st.integers(0, 5))):
        i = draw(st.integers(0, dim - 1))
        j = draw(st.integers(0, dim - 1))
        c = draw(st.integers(-2, 2))
        if i == j:
            continue
        for t in range(dim):
            m[i][t] += c * m[j][t]
    return m


@st.composite
def catalog_fan(draw):
    choice = draw(st.integers(0, 3))
    if choice == 0:
        return projective_space_fan(draw(st.integers(2, 3)))
    if choice == 1:
        return p112_fan(draw(st.integers(2, 3)))
    if choice == 2:
        return build_weighted_projective((1, 1, draw(st.integers(1, 4))))
    return CUBE_TWISTED


@settings(deadline=None, derandomize=True, max_examples=25)
@given(data=st.data())
def test_conjugation_preserves_structure(data):
    fan = data.draw(catalog_fan())
    m = data.draw(unimodular(fan.dim))
    moved = conjugate_fan(fan, m)
    assert validate_fan(moved).ok
    assert is_complete(moved)
    assert is_projective(moved) == is_projective(fan)
    assert len(walls(moved)) == len(walls(fan))
    mults = sorted(multiplicity(fan, c) for c in fan.max_cones)
    moved_mults = sorted(multiplicity(moved, c) for c in moved.max_cones)
    assert mults == moved_mults
    assert fans_isomorphic(fan, moved) is not None
