"""Fiber-type contractions: splitting, charts, bundle detection.

A fiber-type extremal ray determines d+1 distinguished rays (the rays
of the generic fiber), a unimodular change of coordinates moving their
saturated span onto the first d coordinates, and a projection p onto
the last n-d coordinates, under which the fan maps onto a complete
base fan.  Charts are indexed by maximal cones of the base: over each
one sits a fixed set of n-d horizontal rays, and the contraction is a
trivial product over that chart exactly when p maps the lattice points
of their span bijectively onto the base lattice.  Injectivity is
automatic, so the test is surjectivity: saturate the span, project a
basis, and ask for |det| = 1.  The fan is a genuine projective-space
bundle exactly when the fiber fan is that of P^d and every chart
passes.

An equivalent test, kept as a cross-check rather than collapsed into
the primary one: every prime divisor of a fiber ray meets every
contracted wall curve in degree exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .classify import p112_fan, projective_space_fan
from .fan import (
    Fan,
    fans_isomorphic,
    is_complete,
    multiplicity,
    ray_matrix,
    validate_fan,
    walls,
)
from .intersection import InvariantViolation, divisor_curve_degree, wall_relation
from .lattice import (
    determinant,
    mat_mul,
    mat_vec,
    primitive_vector,
    rank,
    saturation_basis,
    smith_normal_form,
    solve_rational,
    transpose,
)
from .moricone import FIBER, ExtremalRay


class ContractionStructureError(RuntimeError):
    """The fan does not carry the fiber structure the ray promised."""


class IncompatibleLifts(ValueError):
    """Lift data that is not integral-linear on some base cone."""


@dataclass(frozen=True)
class ChartWitness:
    """Triviality certificate (or obstruction) for one chart.

    base_cone holds the primitive projected generators of the base
    maximal cone; index is the lattice index of the projected
    horizontal span inside the base lattice, 1 meaning the chart is a
    product.
    """

    base_cone: tuple[tuple[int, ...], ...]
    horizontal_rays: tuple[int, ...]
    index: int

    @property
    def trivial(self) -> bool:
        return self.index == 1


@dataclass(frozen=True)
class ContractionData:
    ray: ExtremalRay
    fiber_ray_indices: tuple[int, ...]
    d: int
    splitting: tuple[tuple[int, ...], ...]
    base_fan: Fan
    fiber_fan: Fan
    charts: tuple[ChartWitness, ...]
    fiber_iso: str
    is_bundle: bool
    degree_test: bool
    length: Fraction


def fiber_rays(fan: Fan, ray: ExtremalRay) -> tuple[int, ...]:
    """Rays of the generic fiber: positive support of the wall relations.

    All member walls of a fiber-type ray must share one positive
    support (d+1 rays whose primitive relation has every coefficient
    positive); its size exceeds the dimension of its span by one.
    """
    if ray.kind != FIBER:
        raise ValueError(f"ray has kind {ray.kind!r}, expected {FIBER!r}")
    ws = walls(fan)
    supports = {wall_relation(fan, ws[wi]).positive_support for wi in ray.member_walls}
    if len(supports) != 1:
        raise ContractionStructureError(
            f"member walls carry {len(supports)} distinct positive supports"
        )
    support = supports.pop()
    span_dim = rank([fan.rays[i] for i in support])
    if span_dim != len(support) - 1:
        raise ContractionStructureError(
            f"{len(support)} fiber rays span dimension {span_dim}, "
            f"expected {len(support) - 1}"
        )
    return support


def contraction_splitting(
    fan: Fan, fiber_ray_indices: Sequence[int]
) -> tuple[tuple[int, ...], ...]:
    """Unimodular matrix taking the saturated fiber span onto Z^d x 0.

    Any d of the d+1 fiber rays span the fiber subspace; the transpose
    of the right Smith transform of a saturation basis moves that
    subspace onto the first d coordinates.
    """
    vectors = [fan.rays[i] for i in fiber_ray_indices]
    d = len(vectors) - 1
    if rank(vectors) != d:
        raise ContractionStructureError("fiber rays do not span the expected rank")
    basis = [list(b) for b in saturation_basis(vectors[:-1])]
    snf = smith_normal_form(basis)
    if snf.divisors != [1] * d:
        raise InvariantViolation("saturation basis is not saturated")
    m = transpose(snf.right)
    images = [mat_vec(m, b) for b in basis]
    top = [[images[j][i] for j in range(d)] for i in range(d)]
    if any(any(img[d:]) for img in images) or determinant(top) not in (1, -1):
        raise InvariantViolation("splitting does not normalize the fiber span")
    return tuple(tuple(row) for row in m)


def _transformed_rays(
    fan: Fan, splitting: Sequence[Sequence[int]]
) -> list[tuple[int, ...]]:
    m = [list(row) for row in splitting]
    return [tuple(mat_vec(m, r)) for r in fan.rays]


@dataclass(frozen=True)
class _SplitStructure:
    base_fan: Fan
    fiber_fan: Fan
    base_ray_of: dict  # horizontal ray index -> base fan ray index
    cone_groups: dict  # base cone tuple -> sorted horizontal ray indices


def _split_structure(
    fan: Fan, splitting: Sequence[Sequence[int]], fiber_ray_indices: Sequence[int]
) -> _SplitStructure:
    fiber_set = set(fiber_ray_indices)
    d = len(fiber_set) - 1
    n = fan.dim
    moved = _transformed_rays(fan, splitting)
    for i in fiber_set:
        if any(moved[i][d:]):
            raise ContractionStructureError("fiber ray leaves the fiber coordinates")
    base_vec_of: dict[int, tuple[int, ...]] = {}
    for i in range(len(fan.rays)):
        if i in fiber_set:
            continue
        tail = moved[i][d:]
        if not any(tail):
            raise ContractionStructureError(
                f"ray {i} lies in the fiber span but not in the fiber"
            )
        base_vec_of[i] = primitive_vector(tail)
    base_rays = sorted(set(base_vec_of.values()))
    base_index = {r: k for k, r in enumerate(base_rays)}

    cone_groups: dict[tuple[int, ...], set[int]] = {}
    fiber_parts: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for cone in fan.max_cones:
        fiber_part = tuple(sorted(i for i in cone if i in fiber_set))
        horiz = set(i for i in cone if i not in fiber_set)
        if len(fiber_part) != d:
            raise ContractionStructureError(
                f"maximal cone {cone} holds {len(fiber_part)} fiber rays, expected {d}"
            )
        base_cone = tuple(sorted({base_index[base_vec_of[i]] for i in horiz}))
        if len(base_cone) != n - d:
            raise ContractionStructureError(
                f"horizontal rays of cone {cone} project onto {len(base_cone)} "
                f"distinct base rays, expected {n - d}"
            )
        prev = cone_groups.setdefault(base_cone, horiz)
        if prev != horiz:
            raise ContractionStructureError(
                "maximal cones over one base cone disagree on horizontal rays"
            )
        fiber_parts.setdefault(base_cone, set()).add(fiber_part)

    expected = {tuple(c) for c in combinations(sorted(fiber_set), d)}
    for base_cone, parts in fiber_parts.items():
        if parts != expected:
            raise ContractionStructureError(
                f"fiber is not complete over base cone {base_cone}"
            )

    base_fan = Fan.create(n - d, base_rays, cone_groups)
    report = validate_fan(base_fan)
    if not report.ok:
        raise ContractionStructureError(
            f"projected base fan invalid: {report.problems[0]}"
        )
    if not is_complete(base_fan):
        raise ContractionStructureError("projected base fan is not complete")

    fiber_fan = Fan.create(
        d,
        [moved[i][:d] for i in sorted(fiber_set)],
        combinations(range(d + 1), d),
    )
    report = validate_fan(fiber_fan)
    if not report.ok:
        raise ContractionStructureError(f"fiber fan invalid: {report.problems[0]}")
    if not is_complete(fiber_fan):
        raise ContractionStructureError("fiber fan is not complete")

    return _SplitStructure(
        base_fan=base_fan,
        fiber_fan=fiber_fan,
        base_ray_of={i: base_index[r] for i, r in base_vec_of.items()},
        cone_groups={bc: tuple(sorted(h)) for bc, h in cone_groups.items()},
    )


def base_and_fiber_fans(
    fan: Fan, splitting: Sequence[Sequence[int]], fiber_ray_indices: Sequence[int]
) -> tuple[Fan, Fan]:
    """Complete base fan (projected) and fiber fan (restricted)."""
    s = _split_structure(fan, splitting, fiber_ray_indices)
    return s.base_fan, s.fiber_fan


def chart_is_trivial(
    fan: Fan,
    splitting: Sequence[Sequence[int]],
    fiber_ray_indices: Sequence[int],
    cone: Sequence[int],
) -> ChartWitness:
    """Lattice index of the projected horizontal span over one chart.

    ``cone`` is a maximal cone (only its non-fiber rays matter).
    Saturate the span of those rays inside Z^n, project onto the base
    coordinates, take |det|.  Index 1 certifies that the projection
    restricts to a lattice isomorphism over the chart, i.e. the chart
    splits off the fiber as a product.
    """
    fiber_set = set(fiber_ray_indices)
    d = len(fiber_set) - 1
    horiz = tuple(sorted(i for i in cone if i not in fiber_set))
    if len(horiz) != fan.dim - d:
        raise ValueError("cone does not have the expected horizontal ray count")
    moved = _transformed_rays(fan, splitting)
    sat = saturation_basis([moved[i] for i in horiz])
    index = abs(determinant([list(b[d:]) for b in sat]))
    if index == 0:
        raise ContractionStructureError("horizontal span projects degenerately")
    base_cone = tuple(sorted(primitive_vector(moved[i][d:]) for i in horiz))
    return ChartWitness(base_cone=base_cone, horizontal_rays=horiz, index=index)


def _fiber_iso_label(fiber_fan: Fan, d: int) -> str:
    if fans_isomorphic(fiber_fan, projective_space_fan(d)) is not None:
        return f"P^{d}"
    if d >= 2 and fans_isomorphic(fiber_fan, p112_fan(d)) is not None:
        return "P(" + ",".join(["1", "1"] + ["2"] * (d - 1)) + ")"
    return "other"


def analyze_contraction(fan: Fan, ray: ExtremalRay) -> ContractionData:
    """Full chart analysis of the contraction of a fiber-type ray.

    Requires a positive-dimensional base; Picard-number-one fans belong
    to the classify module instead.  Raises ContractionStructureError
    when the fan does not fiber the way the ray demands, and
    InvariantViolation if the chart test and the degree test disagree
    on a projective-space fiber (they are equivalent; disagreement
    means a bug).
    """
    frays = fiber_rays(fan, ray)
    d = len(frays) - 1
    if d >= fan.dim:
        raise ValueError(
            "contraction to a point (Picard number one); use the classify module"
        )
    splitting = contraction_splitting(fan, frays)
    s = _split_structure(fan, splitting, frays)
    charts = tuple(
        sorted(
            (
                chart_is_trivial(fan, splitting, frays, s.cone_groups[bc])
                for bc in s.cone_groups
            ),
            key=lambda c: c.base_cone,
        )
    )
    fiber_iso = _fiber_iso_label(s.fiber_fan, d)
    all_trivial = all(c.trivial for c in charts)
    is_bundle = fiber_iso == f"P^{d}" and all_trivial

    ws = walls(fan)
    degree_test = all(
        divisor_curve_degree(fan, v, ws[wi]) == 1
        for wi in ray.member_walls
        for v in frays
    )
    if fiber_iso == f"P^{d}" and degree_test != all_trivial:
        raise InvariantViolation(
            "chart saturation test and unit-degree test disagree on a "
            "projective-space fiber"
        )
    return ContractionData(
        ray=ray,
        fiber_ray_indices=frays,
        d=d,
        splitting=splitting,
        base_fan=s.base_fan,
        fiber_fan=s.fiber_fan,
        charts=charts,
        fiber_iso=fiber_iso,
        is_bundle=is_bundle,
        degree_test=degree_test,
        length=ray.length,
    )


def build_bundle_fan(
    base: Fan, d: int, lifts: Mapping[int, Sequence[int]] | None = None
) -> Fan:
    """Fan of a P^d-bundle over the toric variety of ``base``.

    Fiber rays are e_1..e_d and minus their sum in the first d
    coordinates; base ray u is lifted to (lift(u), u).  Each coordinate
    of the lift data must extend to an integral linear functional on
    every maximal base cone (automatic over smooth cones); otherwise
    the result would not be a bundle and IncompatibleLifts is raised.
    """
    if d < 1:
        raise ValueError("fiber dimension must be at least 1")
    report = validate_fan(base)
    if not report.ok:
        raise ValueError(f"base fan invalid: {report.problems[0]}")
    if not is_complete(base):
        raise ValueError("base fan must be complete")
    nb = base.dim
    lift_of = {i: (0,) * d for i in range(len(base.rays))}
    for i, vec in (lifts or {}).items():
        v = tuple(int(x) for x in vec)
        if len(v) != d:
            raise ValueError(f"lift for base ray {i} must have {d} coordinates")
        lift_of[int(i)] = v
    for cone in base.max_cones:
        mat = transpose(ray_matrix(base, cone))
        for coord in range(d):
            sol = solve_rational(mat, [lift_of[i][coord] for i in cone])
            if any(c.denominator != 1 for c in sol):
                raise IncompatibleLifts(
                    f"lift coordinate {coord} is not integral-linear "
                    f"on base cone {cone}"
                )
    rays: list[tuple[int, ...]] = []
    for i in range(d):
        rays.append(tuple(1 if j == i else 0 for j in range(d)) + (0,) * nb)
    rays.append((-1,) * d + (0,) * nb)
    horiz_offset = d + 1
    for i, u in enumerate(base.rays):
        rays.append(lift_of[i] + tuple(u))
    cones = []
    for fiber_part in combinations(range(d + 1), d):
        for cone in base.max_cones:
            cones.append(list(fiber_part) + [horiz_offset + i for i in cone])
    return Fan.create(d + nb, rays, cones)


def build_example_32(n: int, d: int) -> Fan:
    """Complete n-fold fibered in P^d whose fibration is not a bundle.

    d+1 fiber rays (e_1..e_d and minus their sum) sit over a base of
    Picard number one; one horizontal ray carries a twist that stops
    the lattice projection from being surjective over some charts,
    while every fiber stays isomorphic to P^d.  The extremal length of
    the fiber ray is (d+1)/2.
    """
    if not 1 <= d < n:
        raise ValueError("need 1 <= d < n")

    def e(i: int) -> list[int]:
        return [1 if j == i else 0 for j in range(n)]

    vs = [tuple(e(i)) for i in range(d)]
    vs.append(tuple(-1 if j < d else 0 for j in range(n)))
    ys = [tuple(e(d + j)) for j in range(n - d - 1)]
    twisted = e(0)
    for j in range(d, n - 1):
        twisted[j] += 1
    twisted[n - 1] += 2
    ys.append(tuple(twisted))
    ys.append(tuple(0 if j < d else -1 for j in range(n)))

    v_idx = range(d + 1)
    y_idx = range(d + 1, d + 2 + n - d)
    cones = []
    for drop in v_idx:
        kept = [i for i in v_idx if i != drop]
        for horiz in combinations(y_idx, n - d):
            cones.append(kept + list(horiz))
    return Fan.create(n, list(vs) + ys, cones)


def build_example_35(base: Fan, d: int) -> Fan:
    """Product of a base with the weighted projective space P(1,1,2,..,2).

    The projection onto the base is a fiber-type contraction whose
    fiber is not projective space; its extremal length is exactly d.
    Needs d >= 2 (below that the weighted space degenerates).
    """
    if d < 2:
        raise ValueError("need d >= 2")
    report = validate_fan(base)
    if not report.ok:
        raise ValueError(f"base fan invalid: {report.problems[0]}")
    if not is_complete(base):
        raise ValueError("base fan must be complete")
    fiber = p112_fan(d)
    nb = base.dim
    rays = [tuple(r) + (0,) * nb for r in fiber.rays]
    rays += [(0,) * d + tuple(r) for r in base.rays]
    cones = []
    for fc in fiber.max_cones:
        for bc in base.max_cones:
            cones.append(list(fc) + [d + 1 + i for i in bc])
    return Fan.create(d + nb, rays, cones)


def _swap_auto(d: int, k: int | None) -> list[list[int]]:
    """Fan automorphism of the P^d rays: swap e_k with minus-the-sum.

    Column k becomes all minus ones, the rest stay coordinate vectors;
    k = None gives the identity.
    """
    m = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    if k is not None:
        for i in range(d):
            m[i][k] = -1
    return m


def check_chart_ratio_consistency(fan: Fan, data: ContractionData) -> None:
    """Cross-check wall-curve degrees through reduced chart matrices.

    Only meaningful for projective-space fibers.  Normalize each
    maximal cone so its d fiber rays become coordinate vectors; then
    for the wall opposite fiber ray e_r, the elementary-divisor product
    of the twist row stacked on the horizontal base block must equal
    the wall multiplicity, it must divide |det| of the base block
    (which must equal the cone multiplicity), and the ratio must equal
    the degree of the fiber divisor on the wall curve.  Raises
    InvariantViolation on any mismatch.
    """
    d = data.d
    n = fan.dim
    if data.fiber_iso != f"P^{d}":
        raise ValueError("reduced-matrix check applies to projective-space fibers")
    g = fans_isomorphic(data.fiber_fan, projective_space_fan(d))
    if g is None:
        raise InvariantViolation("fiber labeled projective space but no isomorphism")
    full_g = [list(row) + [0] * (n - d) for row in g]
    for i in range(n - d):
        full_g.append([0] * d + [1 if j == i else 0 for j in range(n - d)])
    move = mat_mul(full_g, [list(row) for row in data.splitting])

    std = set(projective_space_fan(d).rays)
    wall_by_tau = {w.tau: w for w in walls(fan)}
    fiber_set = set(data.fiber_ray_indices)
    for cone in fan.max_cones:
        fiber_in = [i for i in cone if i in fiber_set]
        horiz = [i for i in cone if i not in fiber_set]
        coords = {i: tuple(mat_vec(move, fan.rays[i])[:d]) for i in fiber_in}
        missing = [r for r in std if r not in coords.values()]
        if len(missing) != 1:
            raise InvariantViolation(
                "cone fiber part is not d of the d+1 standard rays"
            )
        k = None if -1 in missing[0] else missing[0].index(1)
        norm = _swap_auto(d, k)
        final = {i: mat_vec(norm, list(coords[i])) for i in fiber_in}
        moved_horiz = [mat_vec(move, list(fan.rays[i])) for i in horiz]
        twist_rows = [mat_vec(norm, mh[:d]) for mh in moved_horiz]
        a_block = [[mh[d + t] for mh in moved_horiz] for t in range(n - d)]
        beta = abs(determinant(a_block))
        if beta != multiplicity(fan, cone):
            raise InvariantViolation(
                "|det| of base block differs from cone multiplicity"
            )
        for i in fiber_in:
            r = final[i].index(1)
            reduced = [[tr[r] for tr in twist_rows]] + a_block
            snf = smith_normal_form(reduced)
            alpha = 1
            for x in snf.divisors:
                alpha *= x
            tau = tuple(sorted(set(cone) - {i}))
            if alpha != multiplicity(fan, tau):
                raise InvariantViolation(
                    "reduced matrix divisors differ from wall multiplicity"
                )
            if beta % alpha:
                raise InvariantViolation(
                    "wall multiplicity does not divide cone multiplicity"
                )
            if Fraction(alpha, beta) != divisor_curve_degree(fan, i, wall_by_tau[tau]):
                raise InvariantViolation(
                    "reduced-matrix ratio differs from wall degree"
                )


def contraction_report(data: ContractionData, ray_index: int | None = None) -> dict:
    """JSON-ready summary of a contraction analysis."""
    out = {
        "kind": data.ray.kind,
        "length": str(data.length),
        "d": data.d,
        "fiber_iso": data.fiber_iso,
        "fiber_rays": list(data.fiber_ray_indices),
        "charts": [
            {
                "base_cone": [list(v) for v in c.base_cone],
                "horizontal_rays": list(c.horizontal_rays),
                "index": c.index,
            }
            for c in data.charts
        ],
        "degree_test": data.degree_test,
        "is_bundle": data.is_bundle,
        "base_fan": {
            "dim": data.base_fan.dim,
            "rays": [list(r) for r in data.base_fan.rays],
            "max_cones": [list(c) for c in data.base_fan.max_cones],
        },
        "fiber_fan": {
            "dim": data.fiber_fan.dim,
            "rays": [list(r) for r in data.fiber_fan.rays],
            "max_cones": [list(c) for c in data.fiber_fan.max_cones],
        },
    }
    if ray_index is not None:
        out["ray"] = ray_index
    return out
