"""Simplicial fans: validation, completeness, projectivity, walls.

A fan is stored in a canonical form so that equal fans compare equal
and serialized files are byte-reproducible: rays are deduplicated and
sorted lexicographically, every cone is a sorted tuple of ray indices,
and the list of maximal cones is itself sorted.

The scope is complete simplicial fans (Q-factorial projective toric
varieties); validation flags anything outside it.  The face-to-face
test and the projectivity test both reduce to exact rational
feasibility, so there is no epsilon anywhere in a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .lattice import (
    Matrix,
    RankError,
    adjugate,
    determinant,
    is_primitive,
    mat_mul,
    mat_vec,
    one_dim_kernel,
    smith_normal_form,
)
from .linprog import feasible_point, solve_eq_nonneg


class IncompleteFanError(ValueError):
    """Raised where an operation needs a complete fan and the fan is not."""


@dataclass(frozen=True)
class Fan:
    """Canonical immutable fan in Z^dim.

    Use :meth:`create` rather than the raw constructor; it performs the
    canonicalization that the rest of the package (hash-based caching,
    golden serialization) relies on.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @staticmethod
    def create(
        dim: int,
        rays: Iterable[Sequence[int]],
        max_cones: Iterable[Iterable[int]],
    ) -> "Fan":
        ray_list = [tuple(int(x) for x in r) for r in rays]
        for r in ray_list:
            if len(r) != dim:
                raise ValueError(f"ray {r} does not have {dim} coordinates")
        order: dict[tuple[int, ...], int] = {}
        for r in sorted(set(ray_list)):
            order[r] = len(order)
        remap = {i: order[r] for i, r in enumerate(ray_list)}
        cones = set()
        for cone in max_cones:
            idx = set()
            for i in cone:
                i = int(i)
                if not 0 <= i < len(ray_list):
                    raise ValueError(f"cone index {i} out of range")
                idx.add(remap[i])
            cones.add(tuple(sorted(idx)))
        return Fan(
            dim=dim,
            rays=tuple(sorted(order, key=order.get)),
            max_cones=tuple(sorted(cones)),
        )

    def ray_index(self, ray: Sequence[int]) -> int:
        return self.rays.index(tuple(ray))


def conjugate_fan(fan: Fan, m: Matrix) -> Fan:
    """Apply a unimodular change of lattice coordinates to every ray."""
    if determinant(m) not in (1, -1):
        raise ValueError("change of coordinates must be unimodular")
    new_rays = [tuple(mat_vec(m, r)) for r in fan.rays]
    return Fan.create(fan.dim, new_rays, fan.max_cones)


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass(frozen=True)
class Wall:
    """Codimension-one face shared by exactly two maximal cones."""

    tau: tuple[int, ...]
    left: int
    right: int


def ray_matrix(fan: Fan, cone: Sequence[int]) -> Matrix:
    """Rays of ``cone`` as matrix columns (dim x len(cone))."""
    return [[fan.rays[i][coord] for i in cone] for coord in range(fan.dim)]


@lru_cache(maxsize=None)
def multiplicity(fan: Fan, cone: tuple[int, ...]) -> int:
    """Index of the sublattice spanned by the cone's rays in its saturation.

    Equals the product of the elementary divisors of the ray matrix; for
    a full-dimensional simplicial cone this is |det| of the ray matrix.
    Multiplicity 1 means the cone is smooth.
    """
    mat = ray_matrix(fan, cone)
    snf = smith_normal_form(mat)
    if snf.rank != len(cone):
        raise RankError(f"rays of cone {cone} are linearly dependent")
    out = 1
    for d in snf.divisors:
        out *= d
    return out


def _separating_functional(
    fan: Fan, cone_a: tuple[int, ...], cone_b: tuple[int, ...]
) -> bool:
    """True when a hyperplane separates the two cones through their shared rays."""
    shared = set(cone_a) & set(cone_b)
    only_a = [i for i in cone_a if i not in shared]
    only_b = [i for i in cone_b if i not in shared]
    ge = []
    eq = []
    one = Fraction(1)
    zero = Fraction(0)
    for i in shared:
        eq.append(([Fraction(x) for x in fan.rays[i]], zero))
    for i in only_a:
        ge.append(([Fraction(x) for x in fan.rays[i]], one))
    for i in only_b:
        ge.append(([Fraction(-x) for x in fan.rays[i]], one))
    return feasible_point(ge, eq, fan.dim) is not None


@lru_cache(maxsize=None)
def validate_fan(fan: Fan) -> ValidationReport:
    """Structural checks for a simplicial fan of full-dimensional cones.

    Collects problems instead of raising: zero/non-primitive/duplicate
    rays, rays not used by any cone, cones of the wrong size or with
    dependent rays, and pairs of maximal cones that do not intersect in
    a common face (certified by exact separation).
    """
    problems: list[str] = []
    if fan.dim < 1:
        problems.append("dimension must be at least 1")
        return ValidationReport(tuple(problems))
    for i, r in enumerate(fan.rays):
        if all(x == 0 for x in r):
            problems.append(f"ray {i} is zero")
        elif not is_primitive(r):
            problems.append(f"ray {i} = {r} is not primitive")
    if len(set(fan.rays)) != len(fan.rays):
        problems.append("duplicate rays")
    used = {i for cone in fan.max_cones for i in cone}
    for i in range(len(fan.rays)):
        if i not in used:
            problems.append(f"ray {i} lies in no maximal cone")
    if not fan.max_cones:
        problems.append("no maximal cones")
    full_rank_cones = []
    for ci, cone in enumerate(fan.max_cones):
        if len(cone) != fan.dim:
            problems.append(
                f"maximal cone {ci} has {len(cone)} rays, expected {fan.dim}"
            )
            continue
        if determinant(ray_matrix(fan, cone)) == 0:
            problems.append(f"maximal cone {ci} has linearly dependent rays")
            continue
        full_rank_cones.append(ci)
    if not problems:
        for ai, bi in combinations(full_rank_cones, 2):
            if not _separating_functional(fan, fan.max_cones[ai], fan.max_cones[bi]):
                problems.append(
                    f"maximal cones {ai} and {bi} do not meet in a common face"
                )
    return ValidationReport(tuple(problems))


def _facet_incidence(fan: Fan) -> dict[tuple[int, ...], list[int]]:
    facets: dict[tuple[int, ...], list[int]] = {}
    for ci, cone in enumerate(fan.max_cones):
        for facet in combinations(cone, fan.dim - 1):
            facets.setdefault(facet, []).append(ci)
    return facets


@lru_cache(maxsize=None)
def is_complete(fan: Fan) -> bool:
    """Every facet of every maximal cone is shared by exactly two of them.

    For a valid pure fan this is equivalent to the support being all of
    R^dim: a facet on only one cone would be a boundary piece.
    """
    if not validate_fan(fan).ok:
        raise ValueError("fan failed validation; completeness undefined")
    return all(len(v) == 2 for v in _facet_incidence(fan).values())


@lru_cache(maxsize=None)
def walls(fan: Fan) -> tuple[Wall, ...]:
    """All codimension-one faces, each with its two incident maximal cones.

    Deterministic order (lexicographic in the ray-index tuple).  Raises
    IncompleteFanError when some facet is not shared by exactly two
    maximal cones.
    """
    if not validate_fan(fan).ok:
        raise ValueError("fan failed validation; walls undefined")
    out = []
    for facet, cones in sorted(_facet_incidence(fan).items()):
        if len(cones) != 2:
            raise IncompleteFanError(
                f"face {facet} lies on {len(cones)} maximal cones, expected 2"
            )
        out.append(Wall(tau=facet, left=min(cones), right=max(cones)))
    return tuple(out)


def opposite_ray(fan: Fan, wall: Wall, side: int) -> int:
    """Ray index completing ``wall.tau`` to the maximal cone on ``side``."""
    cone = fan.max_cones[side]
    extra = [i for i in cone if i not in wall.tau]
    if len(extra) != 1:
        raise ValueError("cone does not extend the wall by a single ray")
    return extra[0]


def _wall_normal(fan: Fan, wall: Wall) -> tuple[int, ...]:
    """Integer functional vanishing on the wall, positive on the right
    cone's opposite ray (hence negative on the left one's)."""
    ell = one_dim_kernel([list(fan.rays[i]) for i in wall.tau])
    val = sum(a * b for a, b in zip(ell, fan.rays[opposite_ray(fan, wall, wall.right)]))
    if val < 0:
        ell = tuple(-x for x in ell)
    elif val == 0:
        raise ValueError("opposite ray lies on the wall hyperplane")
    left = sum(a * b for a, b in zip(ell, fan.rays[opposite_ray(fan, wall, wall.left)]))
    if left >= 0:
        raise ValueError("wall does not separate its two cones")
    return ell


@lru_cache(maxsize=None)
def is_projective(fan: Fan) -> bool:
    """Existence of a strictly convex support function, by exact LP.

    The functionals of two cones sharing a wall differ by a multiple of
    the wall normal, so a support function is determined by one jump
    scalar per wall once the functionals are propagated along a
    spanning tree of the cone adjacency graph; strict convexity is
    positivity of every jump, and the only constraints are that the
    jumps across non-tree walls match what the tree already forces.
    Scale invariance turns positivity into jump >= 1, an exact
    feasibility problem.
    """
    ws = walls(fan)
    if fan.dim == 1:
        return True
    ncones = len(fan.max_cones)
    nw = len(ws)
    normals = [_wall_normal(fan, w) for w in ws]

    adjacency: dict[int, list[tuple[int, int]]] = {c: [] for c in range(ncones)}
    for wi, w in enumerate(ws):
        adjacency[w.left].append((w.right, wi))
        adjacency[w.right].append((w.left, wi))

    # functional of each cone as an integer combination of wall jumps,
    # filled in breadth-first from cone 0
    expr: list[list[int] | None] = [None] * ncones
    expr[0] = [0] * nw
    queue = [0]
    non_tree = set(range(nw))
    while queue:
        c = queue.pop(0)
        for other, wi in sorted(adjacency[c]):
            if expr[other] is not None:
                continue
            non_tree.discard(wi)
            # crossing toward the normal's positive side subtracts the
            # jump: left functional minus right functional is a positive
            # multiple of the normal when the function is strictly convex
            step = expr[c][:]
            crossing_to_positive = ws[wi].right == other
            step[wi] += -1 if crossing_to_positive else 1
            expr[other] = step
            queue.append(other)
    if any(e is None for e in expr):
        raise IncompleteFanError("cone adjacency graph is disconnected")

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for wi in sorted(non_tree):
        w = ws[wi]
        # require expr[left] - expr[right] to be jump_wi * normal_wi
        diff = [a - b for a, b in zip(expr[w.left], expr[w.right])]
        diff[wi] -= 1
        for coord in range(fan.dim):
            coeffs = [Fraction(diff[j] * normals[j][coord]) for j in range(nw)]
            # substitute jump = 1 + slack so the variables are slacks >= 0
            rows.append(coeffs)
            rhs.append(-sum(coeffs))
    if not rows:
        return True
    return solve_eq_nonneg(rows, rhs) is not None


def picard_number(fan: Fan) -> int:
    """rank of the divisor class group modulo linear equivalence."""
    return len(fan.rays) - fan.dim


def _cone_mult_multiset(fan: Fan) -> list[int]:
    return sorted(abs(determinant(ray_matrix(fan, c))) for c in fan.max_cones)


def _incidence_multiset(fan: Fan) -> list[int]:
    counts = [0] * len(fan.rays)
    for cone in fan.max_cones:
        for i in cone:
            counts[i] += 1
    return sorted(counts)


def fans_isomorphic(f1: Fan, f2: Fan) -> Matrix | None:
    """Unimodular map carrying f1 onto f2 (rays to rays, cones to cones).

    Brute force seeded on one maximal cone: every (cone, ordering) of f2
    determines a candidate matrix, which is then checked on all rays and
    cones.  Exponential in dim, fine for the handful of rays this
    package targets; cheap multiset invariants prune most candidates.
    """
    if f1.dim != f2.dim:
        raise ValueError("fans of different dimensions")
    if (
        len(f1.rays) != len(f2.rays)
        or len(f1.max_cones) != len(f2.max_cones)
        or _cone_mult_multiset(f1) != _cone_mult_multiset(f2)
        or _incidence_multiset(f1) != _incidence_multiset(f2)
    ):
        return None
    if not f1.max_cones:
        return None
    seed = f1.max_cones[0]
    b1 = ray_matrix(f1, seed)
    det1 = determinant(b1)
    if det1 == 0:
        return None
    adj1 = adjugate(b1)
    ray_set2 = {r: i for i, r in enumerate(f2.rays)}
    cone_set2 = set(f2.max_cones)
    for cone2 in f2.max_cones:
        for perm in permutations(cone2):
            b2 = ray_matrix(f2, perm)
            num = mat_mul(b2, adj1)
            if any(x % det1 for row in num for x in row):
                continue
            m = [[x // det1 for x in row] for row in num]
            if determinant(m) not in (1, -1):
                continue
            mapping = []
            good = True
            for r in f1.rays:
                img = tuple(mat_vec(m, r))
                j = ray_set2.get(img)
                if j is None:
                    good = False
                    break
                mapping.append(j)
            if not good:
                continue
            mapped = {tuple(sorted(mapping[i] for i in cone)) for cone in f1.max_cones}
            if mapped == cone_set2:
                return m
    return None
