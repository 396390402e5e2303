"""Exact linear algebra over the integers and rationals.

Everything downstream (multiplicities, intersection numbers, cone
feasibility) reduces to a handful of lattice primitives: Smith normal
form, minor gcds, fraction-free determinants, adjugates, exact solves
and saturations.  All of them run on arbitrary-precision ``int`` and
``fractions.Fraction``; no floating point anywhere.

Matrices are plain lists of rows.  A ``rows x 0`` matrix is a list of
empty lists, a ``0 x cols`` matrix is the empty list; both occur
naturally (multiplicity of the zero cone, kernels in dimension one) and
are handled throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


class RankError(ValueError):
    """Input vectors or matrix do not have the rank an operation requires."""


class SingularMatrixError(ValueError):
    """A square system with determinant zero was handed to an exact solve."""


def shape(m: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    return rows, cols


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    return [[sum(a[i][k] * b[k][j] for k in range(ca)) for j in range(cb)] for i in range(ra)]


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    ra, ca = shape(a)
    if ca != len(v):
        raise ValueError(f"cannot apply {ra}x{ca} to vector of length {len(v)}")
    return [sum(a[i][k] * v[k] for k in range(ca)) for i in range(ra)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    rows, cols = shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix, by fraction-free elimination.

    The Bareiss scheme keeps every intermediate value an exact integer,
    so there is no growth-of-denominator issue and no rounding.  The
    empty matrix has determinant 1.
    """
    rows, cols = shape(m)
    if rows != cols:
        raise ValueError(f"determinant of non-square {rows}x{cols} matrix")
    n = rows
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _submatrix(m: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[m[i][j] for j in cols] for i in rows]


def minor_gcd(m: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k x k minors of ``m``; 0 if every such minor vanishes.

    The k = 0 minor is the empty determinant, so ``minor_gcd(m, 0) == 1``.
    Bails out early once the running gcd hits 1.
    """
    rows, cols = shape(m)
    if k < 0 or k > min(rows, cols):
        raise ValueError(f"no {k}x{k} minors in a {rows}x{cols} matrix")
    if k == 0:
        return 1
    g = 0
    for rsel in combinations(range(rows), k):
        for csel in combinations(range(cols), k):
            g = gcd(g, determinant(_submatrix(m, rsel, csel)))
            if g == 1:
                return 1
    return g


def adjugate(m: Sequence[Sequence[int]]) -> Matrix:
    """Adjugate (transposed cofactor matrix): ``m @ adjugate(m) == det(m) * I``.

    Defined for every square matrix, singular ones included.  The 0x0
    adjugate is the empty matrix and the 1x1 adjugate is ``[[1]]``,
    consistent with the defining identity.
    """
    rows, cols = shape(m)
    if rows != cols:
        raise ValueError(f"adjugate of non-square {rows}x{cols} matrix")
    n = rows
    if n == 0:
        return []
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    index = list(range(n))
    for i in range(n):
        rsel = index[:i] + index[i + 1 :]
        for j in range(n):
            csel = index[:j] + index[j + 1 :]
            cof = determinant(_submatrix(m, rsel, csel))
            if (i + j) % 2:
                cof = -cof
            adj[j][i] = cof
    return adj


def solve_rational(a: Sequence[Sequence[int]], z: Sequence[int]) -> list[Fraction]:
    """Solve ``a @ c == z`` exactly over the rationals.

    Uses the adjugate: c = adj(a) @ z / det(a).  Raises
    SingularMatrixError when det(a) == 0.
    """
    rows, cols = shape(a)
    if rows != cols:
        raise ValueError(f"solve needs a square matrix, got {rows}x{cols}")
    if len(z) != rows:
        raise ValueError("right-hand side has wrong length")
    det = determinant(a)
    if det == 0:
        raise SingularMatrixError("coefficient matrix is singular")
    adj = adjugate(a)
    return [Fraction(sum(adj[i][j] * z[j] for j in range(rows)), det) for i in range(rows)]


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V = D with U, V unimodular and D diagonal.

    ``diag`` holds the full diagonal of D (length min(rows, cols)); the
    positive entries d_1 | d_2 | ... come first, zeros after.  ``rank``
    counts the positive entries.
    """

    left: Matrix
    diag: list[int]
    right: Matrix
    rank: int

    @property
    def divisors(self) -> list[int]:
        return self.diag[: self.rank]


def _swap_rows(m: Matrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _smallest_entry(d: Matrix, t: int, rows: int, cols: int) -> tuple[int, int] | None:
    # smallest nonzero absolute value, lowest (row, col) on ties
    best: tuple[int, int, int] | None = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(d[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with tracked unimodular transforms.

    Pivot selection is the smallest nonzero absolute value in the
    remaining submatrix, lowest row-then-column index on ties, which
    makes the decomposition deterministic for a given input.
    """
    rows, cols = shape(m)
    d = [list(row) for row in m]
    u = identity(rows)
    v = identity(cols)
    for t in range(min(rows, cols)):
        while True:
            pos = _smallest_entry(d, t, rows, cols)
            if pos is None:
                break
            i, j = pos
            if i != t:
                _swap_rows(d, t, i)
                _swap_rows(u, t, i)
            if j != t:
                _swap_cols(d, t, j)
                _swap_cols(v, t, j)
            if d[t][t] < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            pivot = d[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = d[i][t] // pivot
                if q:
                    d[i] = [x - q * y for x, y in zip(d[i], d[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if d[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = d[t][j] // pivot
                if q:
                    for row_d in d:
                        row_d[j] -= q * row_d[t]
                    for row_v in v:
                        row_v[j] -= q * row_v[t]
                if d[t][j]:
                    clean = False
            if not clean:
                continue
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(d[i][j] % pivot for j in range(t + 1, cols))
                ),
                None,
            )
            if offender is None:
                break
            d[t] = [x + y for x, y in zip(d[t], d[offender])]
            u[t] = [x + y for x, y in zip(u[t], u[offender])]
        if d[t][t] == 0:
            break
    diag = [d[i][i] for i in range(min(rows, cols))]
    rank = sum(1 for x in diag if x)
    return SmithDecomposition(left=u, diag=diag, right=v, rank=rank)


def rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over Q, by exact Gaussian elimination."""
    rows, cols = shape(m)
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    for j in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][j]), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = 1 / a[r][j]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a matrix with determinant +-1, exact over the integers."""
    det = determinant(m)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {det})")
    adj = adjugate(m)
    if det == 1:
        return adj
    return [[-x for x in row] for row in adj]


def saturation_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of (Q-span of ``vectors``) intersected with Z^n.

    Input vectors must be linearly independent (RankError otherwise).
    Writing the input as U^-1 @ D @ V^-1 via Smith normal form, the
    first k rows of V^-1 span the saturation; the index of the input
    lattice inside it is the product of the elementary divisors.
    """
    if not vectors:
        return []
    rows, cols = shape(vectors)
    snf = smith_normal_form(vectors)
    if snf.rank != rows:
        raise RankError(f"{rows} vectors of rank {snf.rank}")
    w = unimodular_inverse(snf.right)
    return [tuple(w[i]) for i in range(rows)]


def saturation_index(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``vectors`` in its saturation."""
    rows, _ = shape(vectors)
    snf = smith_normal_form(vectors)
    if snf.rank != rows:
        raise RankError(f"{rows} vectors of rank {snf.rank}")
    out = 1
    for x in snf.divisors:
        out *= x
    return out


def one_dim_kernel(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Primitive generator of the kernel of an r x (r+1) integer matrix.

    The kernel of a full-rank r x (r+1) matrix is spanned by the vector
    of signed maximal minors.  Raises RankError when the matrix has
    rank below r (kernel dimension > 1).  The sign of the result is not
    normalized; callers fix it.
    """
    rows, cols = shape(m)
    if cols != rows + 1:
        raise ValueError(f"expected r x (r+1), got {rows}x{cols}")
    index = list(range(cols))
    k = []
    for drop in range(cols):
        csel = index[:drop] + index[drop + 1 :]
        val = determinant(_submatrix(m, range(rows), csel))
        k.append(-val if drop % 2 else val)
    g = 0
    for x in k:
        g = gcd(g, x)
    if g == 0:
        raise RankError("matrix has rank below its row count")
    return tuple(x // g for x in k)


def primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1
