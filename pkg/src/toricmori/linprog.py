"""Exact rational linear feasibility via phase-1 simplex.

Every verdict in the fan pipeline that needs a feasibility answer
(common-face separation, strict support functions, cone membership,
extremality) comes through here.  The solver is a dense phase-1
simplex over ``fractions.Fraction`` with Bland's rule, so it
terminates on every input and never sees a rounding error.  Strict
inequalities never appear at this layer: callers of homogeneous
systems encode strictness as a gap of at least 1, which is equivalent
up to scaling.

A returned witness is always verified against the constraints before
it leaves the module, so a non-None answer is self-certifying.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Constraint = tuple[Sequence[Fraction], Fraction]  # coeffs . x >= rhs


def solve_eq_nonneg(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> list[Fraction] | None:
    """Find y >= 0 with A y = b, or None when no such y exists.

    Phase-1 simplex: start from one artificial variable per row and
    minimize their sum.  Bland's rule (lowest eligible index enters,
    lowest basis index leaves ties) rules out cycling.  Artificials are
    barred from re-entering the basis once they leave.
    """
    m = len(a)
    if len(b) != m:
        raise ValueError("matrix/vector size mismatch")
    k = len(a[0]) if m else 0
    for row in a:
        if len(row) != k:
            raise ValueError("ragged matrix")
    if m == 0:
        return [Fraction(0)] * k

    # tableau rows: [A | I | b], with b made nonnegative row by row
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        if row[-1] < 0:
            row = [-x for x in row]
        row[k + i] = Fraction(1)
        tab.append(row)
    basis = [k + i for i in range(m)]
    ncols = k + m

    # reduced costs for minimizing the sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(ncols + 1):
        s = Fraction(0)
        for i in range(m):
            s += tab[i][j]
        obj[j] = -s
    for i in range(m):
        obj[k + i] = Fraction(0)

    barred = [False] * ncols
    while True:
        enter = None
        for j in range(ncols):
            if not barred[j] and obj[j] < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best: Fraction | None = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-1 objective is bounded; no pivot column found")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter]:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        if basis[leave] >= k:
            barred[basis[leave]] = True
        basis[leave] = enter

    if -obj[-1] != 0:
        return None
    y = [Fraction(0)] * k
    for i, var in enumerate(basis):
        if var < k:
            y[var] = tab[i][-1]
    for i in range(m):
        lhs = sum(Fraction(a[i][j]) * y[j] for j in range(k))
        if lhs != b[i]:
            raise AssertionError("simplex produced an invalid witness")
    return y


def feasible_point(
    ge: Sequence[Constraint],
    eq: Sequence[Constraint],
    nvars: int,
) -> tuple[Fraction, ...] | None:
    """Witness x for {coeffs.x >= rhs} and {coeffs.x == rhs}, or None.

    Free variables are split as x = xplus - xminus and >= rows get a
    slack, which reduces everything to solve_eq_nonneg.
    """
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(ge)
    for s, (coeffs, r) in enumerate(ge):
        if len(coeffs) != nvars:
            raise ValueError("constraint width mismatch")
        row = [Fraction(c) for c in coeffs] + [Fraction(-c) for c in coeffs]
        row += [Fraction(0)] * nslack
        row[2 * nvars + s] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(r))
    for coeffs, r in eq:
        if len(coeffs) != nvars:
            raise ValueError("constraint width mismatch")
        row = [Fraction(c) for c in coeffs] + [Fraction(-c) for c in coeffs]
        row += [Fraction(0)] * nslack
        rows.append(row)
        rhs.append(Fraction(r))
    if not rows:
        return tuple(Fraction(0) for _ in range(nvars))
    y = solve_eq_nonneg(rows, rhs)
    if y is None:
        return None
    x = tuple(y[i] - y[nvars + i] for i in range(nvars))
    for coeffs, r in ge:
        if sum(Fraction(c) * xi for c, xi in zip(coeffs, x)) < r:
            raise AssertionError("witness violates a >= constraint")
    for coeffs, r in eq:
        if sum(Fraction(c) * xi for c, xi in zip(coeffs, x)) != r:
            raise AssertionError("witness violates an == constraint")
    return x


def in_cone(
    generators: Sequence[Sequence[int]], target: Sequence[int]
) -> list[Fraction] | None:
    """Nonnegative coefficients writing ``target`` over ``generators``.

    Returns None when ``target`` is outside the cone they span.  An
    empty generator list spans just the origin.
    """
    n = len(target)
    for g in generators:
        if len(g) != n:
            raise ValueError("generator/target dimension mismatch")
    if not generators:
        return [] if all(x == 0 for x in target) else None
    a = [[Fraction(g[i]) for g in generators] for i in range(n)]
    b = [Fraction(x) for x in target]
    return solve_eq_nonneg(a, b)
