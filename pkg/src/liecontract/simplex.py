"""Exact phase-one simplex over the rationals (Bland's rule)."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["feasible_point"]


def _phase_one(A, b):
    """Find ``y >= 0`` with ``A y = b`` (``b >= 0``), or ``None`` if none exists.

    Tableau method with one artificial variable per row; entering and leaving
    variables are both chosen by smallest index, which rules out cycling.
    """
    m = len(A)
    nv = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * nv
    width = nv + m
    T = [list(A[i]) + [Fraction(int(i == r)) for r in range(m)] + [b[i]] for i in range(m)]
    basis = [nv + i for i in range(m)]
    # objective: minimize sum of artificials; reduced costs for the nonbasic columns
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(nv):
            cost[j] -= T[i][j]
        cost[width] -= T[i][width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot happen for phase one
            raise RuntimeError("phase-one objective unbounded")
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            f = T[i][enter]
            if i != r and f != 0:
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[r])]
        basis[r] = enter

    if cost[width] != 0:  # -(sum of artificials) at optimum
        return None
    y = [Fraction(0)] * width
    for i, v in enumerate(basis):
        y[v] = T[i][width]
    return y[:nv]


def feasible_point(equalities, inequalities, nvars):
    """A rational ``x`` (free sign) with ``r.x == b`` and ``r.x >= b``, or None.

    Rows are ``(coefficients, rhs)`` pairs.
    """
    rows = [(list(map(Fraction, r)), Fraction(b), False) for r, b in equalities]
    rows += [(list(map(Fraction, r)), Fraction(b), True) for r, b in inequalities]
    nslack = sum(1 for *_, ge in rows if ge)
    A, rhs = [], []
    s = 0
    for coeffs, b, ge in rows:
        if len(coeffs) != nvars:
            raise ValueError(f"row of length {len(coeffs)} for {nvars} variables")
        # x = xp - xm; surplus for >= rows
        row = coeffs + [-c for c in coeffs] + [Fraction(0)] * nslack
        if ge:
            row[2 * nvars + s] = Fraction(-1)
            s += 1
        if b < 0:
            row = [-c for c in row]
            b = -b
        A.append(row)
        rhs.append(b)
    y = _phase_one(A, rhs)
    if y is None:
        return None
    return [y[i] - y[nvars + i] for i in range(nvars)]
