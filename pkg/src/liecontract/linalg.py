"""Small dense linear algebra over exact scalars and floats.

Exact matrices are numpy arrays of ``dtype=object`` holding ``Fraction`` or
:class:`~liecontract.paramscalar.ParamScalar` entries; float matrices are
ordinary ``float64`` arrays.  Both kinds go through the same entry points.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .paramscalar import ParamScalar

__all__ = [
    "SingularMatrixError",
    "is_exact",
    "exact_matrix",
    "param_matrix",
    "identity",
    "diag",
    "mat_mul",
    "det",
    "mat_inv",
    "nullspace",
    "rank",
    "numerically_singular",
    "lq_decompose",
    "to_float",
    "to_fraction",
]


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a (numerically) singular matrix."""


def is_exact(A) -> bool:
    return np.asarray(A).dtype == object


def exact_matrix(rows) -> np.ndarray:
    """Object array of Fractions from nested numbers or ``'p/q'`` strings."""
    arr = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return arr


def param_matrix(rows) -> np.ndarray:
    """Object array of ParamScalars from strings or numbers."""
    return np.array([[ParamScalar.coerce(x) for x in row] for row in rows], dtype=object)


def identity(n: int, one=Fraction(1)) -> np.ndarray:
    zero = one * 0
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = one if i == j else zero
    return out


def diag(entries) -> np.ndarray:
    entries = list(entries)
    n = len(entries)
    zero = entries[0] * 0
    out = np.empty((n, n), dtype=object)
    out[:] = zero
    for i, x in enumerate(entries):
        out[i, i] = x
    return out


def _check_square(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")


def mat_mul(A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    return A @ B


def numerically_singular(A, rcond: float | None = None) -> bool:
    """Rank test on a float matrix: ``sigma_min <= rcond * sigma_max``.

    The default ``rcond`` is ``n * machine epsilon``, the rule numpy uses for
    ``matrix_rank``; it does not depend on the overall scale of A.
    """
    A = np.asarray(A, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    if rcond is None:
        rcond = A.shape[0] * np.finfo(float).eps
    return not s[-1] > rcond * s[0]


def det(A):
    """Determinant; exact by Bareiss elimination for object arrays."""
    A = np.asarray(A)
    _check_square(A)
    if not is_exact(A):
        return float(np.linalg.det(A))
    n = A.shape[0]
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return M[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def mat_inv(A, rcond: float | None = None) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination (exact) or LAPACK (float).

    Float inputs are rejected when :func:`numerically_singular` says so.
    """
    A = np.asarray(A)
    _check_square(A)
    n = A.shape[0]
    if not is_exact(A):
        if numerically_singular(A, rcond):
            raise SingularMatrixError("matrix is numerically singular")
        return np.linalg.inv(A)
    one = A[0, 0] * 0 + 1
    M = [list(row) for row in A]
    inv = [list(row) for row in identity(n, one)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            inv[c], inv[piv] = inv[piv], inv[c]
        p = M[c][c]
        if p != 1:
            M[c] = [x / p for x in M[c]]
            inv[c] = [x / p for x in inv[c]]
        for r in range(n):
            f = M[r][c]
            if r == c or f == 0:
                continue
            M[r] = [x - f * y for x, y in zip(M[r], M[c])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


def _rref(rows, ncols):
    """Reduced row echelon form over Fractions; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(len(M)):
            f = M[i][c]
            if i != r and f != 0:
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(A, ncols: int | None = None) -> list[list[Fraction]]:
    """Exact basis of ``{x : A x = 0}`` over the rationals."""
    rows = [[Fraction(x) for x in row] for row in A]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank(A) -> int:
    rows = [[Fraction(x) for x in row] for row in A]
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0]))[1])


def lq_decompose(U, rcond: float | None = None):
    """Factor ``U = L @ Q`` with L lower triangular (positive diagonal), Q orthogonal.

    Computed as the Householder QR of ``U.T``; the sign of each row of Q is
    flipped so that L has a strictly positive diagonal, which makes the
    factorization unique.
    """
    U = np.asarray(U, dtype=float)
    _check_square(U)
    if numerically_singular(U, rcond):
        raise SingularMatrixError("LQ of a numerically singular matrix")
    q, r = np.linalg.qr(U.T)
    d = np.diag(r)
    if np.any(d == 0):
        raise SingularMatrixError("LQ of a numerically singular matrix")
    s = np.sign(d)
    L = r.T * s          # scale columns of L
    Q = q.T * s[:, None]  # scale rows of Q
    return np.tril(L), Q


def to_float(A) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in np.asarray(A)], dtype=float)


def to_fraction(A) -> np.ndarray:
    """Exact binary-rational copy of a float matrix (no rounding)."""
    return np.array([[Fraction(float(x)) for x in row] for row in np.asarray(A)], dtype=object)
