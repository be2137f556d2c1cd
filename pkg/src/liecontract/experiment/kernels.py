"""Hot loops of the radius experiment: residual objective and Nelder-Mead.

Each kernel has a numba version (``*_nb``) and a numpy version (``*_np``);
:data:`objective` and :data:`nelder_mead` point at the active pair.  The two
paths implement the same algorithm and agree to rounding.
"""

from __future__ import annotations

import math

import numpy as np

from .._accel import NUMBA_AVAILABLE, njit
from ..tensor import StructureTensor

__all__ = [
    "PENALTY",
    "prepare",
    "objective",
    "nelder_mead",
    "objective_np",
    "nelder_mead_np",
    "objective_nb",
    "nelder_mead_nb",
    "NUMBA_AVAILABLE",
]

PENALTY = 1.0e3


def prepare(C: StructureTensor, C0: StructureTensor):
    """Flatten the source tensor to index/value arrays and densify the target."""
    if C.n != C0.n:
        raise ValueError("dimension mismatch")
    n = C.n
    terms = np.array([[i - 1, j - 1, k - 1] for (i, j, k) in C.table], dtype=np.int64).reshape(-1, 3)
    vals = np.array([float(v) for v in C.table.values()], dtype=np.float64)
    target = np.zeros((n, n, n), dtype=np.float64)
    for (i, j, k), v in C0.table.items():
        target[i - 1, j - 1, k - 1] = float(v)
    return terms, vals, target


# -- numpy path -------------------------------------------------------------------

def objective_np(x, n, terms, vals, target, det_floor):
    U = x.reshape(n, n)
    d = np.linalg.det(U)
    if not abs(d) > det_floor:
        return PENALTY * det_floor / max(abs(d), 1e-300)
    Uinv = np.linalg.inv(U)
    a, b, c = terms[:, 0], terms[:, 1], terms[:, 2]
    # wedge[t, i, j] = U[a,i] U[b,j] - U[b,i] U[a,j]
    wedge = U[a][:, :, None] * U[b][:, None, :] - U[b][:, :, None] * U[a][:, None, :]
    got = np.einsum("t,tij,kt->ijk", vals, wedge, Uinv[:, c])
    iu, ju = np.triu_indices(n, 1)
    diff = got[iu, ju, :] - target[iu, ju, :]
    return float(np.sum(diff * diff))


def _project_np(x, radius):
    nrm = math.sqrt(float(x @ x))
    if nrm > radius:
        x *= radius / nrm
    return x


def nelder_mead_np(x0, step, budget, radius, xtol, ftol, n, terms, vals, target, det_floor):
    """Adaptive Nelder-Mead on the ball ``|x| <= radius``; see :func:`nelder_mead_nb`."""
    d = x0.shape[0]
    alpha, gamma, rho, sigma = 1.0, 1.0 + 2.0 / d, 0.75 - 0.5 / d, 1.0 - 1.0 / d
    X = np.empty((d + 1, d))
    F = np.empty(d + 1)
    f = lambda z: objective_np(z, n, terms, vals, target, det_floor)  # noqa: E731
    X[0] = _project_np(x0.copy(), radius)
    F[0] = f(X[0])
    evals = 1
    best_x = X[0].copy()
    best_f = F[0]
    h = step
    while True:
        for i in range(d):
            X[i + 1] = X[0]
            X[i + 1, i] += h
            _project_np(X[i + 1], radius)
            F[i + 1] = f(X[i + 1])
        evals += d
        while evals < budget:
            order = np.argsort(F, kind="stable")
            X = X[order]
            F = F[order]
            if F[0] < best_f:
                best_f = F[0]
                best_x = X[0].copy()
            size = float(np.max(np.abs(X[1:] - X[0])))
            if F[d] - F[0] <= ftol * abs(F[0]) and size <= xtol * max(1.0, float(np.max(np.abs(X[0])))):
                break
            cen = X[:d].mean(axis=0)
            xr = _project_np(cen + alpha * (cen - X[d]), radius)
            fr = f(xr)
            evals += 1
            if fr < F[0]:
                xe = _project_np(cen + gamma * (xr - cen), radius)
                fe = f(xe)
                evals += 1
                if fe < fr:
                    X[d], F[d] = xe, fe
                else:
                    X[d], F[d] = xr, fr
            elif fr < F[d - 1]:
                X[d], F[d] = xr, fr
            else:
                if fr < F[d]:
                    xc = _project_np(cen + rho * (xr - cen), radius)
                else:
                    xc = _project_np(cen + rho * (X[d] - cen), radius)
                fc = f(xc)
                evals += 1
                if fc < min(fr, F[d]):
                    X[d], F[d] = xc, fc
                else:
                    for i in range(1, d + 1):
                        X[i] = _project_np(X[0] + sigma * (X[i] - X[0]), radius)
                        F[i] = f(X[i])
                    evals += d
        if evals + d >= budget:
            break
        # restart the simplex around the incumbent with a step matched to its scale
        X[0] = best_x
        F[0] = best_f
        h = max(step * 1e-3, 0.1 * float(np.max(np.abs(X[1:] - X[0]))) + 1e-12, min(step, 1e-3 * max(1.0, float(np.max(np.abs(best_x))))))
    i = int(np.argmin(F))
    if F[i] < best_f:
        best_f, best_x = F[i], X[i].copy()
    return best_x, best_f, evals


# -- numba path -------------------------------------------------------------------

@njit(cache=True)
def _lu_inverse_nb(U, n, out):
    """Gauss-Jordan with partial pivoting; returns det, writes inverse to out."""
    A = U.copy()
    for i in range(n):
        for j in range(n):
            out[i, j] = 1.0 if i == j else 0.0
    det = 1.0
    for col in range(n):
        p = col
        best = abs(A[col, col])
        for r in range(col + 1, n):
            if abs(A[r, col]) > best:
                best = abs(A[r, col])
                p = r
        if best == 0.0:
            return 0.0
        if p != col:
            det = -det
            for j in range(n):
                tmp = A[col, j]
                A[col, j] = A[p, j]
                A[p, j] = tmp
                tmp = out[col, j]
                out[col, j] = out[p, j]
                out[p, j] = tmp
        piv = A[col, col]
        det *= piv
        for j in range(n):
            A[col, j] /= piv
            out[col, j] /= piv
        for r in range(n):
            if r != col:
                f = A[r, col]
                if f != 0.0:
                    for j in range(n):
                        A[r, j] -= f * A[col, j]
                        out[r, j] -= f * out[col, j]
    return det


@njit(cache=True)
def objective_nb(x, n, terms, vals, target, det_floor):
    U = x.reshape((n, n))
    Uinv = np.empty((n, n))
    d = _lu_inverse_nb(U, n, Uinv)
    if not abs(d) > det_floor:
        return PENALTY * det_floor / max(abs(d), 1e-300)
    m = terms.shape[0]
    wedge = np.empty(m)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            for t in range(m):
                a = terms[t, 0]
                b = terms[t, 1]
                wedge[t] = vals[t] * (U[a, i] * U[b, j] - U[b, i] * U[a, j])
            for k in range(n):
                s = 0.0
                for t in range(m):
                    s += wedge[t] * Uinv[k, terms[t, 2]]
                s -= target[i, j, k]
                total += s * s
    return total


@njit(cache=True)
def _project_nb(x, radius):
    nrm = math.sqrt(np.dot(x, x))
    if nrm > radius:
        x *= radius / nrm


@njit(cache=True)
def nelder_mead_nb(x0, step, budget, radius, xtol, ftol, n, terms, vals, target, det_floor):
    """Adaptive Nelder-Mead restricted to the ball ``|x| <= radius``.

    Every trial point is radially projected onto the ball before it is
    evaluated.  When the simplex collapses (relative spread of values below
    ``ftol`` and extent below ``xtol``) it is rebuilt around the incumbent and
    the search continues until ``budget`` evaluations are spent.
    Returns ``(best_x, best_f, evaluations)``.
    """
    d = x0.shape[0]
    alpha = 1.0
    gamma = 1.0 + 2.0 / d
    rho = 0.75 - 0.5 / d
    sigma = 1.0 - 1.0 / d
    X = np.empty((d + 1, d))
    F = np.empty(d + 1)
    X[0] = x0
    _project_nb(X[0], radius)
    F[0] = objective_nb(X[0], n, terms, vals, target, det_floor)
    evals = 1
    best_x = X[0].copy()
    best_f = F[0]
    h = step
    cen = np.empty(d)
    xr = np.empty(d)
    xe = np.empty(d)
    xc = np.empty(d)
    while True:
        for i in range(d):
            X[i + 1] = X[0]
            X[i + 1, i] += h
            _project_nb(X[i + 1], radius)
            F[i + 1] = objective_nb(X[i + 1], n, terms, vals, target, det_floor)
        evals += d
        while evals < budget:
            order = np.argsort(F, kind="mergesort")
            X = X[order]
            F = F[order]
            if F[0] < best_f:
                best_f = F[0]
                best_x = X[0].copy()
            size = 0.0
            scale = 1.0
            for j in range(d):
                if abs(X[0, j]) > scale:
                    scale = abs(X[0, j])
                for i in range(1, d + 1):
                    if abs(X[i, j] - X[0, j]) > size:
                        size = abs(X[i, j] - X[0, j])
            if F[d] - F[0] <= ftol * abs(F[0]) and size <= xtol * scale:
                break
            for j in range(d):
                s = 0.0
                for i in range(d):
                    s += X[i, j]
                cen[j] = s / d
            for j in range(d):
                xr[j] = cen[j] + alpha * (cen[j] - X[d, j])
            _project_nb(xr, radius)
            fr = objective_nb(xr, n, terms, vals, target, det_floor)
            evals += 1
            if fr < F[0]:
                for j in range(d):
                    xe[j] = cen[j] + gamma * (xr[j] - cen[j])
                _project_nb(xe, radius)
                fe = objective_nb(xe, n, terms, vals, target, det_floor)
                evals += 1
                if fe < fr:
                    X[d] = xe
                    F[d] = fe
                else:
                    X[d] = xr
                    F[d] = fr
            elif fr < F[d - 1]:
                X[d] = xr
                F[d] = fr
            else:
                if fr < F[d]:
                    for j in range(d):
                        xc[j] = cen[j] + rho * (xr[j] - cen[j])
                else:
                    for j in range(d):
                        xc[j] = cen[j] + rho * (X[d, j] - cen[j])
                _project_nb(xc, radius)
                fc = objective_nb(xc, n, terms, vals, target, det_floor)
                evals += 1
                if fc < min(fr, F[d]):
                    X[d] = xc
                    F[d] = fc
                else:
                    for i in range(1, d + 1):
                        for j in range(d):
                            X[i, j] = X[0, j] + sigma * (X[i, j] - X[0, j])
                        _project_nb(X[i], radius)
                        F[i] = objective_nb(X[i], n, terms, vals, target, det_floor)
                    evals += d
        if evals + d >= budget:
            break
        X[0] = best_x
        F[0] = best_f
        spread = 0.0
        big = 1.0
        for j in range(d):
            if abs(best_x[j]) > big:
                big = abs(best_x[j])
            for i in range(1, d + 1):
                if abs(X[i, j] - X[0, j]) > spread:
                    spread = abs(X[i, j] - X[0, j])
        h = max(step * 1e-3, 0.1 * spread + 1e-12, min(step, 1e-3 * big))
    i = int(np.argmin(F))
    if F[i] < best_f:
        best_f = F[i]
        best_x = X[i].copy()
    return best_x, best_f, evals


if NUMBA_AVAILABLE:
    objective = objective_nb
    nelder_mead = nelder_mead_nb
else:
    objective = objective_np
    nelder_mead = nelder_mead_np
