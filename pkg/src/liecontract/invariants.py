"""Contraction invariants: derivations, center, automorphism checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import mat_inv, nullspace
from .tensor import StructureTensor, act, jacobi_defects

__all__ = [
    "DerivationSpace",
    "derivation_dimension",
    "is_derivation",
    "center_dimension",
    "is_automorphism",
    "derivation_monotonicity_check",
]


@dataclass(frozen=True)
class DerivationSpace:
    dimension: int
    basis: tuple  # n x n object arrays of Fractions

    def __int__(self):
        return self.dimension


def _derivation_rows(C: StructureTensor):
    # unknown D[k, m] (image of e_m has k-th coordinate D[k, m]) sits at column k*n + m
    n = C.n
    c = C.dense()
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                # D[e_i, e_j] component k
                for p in range(n):
                    if c[i, j, p] != 0:
                        row[k * n + p] += c[i, j, p]
                # - [D e_i, e_j] - [e_i, D e_j]
                for p in range(n):
                    if c[p, j, k] != 0:
                        row[p * n + i] -= c[p, j, k]
                    if c[i, p, k] != 0:
                        row[p * n + j] -= c[i, p, k]
                if any(row):
                    rows.append(row)
    return rows


def is_derivation(C: StructureTensor, D) -> bool:
    """Exact check of ``D[x, y] = [Dx, y] + [x, Dy]`` on basis pairs."""
    n = C.n
    c = C.dense()
    D = np.asarray(D, dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = D @ c[i, j, :]
            rhs = sum(D[p, i] * c[p, j, :] for p in range(n)) + sum(D[p, j] * c[i, p, :] for p in range(n))
            if any(x != 0 for x in lhs - rhs):
                return False
    return True


def derivation_dimension(C: StructureTensor) -> DerivationSpace:
    """Dimension and exact basis of the derivation algebra of ``C``."""
    defects = jacobi_defects(C)
    if defects:
        raise ValueError(f"not a Lie algebra: Jacobi identity fails at {defects[0].triple}")
    n = C.n
    basis = []
    for v in nullspace(_derivation_rows(C), n * n):
        D = np.empty((n, n), dtype=object)
        for k in range(n):
            for m in range(n):
                D[k, m] = v[k * n + m]
        basis.append(D)
    return DerivationSpace(len(basis), tuple(basis))


def center_dimension(C: StructureTensor) -> int:
    """Dimension of ``{x : [x, e_j] = 0 for all j}``."""
    n = C.n
    c = C.dense()
    rows = [[c[i, j, k] for i in range(n)] for j in range(n) for k in range(n)]
    rows = [r for r in rows if any(x != 0 for x in r)]
    return len(nullspace(rows, n))


def is_automorphism(C: StructureTensor, M) -> bool:
    return act(C, M, mat_inv(M)) == C


def derivation_monotonicity_check(C: StructureTensor, C0: StructureTensor) -> bool:
    """Necessary condition for ``C -> C0``: dim Der(C0) >= dim Der(C).

    Returns True when consistent.
    """
    if C.n != C0.n:
        raise ValueError("dimension mismatch")
    return derivation_dimension(C0).dimension >= derivation_dimension(C).dimension
