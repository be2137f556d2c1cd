"""Realization checks for parameter-dependent contraction matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import det, diag, mat_inv, param_matrix
from .paramscalar import ParamScalar
from .tensor import StructureTensor, act, limit_tensor

__all__ = [
    "RealizationVerdict",
    "verify_realization",
    "sample_sequence",
    "lemma1_transfer",
    "standard_family",
    "unbounded_entries",
    "limit_matrix",
    "load_family",
    "dump_family",
    "parse_family",
    "family_to_dict",
]

REALIZES = "Realizes"
LIMIT_MISSING = "LimitMissing"
LIMIT_MISMATCH = "LimitMismatch"
SINGULAR_FAMILY = "SingularFamily"


@dataclass(frozen=True)
class RealizationVerdict:
    status: str
    triple: tuple[int, int, int] | None = None
    got: Fraction | None = None
    want: Fraction | None = None
    unbounded: tuple[tuple[int, int], ...] = ()

    @property
    def realizes(self) -> bool:
        return self.status == REALIZES

    @property
    def bounded(self) -> bool:
        return not self.unbounded

    def describe(self) -> str:
        if self.status == LIMIT_MISSING:
            head = f"LimitMissing at {self.triple}"
        elif self.status == LIMIT_MISMATCH:
            head = f"LimitMismatch at {self.triple}: got {self.got}, want {self.want}"
        else:
            head = self.status
        if self.status == SINGULAR_FAMILY:
            return head
        bound = "Bounded" if self.bounded else f"Unbounded {list(self.unbounded)}"
        return f"{head}, {bound}"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "triple": list(self.triple) if self.triple else None,
            "got": None if self.got is None else str(self.got),
            "want": None if self.want is None else str(self.want),
            "bounded": self.bounded,
            "unbounded": [list(e) for e in self.unbounded],
        }


def _lift(U) -> np.ndarray:
    return np.vectorize(ParamScalar.coerce, otypes=[object])(np.asarray(U, dtype=object))


def unbounded_entries(U) -> tuple[tuple[int, int], ...]:
    """1-based positions whose entry has negative valuation (blows up as t -> 0+)."""
    U = _lift(U)
    n, m = U.shape
    return tuple(
        (i + 1, j + 1) for i in range(n) for j in range(m) if U[i, j].valuation() < 0
    )


def verify_realization(C: StructureTensor, U, C0: StructureTensor) -> RealizationVerdict:
    """Decide whether ``C o U_t -> C0`` as ``t -> 0+``, exactly."""
    U = _lift(U)
    if U.shape != (C.n, C.n) or C0.n != C.n:
        raise ValueError("dimension mismatch between tensors and matrix family")
    if det(U) == 0:
        return RealizationVerdict(SINGULAR_FAMILY)
    unbounded = unbounded_entries(U)
    Ct = act(C, U, mat_inv(U))
    lim = limit_tensor(Ct)
    if not lim.exists:
        return RealizationVerdict(LIMIT_MISSING, triple=lim.diverges_at, unbounded=unbounded)
    got = lim.tensor
    for key in sorted(set(got.table) | set(C0.table)):
        g = got.table.get(key, Fraction(0))
        w = C0.table.get(key, Fraction(0))
        if g != w:
            return RealizationVerdict(
                LIMIT_MISMATCH, triple=key, got=Fraction(g), want=Fraction(w), unbounded=unbounded
            )
    return RealizationVerdict(REALIZES, unbounded=unbounded)


def sample_sequence(U, eps) -> list[np.ndarray]:
    """Float matrices ``U_eps`` for each ``eps`` in (0, 1], in the given order."""
    U = _lift(U)
    out = []
    for e in eps:
        e = Fraction(e)
        if not 0 < e <= 1:
            raise ValueError(f"contraction parameter must lie in (0, 1], got {e}")
        try:
            out.append(np.array([[float(x(e)) for x in row] for row in U], dtype=float))
        except ZeroDivisionError as exc:
            raise ValueError(f"family has a pole at eps={e}: {exc}") from None
    return out


def limit_matrix(U) -> np.ndarray:
    """Entrywise limit at 0+; raises ValueError if some entry diverges."""
    U = _lift(U)
    out = np.empty(U.shape, dtype=object)
    for idx, x in np.ndenumerate(U):
        lim = x.limit()
        if lim is None:
            raise ValueError(f"entry {tuple(i + 1 for i in idx)} has no finite limit")
        out[idx] = lim
    return out


def lemma1_transfer(C: StructureTensor, Uhat, Ucheck, C0: StructureTensor) -> RealizationVerdict:
    """Check that ``Uhat_t @ V0`` realizes ``C -> C0`` where ``V0 = lim Ucheck_t``.

    ``Ucheck`` must converge to an invertible matrix; otherwise ValueError.
    """
    V0 = limit_matrix(Ucheck)
    if det(V0) == 0:
        raise ValueError("limit of the right factor is singular")
    return verify_realization(C, _lift(Uhat) @ _lift(V0), C0)


def standard_family(n: int) -> np.ndarray:
    """``diag(1, 1, 1, 1, t^-1, 1, ..., 1)`` realizing ``a(n) -> a0(n)``."""
    if n < 5:
        raise ValueError("the family is defined for n >= 5")
    one = ParamScalar.const(1)
    entries = [one] * n
    entries[4] = ParamScalar.monomial(1, -1)
    return diag(entries)


# -- file format ---------------------------------------------------------------

def parse_family(data: dict) -> np.ndarray:
    try:
        n = int(data["dim"])
        rows = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix-family file missing field: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"entries must be {n}x{n}")
    return param_matrix([[str(x) for x in row] for row in rows])


def family_to_dict(U) -> dict:
    U = _lift(U)
    return {"dim": U.shape[0], "entries": [[str(x) for x in row] for row in U]}


def load_family(path) -> np.ndarray:
    with open(path) as fh:
        return parse_family(json.load(fh))


def dump_family(U, path) -> None:
    with open(path, "w") as fh:
        json.dump(family_to_dict(U), fh, indent=2)
