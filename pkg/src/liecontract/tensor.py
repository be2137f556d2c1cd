"""Structure-constant tensors and the right GL-action on them.

Indices are 1-based throughout the public API, matching the usual
``[e_i, e_j] = c^k_{ij} e_k`` notation.  Only keys with ``i < j`` are stored;
``c^k_{ji} = -c^k_{ij}`` is implied.  Matrices act by
``c'^k_{ij} = U[a,i] U[b,j] Uinv[k,c] c^c_{ab}`` (column ``i`` of ``U`` is the
image of ``e_i``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .linalg import _check_square, is_exact, mat_inv
from .paramscalar import ParamScalar, parse_param

__all__ = [
    "StructureTensor",
    "JacobiDefect",
    "TensorLimit",
    "jacobi_defects",
    "act",
    "limit_tensor",
    "catalog",
    "direct_sum",
    "load_algebra",
    "dump_algebra",
    "parse_algebra",
    "resolve_algebra",
]

Triple = tuple[int, int, int]


def _is_zero(x) -> bool:
    return x == 0


@dataclass(frozen=True, eq=False)
class StructureTensor:
    n: int
    table: Mapping[Triple, object]
    name: str | None = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        seen = set()
        for (i, j, k), v in dict(self.table).items():
            if not (1 <= i <= self.n and 1 <= j <= self.n and 1 <= k <= self.n):
                raise ValueError(f"index out of range in {(i, j, k)} for n={self.n}")
            if i == j:
                if not _is_zero(v):
                    raise ValueError(f"c^{k}_{{{i}{i}}} must vanish")
                continue
            if i > j:
                i, j, v = j, i, -v
            if (i, j, k) in seen:
                raise ValueError(f"bracket ({i},{j},{k}) given twice")
            seen.add((i, j, k))
            if not _is_zero(v):
                clean[(i, j, k)] = v
        object.__setattr__(self, "table", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def from_brackets(cls, n, brackets, name=None):
        """Build from ``{(i, j): {k: value}}``."""
        table = {}
        for (i, j), out in brackets.items():
            for k, v in out.items():
                table[(i, j, k)] = v
        return cls(n, table, name)

    def get(self, i: int, j: int, k: int):
        if i < j:
            return self.table.get((i, j, k), 0)
        if i > j:
            return -self.table.get((j, i, k), 0)
        return 0

    def items(self):
        return self.table.items()

    def brackets(self) -> dict:
        out: dict = {}
        for (i, j, k), v in self.table.items():
            out.setdefault((i, j), {})[k] = v
        return out

    def dense(self, dtype=object) -> np.ndarray:
        """Full antisymmetric ``(n, n, n)`` array, 0-based, ``arr[i, j, k] = c^k_{ij}``."""
        arr = np.zeros((self.n,) * 3, dtype=dtype)
        if dtype == object:
            arr[...] = Fraction(0)
        for (i, j, k), v in self.table.items():
            arr[i - 1, j - 1, k - 1] = v
            arr[j - 1, i - 1, k - 1] = -v
        return arr

    def map_values(self, fn, name=None) -> "StructureTensor":
        return StructureTensor(self.n, {key: fn(v) for key, v in self.table.items()}, name or self.name)

    def to_float(self) -> "StructureTensor":
        return self.map_values(float)

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction, ParamScalar)) for v in self.table.values())

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.n == other.n and dict(self.table) == dict(other.table)

    def __hash__(self):
        return hash((self.n, frozenset(self.table.items())))

    def __sub__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        table = dict(self.table)
        for key, v in other.table.items():
            table[key] = table.get(key, 0) - v
        return StructureTensor(self.n, table)

    def norm(self) -> float:
        """Frobenius norm over the stored ``i < j`` components."""
        return float(np.sqrt(sum(float(v) ** 2 for v in self.table.values())))

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        body = ", ".join(f"{key}: {v}" for key, v in self.table.items())
        return f"StructureTensor({label}n={self.n}, {{{body}}})"


class JacobiDefect(NamedTuple):
    triple: tuple[int, int, int]
    defect: tuple


class TensorLimit(NamedTuple):
    tensor: StructureTensor | None
    diverges_at: Triple | None

    @property
    def exists(self) -> bool:
        return self.tensor is not None


def jacobi_defects(C: StructureTensor) -> list[JacobiDefect]:
    """Triples ``i < j < m`` where the Jacobi identity fails, with the defect vector."""
    n = C.n
    c = C.dense()
    out = []
    for i, j, m in combinations(range(n), 3):
        vec = []
        for k in range(n):
            s = 0
            for p in range(n):
                s += c[i, j, p] * c[p, m, k] + c[m, i, p] * c[p, j, k] + c[j, m, p] * c[p, i, k]
            vec.append(s)
        if any(not _is_zero(x) for x in vec):
            out.append(JacobiDefect((i + 1, j + 1, m + 1), tuple(vec)))
    return out


def act(C: StructureTensor, U, Uinv=None) -> StructureTensor:
    """Right action ``C o U``: structure constants in the basis ``U e_1, ..., U e_n``."""
    U = np.asarray(U)
    _check_square(U)
    n = C.n
    if U.shape[0] != n:
        raise ValueError(f"matrix of size {U.shape[0]} acting on dimension {n}")
    if Uinv is None:
        Uinv = mat_inv(U)
    exact = is_exact(U)
    table = {}
    terms = list(C.table.items())
    for i in range(n):
        for j in range(i + 1, n):
            # coefficient of [e_a, e_b] (a<b) in [U e_i, U e_j]
            wedge = {}
            for (a, b, c), v in terms:
                w = U[a - 1, i] * U[b - 1, j] - U[b - 1, i] * U[a - 1, j]
                if exact and w == 0:
                    continue
                wedge[c] = wedge.get(c, 0) + w * v
            if not wedge:
                continue
            for k in range(n):
                s = 0
                for c, w in wedge.items():
                    s = s + Uinv[k, c - 1] * w
                if not (exact and s == 0):
                    table[(i + 1, j + 1, k + 1)] = s
    if not exact:
        table = {key: float(v) for key, v in table.items()}
    return StructureTensor(n, table)


def limit_tensor(C_t: StructureTensor) -> TensorLimit:
    """Componentwise limit at ``t -> 0+`` of a ParamScalar-valued tensor."""
    table = {}
    for key, v in C_t.table.items():
        lim = ParamScalar.coerce(v).limit()
        if lim is None:
            return TensorLimit(None, key)
        table[key] = lim
    return TensorLimit(StructureTensor(C_t.n, table, C_t.name), None)


# -- catalog -----------------------------------------------------------------

def catalog(name: str, n: int | None = None) -> StructureTensor:
    """Named algebras: ``a``, ``a0`` (n >= 5), ``abelian``, ``heisenberg`` (n = 3)."""
    one = Fraction(1)
    if name == "a":
        if n is None or n < 5:
            raise ValueError("a(n) requires n >= 5")
        return StructureTensor(n, {(1, 3, 3): one, (2, 4, 4): one, (1, 2, 5): one}, f"a({n})")
    if name == "a0":
        if n is None or n < 5:
            raise ValueError("a0(n) requires n >= 5")
        return StructureTensor(n, {(1, 3, 3): one, (2, 4, 4): one}, f"a0({n})")
    if name == "abelian":
        if n is None or n < 1:
            raise ValueError("abelian(n) requires n >= 1")
        return StructureTensor(n, {}, f"abelian({n})")
    if name == "heisenberg":
        if n not in (None, 3):
            raise ValueError("heisenberg is 3-dimensional")
        return StructureTensor(3, {(1, 2, 3): one}, "heisenberg")
    raise ValueError(f"unknown algebra {name!r}")


def direct_sum(C1: StructureTensor, C2: StructureTensor) -> StructureTensor:
    s = C1.n
    table = dict(C1.table)
    for (i, j, k), v in C2.table.items():
        table[(i + s, j + s, k + s)] = v
    name = f"{C1.name}+{C2.name}" if C1.name and C2.name else None
    return StructureTensor(C1.n + C2.n, table, name)


# -- file format ---------------------------------------------------------------

def _scalar_from_text(text):
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    v = parse_param(str(text))
    return v.constant_value() if v.is_constant() else v


def parse_algebra(data: dict) -> StructureTensor:
    try:
        n = int(data["dim"])
        brackets = data["brackets"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"algebra file missing field: {exc}") from None
    table = {}
    for entry in brackets:
        i, j = int(entry["i"]), int(entry["j"])
        if not i < j:
            raise ValueError(f"bracket entry requires i < j, got i={i}, j={j}")
        for k, v in entry["out"].items():
            key = (i, j, int(k))
            if key in table:
                raise ValueError(f"duplicate bracket {key}")
            table[key] = _scalar_from_text(v)
    return StructureTensor(n, table, data.get("name"))


def algebra_to_dict(C: StructureTensor) -> dict:
    return {
        "name": C.name or "",
        "dim": C.n,
        "brackets": [
            {"i": i, "j": j, "out": {str(k): str(v) for k, v in sorted(out.items())}}
            for (i, j), out in sorted(C.brackets().items())
        ],
    }


def load_algebra(path) -> StructureTensor:
    with open(path) as fh:
        return parse_algebra(json.load(fh))


def dump_algebra(C: StructureTensor, path) -> None:
    with open(path, "w") as fh:
        json.dump(algebra_to_dict(C), fh, indent=2)


def resolve_algebra(spec: str) -> StructureTensor:
    """Builtin names ``a:5``, ``a0:6``, ``abelian:3``, ``heisenberg``, else a JSON path."""
    head, _, tail = spec.partition(":")
    if head in ("a", "a0", "abelian") and tail:
        return catalog(head, int(tail))
    if spec == "heisenberg":
        return catalog("heisenberg")
    return load_algebra(spec)
