"""Diagonal (generalized Inonu-Wigner) realizations in a fixed basis.

For ``U = diag(t^a1, ..., t^an)`` the action scales each structure constant,
``c'^k_{ij} = t^(a_i + a_j - a_k) c^k_{ij}``, so realizing ``C -> C0`` is a
linear system in the exponent vector: the exponent is 0 where the constant
survives unchanged and at least 1 where it must vanish.  Feasibility is
decided exactly; a rational solution scales to an integer one.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction

from .linalg import diag
from .paramscalar import ParamScalar
from .simplex import feasible_point
from .tensor import StructureTensor

__all__ = [
    "ExponentProblem",
    "Row",
    "build_problem",
    "lp_feasible",
    "integerize",
    "solve",
    "necessity_query",
    "NecessityResult",
    "parse_row",
    "format_row",
    "giw_family",
]


@dataclass(frozen=True)
class Row:
    """``coeffs . alpha (== | >=) rhs``."""

    coeffs: tuple[int, ...]
    sense: str  # "==" or ">="
    rhs: int

    def value(self, alpha) -> Fraction:
        return sum(Fraction(c) * a for c, a in zip(self.coeffs, alpha))

    def holds(self, alpha) -> bool:
        v = self.value(alpha)
        return v == self.rhs if self.sense == "==" else v >= self.rhs

    def negation(self) -> str:
        """Integer negation, e.g. ``a5 >= 0`` becomes ``a5 <= -1``."""
        lhs = _format_lhs(self.coeffs)
        if self.sense == "==":
            return f"{lhs} != {self.rhs}"
        return f"{lhs} <= {self.rhs - 1}"

    def __str__(self):
        return f"{_format_lhs(self.coeffs)} {self.sense} {self.rhs}"


def _format_lhs(coeffs) -> str:
    out = ""
    for idx, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        if not out:
            out = ("-" if c < 0 else "") + f"{mag}a{idx}"
        else:
            out += f" {'-' if c < 0 else '+'} {mag}a{idx}"
    return out or "0"


format_row = str


@dataclass(frozen=True)
class ExponentProblem:
    n: int
    equalities: tuple[Row, ...] = ()
    inequalities: tuple[Row, ...] = ()
    extra: tuple[Row, ...] = ()
    infeasible_reason: str | None = None

    def rows(self):
        return self.equalities + self.inequalities + self.extra

    def with_row(self, row: Row) -> "ExponentProblem":
        if len(row.coeffs) != self.n:
            raise ValueError(f"row has {len(row.coeffs)} coefficients, expected {self.n}")
        if row.sense == "==" and row.rhs != 0:
            raise ValueError("extra equality rows must be homogeneous (rhs 0)")
        if row.sense == ">=" and row.rhs < 0:
            raise ValueError("extra >= rows need rhs >= 0 so that integer scaling keeps them")
        return replace(self, extra=self.extra + (row,))

    def satisfied_by(self, alpha) -> bool:
        return self.infeasible_reason is None and all(r.holds(alpha) for r in self.rows())

    def describe(self) -> list[str]:
        if self.infeasible_reason:
            return [f"infeasible: {self.infeasible_reason}"]
        return [str(r) for r in self.rows()]


def _exponent_coeffs(n, i, j, k):
    coeffs = [0] * n
    coeffs[i - 1] += 1
    coeffs[j - 1] += 1
    coeffs[k - 1] -= 1
    return tuple(coeffs)


def build_problem(C: StructureTensor, C0: StructureTensor) -> ExponentProblem:
    """Exponent constraints for ``diag(t^a) `` to realize ``C -> C0``."""
    if C.n != C0.n:
        raise ValueError("dimension mismatch")
    n = C.n
    eqs, ineqs = [], []
    for key in C0.table:
        if key not in C.table:
            return ExponentProblem(n, infeasible_reason=f"target has c^{key[2]}_{key[0]}{key[1]} "
                                   f"= {C0.table[key]} where the source is zero")
    for key, v in C.table.items():
        coeffs = _exponent_coeffs(n, *key)
        w = C0.table.get(key)
        if w is None:
            ineqs.append(Row(coeffs, ">=", 1))
        elif w == v:
            eqs.append(Row(coeffs, "==", 0))
        else:
            return ExponentProblem(n, infeasible_reason=f"c^{key[2]}_{key[0]}{key[1]} "
                                   f"changes from {v} to {w}; diagonal scaling cannot do that")
    # duplicate rows carry no information
    eqs = list(dict.fromkeys(eqs))
    ineqs = list(dict.fromkeys(ineqs))
    return ExponentProblem(n, tuple(eqs), tuple(ineqs))


def lp_feasible(P: ExponentProblem) -> list[Fraction] | None:
    """Exact rational point satisfying every row of P, or None."""
    if P.infeasible_reason is not None:
        return None
    eqs = [(r.coeffs, r.rhs) for r in P.rows() if r.sense == "=="]
    ges = [(r.coeffs, r.rhs) for r in P.rows() if r.sense == ">="]
    return feasible_point(eqs, ges, P.n)


def integerize(x, P: ExponentProblem | None = None) -> list[int]:
    """Scale a rational solution by the LCM of its denominators."""
    m = 1
    for v in x:
        m = math.lcm(m, Fraction(v).denominator)
    alpha = [int(Fraction(v) * m) for v in x]
    if P is not None and not P.satisfied_by(alpha):
        raise AssertionError("integer scaling broke a constraint")
    return alpha


def solve(P: ExponentProblem) -> list[int] | None:
    """Integer exponent vector for P, or None when infeasible."""
    x = lp_feasible(P)
    return None if x is None else integerize(x, P)


@dataclass(frozen=True)
class NecessityResult:
    forced: bool
    alpha: list[int] | None = None
    statement: str = ""


def necessity_query(P: ExponentProblem, extra_row: Row) -> NecessityResult:
    """Is ``extra_row`` compatible with P?  If not, its negation is forced."""
    alpha = solve(P.with_row(extra_row))
    if alpha is None:
        return NecessityResult(True, None, f"Forced: {extra_row.negation()}")
    return NecessityResult(False, alpha, f"StillFeasible: alpha = {tuple(alpha)}")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*a(\d+)")


def parse_row(text: str, n: int) -> Row:
    """Parse ``'a5 >= 0'``, ``'a1 + a2 - a5 >= 1'``, ``'a3 <= -1'``, ``'a1 = 0'``."""
    m = re.fullmatch(r"\s*(.+?)\s*(>=|<=|==|=)\s*([+-]?\d+)\s*", text)
    if not m:
        raise ValueError(f"cannot parse constraint {text!r}")
    lhs, op, rhs = m.group(1), m.group(2), int(m.group(3))
    coeffs = [0] * n
    pos = 0
    lhs = lhs.replace(" ", "")
    while pos < len(lhs):
        t = _TERM.match(lhs, pos)
        if not t or t.start() != pos:
            raise ValueError(f"cannot parse constraint {text!r}")
        sign = -1 if t.group(1) == "-" else 1
        mag = int(t.group(2)) if t.group(2) else 1
        idx = int(t.group(3))
        if not 1 <= idx <= n:
            raise ValueError(f"variable a{idx} out of range 1..{n}")
        coeffs[idx - 1] += sign * mag
        pos = t.end()
    if op == "<=":
        return Row(tuple(-c for c in coeffs), ">=", -rhs)
    return Row(tuple(coeffs), "==" if op in ("=", "==") else ">=", rhs)


def giw_family(alpha):
    """``diag(t^a1, ..., t^an)`` as a ParamScalar matrix."""
    return diag([ParamScalar.monomial(1, a) for a in alpha])
