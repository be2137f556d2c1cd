"""Mechanized check of the unboundedness argument for ``a(n) -> a0(n)``.

Given samples ``U_eps`` of a candidate contraction matrix, each sample is
split as ``U = L Q`` (lower triangular times orthogonal).  The twelve
structure-constant residuals of ``a(n) o L`` against ``a0(n)`` are computed
twice, once through the tensor action and once through closed-form
expressions in the entries of L, and the identity

    l11 l22 / l55 = o512 - o524 o412 / l22
                    - (o513 + (l11 - l21) / l22**2 * o423 o524) o312 / l11

is evaluated exactly.  Since every o vanishes in the limit, ``|l55|`` must
blow up.  After clearing entries (5,1), (5,2) of L with an automorphism of
``a`` the tail ``(5,5..n)`` of the transformed matrix must blow up too.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .contraction import sample_sequence
from .linalg import identity, is_exact, lq_decompose, to_fraction
from .tensor import act, catalog

__all__ = [
    "TWELVE",
    "residuals_direct",
    "residuals_formula",
    "key_identity",
    "q_block_check",
    "analyze_orthogonal_limit",
    "OrthogonalCase",
    "row_reducer",
    "row5_tail_norm",
    "CertificateRow",
    "CertificateReport",
    "certify",
    "FORMULA_NOTES",
]

# (i, j, k) meaning o^k_{ij}, in the order the system is usually written
TWELVE = (
    (1, 3, 3), (2, 4, 4), (1, 4, 4), (1, 2, 3), (2, 3, 4), (2, 4, 5),
    (1, 2, 4), (1, 3, 5), (1, 4, 5), (2, 3, 5), (1, 3, 4), (1, 2, 5),
)

FORMULA_NOTES = (
    "o^4_13 and o^5_13: the printed factor (l11 - l22) disagrees with the tensor "
    "action; the shipped formulas use (l11 - l21).",
    "o^5_12: the printed term l11*l32*l43/(l33*l55) disagrees with the tensor "
    "action; the shipped formula uses l11*l32*l53/(l33*l55).",
    "key identity: the coefficient (l11 - l22)/l22**2 is shipped as "
    "(l11 - l21)/l22**2, which makes it hold exactly.",
)


def _check_lower(L, n):
    L = np.asarray(L)
    if n < 5:
        raise ValueError("the certificate needs n >= 5")
    if L.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {L.shape}")
    for i in range(n):
        if L[i, i] == 0:
            raise ZeroDivisionError(f"diagonal entry ({i + 1},{i + 1}) of L is zero")
        for j in range(i + 1, n):
            if L[i, j] != 0:
                raise ValueError(f"L is not lower triangular: entry ({i + 1},{j + 1}) is nonzero")
    return L


def residuals_direct(L, n: int) -> dict:
    """``a(n) o L - a0(n)`` on the twelve triples, through the tensor action."""
    L = _check_lower(L, n)
    got = act(catalog("a", n), L)
    target = catalog("a0", n)
    zero = L[0, 0] * 0
    return {t: got.table.get(t, zero) - target.table.get(t, zero) for t in TWELVE}


def _entries(L):
    return lambda i, j: L[i - 1, j - 1]


def residuals_formula(L, n: int, verbatim: bool = False) -> dict:
    """The twelve residuals as closed-form expressions in the entries of L.

    ``verbatim=True`` reproduces the commonly printed transcription, which
    differs in three places (see ``FORMULA_NOTES``); it is kept only so the
    discrepancy can be demonstrated against :func:`residuals_direct`.
    """
    L = _check_lower(L, n)
    l = _entries(L)
    l11, l22, l33, l44, l55 = l(1, 1), l(2, 2), l(3, 3), l(4, 4), l(5, 5)
    o412 = -l22 * l(4, 1) / l44 + l(2, 1) * l(4, 2) / l44 - l11 * l(3, 2) * l(4, 3) / (l33 * l44)
    second = l(4, 3) if verbatim else l(5, 3)
    gap = l11 - (l22 if verbatim else l(2, 1))
    return {
        (1, 3, 3): l11 - 1,
        (2, 4, 4): l22 - 1,
        (1, 4, 4): l(2, 1),
        (1, 2, 3): l11 * l(3, 2) / l33,
        (2, 3, 4): l22 * l(4, 3) / l44,
        (2, 4, 5): -l22 * l(5, 4) / l55,
        (1, 2, 4): o412,
        (1, 3, 5): -l11 * l(5, 3) / l55 + gap * l(4, 3) * l(5, 4) / (l44 * l55),
        (1, 4, 5): -l(2, 1) * l(5, 4) / l55,
        (2, 3, 5): -l22 * l(4, 3) * l(5, 4) / (l44 * l55),
        (1, 3, 4): -gap * l(4, 3) / l44,
        (1, 2, 5): l11 * l22 / l55 - l11 * l(3, 2) * second / (l33 * l55) - o412 * l(5, 4) / l55,
    }


def key_identity(L, n: int, residuals: dict | None = None, verbatim: bool = False):
    """Both sides of the identity tying ``l11 l22 / l55`` to the residuals.

    The residuals default to :func:`residuals_direct`, so in exact arithmetic
    ``lhs == rhs`` is a genuine check of the identity, not of a transcription.
    """
    L = _check_lower(L, n)
    o = residuals_direct(L, n) if residuals is None else residuals
    l = _entries(L)
    l11, l22, l55 = l(1, 1), l(2, 2), l(5, 5)
    gap = l11 - (l22 if verbatim else l(2, 1))
    lhs = l11 * l22 / l55
    rhs = (
        o[(1, 2, 5)]
        - o[(2, 4, 5)] / l22 * o[(1, 2, 4)]
        - (o[(1, 3, 5)] + gap / (l22 * l22) * o[(2, 3, 4)] * o[(2, 4, 5)]) * o[(1, 2, 3)] / l11
    )
    return lhs, rhs


# -- orthogonal part -----------------------------------------------------------

def _block_mask(n):
    mask = np.zeros((n, n), dtype=bool)
    mask[:2, :2] = True
    mask[2:4, 2:4] = True
    mask[4:, 4:] = True
    return mask


def q_block_check(Q, n: int, tol: float = 1e-9) -> float:
    """Frobenius norm of the entries of Q outside the 2+2+(n-4) block pattern."""
    Q = np.asarray(Q, dtype=float)
    return float(np.linalg.norm(Q[~_block_mask(n)]))


@dataclass(frozen=True)
class OrthogonalCase:
    kind: str  # "swap", "diagonal" or "violation"
    detail: str = ""
    values: tuple = ()


def analyze_orthogonal_limit(Q, n: int, tol: float = 1e-9) -> OrthogonalCase:
    """Classify a limiting orthogonal factor of block form.

    The three components c~^3_14, c~^3_24, c~^3_23 of ``a0 o Q`` must vanish;
    then either the diagonal of both 2x2 blocks vanishes (swap case) or
    their off-diagonal does (diagonal case).
    """
    Q = np.asarray(Q, dtype=float)
    off = q_block_check(Q, n)
    if off > tol:
        return OrthogonalCase("violation", f"entries outside the block pattern, norm {off:.3g}")
    q = lambda i, j: Q[i - 1, j - 1]  # noqa: E731
    c314 = q(1, 1) * q(3, 3) * q(3, 4) + q(2, 1) * q(4, 3) * q(4, 4)
    c324 = q(1, 2) * q(3, 3) * q(3, 4) + q(2, 2) * q(4, 3) * q(4, 4)
    c323 = q(1, 2) * q(3, 3) ** 2 + q(2, 2) * q(4, 3) ** 2
    vals = (c314, c324, c323)
    for name, v in zip(("(1,4,3)", "(2,4,3)", "(2,3,3)"), vals):
        if abs(v) > tol:
            return OrthogonalCase("violation", f"component {name} = {v:.3g}", vals)
    if max(abs(q(3, 3)), abs(q(4, 4)), abs(q(1, 1)), abs(q(2, 2))) <= tol:
        return OrthogonalCase("swap", "", vals)
    if max(abs(q(3, 4)), abs(q(4, 3)), abs(q(2, 1)), abs(q(1, 2))) <= tol:
        return OrthogonalCase("diagonal", "", vals)
    return OrthogonalCase("violation", "neither the swap nor the diagonal pattern", vals)


# -- row reduction ---------------------------------------------------------------

def row_reducer(L, n: int) -> np.ndarray:
    """Automorphism M of ``a(n)`` with ``(M L)[5,1] = (M L)[5,2] = 0``."""
    L = np.asarray(L)
    l = _entries(L)
    l11, l22 = l(1, 1), l(2, 2)
    if l11 == 0 or l22 == 0:
        raise ZeroDivisionError("row reduction needs nonzero l11 and l22")
    if is_exact(L):
        M = identity(n, l11 * 0 + 1)
    else:
        M = np.eye(n)
    M[4, 0] = -(l(5, 1) - l(2, 1) / l22 * l(5, 2)) / l11
    M[4, 1] = -l(5, 2) / l22
    return M


def row5_tail_norm(U, n: int) -> float:
    """Euclidean norm of the entries (5,5), ..., (5,n)."""
    U = np.asarray(U, dtype=float)
    return float(np.linalg.norm(U[4, 4:n]))


# -- report ----------------------------------------------------------------------

@dataclass
class CertificateRow:
    eps: float
    norm_U: float
    abs_l55: float
    ratio_l54: float
    ratio_l53: float
    row5_tail_norm: float
    max_abs_o: float
    key_identity_residual: float
    q_block_residual: float


COLUMNS = [f.name for f in CertificateRow.__dataclass_fields__.values()]

VERDICT_NAMES = (
    "norm_diverges",
    "l55_diverges",
    "ratios_vanish",
    "residuals_vanish",
    "tail_diverges",
    "q_block",
    "q_continuous",
    "formula_matches_oracle",
    "key_identity_exact",
)


@dataclass
class CertificateReport:
    n: int
    rows: list[CertificateRow]
    verdicts: dict[str, bool]
    tol: float
    orthogonal_case: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "tol": self.tol,
            "columns": COLUMNS,
            "rows": [asdict(r) for r in self.rows],
            "verdicts": dict(self.verdicts),
            "passed": self.passed,
            "orthogonal_case": self.orthogonal_case,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CertificateReport":
        return cls(
            n=data["n"],
            rows=[CertificateRow(**r) for r in data["rows"]],
            verdicts=dict(data["verdicts"]),
            tol=data["tol"],
            orthogonal_case=data.get("orthogonal_case", ""),
            notes=list(data.get("notes", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([repr(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()


def _strictly_increasing(xs):
    return all(b > a for a, b in zip(xs, xs[1:]))


def _strictly_decreasing(xs):
    return all(b < a for a, b in zip(xs, xs[1:]))


def _non_increasing(xs):
    return all(b <= a for a, b in zip(xs, xs[1:]))


def _sample_row(eps, U, n):
    L, Q = lq_decompose(U)
    Lx = to_fraction(L)
    direct = residuals_direct(Lx, n)
    formula = residuals_formula(Lx, n)
    lhs, rhs = key_identity(Lx, n, direct)
    M = row_reducer(L, n)
    Ut = M @ U
    l55 = L[4, 4]
    row = CertificateRow(
        eps=float(eps),
        norm_U=float(np.linalg.norm(U)),
        abs_l55=abs(float(l55)),
        ratio_l54=abs(float(L[4, 3] / l55)),
        ratio_l53=abs(float(L[4, 2] / l55)),
        row5_tail_norm=row5_tail_norm(Ut, n),
        max_abs_o=float(max(abs(v) for v in direct.values())),
        key_identity_residual=float(abs(lhs - rhs)),
        q_block_residual=q_block_check(Q, n),
    )
    return row, Q, formula == direct, lhs == rhs


def certify(U, n: int, eps=None, tol: float = 1e-3, q_jump_tol: float = 1e-2) -> CertificateReport:
    """Run the unboundedness certificate on a family or a sampled sequence.

    ``U`` is either a ParamScalar matrix (sampled at ``eps``, default
    ``10^-1 .. 10^-6``) or a list of float matrices, in which case ``eps``
    only labels the rows.  Samples are processed in order of decreasing
    ``eps``.  A failed trend is reported in the verdicts, never raised.
    """
    if n < 5:
        raise ValueError("the certificate needs n >= 5")
    if eps is None:
        eps = [Fraction(1, 10**k) for k in range(1, 7)]
    if isinstance(U, np.ndarray) and is_exact(U):
        if U.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} family, got {U.shape}")
        samples = sample_sequence(U, eps)
    else:
        samples = [np.asarray(u, dtype=float) for u in U]
        if len(samples) != len(eps):
            raise ValueError("need one eps label per sampled matrix")
    order = sorted(range(len(eps)), key=lambda i: -Fraction(eps[i]))
    rows, Qs, formula_ok, key_ok = [], [], [], []
    for idx in order:
        row, Q, f_ok, k_ok = _sample_row(eps[idx], samples[idx], n)
        rows.append(row)
        Qs.append(Q)
        formula_ok.append(f_ok)
        key_ok.append(k_ok)

    col = lambda name: [getattr(r, name) for r in rows]  # noqa: E731
    last = rows[-1]
    jumps = [float(np.linalg.norm(b - a)) for a, b in zip(Qs, Qs[1:])]
    verdicts = {
        "norm_diverges": _strictly_increasing(col("norm_U")),
        "l55_diverges": _strictly_increasing(col("abs_l55")),
        "ratios_vanish": _non_increasing(col("ratio_l54"))
        and _non_increasing(col("ratio_l53"))
        and last.ratio_l54 < tol
        and last.ratio_l53 < tol,
        "residuals_vanish": _strictly_decreasing(col("max_abs_o")) and last.max_abs_o < tol,
        "tail_diverges": _strictly_increasing(col("row5_tail_norm")),
        "q_block": last.q_block_residual < tol,
        "q_continuous": (not jumps) or jumps[-1] <= q_jump_tol,
        "formula_matches_oracle": all(formula_ok),
        "key_identity_exact": all(key_ok),
    }
    case = analyze_orthogonal_limit(Qs[-1], n, tol).kind
    return CertificateReport(n, rows, verdicts, tol, case, list(FORMULA_NOTES))
