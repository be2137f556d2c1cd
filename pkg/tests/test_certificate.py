import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from liecontract.certificate import (
    TWELVE, CertificateReport, analyze_orthogonal_limit, certify, key_identity, q_block_check,
    residuals_direct, residuals_formula, row5_tail_norm, row_reducer,
)
from liecontract.contraction import standard_family
from liecontract.linalg import exact_matrix, identity, mat_mul, param_matrix
from liecontract.tensor import act, catalog

from conftest import random_lower


def _diag(*vals):
    return exact_matrix(np.diag(vals).tolist())


def test_diagonal_residuals():
    L = _diag(2, 3, 5, 7, 11)
    o = residuals_direct(L, 5)
    assert o[(1, 2, 5)] == F(6, 11)
    assert o[(1, 3, 3)] == 1 and o[(2, 4, 4)] == 2
    assert residuals_formula(L, 5) == o


def test_single_offdiagonal_residual():
    mu = F(3, 7)
    L = identity(5)
    L[2, 1] = mu
    o = residuals_direct(L, 5)
    assert o[(1, 2, 3)] == mu


def test_formula_matches_oracle_random(rng):
    for _ in range(200):
        L = random_lower(rng)
        o = residuals_direct(L, 5)
        assert residuals_formula(L, 5) == o
        lhs, rhs = key_identity(L, 5)
        assert lhs == rhs


def test_verbatim_transcription_disagrees(rng):
    bad = 0
    for _ in range(50):
        L = random_lower(rng)
        if residuals_formula(L, 5, verbatim=True) != residuals_direct(L, 5):
            bad += 1
    assert bad > 40


def test_input_checks():
    with pytest.raises(ValueError):
        residuals_direct(identity(4), 4)
    U = identity(5)
    U[0, 1] = F(1)
    with pytest.raises(ValueError):
        residuals_direct(U, 5)
    Z = identity(5)
    Z[2, 2] = F(0)
    with pytest.raises(ZeroDivisionError):
        residuals_direct(Z, 5)


def test_row_reducer(rng):
    a = catalog("a", 5)
    for _ in range(30):
        L = random_lower(rng)
        M = row_reducer(L, 5)
        assert act(a, M) == a
        ML = mat_mul(M, L)
        assert ML[4, 0] == 0 and ML[4, 1] == 0


def _block_q(b1, b2, n=5):
    Q = np.eye(n)
    Q[:2, :2] = b1
    Q[2:4, 2:4] = b2
    return Q


def test_orthogonal_cases():
    assert analyze_orthogonal_limit(np.eye(5), 5).kind == "diagonal"
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert analyze_orthogonal_limit(_block_q(swap, swap), 5).kind == "swap"
    P = np.eye(5)[[4, 1, 2, 3, 0]]
    assert q_block_check(P, 5) == pytest.approx(math.sqrt(2))
    assert analyze_orthogonal_limit(P, 5).kind == "violation"
    c = s = 1 / math.sqrt(2)
    rot = np.array([[c, -s], [s, c]])
    assert analyze_orthogonal_limit(_block_q(rot, rot), 5).kind == "violation"


def test_orthogonal_components_match_action():
    g = np.random.default_rng(5)
    for _ in range(10):
        b1 = np.linalg.qr(g.normal(size=(2, 2)))[0]
        b2 = np.linalg.qr(g.normal(size=(2, 2)))[0]
        Q = _block_q(b1, b2)
        got = act(catalog("a0", 5), Q)
        case = analyze_orthogonal_limit(Q, 5, tol=1e30)
        assert case.kind in ("violation", "swap", "diagonal")
        q = lambda i, j: Q[i - 1, j - 1]  # noqa: E731
        c314 = q(1, 1) * q(3, 3) * q(3, 4) + q(2, 1) * q(4, 3) * q(4, 4)
        c324 = q(1, 2) * q(3, 3) * q(3, 4) + q(2, 2) * q(4, 3) * q(4, 4)
        c323 = q(1, 2) * q(3, 3) ** 2 + q(2, 2) * q(4, 3) ** 2
        assert got.get(1, 4, 3) == pytest.approx(c314, abs=1e-12)
        assert got.get(2, 4, 3) == pytest.approx(c324, abs=1e-12)
        assert got.get(2, 3, 3) == pytest.approx(c323, abs=1e-12)


def test_tail_norm():
    U = np.zeros((7, 7))
    U[4, 4:] = [3.0, 4.0, 0.0]
    U[4, 0] = 100.0
    assert row5_tail_norm(U, 7) == 5.0


def test_certify_standard_family():
    rep = certify(standard_family(5), 5)
    assert rep.passed, rep.verdicts
    assert [r.abs_l55 for r in rep.rows] == [10.0 ** k for k in range(1, 7)]
    assert [r.max_abs_o for r in rep.rows] == [float(F(1, 10**k)) for k in range(1, 7)]
    assert all(r.key_identity_residual == 0 for r in rep.rows)
    assert rep.orthogonal_case == "diagonal"


def test_certify_n7_with_rotation_in_tail():
    n = 7
    c, s = F(3, 5), F(4, 5)
    R = identity(n)
    R[5, 5], R[5, 6], R[6, 5], R[6, 6] = c, -s, s, c
    U = mat_mul(standard_family(n), param_matrix(R.tolist()))
    rep = certify(U, n)
    assert rep.passed, rep.verdicts


def test_certify_identity_family_fails():
    rep = certify(param_matrix(identity(5).tolist()), 5)
    assert not rep.passed
    assert not rep.verdicts["norm_diverges"] and not rep.verdicts["residuals_vanish"]


def test_certify_float_sequence_matches_family():
    eps = [F(1, 10**k) for k in range(1, 5)]
    mats = [np.diag([1, 1, 1, 1, float(1 / e)]) for e in eps]
    rep = certify(list(reversed(mats)), 5, list(reversed(eps)))
    assert rep.passed and rep.rows[0].eps == 0.1


def test_report_round_trip():
    rep = certify(standard_family(5), 5)
    back = CertificateReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()
    assert rep.to_csv().splitlines()[0].startswith("eps,norm_U,abs_l55")


def test_certify_rejects_small_n():
    with pytest.raises(ValueError):
        certify(standard_family(5), 4)


def test_twelve_cover_the_surviving_components():
    # any component of a(5) o L outside TWELVE is zero for lower-triangular L
    rng = random.Random(4)
    for _ in range(20):
        L = random_lower(rng)
        got = act(catalog("a", 5), L)
        assert set(got.table) <= set(TWELVE)


def test_row_reducer_hand_example():
    L = identity(5)
    L[4, 0] = F(3)
    M = row_reducer(L, 5)
    want = identity(5)
    want[4, 0] = F(-3)
    assert (M == want).all()
    assert (row_reducer(identity(5), 5) == identity(5)).all()
    assert mat_mul(M, L)[4, 0] == 0


def test_key_identity_examples():
    lam = F(7, 3)
    L = _diag(1, 1, 1, 1, lam)
    o = residuals_direct(L, 5)
    assert {t: v for t, v in o.items() if v} == {(1, 2, 5): 1 / lam}
    assert key_identity(L, 5) == (1 / lam, 1 / lam)
    assert key_identity(identity(5), 5) == (1, 1)


def test_tail_norm_examples():
    assert row5_tail_norm(np.eye(5), 5) == 1.0
    assert row5_tail_norm(np.zeros((6, 6)), 6) == 0.0


def test_third_row_entries_are_unconstrained(rng):
    base = random_lower(rng)
    for _ in range(20):
        L = base.copy()
        for (i, j) in [(2, 1), (3, 1), (4, 2), (4, 3), (5, 1), (5, 2)]:
            L[i - 1, j - 1] = F(rng.randint(-9, 9), rng.randint(1, 9))
        assert residuals_formula(L, 5) == residuals_direct(L, 5)


@pytest.mark.parametrize("entries", [
    ["1", "1", "1", "1", "t^-2"],
    ["1", "1", "t", "1", "t^-1"],
    ["1", "1", "1", "t", "t^-1"],
])
def test_trends_on_other_realizing_families(entries):
    from liecontract.contraction import verify_realization
    from liecontract.paramscalar import parse_param
    U = diag_family = np.empty((5, 5), dtype=object)
    for i in range(5):
        for j in range(5):
            diag_family[i, j] = parse_param(entries[i] if i == j else "0")
    assert verify_realization(catalog("a", 5), U, catalog("a0", 5)).realizes
    rep = certify(U, 5)
    l55 = [r.abs_l55 for r in rep.rows]
    o = [r.max_abs_o for r in rep.rows]
    assert all(b > a for a, b in zip(l55, l55[1:]))
    assert all(b < a for a, b in zip(o, o[1:]))
