import itertools
import random
from fractions import Fraction as F

import pytest

from liecontract.contraction import verify_realization
from liecontract.giw import (
    ExponentProblem, Row, build_problem, giw_family, integerize, lp_feasible, necessity_query, parse_row,
    solve,
)
from liecontract.tensor import StructureTensor, catalog


def diagonal_realizes(C, C0, alpha):
    """Independent oracle: each c^k_ij scales by t^(a_i + a_j - a_k)."""
    for key, v in C.table.items():
        i, j, k = key
        e = alpha[i - 1] + alpha[j - 1] - alpha[k - 1]
        w = C0.table.get(key)
        if w is None:
            if e < 1:
                return False
        elif w != v or e != 0:
            return False
    return all(key in C.table for key in C0.table)


def exhaustive(C, C0, extra=lambda a: True, box=3):
    return [a for a in itertools.product(range(-box, box + 1), repeat=C.n)
            if extra(a) and diagonal_realizes(C, C0, a)]


@pytest.mark.parametrize("n", [5, 6, 7])
def test_a_to_a0_feasible_with_negative_a5(n):
    P = build_problem(catalog("a", n), catalog("a0", n))
    alpha = solve(P)
    assert alpha is not None and alpha[4] <= -1
    assert verify_realization(catalog("a", n), giw_family(alpha), catalog("a0", n)).realizes
    res = necessity_query(P, parse_row("a5 >= 0", n))
    assert res.forced and res.statement == "Forced: a5 <= -1"


def test_exhaustive_agrees_n5():
    C, C0 = catalog("a", 5), catalog("a0", 5)
    hits = exhaustive(C, C0)
    assert hits and all(a[4] <= -1 for a in hits)
    assert exhaustive(C, C0, extra=lambda a: a[4] >= 0) == []
    P = build_problem(C, C0)
    assert all(P.satisfied_by(a) for a in hits)


def test_problem_rows():
    P = build_problem(catalog("a", 5), catalog("a0", 5))
    assert P.describe() == ["a1 == 0", "a2 == 0", "a1 + a2 - a5 >= 1"]


def test_still_feasible_query():
    P = build_problem(catalog("a0", 5), catalog("abelian", 5))
    res = necessity_query(P, parse_row("a1 >= 0", 5))
    assert not res.forced and P.with_row(parse_row("a1 >= 0", 5)).satisfied_by(res.alpha)


def test_early_infeasible():
    P = build_problem(catalog("abelian", 3), catalog("heisenberg"))
    assert P.infeasible_reason and solve(P) is None
    changed = StructureTensor(3, {(1, 2, 3): F(2)})
    assert build_problem(catalog("heisenberg"), changed).infeasible_reason


def random_tensor(rng, n):
    keys = [(i, j, k) for i in range(1, n + 1) for j in range(i + 1, n + 1) for k in range(1, n + 1)]
    return StructureTensor(n, {key: F(1) for key in rng.sample(keys, rng.randint(1, 4))})


def test_lp_against_exhaustive_random():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.choice([3, 4])
        C = random_tensor(rng, n)
        C0 = StructureTensor(n, {k: v for k, v in C.table.items() if rng.random() < 0.5})
        P = build_problem(C, C0)
        alpha = solve(P)
        hits = exhaustive(C, C0, box=2)
        if hits:
            assert alpha is not None
        if alpha is not None:
            assert diagonal_realizes(C, C0, alpha)
            assert verify_realization(C, giw_family(alpha), C0).realizes


def test_integer_scaling_closure():
    P = build_problem(catalog("a", 5), catalog("a0", 5))
    x = [F(0), F(0), F(1, 3), F(-2, 5), F(-3, 2)]
    assert P.satisfied_by(x)
    alpha = integerize(x, P)
    assert alpha == [0, 0, 10, -12, -45]
    for s in (2, 3, 7):
        assert P.satisfied_by([s * a for a in alpha])


def test_lp_rational_point():
    x = lp_feasible(ExponentProblem(2, (), (Row((2, 0), ">=", 1), Row((-2, 0), ">=", -1))))
    assert x is not None and 2 * x[0] == 1


def test_parse_row():
    assert parse_row("a1 + 2*a3 - a2 >= 1", 3) == Row((1, -1, 2), ">=", 1)
    assert parse_row("a3 <= -1", 3) == Row((0, 0, -1), ">=", 1)
    assert parse_row("a1 = 0", 3).sense == "=="
    for bad in ("a4 >= 0", "b1 >= 0", "a1 > 0"):
        with pytest.raises(ValueError):
            parse_row(bad, 3)
    P = ExponentProblem(3)
    with pytest.raises(ValueError):
        P.with_row(parse_row("a1 >= -1", 3))
