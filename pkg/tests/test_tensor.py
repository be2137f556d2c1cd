from fractions import Fraction as F

import pytest

from liecontract.linalg import exact_matrix, identity, mat_inv, mat_mul, param_matrix
from liecontract.tensor import (
    StructureTensor, act, catalog, direct_sum, dump_algebra, jacobi_defects, limit_tensor, load_algebra,
    parse_algebra, resolve_algebra,
)

from conftest import random_invertible


def test_heisenberg_is_lie():
    assert jacobi_defects(catalog("heisenberg")) == []


@pytest.mark.parametrize("n", [5, 6, 7])
def test_catalog_algebras_are_lie(n):
    assert jacobi_defects(catalog("a", n)) == []
    assert jacobi_defects(catalog("a0", n)) == []


def test_non_lie_bracket_reports_defect():
    # cyclic sum [[e1,e2],e3] + [[e3,e1],e2] + [[e2,e3],e1] = e1 + 0 + e1
    C = StructureTensor(3, {(1, 2, 2): F(1), (1, 3, 3): F(1), (2, 3, 1): F(1)})
    defects = jacobi_defects(C)
    assert [d.triple for d in defects] == [(1, 2, 3)]
    assert defects[0].defect == (2, 0, 0)


def test_antisymmetric_canonicalization():
    C = StructureTensor(3, {(2, 1, 3): F(1)})
    assert C.table == {(1, 2, 3): F(-1)}
    assert C.get(2, 1, 3) == 1 and C.get(1, 1, 3) == 0
    with pytest.raises(ValueError):
        StructureTensor(3, {(1, 2, 3): F(1), (2, 1, 3): F(1)})
    with pytest.raises(ValueError):
        StructureTensor(3, {(1, 4, 3): F(1)})


def test_act_identity_and_scaling():
    H = catalog("heisenberg")
    assert act(H, identity(3)) == H
    U = exact_matrix([[2, 0, 0], [0, 3, 0], [0, 0, 5]])
    assert act(H, U).table == {(1, 2, 3): F(6, 5)}


def test_act_standard_family_components():
    t = param_matrix([["1", "0", "0", "0", "0"], ["0", "1", "0", "0", "0"], ["0", "0", "1", "0", "0"],
                      ["0", "0", "0", "1", "0"], ["0", "0", "0", "0", "t^-1"]])
    got = act(catalog("a", 5), t)
    assert got.get(1, 2, 5) == param_matrix([["t"]])[0, 0]
    assert got.get(1, 3, 3) == 1 and got.get(2, 4, 4) == 1


def test_action_law_and_inverse(rng):
    algebras = [catalog("a", 5), catalog("a0", 5)]
    for _ in range(20):
        C = rng.choice(algebras)
        A, B = random_invertible(rng, 5, -2, 2), random_invertible(rng, 5, -2, 2)
        assert act(C, mat_mul(A, B)) == act(act(C, A), B)
        assert act(act(C, A), mat_inv(A)) == C
        assert jacobi_defects(act(C, A)) == []


def test_float_action_matches_exact(rng):
    C = catalog("a", 5)
    A = random_invertible(rng, 5)
    exact = act(C, A)
    approx = act(C, A.astype(float))
    assert (approx - exact.to_float()).norm() < 1e-10


def test_limit_tensor():
    C_t = act(catalog("a", 5), param_matrix([["1" if i == j else "0" for j in range(4)] + ["0"]
                                            for i in range(4)] + [["0", "0", "0", "0", "t^-1"]]))
    lim = limit_tensor(C_t)
    assert lim.exists and lim.tensor == catalog("a0", 5)
    blow = act(catalog("a", 5), param_matrix([["1" if i == j else "0" for j in range(4)] + ["0"]
                                             for i in range(4)] + [["0", "0", "0", "0", "t"]]))
    lim = limit_tensor(blow)
    assert not lim.exists and lim.diverges_at == (1, 2, 5)


def test_catalog_and_direct_sum():
    with pytest.raises(ValueError):
        catalog("a", 4)
    S = direct_sum(catalog("heisenberg"), catalog("abelian", 2))
    assert S.n == 5 and S.table == {(1, 2, 3): F(1)}
    S2 = direct_sum(catalog("abelian", 2), catalog("heisenberg"))
    assert S2.table == {(3, 4, 5): F(1)}
    assert jacobi_defects(S2) == []


def test_json_round_trip(tmp_path):
    C = StructureTensor(4, {(1, 2, 3): F(2, 3), (1, 4, 4): F(-1)}, "demo")
    path = tmp_path / "alg.json"
    dump_algebra(C, path)
    assert load_algebra(path) == C
    with pytest.raises(ValueError):
        parse_algebra({"dim": 3, "brackets": [{"i": 2, "j": 1, "out": {"3": "1"}}]})
    with pytest.raises(ValueError):
        parse_algebra({"brackets": []})


def test_resolve_builtin():
    assert resolve_algebra("a:6") == catalog("a", 6)
    assert resolve_algebra("heisenberg") == catalog("heisenberg")
    with pytest.raises(OSError):
        resolve_algebra("/nonexistent/file.json")
