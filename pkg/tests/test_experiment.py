import os
import subprocess
import sys

import numpy as np
import pytest

from liecontract.experiment import ExperimentConfig, ExperimentReport, minimize_under_radius, scan_radii
from liecontract.experiment import kernels
from liecontract.experiment.optimize import objective, residual
from liecontract.tensor import act, catalog

from conftest import random_invertible

A5, A05 = catalog("a", 5), catalog("a0", 5)


def test_objective_examples():
    assert objective(A5, A5, np.eye(5)) == 0.0
    assert objective(A5, A05, np.eye(5)) == 1.0
    eps = 1e-3
    U = np.diag([1, 1, 1, 1, 1 / eps])
    assert objective(A5, A05, U) == pytest.approx(eps ** 2, rel=1e-12)
    assert residual(A5, A05, U) == pytest.approx(eps, rel=1e-12)


def test_singular_penalty():
    U = np.eye(5)
    U[4, 4] = 0.0
    assert objective(A5, A05, U) >= kernels.PENALTY


def test_objective_matches_exact_action(rng):
    for _ in range(10):
        U = random_invertible(rng, 5)
        exact = act(A5, U) - A05
        want = float(sum(v * v for v in exact.table.values()))
        got = objective(A5, A05, U.astype(float))
        assert abs(got - want) <= 1e-10 * max(1.0, want)


@pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")
def test_numba_and_numpy_objectives_agree():
    terms, vals, target = kernels.prepare(A5, A05)
    g = np.random.default_rng(0)
    for _ in range(50):
        x = g.normal(size=25)
        a = kernels.objective_np(x, 5, terms, vals, target, 1e-14)
        b = kernels.objective_nb(x, 5, terms, vals, target, 1e-14)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")
def test_numba_and_numpy_searches_agree():
    terms, vals, target = kernels.prepare(A5, A05)
    x0 = np.random.default_rng(1).uniform(-1, 1, 25)
    args = (0.25, 600, 10.0, 1e-12, 1e-12, 5, terms, vals, target, 1e-14)
    xa, fa, ea = kernels.nelder_mead_np(x0.copy(), *args)
    xb, fb, eb = kernels.nelder_mead_nb(x0.copy(), *args)
    assert ea == eb
    assert fa == pytest.approx(fb, rel=1e-6)
    assert np.allclose(xa, xb, atol=1e-6)


def test_numpy_fallback_selected_by_env():
    env = dict(os.environ, LIECONTRACT_DISABLE_NUMBA="1")
    code = ("from liecontract.experiment import kernels as k;"
            "print(k.NUMBA_AVAILABLE, k.objective is k.objective_np)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]


def test_projection_keeps_every_evaluation_in_ball(monkeypatch):
    seen = []
    orig = kernels.objective_np

    def spy(x, *rest):
        seen.append(float(np.linalg.norm(x)))
        return orig(x, *rest)

    monkeypatch.setattr(kernels, "objective_np", spy)
    terms, vals, target = kernels.prepare(A5, A05)
    x0 = np.full(25, 3.0)
    kernels.nelder_mead_np(x0, 0.25, 800, 2.0, 1e-12, 1e-12, 5, terms, vals, target, 1e-14)
    assert len(seen) >= 700
    assert max(seen) <= 2.0 + 1e-9


def _small(**kw):
    base = dict(radii=(5.0, 50.0), restarts=3, eval_budget=1500, seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_determinism():
    a = scan_radii(A5, A05, _small()).to_dict()
    b = scan_radii(A5, A05, _small()).to_dict()
    assert a == b


def test_small_run_shape():
    rep = scan_radii(A5, A05, _small())
    res = rep.residuals()
    assert all(r > 0 for r in res) and res[1] < res[0]
    assert all(r.best_norm <= r.radius + 1e-9 for r in rep.results)
    assert rep.slope is not None and rep.slope < 0


def test_control_pair_reaches_floor():
    r = minimize_under_radius(A05, catalog("abelian", 5), 5.0, _small(restarts=2, eval_budget=4000))
    assert r.best_residual < 1e-4


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(radii=(10.0, 5.0))
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"radius": 3})
    cfg = ExperimentConfig.from_dict({"radii": [1, 2], "restarts": 2})
    assert cfg.radii == (1.0, 2.0)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        scan_radii(A5, A05, ExperimentConfig(radii=(3.0,)))


def test_report_round_trip():
    rep = scan_radii(A5, A05, _small(restarts=1, eval_budget=300))
    back = ExperimentReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()
    assert rep.to_csv().splitlines()[0] == "radius,best_residual,best_norm,restart_index"


def test_floor_cases():
    cfg = ExperimentConfig(radii=(5.0, 10.0), restarts=4, eval_budget=20000)
    same = scan_radii(A5, A5, cfg)
    assert max(same.residuals()) < 1e-10
    control = scan_radii(A05, catalog("abelian", 5), cfg)
    assert control.at_floor and control.slope is None
    assert max(control.residuals()) < 1e-6


def test_best_is_minimum_over_restarts():
    cfg = _small(restarts=4)
    best = minimize_under_radius(A5, A05, 5.0, cfg)
    singles = []
    terms, vals, target = kernels.prepare(A5, A05)
    starts = np.random.default_rng(cfg.seed).uniform(-1, 1, (cfg.restarts, 25))
    for x0 in starts:
        _, f, _ = kernels.nelder_mead(x0.copy(), cfg.step, cfg.eval_budget, 5.0, cfg.xtol, cfg.ftol,
                                      5, terms, vals, target, cfg.det_floor)
        singles.append(f)
    assert best.restart_index == int(np.argmin(singles))
    assert best.best_residual == pytest.approx(min(singles) ** 0.5, rel=0, abs=0)
