"""Best structure-constant residual reachable with ``|U|_F <= R``.

For the pair ``a(n) -> a0(n)`` no bounded family realizes the contraction, so
the best residual at radius R stays positive and shrinks roughly like 1/R.
For a pair with a bounded realization it drops to numerical zero already at
small R.  The search is multistart Nelder-Mead; it is corroboration, not a
proof.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..tensor import StructureTensor
from . import kernels

__all__ = [
    "ExperimentConfig",
    "RadiusResult",
    "ExperimentReport",
    "objective",
    "residual",
    "minimize_under_radius",
    "scan_radii",
]


@dataclass(frozen=True)
class ExperimentConfig:
    radii: tuple[float, ...] = (10.0, 100.0, 1000.0)
    restarts: int = 64
    eval_budget: int = 20000
    seed: int = 20240531
    det_floor: float = 1e-14
    step: float = 0.25
    xtol: float = 1e-12
    ftol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.eval_budget < 1:
            raise ValueError("eval_budget must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["radii"] = list(self.radii)
        return d


def objective(C: StructureTensor, C0: StructureTensor, U, det_floor: float = 1e-14) -> float:
    """Sum of squared differences ``(C o U - C0)`` over ``i < j`` and all k.

    Near-singular U (``|det U| <= det_floor``) gets a penalty of
    ``1e3 * det_floor / |det U|`` instead.
    """
    terms, vals, target = kernels.prepare(C, C0)
    x = np.ascontiguousarray(np.asarray(U, dtype=float).ravel())
    return float(kernels.objective(x, C.n, terms, vals, target, det_floor))


def residual(C, C0, U, det_floor: float = 1e-14) -> float:
    """Frobenius norm of ``C o U - C0``; the square root of :func:`objective`."""
    return math.sqrt(objective(C, C0, U, det_floor))


@dataclass
class RadiusResult:
    radius: float
    best_residual: float
    best_norm: float
    restart_index: int
    best_U: list = field(default_factory=list, repr=False)


def _restart_starts(n, config, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(config.restarts, n * n))


def minimize_under_radius(C: StructureTensor, C0: StructureTensor, R: float, config: ExperimentConfig,
                          seed: int | None = None) -> RadiusResult:
    """Multistart Nelder-Mead for the residual over ``|U|_F <= R``.

    Restart ``r`` starts from a uniform random matrix in ``[-1, 1]^(n x n)``
    (projected onto the ball); the best is chosen by (residual, restart index).
    """
    if R <= 0:
        raise ValueError("radius must be positive")
    n = C.n
    terms, vals, target = kernels.prepare(C, C0)
    starts = _restart_starts(n, config, config.seed if seed is None else seed)
    best = None
    for r, x0 in enumerate(starts):
        x, f, _ = kernels.nelder_mead(
            np.ascontiguousarray(x0), config.step, config.eval_budget, float(R),
            config.xtol, config.ftol, n, terms, vals, target, config.det_floor,
        )
        if best is None or f < best[0]:
            best = (f, r, x)
    f, r, x = best
    return RadiusResult(
        radius=float(R),
        best_residual=math.sqrt(f),
        best_norm=float(np.linalg.norm(x)),
        restart_index=r,
        best_U=x.reshape(n, n).tolist(),
    )


def _fit_slope(radii, residuals):
    lx = np.log(np.asarray(radii))
    ly = np.log(np.asarray(residuals))
    A = np.vstack([lx, np.ones_like(lx)]).T
    slope, _ = np.linalg.lstsq(A, ly, rcond=None)[0]
    return float(slope)


@dataclass
class ExperimentReport:
    results: list[RadiusResult]
    slope: float | None
    floor_tol: float = 1e-6
    config: dict = field(default_factory=dict)

    @property
    def at_floor(self) -> bool:
        """All residuals at numerical zero; the slope then carries no information."""
        return all(r.best_residual < self.floor_tol for r in self.results)

    def residuals(self) -> list[float]:
        return [r.best_residual for r in self.results]

    def to_dict(self) -> dict:
        return {
            "results": [asdict(r) for r in self.results],
            "slope": self.slope,
            "floor_tol": self.floor_tol,
            "at_floor": self.at_floor,
            "config": dict(self.config),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            results=[RadiusResult(**r) for r in data["results"]],
            slope=data["slope"],
            floor_tol=data.get("floor_tol", 1e-6),
            config=dict(data.get("config", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "best_residual", "best_norm", "restart_index"])
        for r in self.results:
            w.writerow([repr(r.radius), repr(r.best_residual), repr(r.best_norm), r.restart_index])
        return buf.getvalue()


def scan_radii(C: StructureTensor, C0: StructureTensor, config: ExperimentConfig) -> ExperimentReport:
    """Minimize at each radius and fit the log-log slope of residual against R."""
    if len(config.radii) < 2:
        raise ValueError("need at least two radii")
    results = [minimize_under_radius(C, C0, R, config) for R in config.radii]
    report = ExperimentReport(results, None, config=config.to_dict())
    if not report.at_floor and all(r.best_residual > 0 for r in results):
        report.slope = _fit_slope(config.radii, report.residuals())
    return report
