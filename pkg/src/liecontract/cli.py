"""Command-line interface.

Exit codes: 0 success / verdict passes, 1 computed but the verdict is
negative, 2 the input could not be processed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import certificate, contraction, giw, invariants, tensor
from .experiment import optimize

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SLOPE_BAND = (-1.4, -0.6)


class InputError(Exception):
    pass


# -- loading --------------------------------------------------------------------

def _algebra(spec):
    try:
        return tensor.resolve_algebra(spec)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load algebra {spec!r}: {exc}") from None


def _family(spec, n):
    if spec == "builtin:paper":
        if n is None:
            raise InputError("builtin:paper needs a dimension (--dim)")
        try:
            return contraction.standard_family(n)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        with open(spec) as fh:
            data = json.load(fh)
        if "samples" in data:
            return _sequence(data)
        return contraction.parse_family(data)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load matrix family {spec!r}: {exc}") from None


def _sequence(data):
    eps = [Fraction(str(s["eps"])) for s in data["samples"]]
    mats = [np.asarray(s["matrix"], dtype=float) for s in data["samples"]]
    return eps, mats


def _eps_list(text):
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad --eps list: {exc}") from None


# -- output ---------------------------------------------------------------------

def _kv_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in report.items():
        w.writerow([k, v if isinstance(v, (str, int, float)) else json.dumps(v)])
    return buf.getvalue()


def _emit(args, report: dict, csv_text: str | None, summary: str):
    fmt = getattr(args, "format", "json")
    text = (csv_text if csv_text is not None else _kv_csv(report)) if fmt == "csv" else json.dumps(report, indent=2)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    print(summary, file=sys.stderr)


# -- commands -------------------------------------------------------------------

def cmd_check(args):
    C = _algebra(args.algebra)
    defects = tensor.jacobi_defects(C)
    report = {
        "algebra": C.name or args.algebra,
        "dim": C.n,
        "is_lie_algebra": not defects,
        "defects": [{"triple": list(d.triple), "defect": [str(x) for x in d.defect]} for d in defects],
    }
    if defects:
        listing = "; ".join(f"{d.triple}: ({', '.join(map(str, d.defect))})" for d in defects)
        _emit(args, report, None, f"Jacobi identity fails at {len(defects)} triple(s): {listing}")
        return EXIT_FAIL
    _emit(args, report, None, f"{report['algebra']}: Jacobi identity holds")
    return EXIT_OK


def cmd_verify(args):
    C = _algebra(args.source)
    C0 = _algebra(args.target)
    if C.n != C0.n:
        raise InputError(f"dimension mismatch: {C.n} vs {C0.n}")
    U = _family(args.matrix, C.n)
    if isinstance(U, tuple):
        raise InputError("verify needs a symbolic family, not a sampled sequence")
    if U.shape != (C.n, C.n):
        raise InputError(f"matrix family is {U.shape[0]}x{U.shape[1]}, algebras have dimension {C.n}")
    verdict = contraction.verify_realization(C, U, C0)
    report = verdict.to_dict()
    _emit(args, report, None, verdict.describe())
    if verdict.status == contraction.SINGULAR_FAMILY:
        return EXIT_INPUT
    return EXIT_OK if verdict.realizes else EXIT_FAIL


def cmd_giw(args):
    C = _algebra(args.source)
    C0 = _algebra(args.target)
    if C.n != C0.n:
        raise InputError(f"dimension mismatch: {C.n} vs {C0.n}")
    P = giw.build_problem(C, C0)
    try:
        rows = [giw.parse_row(r, C.n) for r in args.require or []]
        for r in rows:
            P = P.with_row(r)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {"constraints": P.describe(), "fixed_basis": True}
    if P.infeasible_reason:
        report.update(feasible=False, reason=P.infeasible_reason)
        _emit(args, report, None, f"Infeasible: {P.infeasible_reason}")
        return EXIT_FAIL
    alpha = giw.solve(P)
    if alpha is None:
        report["feasible"] = False
        if len(rows) == 1:
            summary = f"Forced: {rows[0].negation()}"
        elif rows:
            summary = "Forced: the required rows cannot all hold"
        else:
            summary = "Infeasible: no diagonal realization in this basis"
        report["statement"] = summary
        _emit(args, report, None, summary)
        return EXIT_FAIL
    report.update(feasible=True, alpha=alpha)
    _emit(args, report, None, f"Feasible: alpha = {tuple(alpha)}")
    return EXIT_OK


def cmd_certify(args):
    n = args.dim
    if n is None or n < 5:
        raise InputError("the certificate requires --dim n with n >= 5")
    U = _family(args.matrix, n)
    tol = args.tol if args.tol is not None else 1e-3
    if isinstance(U, tuple):
        eps, mats = U
        if any(m.shape != (n, n) for m in mats):
            raise InputError(f"every sampled matrix must be {n}x{n}")
        data = mats
    else:
        if U.shape != (n, n):
            raise InputError(f"matrix family is {U.shape[0]}x{U.shape[1]}, expected {n}x{n}")
        eps = _eps_list(args.eps) if args.eps else [Fraction(1, 10**k) for k in range(1, 7)]
        data = U
    try:
        report = certificate.certify(data, n, eps, tol=tol)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    failed = [k for k, v in report.verdicts.items() if not v]
    summary = "certificate passed" if report.passed else f"certificate failed: {', '.join(failed)}"
    _emit(args, report.to_dict(), report.to_csv(), summary)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_invariants(args):
    C = _algebra(args.algebra)
    try:
        der = invariants.derivation_dimension(C).dimension
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cen = invariants.center_dimension(C)
    report = {"algebra": C.name or args.algebra, "dim": C.n, "derivations": der, "center": cen}
    _emit(args, report, None, f"der={der} center={cen}")
    return EXIT_OK


def classify_experiment(report: optimize.ExperimentReport) -> str:
    """``floor``, ``power-law`` (positive, decreasing, slope in band) or ``inconclusive``."""
    if report.at_floor:
        return "floor"
    res = report.residuals()
    decreasing = all(b < a for a, b in zip(res, res[1:]))
    if (all(r > 0 for r in res) and decreasing and report.slope is not None
            and SLOPE_BAND[0] <= report.slope <= SLOPE_BAND[1]):
        return "power-law"
    return "inconclusive"


def cmd_experiment(args):
    C = _algebra(args.source)
    C0 = _algebra(args.target)
    if C.n != C0.n:
        raise InputError(f"dimension mismatch: {C.n} vs {C0.n}")
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load config: {exc}") from None
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        config = optimize.ExperimentConfig.from_dict(data)
        if len(config.radii) < 2:
            raise ValueError("need at least two radii")
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad experiment config: {exc}") from None
    report = optimize.scan_radii(C, C0, config)
    if args.tol is not None:
        report.floor_tol = args.tol
    kind = classify_experiment(report)
    payload = report.to_dict()
    payload["classification"] = kind
    res = ", ".join(f"R={r.radius:g}: {r.best_residual:.3e}" for r in report.results)
    slope = "n/a (flat at floor)" if report.slope is None else f"{report.slope:.3f}"
    _emit(args, payload, report.to_csv(), f"{kind}; slope {slope}; {res}")
    return EXIT_FAIL if kind == "inconclusive" else EXIT_OK


# -- parser ---------------------------------------------------------------------

def _add_globals(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--out", metavar="PATH", default=d(None))
    p.add_argument("--tol", type=float, default=d(None))
    p.add_argument("--seed", type=int, default=d(None))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liecontract", description=__doc__.splitlines()[0])
    _add_globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _add_globals(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    algebra_help = "JSON file or builtin a:N, a0:N, abelian:N, heisenberg"
    sp = add("check", cmd_check, "Jacobi identity check")
    sp.add_argument("algebra", help=algebra_help)

    sp = add("verify", cmd_verify, "does a matrix family realize the contraction")
    sp.add_argument("source", help=algebra_help)
    sp.add_argument("target", help=algebra_help)
    sp.add_argument("matrix", help="matrix-family JSON or builtin:paper")

    sp = add("giw", cmd_giw, "diagonal (gIW) realizations in the given bases")
    sp.add_argument("source", help=algebra_help)
    sp.add_argument("target", help=algebra_help)
    sp.add_argument("--require", action="append", metavar="ROW", help="extra constraint, e.g. 'a5>=0'")

    sp = add("certify", cmd_certify, "unboundedness certificate for a(n) -> a0(n)")
    sp.add_argument("matrix", nargs="?", default="builtin:paper",
                    help="matrix-family JSON, sampled-sequence JSON or builtin:paper")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--eps", help="comma-separated schedule, e.g. 1/10,1/100 (default 10^-1..10^-6)")

    sp = add("invariants", cmd_invariants, "derivation and center dimensions")
    sp.add_argument("algebra", help=algebra_help)

    sp = add("experiment", cmd_experiment, "residual floor against Frobenius radius")
    sp.add_argument("source", help=algebra_help)
    sp.add_argument("target", help=algebra_help)
    sp.add_argument("config", nargs="?", help="ExperimentConfig JSON")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
