"""Compare the numba and numpy kernels of the radius experiment.

    python3 benchmarks/bench_kernels.py [--evals N] [--budget N]

Times the objective on random matrices and one Nelder-Mead run per path,
after a warm-up call so numba compilation is not counted.
"""

import argparse
import time

import numpy as np

from liecontract.experiment import kernels
from liecontract.tensor import catalog


def _time(fn, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--evals", type=int, default=20000, help="objective calls per path")
    p.add_argument("--budget", type=int, default=5000, help="Nelder-Mead evaluation budget")
    p.add_argument("--dim", type=int, default=5)
    args = p.parse_args(argv)

    n = args.dim
    terms, vals, target = kernels.prepare(catalog("a", n), catalog("a0", n))
    g = np.random.default_rng(0)
    xs = g.uniform(-1, 1, size=(args.evals, n * n))
    x0 = g.uniform(-1, 1, n * n)
    nm_args = (0.25, args.budget, 10.0, 1e-12, 1e-12, n, terms, vals, target, 1e-14)

    paths = {"numpy": (kernels.objective_np, kernels.nelder_mead_np)}
    if kernels.NUMBA_AVAILABLE:
        paths["numba"] = (kernels.objective_nb, kernels.nelder_mead_nb)
    else:
        print("numba unavailable or disabled; timing the numpy path only")

    results = {}
    for name, (obj, nm) in paths.items():
        obj(xs[0], n, terms, vals, target, 1e-14)
        nm(x0.copy(), 0.25, 50, 10.0, 1e-12, 1e-12, n, terms, vals, target, 1e-14)
        t0 = time.perf_counter()
        acc = 0.0
        for x in xs:
            acc += obj(x, n, terms, vals, target, 1e-14)
        t_obj = (time.perf_counter() - t0) / len(xs)
        t_nm = _time(lambda: nm(x0.copy(), *nm_args), 1)
        _, f, evals = nm(x0.copy(), *nm_args)
        results[name] = (t_obj, t_nm, f, acc)
        print(f"{name:6s} objective {t_obj * 1e6:9.2f} us/call   nelder-mead {t_nm:7.3f} s "
              f"({evals} evals, best f {f:.3e})")

    if len(results) == 2:
        a, b = results["numpy"], results["numba"]
        print(f"speedup  objective x{a[0] / b[0]:.1f}   nelder-mead x{a[1] / b[1]:.1f}")
        print(f"agreement  objective sums rel diff {abs(a[3] - b[3]) / abs(a[3]):.1e}")


if __name__ == "__main__":
    main()
