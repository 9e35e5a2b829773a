"""Time the compiled and pure-Python kernel backends on the same inputs.

Usage::

    python benchmarks/bench_kernels.py [--sizes 100 200 400] [--repeat 3] [--json out.json]

Each workload is run once per backend to check that the results agree,
then timed ``--repeat`` times; the best time is reported.
"""
import argparse
import json
import sys
import time

import numpy as np

from ltlab.inequalities import default_halfspace_grid
from ltlab.numerics import eig_dense, factor_ldl, load_kernels
from ltlab.operators import robin_halfspace_matrix
from ltlab.potentials import Potential


def _best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(sizes):
    rng = np.random.default_rng(0)
    for n in sizes:
        a = rng.standard_normal((n, n))
        a = 0.5 * (a + a.T)
        yield (f"eig_dense n={n}",
               lambda k, a=a: eig_dense(a, kernels=k).eigenvalues)
        yield (f"ldl inertia n={n}",
               lambda k, a=a: np.array(factor_ldl(a, 0.1, keep=False, kernels=k).inertia))
    p = Potential.gaussian(amp=2.0)
    mat = robin_halfspace_matrix(p, default_halfspace_grid(p)).matrix
    yield (f"half-space inertia n={mat.n}",
           lambda k: np.array(factor_ldl(mat, -0.05, keep=False, kernels=k).inertia))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the results to this file")
    args = ap.parse_args(argv)

    backends = {"python": load_kernels("python")}
    try:
        backends["cython"] = load_kernels("cython")
    except ImportError:
        print("compiled extension not built; timing the python backend only", file=sys.stderr)

    rows = []
    print(f"{'workload':32s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in workloads(args.sizes):
        results = {b: fn(k) for b, k in backends.items()}
        ref = results["python"]
        for b, r in results.items():
            if not np.allclose(r, ref, rtol=1e-10, atol=1e-10 * max(1.0, np.max(np.abs(ref)))):
                raise SystemExit(f"{name}: backend {b} disagrees with python")
        times = {b: _best_time(lambda k=k: fn(k), args.repeat) for b, k in backends.items()}
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        rows.append({"workload": name, "seconds": times, "speedup": speedup})
        print(f"{name:32s}" + "".join(f"{times[b]:12.4f}" for b in backends)
              + f"{speedup:10.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
