"""Compare the compiled and pure-Python tridiagonal kernels.

Times the two hot loops on a realistic finite-difference matrix (a q=1,
V0=1 channel at 4000 interior points): bisection for the lowest few
eigenvalues and inverse iteration for one eigenvector.  Also checks that
both backends agree.

    python3 benchmarks/bench_kernels.py [--npts 4000] [--k 3] [--repeat 3]
"""

import argparse
import time

import numpy as np

from dirac1d import kernels, oracle
from dirac1d.core import PhysicalParams, PotentialParams


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--npts", type=int, default=4000)
    ap.add_argument("--k", type=int, default=3, help="eigenvalues to bisect for")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    ch = oracle.channel_spec(PhysicalParams(), PotentialParams(1.0, 1.0), "upper_right")
    grid = oracle.default_grid(ch, args.k, npts=args.npts)
    d, e = oracle.fd_matrix(ch, grid)
    v0 = np.random.default_rng(0).uniform(0.5, 1.5, d.shape[0])

    try:
        backends = {"cython": kernels.get_backend("cython")}
    except ImportError:
        backends = {}
        print("compiled extension not built; timing the Python backend only")
    backends["python"] = kernels.get_backend("python")

    results = {}
    print(f"matrix size {args.npts}, k={args.k}, best of {args.repeat}")
    print(f"{'backend':<8} {'bisect [s]':>12} {'inverse it. [s]':>16}")
    for name, mod in backends.items():
        tb, vals = _best_of(lambda: mod.bisect_eigvals(d, e, 0, args.k), args.repeat)
        ti, vec = _best_of(lambda: mod.inverse_iteration(d, e, float(vals[0]), v0, 3), args.repeat)
        results[name] = (tb, ti, vals, vec)
        print(f"{name:<8} {tb:12.4f} {ti:16.4f}")

    if "cython" in results:
        tb_c, ti_c, vals_c, vec_c = results["cython"]
        tb_p, ti_p, vals_p, vec_p = results["python"]
        print(f"speed-up: bisection x{tb_p / tb_c:.1f}, inverse iteration x{ti_p / ti_c:.1f}")
        dv = float(np.max(np.abs(vals_c - vals_p)))
        dvec = float(np.max(np.abs(vec_c - vec_p)))
        print(f"max eigenvalue difference {dv:.2e}, max eigenvector difference {dvec:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
