"""Compare the compiled and pure-Python kernel backends.

Times the tridiagonal solve and the fitted-flux coefficient assembly on
random well-conditioned data, then a full short-circuit solve in a fresh
interpreter per backend.  Run from the repository root::

    python benchmarks/bench_kernels.py [--sizes 2000 20000] [--repeat 20]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from opvbilayer import _pykernels

try:
    from opvbilayer import _ckernels
except ImportError:  # extension not built
    _ckernels = None

SOLVE_SNIPPET = (
    "import time; from opvbilayer import default_params, BACKEND;"
    "from opvbilayer.solver import solve_steady_state;"
    "p = default_params(); solve_steady_state(p, -19.3);"
    "t = time.perf_counter(); s, d = solve_steady_state(p, -19.3);"
    "print(BACKEND, time.perf_counter() - t, d.iterations)"
)


def _data(n, rng):
    dphi = rng.normal(scale=2.0, size=n - 1)
    g = rng.uniform(0.5, 2.0, size=n - 1)
    lower = -rng.uniform(0.1, 1.0, size=n - 1)
    upper = -rng.uniform(0.1, 1.0, size=n - 1)
    diag = 2.5 + rng.uniform(size=n)
    rhs = rng.normal(size=n)
    return dphi, g, lower, diag, upper, rhs


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        dphi, g, lower, diag, upper, rhs = _data(n, rng)
        for name, mod in (("python", _pykernels), ("compiled", _ckernels)):
            if mod is None:
                continue
            t_th = min(timeit.repeat(lambda: mod.thomas(lower, diag, upper, rhs),
                                     number=1, repeat=repeat))
            t_sg = min(timeit.repeat(lambda: mod.sg_coefficients(dphi, g, 1.0),
                                     number=1, repeat=repeat))
            rows.append((n, name, t_th, t_sg))
    return rows


def bench_solve():
    out = []
    for backend in ("python", "compiled"):
        if backend == "compiled" and _ckernels is None:
            continue
        env = dict(os.environ, OPVBILAYER_BACKEND=backend)
        res = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET], env=env,
                             capture_output=True, text=True, check=True)
        name, t, iters = res.stdout.split()
        out.append((name, float(t), int(iters)))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2001, 20001])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    print(f"{'n':>7} {'backend':>9} {'thomas_ms':>10} {'sg_coef_ms':>11}")
    rows = bench_kernels(args.sizes, args.repeat)
    for n, name, t_th, t_sg in rows:
        print(f"{n:>7} {name:>9} {1e3 * t_th:>10.3f} {1e3 * t_sg:>11.3f}")
    for n in args.sizes:
        pair = {name: (a, b) for m, name, a, b in rows if m == n}
        if len(pair) == 2:
            print(f"speedup n={n}: thomas x{pair['python'][0] / pair['compiled'][0]:.1f}, "
                  f"sg_coefficients x{pair['python'][1] / pair['compiled'][1]:.1f}")
    print()
    print(f"{'backend':>9} {'solve_s':>8} {'iters':>6}")
    for name, t, iters in bench_solve():
        print(f"{name:>9} {t:>8.3f} {iters:>6}")


if __name__ == "__main__":
    main()
