"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--batch 20000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rmt_exact.montecarlo import _kernels_py as py_k

try:
    from rmt_exact.montecarlo import _kernels as c_k
except ImportError:  # extension not built
    c_k = None


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    cases = []
    for n in (3, 6):
        X = rng.normal(size=(args.batch, n, n))
        cases.append((f"jacobi n={n}", "jacobi_eigh_batch", ((X + X.transpose(0, 2, 1)) / 2,)))
    for n in (2, 4, 8):
        cases.append((f"realcount n={n}", "count_real_batch", (rng.normal(size=(args.batch, n, n)),)))

    print(f"{'kernel':<16}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>10}  agree")
    for label, name, inputs in cases:
        t_py, r_py = _best(lambda: getattr(py_k, name)(*inputs), args.repeat)
        if c_k is None:
            print(f"{label:<16}{t_py:>12.4f}{'n/a':>12}{'':>10}  -")
            continue
        t_c, r_c = _best(lambda: getattr(c_k, name)(*inputs), args.repeat)
        a, b = (r_py[0], r_c[0]) if isinstance(r_py, tuple) else (r_py, r_c)
        agree = np.allclose(a, b, atol=1e-10) if a.dtype.kind == "f" else bool(np.array_equal(a, b))
        print(f"{label:<16}{t_py:>12.4f}{t_c:>12.4f}{t_py / t_c:>10.1f}  {agree}")


if __name__ == "__main__":
    main()
