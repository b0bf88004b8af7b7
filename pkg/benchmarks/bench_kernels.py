"""Compare the numba and pure-numpy kernels on BA graphs.

    python benchmarks/bench_kernels.py [--sizes 500,2000] [--repeat 5]

Each kernel is timed with ``timeit`` (best of ``--repeat``) after one warm-up
call, so JIT compilation is excluded. Results must agree before timings are
reported.
"""
import argparse
import timeit

import numpy as np

from sfattack import _graphkernels, _plkernels
from sfattack.generators import BaConfig, generate_ba


def _best(fn, repeat):
    fn()
    number = 1
    while timeit.timeit(fn, number=number) < 0.2 and number < 10_000:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench(n, repeat):
    g = generate_ba(BaConfig(n, 2, 1))
    values, counts = np.unique(g.degrees, return_counts=True)
    values = values.astype(np.float64)
    indptr, indices = g.csr()
    cases = {
        "fit_scan": (lambda: _plkernels.fit_scan_numba(values, counts),
                     lambda: _plkernels.fit_scan_numpy(values, counts)),
        "distance_sum": (lambda: _graphkernels.distance_sum_numba(indptr, indices, n),
                         lambda: _graphkernels.distance_sum_numpy(indptr, indices, n)),
        "triangles": (lambda: _graphkernels.triangles_numba(indptr, indices, n),
                      lambda: _graphkernels.triangles_numpy(indptr, indices, n)),
    }
    rows = []
    for name, (fast, slow) in cases.items():
        a, b = fast(), slow()
        if isinstance(a, tuple):
            same = all(np.allclose(x, y, atol=1e-5) for x, y in zip(a, b))
        else:
            same = np.array_equal(a, b)
        if not same:
            raise SystemExit(f"{name}: backends disagree at n={n}")
        t_fast, t_slow = _best(fast, repeat), _best(slow, repeat)
        rows.append((n, name, t_fast, t_slow))
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="500,2000")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    print(f"{'n':>6} {'kernel':<14} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for n_, name, fast, slow in bench(n, args.repeat):
            print(f"{n_:>6} {name:<14} {fast * 1e3:>10.3f}ms {slow * 1e3:>10.3f}ms {slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()
