"""Compiled vs pure-Python elimination kernels.

Times ``ldl_psd`` and ``bareiss_det`` on integer-scaled moment matrices of the
two-parameter family and on dense random symmetric matrices, then one full
threshold bisection with each backend swapped in.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import importlib
import random
import time
from fractions import Fraction

from hyposhift import _pykernels, hyponormality as hy, kernels, positivity
from hyposhift.moments import moment_matrix
from hyposhift.positivity import dedupe_symmetric, integer_scaled


def family_cases():
    out = []
    for k in (2, 4, 6, 8):
        f = hy.figure2_factory(Fraction(1, 2), Fraction(9, 13))
        M = moment_matrix(f, (0, 0), k).entries
        out.append((f"family M_(0,0)({k}) full {len(M)}x{len(M)}", integer_scaled(M)[0]))
        rows, _ = dedupe_symmetric(M)
        out.append((f"family M_(0,0)({k}) deduped {len(rows)}x{len(rows)}", integer_scaled(rows)[0]))
    return out


def random_cases(rng):
    out = []
    for n in (10, 25, 40):
        vecs = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        M = [[sum(v[i] * v[j] for v in vecs) for j in range(n)] for i in range(n)]
        out.append((f"random Gram {n}x{n}", M))
    return out


def best_of(fn, arg, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        ext = importlib.import_module("hyposhift._kernels")
    except ImportError:
        print("compiled kernels are not built; only the pure-Python backend is available")
        return

    cases = family_cases() + random_cases(random.Random(0))
    print(f"{'case':<40} {'kernel':<12} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, M in cases:
        for kname in ("ldl_psd", "bareiss_det"):
            py = best_of(getattr(_pykernels, kname), M, args.repeat)
            cy = best_of(getattr(ext, kname), M, args.repeat)
            print(f"{name:<40} {kname:<12} {py * 1e3:>10.3f} {cy * 1e3:>10.3f} {py / cy:>7.2f}x")

    print("\nend to end: bisect_threshold(a2=1/2, k=4, exact mode)")
    for label, module in (("python", _pykernels), ("cython", ext)):
        kernels.ldl_psd, kernels.bareiss_det = module.ldl_psd, module.bareiss_det
        positivity._psd_exact_cached.cache_clear()
        t0 = time.perf_counter()
        hy.bisect_threshold(hy.figure2_factory, Fraction(1, 2), 4, 1e-9, 10, mode="exact")
        print(f"  {label:<8} {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
