"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat R]``.  Each case
is timed on both backends with the same inputs; the results must agree,
so the benchmark doubles as a smoke test.
"""

import argparse
import random
import time

from votexp import kernels
from votexp.core import make_matrix
from votexp.enumerate import enumerate_xps
from votexp.satset import SeedCnf
from votexp.scoring import ScoringVector, winners
from votexp.xplain import find_cxp, find_iaxp


def random_profile(rng, n, m):
    return make_matrix([rng.sample(range(m), m) for _ in range(n)])


def case_shrink(backend, profiles):
    out = []
    for full, rule, w in profiles:
        out.append(find_iaxp(full, rule, w, backend=backend).cellset())
        out.append(find_cxp(full, rule, w, backend=backend).cellset())
    return out


def case_enumerate(backend, profiles):
    return [
        (len(a), len(c))
        for a, c in (enumerate_xps(full, rule, w, backend=backend) for full, rule, w in profiles)
    ]


def case_min_model(backend, cnfs):
    out = []
    for n, m, blocks in cnfs:
        seeds = SeedCnf(n, m, backend=backend)
        for cells in blocks:
            seeds.add_blocking_down(cells)
        out.append(seeds.minimum_model().values)
    return out


def timed(func, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = func(*args)
        best = min(best, time.perf_counter() - t)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    def workload(n, m, k):
        out = []
        for _ in range(k):
            full = random_profile(rng, n, m)
            rule = ScoringVector.borda(m)
            out.append((full, rule, min(winners(full, rule))))
        return out

    shrink = workload(40, 8, 20)
    small = workload(3, 4, 10)
    cnfs = []
    for _ in range(5):
        n, m = 5, 4
        blocks = [rng.sample([(i, k) for i in range(n) for k in range(m)], 4) for _ in range(25)]
        cnfs.append((n, m, blocks))

    cases = [
        ("find_iaxp + find_cxp, 20 profiles 40x8", case_shrink, shrink),
        ("enumerate_xps, 10 profiles 3x4", case_enumerate, small),
        ("minimum_model, 5 maps of 20 vars / 25 blocks", case_min_model, cnfs),
    ]
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    for label, func, data in cases:
        times = {}
        results = {}
        for b in backends:
            times[b], results[b] = timed(func, b, data, repeat=args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on: {label}")
        cols = "  ".join(f"{b}={times[b] * 1e3:9.2f} ms" for b in backends)
        speedup = ""
        if "cython" in times and "python" in times and times["cython"] > 0:
            speedup = f"  speedup x{times['python'] / times['cython']:.1f}"
        print(f"{label:48s} {cols}{speedup}")


if __name__ == "__main__":
    main()
