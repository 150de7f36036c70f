"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_backends.py [--sizes 1000 10000 100000] [--repeat 5]

Each row is the best of ``--repeat`` runs. The last column is the speed-up of
the compiled backend, when it is built.
"""
import argparse
import time

import numpy as np

from genusrna import kernels
from genusrna.sampling import RandomSource, _tree_word, uniform_matching


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(n, seed=0):
    rng = RandomSource(seed)
    raw = rng.generator.integers(0, 1 << 32, size=2 * n + 200, dtype=np.uint32)
    word = _tree_word(n, rng)
    partner = kernels.plane_tree_partner(word)
    steps = [rng.sample_indices(n + 1, 3), rng.sample_indices(n - 1, 5)]
    return {
        "tree_word": lambda: kernels.tree_word(n, raw),
        "plane_tree_partner": lambda: kernels.plane_tree_partner(word),
        "glue_partner_path": lambda: kernels.glue_partner_path(partner, steps),
        "tree_glue": lambda: kernels.tree_glue(word, steps),
        "uniform_matching(g=2)": lambda: uniform_matching(n, 2, rng),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10**3, 10**4, 10**5])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    start = kernels.BACKEND
    print(f"{'kernel':<24}{'n':>9}" + "".join(f"{b + ' ms':>14}" for b in backends)
          + ("   speed-up" if len(backends) > 1 else ""))
    try:
        for n in args.sizes:
            timings = {}
            for backend in backends:
                kernels.use_backend(backend)
                # closures look kernels up at call time, so one set serves both backends
                for name, fn in cases(n).items():
                    timings.setdefault(name, []).append(best_of(fn, args.repeat))
            for name, ts in timings.items():
                row = f"{name:<24}{n:>9}" + "".join(f"{t * 1e3:>14.3f}" for t in ts)
                if len(ts) > 1:
                    row += f"{ts[1] / ts[0]:>10.1f}x"
                print(row)
    finally:
        kernels.use_backend(start)


if __name__ == "__main__":
    main()
