"""Compare the compiled and NumPy kernel backends.

    python benchmarks/bench_kernels.py [--mixtures 20000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from varuq.kernels import available_backends, get_backend


def ragged_batch(n, K, max_atoms, seed):
    rng = np.random.default_rng(seed)
    sizes = rng.integers(1, max_atoms + 1, n)
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    atoms = rng.dirichlet(np.ones(K), offsets[-1])
    weights = np.repeat(1.0 / sizes, sizes)
    return atoms, weights, offsets


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--mixtures", type=int, default=20_000)
    ap.add_argument("--scores", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    cases = []
    for K, max_atoms in ((3, 5), (10, 5), (10, 50)):
        batch = ragged_batch(args.mixtures, K, max_atoms, args.seed)
        cases.append((f"mixture_moments n={args.mixtures} K={K} M<={max_atoms}",
                      lambda b, batch=batch: b.mixture_moments(*batch)))
    rng = np.random.default_rng(args.seed)
    a, b = rng.random(args.scores), rng.random(args.scores)
    cases.append((f"mann_whitney {args.scores} x {args.scores}", lambda bk: bk.mann_whitney(a, b)))

    print(f"{'kernel':<44}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, run in cases:
        t = {name: best_of(lambda: run(get_backend(name)), args.repeat) for name in backends}
        speed = f"{t['python'] / t['cython']:.1f}x" if "cython" in t else "-"
        print(f"{label:<44}" + "".join(f"{t[n] * 1e3:>10.1f}ms" for n in backends) + f"{speed:>10}")


if __name__ == "__main__":
    main()
