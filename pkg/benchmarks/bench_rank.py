"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_rank.py [--sizes 50 120 220] [--repeat 3]

Both backends are checked to agree on every input before timing.
"""
import argparse
import time

import numpy as np

from maxrank import ffla
from maxrank.ffla import DEFAULT_PRIME, _fallback

try:
    from maxrank.ffla import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 120, 220])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    args = ap.parse_args(argv)
    p = args.prime
    rng = np.random.default_rng(0)
    backends = {"python": _fallback}
    if _kernels is not None:
        backends["cython"] = _kernels
    print(f"active backend: {ffla.BACKEND}; p = {p}")
    print(f"{'kernel':<10}{'size':>8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for size in args.sizes:
        # rank-deficient square matrix, so elimination has real work to do
        left = rng.integers(0, p, (size, size - 5), dtype=np.int64)
        right = rng.integers(0, p, (size - 5, size), dtype=np.int64)
        A = np.array([[sum(int(a) * int(b) for a, b in zip(r, c)) % p for c in right.T] for r in left], dtype=np.int64)
        ranks = {name: int(mod.rank_mod_p(A.copy(), p)) for name, mod in backends.items()}
        if len(set(ranks.values())) != 1:
            raise SystemExit(f"backends disagree on rank: {ranks}")
        t = {name: best_of(lambda m=mod: m.rank_mod_p(A.copy(), p), args.repeat) for name, mod in backends.items()}
        _report("rank", size, t)

        a = rng.integers(0, p, 4 * size, dtype=np.int64)
        b = rng.integers(0, p, 4 * size, dtype=np.int64)
        prods = [mod.polymul_mod_p(a, b, p) for mod in backends.values()]
        if any(not np.array_equal(prods[0], q) for q in prods[1:]):
            raise SystemExit("backends disagree on polymul")
        t = {name: best_of(lambda m=mod: m.polymul_mod_p(a, b, p), args.repeat) for name, mod in backends.items()}
        _report("polymul", 4 * size, t)


def _report(kernel, size, t):
    line = f"{kernel:<10}{size:>8}" + "".join(f"{v * 1e3:>10.2f}ms" for v in t.values())
    if "cython" in t:
        line += f"{t['python'] / t['cython']:>9.1f}x"
    print(line)


if __name__ == "__main__":
    main()
