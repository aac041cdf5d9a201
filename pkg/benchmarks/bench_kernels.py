"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--x 1e7] [--repeat 3]

Each kernel is timed on identical inputs from both backends and the outputs
are checked for equality.  The end-to-end rows swap the backend used by the
package and rebuild the prime table / rebucket the pairs.
"""
import argparse
import time
from contextlib import contextmanager

import numpy as np

from latticeprime import _accel, _pykernels, sieve
from latticeprime.cli import parse_int
from latticeprime.equidist import bucket_pairs

try:
    from latticeprime import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


@contextmanager
def backend(mod):
    saved = {k: getattr(_accel, k) for k in ("sieve_segment", "shift_match", "pair_labels")}
    for k in saved:
        setattr(_accel, k, getattr(mod, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(_accel, k, v)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=parse_int, default=10**7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; nothing to compare")
        return 1

    x = args.x
    base = sieve.simple_table(int(x**0.5) + 1).primes().astype(np.int64)
    lo, hi = 1_000_001, 1_000_001 + 2 * sieve.DEFAULT_SEGMENT
    table = sieve.build_table(x + 2)
    n, _ = table.prime_powers(x + 2)
    pairs_lo = n[:-1]

    cases = [
        ("sieve_segment (2^20 odds)", lambda k: k.sieve_segment(lo, hi, base)),
        (f"shift_match ({n.size} prime powers)", lambda k: k.shift_match(n, 2)),
        (f"pair_labels ({pairs_lo.size} values)", lambda k: k.pair_labels(pairs_lo, 2, 30)),
    ]
    print(f"{'case':42s} {'numpy s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in cases:
        tp, op = best_of(lambda: fn(_pykernels), args.repeat)
        tc, oc = best_of(lambda: fn(_kernels), args.repeat)
        assert np.array_equal(np.asarray(op), np.asarray(oc)), name
        print(f"{name:42s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")

    def build():
        return sieve.build_table(x)

    def bucket():
        return bucket_pairs(2, 5, x, table)

    for name, fn in ((f"build_table({x})", build), (f"bucket_pairs(z=2, q=5, x={x})", bucket)):
        with backend(_pykernels):
            tp, op = best_of(fn, args.repeat)
        with backend(_kernels):
            tc, oc = best_of(fn, args.repeat)
        print(f"{name:42s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
