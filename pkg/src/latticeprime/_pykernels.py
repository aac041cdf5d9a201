"""Numpy implementations of the hot kernels.

Semantics are identical to ``_kernels.pyx``; this module is used when the
compiled extension is missing or ``LATTICEPRIME_PURE=1`` is set.
"""
import numpy as np

BACKEND = "python"


def sieve_segment(lo, hi, base_primes):
    """Primality flags for the odd numbers ``lo, lo+2, ...`` below ``hi``.

    ``lo`` must be odd and ``base_primes`` must contain every odd prime up to
    ``isqrt(hi - 1)``.  Entry ``i`` refers to ``lo + 2*i``.
    """
    count = max(0, (hi - lo + 1) // 2)
    flags = np.ones(count, dtype=np.uint8)
    if count == 0:
        return flags
    for p in base_primes:
        p = int(p)
        if p == 2:
            continue
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= hi:
            continue
        flags[(start - lo) // 2::p] = 0
    if lo == 1:
        flags[0] = 0
    return flags


def shift_match(values, z):
    """For sorted unique ``values``, index of ``values[i] + z`` or -1."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    target = values + np.int64(z)
    idx = np.searchsorted(values, target)
    out = np.full(values.shape[0], -1, dtype=np.int64)
    ok = idx < values.shape[0]
    hit = np.zeros(values.shape[0], dtype=bool)
    hit[ok] = values[idx[ok]] == target[ok]
    out[hit] = idx[hit]
    return out


def pair_labels(lo_values, z, q):
    """Label ``n*(n+z) mod q`` for each ``n``, computed without overflow."""
    n = np.asarray(lo_values, dtype=np.int64) % q
    m = (n + z % q) % q
    if q < 3_037_000_499:
        return (n * m) % q
    return np.array([(int(a) * int(b)) % q for a, b in zip(n, m)], dtype=np.int64)
