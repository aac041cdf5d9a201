"""Segmented sieve of Eratosthenes and the prime weights built on it.

A :class:`PrimeTable` stores one primality byte per integer in ``[0, bound]``.
The arithmetic weights are

* ``theta(n)`` -- ``log n`` for prime ``n``, else 0;
* ``von_mangoldt(n)`` -- ``log p`` when ``n = p**k`` (k >= 1), else 0.

Aggregates are evaluated with :func:`math.fsum`, which is correctly rounded
and therefore independent of summation order (and of worker count).

Cache file layout (all integers little-endian)::

    offset  size  field
    0       4     magic  b"LPRB"
    4       4     version (u32, currently 1)
    8       8     bound   (u64)
    16      ...   bitset: bit (n % 8) of byte (n // 8) is set iff n is prime,
                  for 0 <= n <= bound; trailing bits of the last byte are 0
"""
from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from . import _accel
from .errors import BoundError

MAX_BOUND = 10**9
DEFAULT_SEGMENT = 1 << 20  # odd numbers per segment

CACHE_MAGIC = b"LPRB"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


class PrimePair(NamedTuple):
    lo: int
    hi: int
    gap: int


@dataclass(eq=False)
class PrimeTable:
    """Primality flags for ``0..bound``; treat as immutable once built."""

    bound: int
    bits: np.ndarray
    prime_count: int = field(init=False)
    _primes: np.ndarray | None = field(default=None, init=False, repr=False)
    _powers: tuple | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.bound < 2:
            raise BoundError(f"bound must be >= 2, got {self.bound}")
        if self.bits.shape != (self.bound + 1,):
            raise ValueError("bits must have length bound + 1")
        self.bits.setflags(write=False)
        self.prime_count = int(np.count_nonzero(self.bits))

    def _check(self, n: int, lo: int = 0) -> None:
        if not lo <= n <= self.bound:
            raise BoundError(f"{n} outside table range [{lo}, {self.bound}]")

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return bool(self.bits[n])

    def pi(self, x: int) -> int:
        """Number of primes <= x."""
        if x < 2:
            return 0
        self._check(x)
        if x == self.bound:
            return self.prime_count
        return int(np.searchsorted(self.primes(), x, side="right"))

    def primes(self, x: int | None = None) -> np.ndarray:
        if self._primes is None:
            self._primes = np.flatnonzero(self.bits).astype(np.int64)
            self._primes.setflags(write=False)
        if x is None:
            return self._primes
        self._check(x)
        return self._primes[: np.searchsorted(self._primes, x, side="right")]

    def prime_powers(self, x: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Sorted prime powers ``n <= x`` and the matching ``Lambda(n)`` values."""
        if self._powers is None:
            primes = self.primes()
            vals = [primes]
            bases = [primes]
            small = primes[primes <= math.isqrt(self.bound)]
            pk = small.copy()
            while small.size:
                pk = pk * small
                keep = pk <= self.bound
                small, pk = small[keep], pk[keep]
                vals.append(pk)
                bases.append(small)
            n = np.concatenate(vals)
            base = np.concatenate(bases)
            order = np.argsort(n, kind="stable")
            n, base = n[order], base[order]
            logs = np.log(base.astype(np.float64))
            n.setflags(write=False)
            logs.setflags(write=False)
            self._powers = (n, logs)
        n, logs = self._powers
        if x is None:
            return n, logs
        self._check(x)
        k = np.searchsorted(n, x, side="right")
        return n[:k], logs[:k]

    def prime_logs(self, x: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        p = self.primes(x)
        return p, np.log(p.astype(np.float64))


def _base_primes(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def build_table(
    x: int,
    segment_size: int = DEFAULT_SEGMENT,
    workers: int | None = 1,
) -> PrimeTable:
    """Sieve ``[0, x]`` segment by segment (odd numbers only).

    ``segment_size`` counts odd numbers per segment.  Segments are disjoint,
    so ``workers > 1`` only changes scheduling, never the result.
    """
    x = int(x)
    if x < 2 or x > MAX_BOUND:
        raise BoundError(f"sieve bound must lie in [2, {MAX_BOUND}], got {x}")
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    bits = np.zeros(x + 1, dtype=np.uint8)
    bits[2] = 1
    base = _base_primes(math.isqrt(x))
    span = 2 * segment_size
    starts = range(1, x + 1, span)

    def run(lo: int) -> None:
        hi = min(lo + span, x + 1)
        bits[lo:hi:2] = _accel.sieve_segment(lo, hi, base)

    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, starts))
    else:
        for lo in starts:
            run(lo)
    return PrimeTable(x, bits)


def simple_table(x: int) -> PrimeTable:
    """Non-segmented full sieve; the cross-check for :func:`build_table`."""
    flags = np.ones(x + 1, dtype=np.uint8)
    flags[:2] = 0
    for p in range(2, math.isqrt(x) + 1):
        if flags[p]:
            flags[p * p :: p] = 0
    return PrimeTable(x, flags)


def theta(n: int, t: PrimeTable) -> float:
    t._check(n, lo=1)
    return math.log(n) if t.bits[n] else 0.0


def von_mangoldt(n: int, t: PrimeTable) -> float:
    t._check(n, lo=1)
    if n == 1:
        return 0.0
    if t.bits[n]:
        return math.log(n)
    for p in t.primes(math.isqrt(n)):
        p = int(p)
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
    return 0.0


def _pair_starts(z: int, x: int, t: PrimeTable) -> np.ndarray:
    if z < 1:
        raise ValueError(f"gap must be positive, got {z}")
    if x - z < 2:
        return np.empty(0, dtype=np.int64)
    t._check(x)
    p = t.primes(x - z)
    return p[t.bits[p + z].astype(bool)]


def prime_pairs(z: int, x: int, t: PrimeTable) -> list[PrimePair]:
    """All ``(p, p+z)`` with both entries prime and ``p + z <= x``."""
    return [PrimePair(int(p), int(p) + z, z) for p in _pair_starts(z, x, t)]


def iter_prime_pairs(z: int, x: int, t: PrimeTable) -> Iterator[PrimePair]:
    for p in _pair_starts(z, x, t):
        yield PrimePair(int(p), int(p) + z, z)


def count_prime_pairs(z: int, x: int, t: PrimeTable) -> int:
    """pi_z(x): number of gap-z prime pairs with both entries <= x."""
    return int(_pair_starts(z, x, t).size)


def unordered_prime_pair_count(x: int, t: PrimeTable) -> int:
    """Number of unordered pairs of distinct primes <= x, pi(x)(pi(x)-1)/2.

    Unrelated to the gap-z counter; kept separate on purpose.
    """
    k = t.pi(x)
    return k * (k - 1) // 2


def chebyshev_theta_sum(x: int, t: PrimeTable) -> float:
    if x < 2:
        return 0.0
    _, logs = t.prime_logs(x)
    return math.fsum(logs)


def chebyshev_psi_sum(x: int, t: PrimeTable) -> float:
    if x < 2:
        return 0.0
    _, logs = t.prime_powers(x)
    return math.fsum(logs)


def save_table(t: PrimeTable, path: str | os.PathLike) -> None:
    packed = np.packbits(t.bits.astype(bool), bitorder="little")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, t.bound))
        fh.write(packed.tobytes())


def load_table(path: str | os.PathLike) -> PrimeTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, bound = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    nbytes = (bound + 1 + 7) // 8
    body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if body.size != nbytes:
        raise ValueError(f"{path}: expected {nbytes} payload bytes, found {body.size}")
    bits = np.unpackbits(body, count=bound + 1, bitorder="little")
    return PrimeTable(int(bound), bits)
