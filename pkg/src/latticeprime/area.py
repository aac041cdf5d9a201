"""Area-method identities, prime-pair correlations and related constants.

For a sequence ``f`` on ``1..x`` the double correlation over all positive
shifts,

    sum_{n <= x-1} sum_{j <= x-n} f(n) f(n+j),

equals the bilinear sum ``sum_{2 <= n <= x} f(n) * sum_{m <= n-1} f(m)``.
:func:`verify_decomposition` evaluates both sides independently in exact
integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _accel
from .errors import ArgumentError, BoundError, HypothesisError, PreconditionError
from .sieve import PrimeTable, build_table, count_prime_pairs

TWIN_PRIME_CONSTANT = 0.66016181584686957392  # reference value, for reporting only


@dataclass(frozen=True)
class SequencePair:
    r: tuple[float, ...]
    h: tuple[float, ...]

    def __post_init__(self):
        if len(self.r) != len(self.h) or not self.r:
            raise ArgumentError("r and h must be non-empty and of equal length")

    @property
    def admissible(self) -> bool:
        """Whether the hypotenuse of the totals equals the sum of the pieces."""
        total = math.hypot(math.fsum(self.r), math.fsum(self.h))
        pieces = math.fsum(math.hypot(a, b) for a, b in zip(self.r, self.h))
        return abs(total - pieces) <= 1e-12 * max(pieces, 1e-300) or pieces == 0.0


def triangle_identity_sides(s: SequencePair) -> tuple[float, float, float]:
    """(lhs, rhs, scale) for the stacked-triangle identity.

    lhs = sum_{j=2}^n r_j h_j
    rhs = sum_{j=2}^n h_j (R_j + R_{j-1}) - 2 sum_{j=1}^{n-1} r_j (h_{j+1} + ... + h_n)

    with ``R_j`` the partial sums of ``r``.  ``scale`` is the sum of absolute
    values of every term, for relative tolerances.
    """
    r, h = s.r, s.h
    n = len(r)
    lhs_terms = [r[j] * h[j] for j in range(1, n)]
    prefix = [0.0]
    for v in r:
        prefix.append(prefix[-1] + v)
    suffix = [0.0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] + h[j]
    rhs_terms = [h[j] * (prefix[j + 1] + prefix[j]) for j in range(1, n)]
    rhs_terms += [-2.0 * r[j] * suffix[j + 1] for j in range(n - 1)]
    scale = math.fsum(abs(t) for t in lhs_terms + rhs_terms)
    return math.fsum(lhs_terms), math.fsum(rhs_terms), scale


def verify_triangle_identity(s: SequencePair) -> float:
    """Absolute residual ``|lhs - rhs|``; rejects inadmissible pairs."""
    if not s.admissible:
        raise PreconditionError("sequence pair does not satisfy the hypotenuse condition")
    lhs, rhs, _ = triangle_identity_sides(s)
    return abs(lhs - rhs)


def verify_decomposition(f: Callable[[int], int] | Sequence[int], x: int) -> tuple[int, int]:
    """Both sides of the double-correlation decomposition, as exact integers.

    ``f`` is either a callable on ``1..x`` or a sequence whose item ``i``
    holds ``f(i + 1)``.
    """
    if x < 2:
        raise ArgumentError(f"x must be >= 2, got {x}")
    vals = [int(f(n)) for n in range(1, x + 1)] if callable(f) else [int(v) for v in f[:x]]
    if len(vals) < x:
        raise ArgumentError("sequence shorter than x")
    # lhs: for each n, f(n) times the sum of f(n+j) over 1 <= j <= x-n
    lhs = 0
    for i in range(x - 1):
        lhs += vals[i] * sum(vals[i + 1 :])
    # rhs: f(n) times the running prefix sum of f(1..n-1)
    rhs = 0
    running = vals[0]
    for i in range(1, x):
        rhs += vals[i] * running
        running += vals[i]
    return lhs, rhs


def _weight_terms(weight: str, bound: int, t: PrimeTable) -> tuple[np.ndarray, np.ndarray]:
    if weight == "lambda":
        return t.prime_powers(bound)
    if weight == "theta":
        return t.prime_logs(bound)
    raise ArgumentError(f"unknown weight {weight!r}; expected 'theta' or 'lambda'")


def correlation_terms(x: int, z: int, t: PrimeTable, weight: str = "lambda"):
    """``(n, f(n) f(n+z))`` for every ``n <= x`` with a non-zero product."""
    if z < 1:
        raise ArgumentError(f"gap must be positive, got {z}")
    if x + z > t.bound:
        raise BoundError(f"need table bound >= x + z = {x + z}, have {t.bound}")
    n, w = _weight_terms(weight, x + z, t)
    idx = _accel.shift_match(n, z)
    lo_mask = (idx >= 0) & (n <= x)
    return n[lo_mask], w[lo_mask] * w[idx[lo_mask]]


def psi_z(x: int, z: int, t: PrimeTable) -> float:
    """sum_{n <= x} Lambda(n) Lambda(n+z)."""
    _, prod = correlation_terms(x, z, t, "lambda")
    return math.fsum(prod)


def theta_z(x: int, z: int, t: PrimeTable) -> float:
    """sum_{n <= x} theta(n) theta(n+z)."""
    _, prod = correlation_terms(x, z, t, "theta")
    return math.fsum(prod)


@dataclass(frozen=True)
class CorrelationLedger:
    x: int
    z: int
    weight_name: str
    corr: float
    bilinear: float
    full_double: float | None = None


def _bilinear(values: np.ndarray) -> float:
    """sum_n f(n) * (f(1) + ... + f(n-1)) over the non-zero terms, in order."""
    if values.size < 2:
        return 0.0
    before = np.concatenate(([0.0], np.cumsum(values[:-1])))
    return math.fsum(values * before)


def correlation_ledger(x: int, z: int, weight, t: PrimeTable | None = None) -> CorrelationLedger:
    """Correlation and bilinear sums for ``theta``, ``lambda`` or explicit values.

    ``weight`` may be an array ``f`` with ``f[i] = f(i + 1)`` for
    ``1 <= i + 1 <= x + z``; then no table is needed and the full double
    correlation is also recorded (O(x^2), intended for small synthetic x).
    """
    if isinstance(weight, str):
        if t is None:
            raise ArgumentError("a PrimeTable is required for arithmetic weights")
        _, prod = correlation_terms(x, z, t, weight)
        _, vals = _weight_terms(weight, x, t) if x >= 2 else (None, np.empty(0))
        return CorrelationLedger(x, z, weight, math.fsum(prod), _bilinear(np.asarray(vals)))
    f = np.asarray(weight, dtype=np.float64)
    if f.size < x + z:
        raise BoundError(f"explicit weight needs {x + z} values, got {f.size}")
    corr = math.fsum(f[:x] * f[z : x + z])
    full = math.fsum(f[i] * v for i in range(x - 1) for v in f[i + 1 : x])
    return CorrelationLedger(x, z, "custom", corr, _bilinear(f[:x]), full)


def empirical_area_constant(x: int, z: int, weight="theta", t: PrimeTable | None = None) -> float:
    """Smallest C with ``corr >= bilinear / (C x)``, i.e. ``bilinear / (x corr)``."""
    led = correlation_ledger(x, z, weight, t)
    if led.corr <= 0.0:
        raise HypothesisError(f"correlation at gap {z} vanishes up to x={x}")
    return led.bilinear / (x * led.corr)


def area_constant_grid(xs: Sequence[int], z: int, weight: str, t: PrimeTable) -> list[tuple[int, float]]:
    return [(x, empirical_area_constant(x, z, weight, t)) for x in xs]


@dataclass(frozen=True)
class SingularSeries:
    z: int
    cutoff: int
    pi2_partial: float
    value: float


def twin_prime_partial(cutoff: int, t: PrimeTable | None = None) -> float:
    """prod_{2 < p <= cutoff} (1 - 1/(p-1)^2), via a compensated log sum."""
    if t is None or t.bound < cutoff:
        t = build_table(cutoff)
    p = t.primes(cutoff)[1:].astype(np.float64)
    return math.exp(math.fsum(np.log1p(-1.0 / (p - 1.0) ** 2)))


def singular_series(z: int, cutoff: int = 10**7, t: PrimeTable | None = None) -> SingularSeries:
    """Hardy--Littlewood constant ``2 Pi2 prod_{p | z, p > 2} (p-1)/(p-2)``."""
    if z < 1 or z % 2:
        raise ArgumentError(f"singular series is defined here for even positive z, got {z}")
    if cutoff < 100:
        raise ArgumentError(f"cutoff must be >= 100, got {cutoff}")
    pi2 = twin_prime_partial(cutoff, t)
    corr = 1.0
    rest = z
    p = 3
    while rest % 2 == 0:
        rest //= 2
    while p * p <= rest:
        if rest % p == 0:
            corr *= (p - 1) / (p - 2)
            while rest % p == 0:
                rest //= p
        p += 2
    if rest > 1:
        corr *= (rest - 1) / (rest - 2)
    return SingularSeries(z, cutoff, pi2, 2.0 * pi2 * corr)


@dataclass(frozen=True)
class BrunRow:
    x: int
    pairs: int
    ratio: float  # pi_z(x) log^2 x / x
    singular: float | None
    relative: float | None  # ratio / singular


def brun_check(z: int, xs: Sequence[int], t: PrimeTable, singular: float | None = None) -> list[BrunRow]:
    """pi_z(x) log^2(x) / x along a grid, next to the singular series when given."""
    rows = []
    for x in xs:
        if x < 100:
            raise ArgumentError(f"grid points must be >= 100, got {x}")
        k = count_prime_pairs(z, x, t)
        ratio = k * math.log(x) ** 2 / x
        rows.append(BrunRow(x, k, ratio, singular, ratio / singular if singular else None))
    return rows
