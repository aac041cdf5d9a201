"""Dirichlet characters mod q and lattice characters ``kappa((m, n)) = chi(m*n)``.

The unit group is split by CRT into cyclic factors: one per odd prime power
(generated by a primitive root), ``C2`` for ``4 || q``, and ``C2 x C_{2^(e-2)}``
(generated by -1 and 5) for ``2^e || q`` with ``e >= 3``.  A character is an
exponent vector over those factors; its values are stored as exact angles
``k / L`` where ``L`` is the group exponent.

Sums of character values are decided exactly: the histogram of angles is an
element of Z[x]/(x^L - 1) and reducing it modulo the cyclotomic polynomial
``Phi_L`` gives the canonical form of the sum in Z[zeta_L].  A sum is
"exactly 0" or "exactly phi(q)" only if that canonical form says so.

Note that ``kappa`` only sees the product ``m*n mod q``.  Summing
``kappa((a, b)) * conj(kappa((m, n)))`` over all characters therefore detects
``a*b == m*n (mod q)``, not the two separate congruences ``m == a``,
``n == b``.  :func:`orthogonality_classes` computes exactly the former.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AdmissibilityError, ResourceError
from .residues import Modulus, make_modulus

MAX_GROUP_MODULUS = 10**7


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(2*pi*i*k/d)`` with ``0 <= k < d`` and ``gcd(k, d) == 1``."""

    k: int
    d: int

    @classmethod
    def of(cls, k: int, d: int) -> "RootOfUnity":
        k %= d
        g = math.gcd(k, d)
        return cls(k // g, d // g)

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            d = self.d * other.d // math.gcd(self.d, other.d)
            return RootOfUnity.of(self.k * (d // self.d) + other.k * (d // other.d), d)
        if other == 0:
            return 0
        if other == 1:
            return self
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity.of(-self.k, self.d)

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return self.k == other.k and self.d == other.d
        if isinstance(other, (int, float, complex)):
            return other == 1 and self.k == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.k, self.d))

    def __complex__(self):
        return cmath.exp(2j * math.pi * self.k / self.d)

    def to_complex(self) -> complex:
        return complex(self)


ONE = RootOfUnity(0, 1)


# -- exact cyclotomic arithmetic -------------------------------------------

def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _mobius(n: int) -> int:
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    return -sign if n > 1 else sign


@lru_cache(maxsize=256)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_n`` in ascending order.

    Built from ``Phi_n = prod_{d | n} (x^d - 1)^mu(n/d)``.
    """
    poly = np.array([1], dtype=np.int64)
    divs = [(d, _mobius(n // d)) for d in _divisors(n)]
    for d, mu in divs:
        if mu == 1:
            out = np.zeros(poly.size + d, dtype=np.int64)
            out[d:] += poly
            out[: poly.size] -= poly
            poly = out
    for d, mu in divs:
        if mu == -1:
            # P = Q * (x^d - 1)  =>  q_i = q_{i-d} - p_i
            qdeg = poly.size - 1 - d
            q = np.zeros(qdeg + 1, dtype=np.int64)
            for start in range(0, qdeg + 1, d):
                stop = min(start + d, qdeg + 1)
                prev = q[start - d : stop - d] if start >= d else 0
                q[start:stop] = prev - poly[start:stop]
            poly = q
    return tuple(int(c) for c in poly)


def _long_division(h: np.ndarray, order: int) -> np.ndarray:
    phi = np.array(cyclotomic_polynomial(order), dtype=np.int64)
    deg = phi.size - 1
    for i in range(order - 1, deg - 1, -1):
        c = h[:, i]
        if c.any():
            h[:, i - deg : i + 1] -= c[:, None] * phi
    return h[:, :deg]


@lru_cache(maxsize=64)
def _reduction_matrix(order: int) -> np.ndarray:
    """Row k holds the canonical coefficients of ``zeta**k``."""
    m = _long_division(np.eye(order, dtype=np.int64), order)
    m.setflags(write=False)
    return m


def reduce_histograms(hist: np.ndarray, order: int) -> np.ndarray:
    """Reduce rows of angle histograms modulo ``Phi_order``.

    ``hist[r, k]`` is the multiplicity of ``zeta**k`` in sum ``r``.  Returns
    the canonical coefficients (length ``deg Phi_order``) of each sum.
    Reduction is linear, so it is applied as one integer matrix product.
    """
    h = np.array(hist, dtype=np.int64, ndmin=2)
    if h.shape[1] != order:
        raise ValueError("histogram width must equal the root order")
    red = _reduction_matrix(order)
    # every partial sum is an integer below 2**53, so the BLAS product is exact
    bound = int(np.abs(h).sum(axis=1).max(initial=0)) * int(np.abs(red).max(initial=0))
    if bound < 2**53:
        return np.rint(h.astype(np.float64) @ red.astype(np.float64)).astype(np.int64)
    return h @ red


@dataclass(frozen=True)
class CyclotomicInteger:
    """Canonical element of Z[zeta_order]."""

    coeffs: tuple[int, ...]
    order: int

    @classmethod
    def from_angles(cls, angles, order: int) -> "CyclotomicInteger":
        a = np.asarray(angles, dtype=np.int64)
        hist = np.bincount(a % order, minlength=order) if a.size else np.zeros(order, np.int64)
        return cls(tuple(int(c) for c in reduce_histograms(hist, order)[0]), order)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and int(self) == other
        if isinstance(other, CyclotomicInteger):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __complex__(self):
        z = cmath.exp(2j * math.pi / self.order)
        return complex(sum(c * z**i for i, c in enumerate(self.coeffs)))


def exact_values(hist: np.ndarray, order: int) -> list[int | None]:
    """Rational value of each histogram row, or None when irrational."""
    red = reduce_histograms(hist, order)
    rational = ~red[:, 1:].any(axis=1)
    return [int(v) if ok else None for v, ok in zip(red[:, 0], rational)]


# -- group structure ---------------------------------------------------------

def _is_primitive_root(g: int, p: int) -> bool:
    n = p - 1
    for r, _ in make_modulus(n).factorization if n > 1 else ():
        if pow(g, n // r, p) == 1:
            return False
    return True


def primitive_root_prime_power(p: int, e: int) -> int:
    """Smallest primitive root mod ``p**e`` for odd prime ``p``."""
    g = next(g for g in range(2, p + 1) if _is_primitive_root(g, p)) if p > 2 else 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True, eq=False)
class UnitGroupStructure:
    modulus: Modulus
    components: tuple[tuple[int, int], ...]  # (generator mod q, order)
    exponent: int
    _moduli: tuple[int, ...] = field(repr=False)
    _tables: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.components)

    def dlog(self, u: int) -> tuple[int, ...] | None:
        """Exponent vector of ``u``; None when ``u`` is not a unit."""
        if math.gcd(u, self.modulus.q) != 1:
            return None
        return tuple(int(t[u % m]) for t, m in zip(self._tables, self._moduli))

    def dlog_array(self, n) -> np.ndarray:
        """Exponent vectors for an array of integers; rows of -1 for non-units."""
        n = np.asarray(n, dtype=np.int64)
        out = np.empty((n.size, len(self.components)), dtype=np.int64)
        for i, (t, m) in enumerate(zip(self._tables, self._moduli)):
            out[:, i] = t[n % m]
        if out.shape[1]:
            bad = (out < 0).any(axis=1)
            out[bad] = -1
        return out

    def unit_mask(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.int64)
        return np.gcd(n, self.modulus.q) == 1

    def element(self, exps) -> int:
        q = self.modulus.q
        u = 1
        for (g, _), e in zip(self.components, exps):
            u = u * pow(g, int(e), q) % q
        return u


def _crt_lift(residue: int, m: int, q: int) -> int:
    """Integer ``== residue (mod m)`` and ``== 1 (mod q/m)``."""
    rest = q // m
    if rest == 1:
        return residue % q
    t = (residue - 1) * pow(rest, -1, m) % m
    return (1 + rest * t) % q


def build_group(m: Modulus | int) -> UnitGroupStructure:
    m = make_modulus(m)
    q = m.q
    if q > MAX_GROUP_MODULUS:
        raise ResourceError(f"discrete-log tables are limited to q <= {MAX_GROUP_MODULUS}")
    comps, moduli, tables = [], [], []
    for p, e in m.factorization:
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                t = np.full(4, -1, dtype=np.int64)
                t[1], t[3] = 0, 1
                comps.append((_crt_lift(3, 4, q), 2))
                moduli.append(4)
                tables.append(t)
                continue
            sign = np.full(pe, -1, dtype=np.int64)
            sign[1::4] = 0
            sign[3::4] = 1
            half = pe >> 2
            five = np.full(pe, -1, dtype=np.int64)
            v = 1
            for k in range(half):
                five[v] = k
                five[pe - v] = k
                v = v * 5 % pe
            comps.append((_crt_lift(pe - 1, pe, q), 2))
            comps.append((_crt_lift(5, pe, q), half))
            moduli += [pe, pe]
            tables += [sign, five]
            continue
        g = primitive_root_prime_power(p, e)
        d = pe // p * (p - 1)
        t = np.full(pe, -1, dtype=np.int64)
        v = 1
        for k in range(d):
            t[v] = k
            v = v * g % pe
        comps.append((_crt_lift(g, pe, q), d))
        moduli.append(pe)
        tables.append(t)
    exponent = 1
    for _, d in comps:
        exponent = exponent * d // math.gcd(exponent, d)
    for t in tables:
        t.setflags(write=False)
    return UnitGroupStructure(m, tuple(comps), exponent, tuple(moduli), tuple(tables))


@dataclass(frozen=True, eq=False)
class Character:
    structure: UnitGroupStructure = field(repr=False)
    exponents: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.structure.modulus.q

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.q == other.q and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.q, self.exponents))

    def _weights(self) -> np.ndarray:
        L = self.structure.exponent
        return np.array(
            [e * (L // d) for e, (_, d) in zip(self.exponents, self.structure.components)],
            dtype=np.int64,
        )

    def angles(self, n) -> np.ndarray:
        """Angle numerators (over the group exponent) at each ``n``; -1 off units."""
        dl = self.structure.dlog_array(n)
        k = (dl @ self._weights()) % self.structure.exponent if dl.shape[1] else np.zeros(dl.shape[0], np.int64)
        k = np.asarray(k, dtype=np.int64)
        k[~self.structure.unit_mask(n)] = -1
        return k

    def angle(self, n: int) -> int | None:
        dl = self.structure.dlog(n)
        if dl is None:
            return None
        return int(sum(a * w for a, w in zip(dl, self._weights()))) % self.structure.exponent

    def __call__(self, n: int):
        return chi_eval(self, n)


def characters(m: Modulus | int | UnitGroupStructure) -> list[Character]:
    """All phi(q) characters, principal first."""
    g = m if isinstance(m, UnitGroupStructure) else build_group(m)
    return [Character(g, tuple(e)) for e in itertools.product(*(range(d) for d in g.orders))]


def chi_eval(c: Character, n: int):
    """``chi(n)`` as a :class:`RootOfUnity`, or 0 off the units."""
    k = c.angle(n)
    if k is None:
        return 0
    return RootOfUnity.of(k, c.structure.exponent)


def kappa_eval(c: Character, pair: tuple[int, int]):
    m, n = pair
    return chi_eval(c, (m % c.q) * (n % c.q) % c.q)


def orthogonality_pairs(c: Character, m: Modulus | None = None) -> int:
    """Sum of kappa over one representative ``(1, u)`` per class; exact."""
    units = c.structure.modulus.units()
    return int(CyclotomicInteger.from_angles(c.angles(units), c.structure.exponent))


def orthogonality_classes(
    pair: tuple[int, int],
    target: tuple[int, int],
    m: Modulus | int | UnitGroupStructure,
) -> int:
    """``sum_kappa kappa(pair) * conj(kappa(target))``; exact.

    Equals phi(q) when the two pairs have the same product label, else 0.
    """
    g = m if isinstance(m, UnitGroupStructure) else build_group(m)
    q = g.modulus.q
    for v in (*pair, *target):
        if math.gcd(v, q) != 1:
            raise AdmissibilityError(f"{v} is not a unit mod {q}")
    u = pair[0] * pair[1] % q
    w = target[0] * target[1] % q
    vectors = list(itertools.product(*(range(d) for d in g.orders)))
    exps = np.array(vectors, dtype=np.int64).reshape(len(vectors), len(g.components))
    L = g.exponent
    scale = np.array([L // d for d in g.orders], dtype=np.int64)
    diff = (np.array(g.dlog(u), dtype=np.int64) - np.array(g.dlog(w), dtype=np.int64)) * scale
    angles = (exps @ diff) % L if exps.shape[1] else np.zeros(exps.shape[0], np.int64)
    return int(CyclotomicInteger.from_angles(angles, L))


def character_table(g: UnitGroupStructure) -> tuple[list[Character], np.ndarray, np.ndarray]:
    """Characters, units, and the matrix of angles ``T[i, j] = angle of chi_i(u_j)``."""
    chars = characters(g)
    units = g.modulus.units()
    dl = g.dlog_array(units)
    exps = np.array([c.exponents for c in chars], dtype=np.int64).reshape(len(chars), -1)
    scale = np.array([g.exponent // d for d in g.orders], dtype=np.int64)
    if dl.shape[1]:
        table = (exps * scale) @ dl.T % g.exponent
    else:
        table = np.zeros((len(chars), units.size), dtype=np.int64)
    return chars, units, table


def _pairwise_exact(table: np.ndarray, order: int) -> np.ndarray:
    """``S[i, j] = sum_k zeta^(table[i, k] - table[j, k])`` exactly; None -> error."""
    n = table.shape[0]
    out = np.empty((n, n), dtype=object)
    offset = (np.arange(n, dtype=np.int64) * order)[:, None]
    for i in range(n):
        diff = (table[i][None, :] - table) % order
        hist = np.bincount((diff + offset).ravel(), minlength=n * order).reshape(n, order)
        out[i] = exact_values(hist, order)
    return out


def row_orthogonality(table: np.ndarray, order: int) -> np.ndarray:
    """Exact ``sum_u chi_i(u) conj(chi_j(u))`` for every character pair."""
    return _pairwise_exact(table, order)


def column_orthogonality(table: np.ndarray, order: int) -> np.ndarray:
    """Exact ``sum_chi chi(u_i) conj(chi(u_j))`` for every unit pair."""
    return _pairwise_exact(np.ascontiguousarray(table.T), order)
