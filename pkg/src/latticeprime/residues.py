"""Unit-group arithmetic mod q and the coset lattice classes.

Two unit pairs ``(n1, n2)`` and ``(m1, m2)`` are equivalent when
``n1*n2 == m1*m2 (mod q)``; a class is therefore determined by its product
label ``c = n1*n2 mod q`` and there is one class per unit ``c``.

Euler's totient (``phi``) and the number of classes reachable by a gap-z
pair (``AdmissibleClassSet.admissible_count``) are different quantities and
are never used interchangeably here.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, ArgumentError

MAX_MODULUS = 10**9


@dataclass(frozen=True)
class Modulus:
    q: int
    factorization: tuple[tuple[int, int], ...]
    phi: int

    def units(self) -> np.ndarray:
        r = np.arange(self.q, dtype=np.int64)
        return r[np.gcd(r, self.q) == 1]

    def is_unit(self, n: int) -> bool:
        return math.gcd(n, self.q) == 1

    def __int__(self):
        return self.q


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def make_modulus(q: int) -> Modulus:
    if isinstance(q, Modulus):
        return q
    q = int(q)
    if q < 2 or q > MAX_MODULUS:
        raise ArgumentError(f"modulus must lie in [2, {MAX_MODULUS}], got {q}")
    fac = factorize(q)
    phi = 1
    for p, e in fac:
        phi *= p ** (e - 1) * (p - 1)
    return Modulus(q, fac, phi)


def class_label(pair: tuple[int, int], m: Modulus) -> int:
    """Product label ``n1*n2 mod q`` of a unit pair."""
    n1, n2 = pair
    if math.gcd(n1, m.q) != 1 or math.gcd(n2, m.q) != 1:
        raise AdmissibilityError(f"{pair} is not a pair of units mod {m.q}")
    return (n1 % m.q) * (n2 % m.q) % m.q


@dataclass(frozen=True)
class ClassDescriptor:
    label: int
    representative: tuple[int, int]
    ordered_members: int
    unordered_distinct_members: int
    diagonal_members: int


@dataclass(frozen=True)
class LatticeClassTable:
    modulus: Modulus
    classes: dict[int, ClassDescriptor] = field(repr=False)

    @property
    def labels(self) -> list[int]:
        return sorted(self.classes)

    def __len__(self):
        return len(self.classes)

    def label_of(self, pair: tuple[int, int]) -> int:
        return class_label(pair, self.modulus)

    def contains(self, label: int, pair: tuple[int, int]) -> bool:
        try:
            return class_label(pair, self.modulus) == label
        except AdmissibilityError:
            return False


def build_classes(m: Modulus) -> LatticeClassTable:
    """One class per unit label.

    Each label ``c`` has ``phi`` ordered members ``(a, c/a)``; the canonical
    representative is the lexicographically smallest ``(a, b)`` with
    ``a <= b < q``, which is always ``(1, c)`` since ``a = 1`` is a unit.
    Diagonal members ``(a, a)`` count the square roots of ``c``.
    """
    units = m.units()
    squares = Counter(((units * units) % m.q).tolist())
    classes = {}
    for c in units.tolist():
        diag = squares.get(c, 0)
        classes[c] = ClassDescriptor(
            label=c,
            representative=(1, c),
            ordered_members=m.phi,
            unordered_distinct_members=(m.phi - diag) // 2,
            diagonal_members=diag,
        )
    return LatticeClassTable(m, classes)


def omega(m: Modulus) -> int:
    """Unordered pairs of distinct units, phi(q)(phi(q)-1)/2."""
    return m.phi * (m.phi - 1) // 2


def class_size_bound(m: Modulus) -> int:
    """ceil((phi(q) - 1) / 2): cap on unordered distinct pairs in one class."""
    return -(-(m.phi - 1) // 2)


@dataclass(frozen=True)
class AdmissibleClassSet:
    gap: int
    modulus: Modulus
    multiplicity: dict[int, int]

    @property
    def labels(self) -> list[int]:
        return sorted(self.multiplicity)

    @property
    def admissible_count(self) -> int:
        return len(self.multiplicity)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicity.values())

    def __contains__(self, label):
        return label in self.multiplicity


def admissible_classes(z: int, m: Modulus) -> AdmissibleClassSet:
    """Labels ``a(a+z) mod q`` over residues ``a`` with ``a`` and ``a+z`` units."""
    if z < 1:
        raise ArgumentError(f"gap must be positive, got {z}")
    a = np.arange(m.q, dtype=np.int64)
    b = (a + z) % m.q
    ok = (np.gcd(a, m.q) == 1) & (np.gcd(b, m.q) == 1)
    if m.q < 3_037_000_499:
        labels = (a[ok] * b[ok]) % m.q
    else:
        labels = np.array([int(u) * int(v) % m.q for u, v in zip(a[ok], b[ok])])
    vals, counts = np.unique(labels, return_counts=True)
    return AdmissibleClassSet(z, m, dict(zip(vals.tolist(), counts.tolist())))
