import cmath
import math
import random

import numpy as np
import pytest

from latticeprime import AdmissibilityError, ResourceError
from latticeprime.characters import (
    CyclotomicInteger,
    RootOfUnity,
    build_group,
    character_table,
    characters,
    chi_eval,
    column_orthogonality,
    cyclotomic_polynomial,
    kappa_eval,
    orthogonality_classes,
    orthogonality_pairs,
    row_orthogonality,
)
from latticeprime.residues import make_modulus


def test_root_of_unity_arithmetic():
    i = RootOfUnity.of(1, 4)
    assert i * i == RootOfUnity.of(1, 2)
    assert i * i * i * i == 1
    assert RootOfUnity.of(2, 8) == i
    assert i.conjugate() == RootOfUnity.of(3, 4)
    assert abs(complex(i) - 1j) < 1e-15
    assert i * 0 == 0


def _cyclotomic_brute(n):
    """Phi_n from its complex roots, rounded."""
    roots = [cmath.exp(2j * math.pi * k / n) for k in range(1, n + 1) if math.gcd(k, n) == 1]
    return [round(c.real) for c in np.poly(roots)[::-1]]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12, 15, 20, 30, 36, 60])
def test_cyclotomic_polynomial(n):
    assert list(cyclotomic_polynomial(n)) == _cyclotomic_brute(n)


def test_cyclotomic_105_has_minus_two():
    assert -2 in cyclotomic_polynomial(105)
    assert len(cyclotomic_polynomial(105)) - 1 == 48


def test_exact_sum_decides_zero_and_rationals():
    # 1 + zeta_3 + zeta_3^2 = 0
    assert CyclotomicInteger.from_angles([0, 1, 2], 3) == 0
    # zeta_6 + zeta_6^5 = 1
    assert CyclotomicInteger.from_angles([1, 5], 6) == 1
    # zeta_4 alone is not rational
    v = CyclotomicInteger.from_angles([1], 4)
    assert not v.is_rational()
    assert abs(complex(v) - 1j) < 1e-12


def test_group_q5():
    g = build_group(5)
    assert g.components == ((2, 4),)


def test_group_q8():
    g = build_group(8)
    assert sorted(d for _, d in g.components) == [2, 2]
    assert g.exponent == 2


def test_group_q2_trivial():
    g = build_group(2)
    assert g.components == () and g.exponent == 1
    assert len(characters(2)) == 1


def test_group_ceiling():
    with pytest.raises(ResourceError):
        build_group(10**7 + 1)


@pytest.mark.parametrize("q", list(range(2, 130)) + [256, 1000, 4096, 3 * 5 * 7 * 11 * 13])
def test_structure_invariants(q):
    g = build_group(q)
    m = make_modulus(q)
    assert math.prod(g.orders) == m.phi
    for u in m.units().tolist():
        assert g.element(g.dlog(u)) == u
    for gen, d in g.components:
        assert pow(gen, d, q) == 1
        assert all(pow(gen, d // r, q) != 1 for r in range(2, d + 1) if d % r == 0 and all(r % s for s in range(2, r)))


@pytest.mark.parametrize("q,count", [(5, 4), (2, 1), (12, 4), (7, 6), (100, 40)])
def test_character_count(q, count):
    assert len(characters(q)) == count


def test_chi_eval_examples():
    chars = characters(5)
    principal = chars[0]
    assert principal.is_principal
    assert chi_eval(principal, 3) == 1
    order4 = next(c for c in chars if c.exponents == (1,))
    assert chi_eval(order4, 2) == RootOfUnity.of(1, 4)
    for c in chars:
        assert chi_eval(c, 10) == 0
        assert chi_eval(c, 7) == chi_eval(c, 2)  # period 5


def test_kappa_properties():
    rng = random.Random(1)
    for q in range(2, 101):
        for c in characters(q):
            assert kappa_eval(c, (1, 1)) == 1
            for _ in range(3):
                m, n = rng.randrange(1, 10 * q), rng.randrange(1, 10 * q)
                v = kappa_eval(c, (m, n))
                assert v == kappa_eval(c, (n, m))
                assert v == kappa_eval(c, (m + q, n + q))
                assert (v != 0) == (math.gcd(m, q) == 1 and math.gcd(n, q) == 1)
                assert v == chi_eval(c, m) * chi_eval(c, n)


@pytest.mark.parametrize("q", range(2, 101))
def test_multiplicativity_exhaustive(q):
    g = build_group(q)
    u = g.modulus.units()
    prod = np.outer(u, u) % q
    L = g.exponent
    for c in characters(g):
        a = c.angles(u)
        assert np.array_equal(c.angles(prod.ravel()).reshape(prod.shape), (a[:, None] + a[None, :]) % L)
        # kappa((m1,n1) * (m2,n2)) = kappa((m1,n1)) kappa((m2,n2)) on random pair products
        i, j, k, l = np.random.default_rng(q).integers(0, u.size, size=(4, 20))
        lhs = c.angles((u[i] * u[k] % q) * (u[j] * u[l] % q) % q)
        rhs = (c.angles(u[i] * u[j] % q) + c.angles(u[k] * u[l] % q)) % L
        assert np.array_equal(lhs, rhs)


def test_orthogonality_pairs_examples():
    chars = characters(5)
    assert orthogonality_pairs(chars[0]) == 4
    assert all(orthogonality_pairs(c) == 0 for c in chars[1:])
    assert orthogonality_pairs(characters(2)[0]) == 1


def test_orthogonality_classes_examples():
    assert orthogonality_classes((2, 3), (1, 1), 5) == 4
    assert orthogonality_classes((2, 3), (2, 4), 5) == 0
    assert orthogonality_classes((1, 1), (1, 1), 2) == 1
    with pytest.raises(AdmissibilityError):
        orthogonality_classes((5, 1), (1, 1), 5)


def test_orthogonality_classes_only_sees_product():
    # (2, 3) and (3, 2) differ entrywise but share the label 6 mod 7
    assert orthogonality_classes((2, 3), (3, 2), 7) == 6
    assert orthogonality_classes((2, 3), (1, 6), 7) == 6


@pytest.mark.parametrize("q", [3, 5, 8, 12, 15, 16, 21, 24, 45, 63, 105, 128, 200])
def test_table_orthogonality_exact(q):
    g = build_group(q)
    chars, units, table = character_table(g)
    phi = g.modulus.phi
    want = np.where(np.eye(phi, dtype=bool), phi, 0)
    assert (row_orthogonality(table, g.exponent) == want).all()
    assert (column_orthogonality(table, g.exponent) == want).all()
    # floating embedding agrees with the exact decision
    z = np.exp(2j * np.pi * table / g.exponent)
    assert np.allclose(z @ z.conj().T, want, atol=1e-9)
    assert np.allclose(z.T @ z.conj(), want, atol=1e-9)


def test_corrupted_table_detected():
    g = build_group(7)
    _, _, table = character_table(g)
    table = table.copy()
    table[2, 3] = (table[2, 3] + 1) % g.exponent
    rows = row_orthogonality(table, g.exponent)
    assert any(v is None or v != (6 if i == j else 0) for (i, j), v in np.ndenumerate(rows))


def test_floating_agrees_with_exact_sums():
    for q in (9, 20, 33):
        g = build_group(q)
        for c in characters(g):
            exact = orthogonality_pairs(c)
            approx = sum(complex(chi_eval(c, u)) for u in g.modulus.units().tolist())
            assert abs(approx - exact) < 1e-9
