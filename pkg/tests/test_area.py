import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticeprime import ArgumentError, HypothesisError, PreconditionError
from latticeprime.area import (
    SequencePair,
    brun_check,
    correlation_ledger,
    empirical_area_constant,
    psi_z,
    singular_series,
    theta_z,
    triangle_identity_sides,
    twin_prime_partial,
    verify_decomposition,
    verify_triangle_identity,
)
from latticeprime.sieve import build_table, von_mangoldt

L2, L3, L5, L7, L11 = (math.log(p) for p in (2, 3, 5, 7, 11))


def test_triangle_examples():
    s = SequencePair((1.0, 2.0), (2.0, 4.0))
    lhs, rhs, _ = triangle_identity_sides(s)
    assert (lhs, rhs) == (8.0, 8.0)
    assert verify_triangle_identity(s) == 0.0
    for c in (0.0, 1.0, -3.5):
        assert verify_triangle_identity(SequencePair((c,), (c,))) == 0.0
    s = SequencePair((1.0, 1.0, 1.0), (1.0, 1.0, 1.0))
    assert triangle_identity_sides(s)[:2] == (2.0, 2.0)


def test_triangle_rejects_inadmissible():
    with pytest.raises(PreconditionError):
        verify_triangle_identity(SequencePair((1.0, 0.0), (0.0, 1.0)))
    with pytest.raises(PreconditionError):
        verify_triangle_identity(SequencePair((1.0, -1.0), (1.0, -1.0)))


def _parallel_pair(draw_lengths, angle):
    return SequencePair(
        tuple(v * math.cos(angle) for v in draw_lengths),
        tuple(v * math.sin(angle) for v in draw_lengths),
    )


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(0.0, 100.0), min_size=1, max_size=50),
    st.floats(0.0, math.pi / 2),
)
def test_triangle_identity_random(lengths, angle):
    s = _parallel_pair(lengths, angle)
    assert s.admissible
    _, _, scale = triangle_identity_sides(s)
    assert verify_triangle_identity(s) <= 1e-9 * max(scale, 1.0)


def _double_loop(vals):
    x = len(vals)
    return sum(vals[n - 1] * vals[n + j - 1] for n in range(1, x) for j in range(1, x - n + 1))


def test_decomposition_examples():
    assert verify_decomposition(lambda n: n, 4) == (35, 35)
    assert verify_decomposition(lambda n: 0, 7) == (0, 0)
    assert verify_decomposition(lambda n: 1, 5) == (10, 10)
    with pytest.raises(ArgumentError):
        verify_decomposition(lambda n: 1, 1)


def test_decomposition_random_against_double_loop():
    rng = random.Random(7)
    for _ in range(200):
        x = rng.randint(2, 300)
        vals = [rng.randint(-(10**12), 10**12) for _ in range(x)]
        lhs, rhs = verify_decomposition(vals, x)
        assert lhs == rhs
        if x <= 60:
            assert lhs == _double_loop(vals)


def test_decomposition_big_integers():
    vals = [10**30 + n for n in range(50)]
    lhs, rhs = verify_decomposition(vals, 50)
    assert lhs == rhs == _double_loop(vals)


def test_psi_z_hand_values():
    t = build_table(100)
    want = L2 * L2 + L3 * L5 + L5 * L7 + L7 * L3 + L3 * L11
    assert psi_z(10, 2, t) == pytest.approx(want, rel=1e-14)
    assert psi_z(10, 2, t) == pytest.approx(10.152, abs=1e-3)
    # n = 2 (9 = 3^2), n = 4 (11) and n = 9 (16 = 2^4)
    assert psi_z(10, 7, t) == pytest.approx(L2 * L3 + L2 * L11 + L3 * L2, rel=1e-14)
    assert psi_z(1, 2, t) == 0.0


def test_psi_z_matches_pointwise_loop():
    t = build_table(5000)
    for z in (1, 2, 4, 6, 7, 12):
        x = 5000 - z
        direct = math.fsum(von_mangoldt(n, t) * von_mangoldt(n + z, t) for n in range(1, x + 1))
        assert psi_z(x, z, t) == pytest.approx(direct, rel=1e-12)


def test_psi_z_matches_dense_route_1e5(table_1e6):
    x = 10**5
    dense = np.zeros(x + 40)
    for p in table_1e6.primes(x + 39).tolist():
        pk = p
        while pk < dense.size:
            dense[pk] = math.log(p)
            pk *= p
    for z in (2, 4, 6, 30):
        direct = math.fsum(dense[1 : x + 1] * dense[1 + z : x + 1 + z])
        assert psi_z(x, z, table_1e6) == pytest.approx(direct, rel=1e-9)


def test_theta_z_counts_only_primes():
    t = build_table(100)
    # (3, 5) and (5, 7); 9 is a prime power but not prime
    assert theta_z(10, 2, t) == pytest.approx(L3 * L5 + L5 * L7, rel=1e-14)


def test_area_constant_synthetic():
    ones = np.ones(10)
    led = correlation_ledger(5, 2, ones)
    assert (led.corr, led.bilinear, led.full_double) == (5.0, 10.0, 10.0)
    assert empirical_area_constant(5, 2, ones) == pytest.approx(0.4)


def test_area_constant_theta(table_1e6):
    c = empirical_area_constant(10**4, 2, "theta", table_1e6)
    assert 0 < c < math.inf
    with pytest.raises(HypothesisError):
        empirical_area_constant(2, 2, "theta", build_table(6))
    assert empirical_area_constant(4, 2, "theta", build_table(6)) > 0


def test_area_constant_ledger_matches_explicit(table_1e6):
    x, z = 3000, 2
    dense = np.zeros(x + z + 1)
    p = table_1e6.primes(x + z)
    dense[p] = np.log(p)
    led = correlation_ledger(x, z, "theta", table_1e6)
    ref = correlation_ledger(x, z, dense[1:])
    assert led.corr == pytest.approx(ref.corr, rel=1e-12)
    assert led.bilinear == pytest.approx(ref.bilinear, rel=1e-12)


def _pi2_direct(cutoff, t):
    prod = 1.0
    for p in t.primes(cutoff)[1:].tolist():
        prod *= 1.0 - 1.0 / (p - 1) ** 2
    return prod


@pytest.mark.slow
def test_singular_series_values(table_1e7):
    s2 = singular_series(2, 10**7, table_1e7)
    assert s2.value == pytest.approx(1.3203236, abs=1e-6)
    assert 0.66016 <= s2.pi2_partial <= 0.66017
    # independent route: plain sequential product; the tail beyond P is below 1/(P log P)
    assert s2.pi2_partial == pytest.approx(_pi2_direct(10**7, table_1e7), rel=1e-10)
    assert singular_series(4, 10**7, table_1e7).value == s2.value
    assert singular_series(6, 10**7, table_1e7).value == pytest.approx(2 * s2.value, rel=1e-15)
    assert singular_series(6, 10**7, table_1e7).value == pytest.approx(2.6406472, abs=1e-6)
    assert singular_series(30, 10**7, table_1e7).value == pytest.approx(s2.value * 2 * 4 / 3, rel=1e-15)


@pytest.mark.slow
def test_singular_series_convergence(table_1e7):
    a = singular_series(2, 10**6, table_1e7)
    b = singular_series(2, 10**7, table_1e7)
    assert abs(a.value - b.value) <= 1e-5
    assert 0.66016 <= a.pi2_partial <= 0.66017
    parts = [twin_prime_partial(c, table_1e7) for c in (100, 1000, 10**4, 10**5, 10**6)]
    assert all(u > v for u, v in zip(parts, parts[1:]))


def test_singular_series_rejects():
    with pytest.raises(ArgumentError):
        singular_series(3, 1000)
    with pytest.raises(ArgumentError):
        singular_series(2, 50)


def test_singular_bounded_below(table_1e6):
    for z in range(2, 200, 2):
        s = singular_series(z, 10**6, table_1e6)
        assert s.value >= 2 * s.pi2_partial


def test_brun_check(table_1e6):
    (row,) = brun_check(2, [10**6], table_1e6)
    assert row.pairs == 8169
    assert row.ratio == pytest.approx(8169 * math.log(1e6) ** 2 / 1e6, rel=1e-12)
    assert row.ratio == pytest.approx(1.559, abs=1e-3)
    (row,) = brun_check(99, [100], table_1e6)
    assert row.pairs == 0 and row.ratio == 0.0
    with pytest.raises(ArgumentError):
        brun_check(2, [50], table_1e6)
