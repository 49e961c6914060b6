import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracedist.predictions import (
    Bipartition,
    ChargeModel,
    charge_general_trace_distance,
    charge_half_partition_closed,
    charge_half_partition_q0_limit,
    charge_q0_branches,
    charge_q0_trace_distance,
    discrimination_probability,
    log_spectral_weight,
    page_moment_trace_rho_n,
    page_trace_distance,
    page_trace_distance_from_ratio,
    schatten_n_distance_page_average,
    schatten_n_page_average,
    spectral_density,
)

from oracles import half_partition_integral, page_trace_distance_mp

HALF = (4 + math.pi) / (4 * math.pi)

partitions = st.integers(1, 60).flatmap(lambda n: st.builds(Bipartition, st.just(n), st.integers(0, n)))
interior = st.integers(2, 60).flatmap(lambda n: st.builds(Bipartition, st.just(n), st.integers(1, n - 1)))


def test_bipartition_fields():
    p = Bipartition(10, 3)
    assert (p.n_a, p.d_a, p.d_b, p.d) == (7, 128, 8, 1024)
    assert p.x == 8.0 and p.f == 0.3
    with pytest.raises(ValueError):
        Bipartition(4, 5)
    with pytest.raises(ValueError):
        Bipartition(0, 0)


def test_page_known_values():
    assert page_trace_distance(Bipartition(10, 1)) == pytest.approx(1 - 1 / 512, abs=1e-15)
    assert page_trace_distance(Bipartition(10, 5)) == pytest.approx(HALF, abs=1e-12)
    # N_A = N_B + 1 gives x = 1, where both branches meet at 3/4
    assert page_trace_distance(Bipartition(9, 4)) == 0.75
    assert page_trace_distance_from_ratio(1 - 1e-15) == pytest.approx(0.75, abs=1e-9)


@given(st.floats(1e-6, 4.0))
def test_page_matches_mpmath(x):
    assert page_trace_distance_from_ratio(x) == pytest.approx(page_trace_distance_mp(x), rel=1e-11)


@given(partitions)
def test_page_depends_only_on_ratio(p):
    v = page_trace_distance(p)
    assert 0 <= v <= 1
    shifted = Bipartition(p.n_total + 2, p.n_b + 1)
    assert page_trace_distance(shifted) == pytest.approx(v, abs=1e-13)


@given(st.integers(2, 40))
def test_page_decreases_with_traced_block(n):
    vals = [page_trace_distance(Bipartition(n, nb)) for nb in range(n + 1)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_page_small_ratio_asymptote():
    # x -> 0: 8 sqrt(x) / (3 pi)
    x = 1e-10
    assert page_trace_distance_from_ratio(x) == pytest.approx(8 * math.sqrt(x) / (3 * math.pi), rel=1e-9)
    with pytest.raises(ValueError):
        page_trace_distance_from_ratio(0.0)


def test_discrimination_probability():
    assert discrimination_probability(HALF) == pytest.approx((5 * math.pi + 4) / (8 * math.pi), abs=1e-12)
    assert discrimination_probability(0) == 0.5 and discrimination_probability(1) == 1
    with pytest.raises(ValueError):
        discrimination_probability(1.5)


def test_spectral_weights():
    q = np.linspace(-30, 30, 20001)
    assert np.trapezoid(spectral_density(q, 16, 0.5), q) == pytest.approx(1, abs=1e-10)
    assert log_spectral_weight(0.0, 16, 0.5) == pytest.approx(16 * math.log(2) + math.log(spectral_density(0.0, 16, 0.5)))


def test_moment_two_is_exact_value():
    p = Bipartition(4, 2)
    assert schatten_n_page_average(2, p) == pytest.approx(2 / p.d_b)
    assert schatten_n_distance_page_average(2, p) == pytest.approx(1 / p.d_b)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 5))
def test_moment_formula_exact_fraction(na, nb, h):
    n = 2 * h
    p = Bipartition(na + nb, nb)
    # n/2 choose k weights from the closed even count, summed directly
    total = sum(
        2**k * Fraction(2 * math.comb(h, k) * math.comb(n, k - 1), n) * p.d_a ** (n - k + 1) * p.d_b**k
        for k in range(1, h + 1)
    )
    assert schatten_n_page_average(n, p) == pytest.approx(float(total / p.d**n), rel=1e-14)


def test_moment_domain():
    with pytest.raises(ValueError):
        schatten_n_page_average(3, Bipartition(4, 2))
    with pytest.raises(ValueError):
        page_moment_trace_rho_n(0, Bipartition(4, 2))


def test_purity_leading_order():
    p = Bipartition(6, 2)
    assert page_moment_trace_rho_n(2, p) == pytest.approx((p.d_a + p.d_b) / p.d)
    assert page_moment_trace_rho_n(1, p) == pytest.approx(1.0)


def test_charge_q0_half_partition_equals_page():
    for n in (2, 4, 10, 20, 50):
        assert charge_q0_trace_distance(Bipartition(n, n // 2)) == pytest.approx(HALF, abs=1e-12)


@given(interior)
def test_charge_q0_ordering_against_page(p):
    q0, page = charge_q0_trace_distance(p), page_trace_distance(p)
    assert 0 <= q0 <= 1
    if 2 * p.n_b < p.n_total:
        assert q0 <= page + 1e-15
    elif 2 * p.n_b > p.n_total:
        assert q0 >= page - 1e-15


def test_charge_q0_known_value():
    # N=10, N_B=1: x = 2^7, f = 1/10
    assert charge_q0_trace_distance(Bipartition(10, 1)) == pytest.approx(1 - 1 / (4 * 128 * math.sqrt(0.2)), abs=1e-12)


def test_charge_q0_branches_meet_only_at_half():
    large, small = charge_q0_branches(1.0, 0.5)
    assert large == pytest.approx(small, abs=1e-9) == pytest.approx(0.75)
    large, small = charge_q0_branches(1.0 / math.sqrt(0.6 / 0.4), 0.6)
    assert abs(large - small) > 1e-3
    assert charge_q0_branches(0.5, 0.3)[1] is None


def test_charge_formulas_reject_trivial_cuts():
    with pytest.raises(ValueError):
        charge_q0_trace_distance(Bipartition(6, 0))
    with pytest.raises(ValueError):
        charge_general_trace_distance(Bipartition(6, 6), ChargeModel(0.5))
    with pytest.raises(ValueError):
        ChargeModel(0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 9.0))
def test_half_partition_closed_form_matches_quadrature(q):
    n, g = 20, 0.5
    assert charge_half_partition_closed(n, ChargeModel(g, q)) == pytest.approx(half_partition_integral(n, g, q), abs=1e-7)


def test_half_partition_closed_form_limits():
    cm = lambda q: ChargeModel(0.5, q)  # noqa: E731
    assert charge_half_partition_closed(20, cm(1e-4)) == pytest.approx(charge_half_partition_q0_limit(), abs=1e-4)
    assert charge_half_partition_q0_limit() == pytest.approx(HALF, abs=1e-12)
    assert charge_half_partition_closed(20, cm(-2.0)) == charge_half_partition_closed(20, cm(2.0))
    with pytest.raises(ValueError):
        charge_half_partition_closed(20, cm(0.0))
    with pytest.raises(ValueError):
        charge_half_partition_closed(21, cm(1.0))


def test_general_sum_at_peak_matches_q0_formula():
    v = charge_general_trace_distance(Bipartition(20, 10), ChargeModel(0.5, 0.0))
    assert v == pytest.approx(HALF, abs=1e-3)


@given(st.floats(0.0, 8.0))
@settings(max_examples=25, deadline=None)
def test_general_sum_is_a_weighted_average(q):
    v = charge_general_trace_distance(Bipartition(12, 4), ChargeModel(0.5, q), spacing=0.05)
    assert 0 <= v <= 1


def test_general_sum_small_subsystem_asymptotics():
    # a single traced qubit: 1 - D1 grows by exp(Q^2 / (2 gamma^2 N)) relative to Q = 0
    n, g = 20, 0.5
    p = Bipartition(n, 1)
    q = 2 * g * math.sqrt(n)
    base = 1 - charge_general_trace_distance(p, ChargeModel(g, 0.0), spacing=0.02)
    shifted = 1 - charge_general_trace_distance(p, ChargeModel(g, q), spacing=0.02)
    assert shifted / base == pytest.approx(math.exp(q * q / (2 * g * g * n)), rel=1e-3)
