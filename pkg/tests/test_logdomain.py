import math

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from pmleak.logdomain import (LOG_ZERO, log_add, log_binom, log_sub,
                              log_sum_exp, signed_log_sum)

finite_logs = st.floats(min_value=-300.0, max_value=300.0)


def mp_lse(values):
    """Big-float oracle: log of the exact sum of exponentials."""
    with mpmath.workdps(60):
        return float(mpmath.log(mpmath.fsum(mpmath.e ** mpmath.mpf(v) for v in values)))


def test_lse_normalized_distribution():
    assert log_sum_exp([math.log(0.25), math.log(0.75)]) == pytest.approx(0.0, abs=1e-15)


def test_lse_symmetry():
    assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2.0), abs=1e-15)


def test_lse_large_inputs_against_bigfloat():
    # inputs far beyond the float overflow threshold for exp
    assert log_sum_exp([700.0, 700.0]) == pytest.approx(700.0 + math.log(2.0), rel=1e-15)
    vals = [700.0, 100.0, 650.0, 699.5]
    assert log_sum_exp(vals) == pytest.approx(mp_lse(vals), rel=1e-13)


def test_lse_empty_rejected():
    with pytest.raises(ValueError, match="empty aggregation"):
        log_sum_exp([])


def test_lse_all_zero_mass():
    assert log_sum_exp([LOG_ZERO, LOG_ZERO]) == LOG_ZERO


@given(st.lists(finite_logs, min_size=1, max_size=30))
def test_lse_matches_bigfloat_within_span(vals):
    span = max(vals) - min(vals)
    if span <= 600.0:
        got = log_sum_exp(vals)
        want = mp_lse(vals)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@given(st.lists(finite_logs, min_size=1, max_size=20), st.randoms(use_true_random=False))
def test_lse_permutation_invariant(vals, rnd):
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    assert log_sum_exp(vals) == log_sum_exp(shuffled)


@given(st.lists(finite_logs, min_size=1, max_size=20), st.integers(0, 19),
       st.floats(min_value=0.01, max_value=10.0))
def test_lse_monotone_in_each_argument(vals, idx, bump):
    # non-strict: a bump to a term hundreds of log-units below the max is
    # invisible at float precision
    idx = idx % len(vals)
    bumped = list(vals)
    bumped[idx] += bump
    assert log_sum_exp(bumped) >= log_sum_exp(vals)
    if max(vals) - vals[idx] < 30.0:
        assert log_sum_exp(bumped) > log_sum_exp(vals)


@given(finite_logs, finite_logs)
def test_log_add_agrees_with_linear(a, b):
    want = mp_lse([a, b])
    assert log_add(a, b) == pytest.approx(want, rel=1e-13, abs=1e-13)


@given(finite_logs, finite_logs)
def test_log_sub_roundtrip(a, b):
    # cancellation destroys the roundtrip once b dwarfs a, so only test
    # within the window where a still contributes meaningfully to the sum
    assume(b - a <= 15.0)
    total = log_add(a, b)
    back = log_sub(total, b)
    assert back == pytest.approx(a, rel=1e-9, abs=1e-6)


def test_log_sub_requires_order():
    with pytest.raises(ValueError):
        log_sub(0.0, 1.0)


def test_log_sub_equal_is_zero_mass():
    assert log_sub(3.5, 3.5) == LOG_ZERO


def test_signed_log_sum_mixed_signs():
    # 2^10 * 0.5 - 1 = 511
    sign, mag = signed_log_sum([(1, 10 * math.log(2) + math.log(0.5)), (-1, 0.0)])
    assert sign == 1
    assert mag == pytest.approx(math.log(511.0), rel=1e-14)
    sign, mag = signed_log_sum([(1, 0.0), (-1, math.log(3.0))])
    assert sign == -1
    assert mag == pytest.approx(math.log(2.0), rel=1e-14)
    sign, mag = signed_log_sum([(1, 1.0), (-1, 1.0)])
    assert sign == 0 and mag == LOG_ZERO


def test_log_binom_exact_small():
    for n in range(10):
        for k in range(n + 1):
            assert log_binom(n, k) == pytest.approx(math.log(math.comb(n, k)), abs=1e-12)
