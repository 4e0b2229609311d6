import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from randlen import columns as col
from randlen.lengths import (
    LengthLaw,
    RandomD,
    empirical_regime_ratio,
    lengths_from_uniform,
    sample_d,
    sample_lengths,
)
from randlen.rv_core import SlowlyVarying, ThresholdRule


def test_inverse_transform_by_hand():
    assert lengths_from_uniform(LengthLaw(1.0), [0.01])[0] == 100


def test_min_value_clamp():
    assert lengths_from_uniform(LengthLaw(2.0, min_value=5), [1.0 - 1e-12])[0] == 5


def test_alpha_must_be_finite_positive():
    with pytest.raises(ValueError):
        LengthLaw(math.inf)
    with pytest.raises(ValueError):
        LengthLaw(0.0)
    with pytest.raises(ValueError, match="constant"):
        LengthLaw(2.0, SlowlyVarying.log_power(1.0, 1.0))


@given(alpha=st.floats(0.3, 10.0), c=st.floats(0.2, 5.0), j=st.integers(1, 10**6))
def test_exact_integer_tail(alpha, c, j):
    """P(N > j) equals the measure of {U < c j^-alpha} for the inverse transform."""
    law = LengthLaw(alpha, SlowlyVarying.constant(c))
    p = min(1.0, c * j ** (-alpha))
    assert law.tail(j) == pytest.approx(p, rel=1e-12)
    # U just below / above the boundary lands on either side of j
    if 1e-300 < p < 1.0:
        assert lengths_from_uniform(law, [p * (1 - 1e-9)])[0] > j
        assert lengths_from_uniform(law, [min(1.0, p * (1 + 1e-9))])[0] <= j


def test_empirical_tail_alpha_two():
    n = sample_lengths(LengthLaw(2.0), 1_000_000, seed=1)
    assert np.mean(n > 10) * 100 == pytest.approx(1.0, abs=0.03)
    assert n.min() >= 2  # P(N > 1) = 1


@given(a1=st.floats(0.5, 5.0), da=st.floats(0.01, 5.0), seed=st.integers(0, 2**32))
def test_larger_alpha_is_stochastically_smaller(a1, da, seed):
    u = 1.0 - np.random.default_rng(seed).random(200)
    assert np.all(lengths_from_uniform(LengthLaw(a1 + da), u) <= lengths_from_uniform(LengthLaw(a1), u))


def test_sample_lengths_deterministic():
    law = LengthLaw(1.5)
    np.testing.assert_array_equal(sample_lengths(law, 100, 3), sample_lengths(law, 100, 3))


def test_random_d_constant_case():
    assert sample_d(RandomD((3,), (1.0,), 5), seed=0) == 3


def test_random_d_frequencies():
    rd = RandomD((2, 3), (0.5, 0.5), 4)
    rng = np.random.default_rng(5)
    draws = np.array([sample_d(rd, rng) for _ in range(100_000)])
    assert np.mean(draws == 2) == pytest.approx(0.5, abs=0.01)


def test_random_d_bound():
    with pytest.raises(ValueError, match="below"):
        RandomD((5,), (1.0,), 4).check_bound(10)
    with pytest.raises(ValueError, match="below"):
        RandomD((3,), (1.0,), 10).check_bound(3)
    RandomD((2, 3), (0.5, 0.5), 4).check_bound(6)


def test_random_d_validation():
    with pytest.raises(ValueError):
        RandomD((2, 3), (0.5, 0.6), 4)
    with pytest.raises(ValueError):
        RandomD((2,), (1.0,), 1)


def test_random_d_independent_of_array():
    """d and the array use disjoint seed streams: no correlation."""
    from randlen import _seeding

    rd = RandomD((1, 2), (0.5, 0.5), 4)
    m = col.ArrayModel(col.SeriesProfile(1, 1.0, 3.0), (col.frechet_column(1.0),) * 2, col.frechet_column(3.0))
    ds, stats = [], []
    for r in range(400):
        ds.append(sample_d(rd, _seeding.rng_for(77, _seeding.RANDOM_D, r, 0)))
        stats.append(np.log(col.sample_array(m, 50, 2, seed=77, replication=r)[:, 0]).mean())
    corr = np.corrcoef(ds, stats)[0, 1]
    assert abs(corr) < 4 / np.sqrt(400)


def test_regime_ratio_term_dominant_example():
    law = LengthLaw(4.0)
    rule = ThresholdRule(1.0, 1.0)
    r = empirical_regime_ratio(law, rule, 1.0, 10**4, 0.3)
    # exact with l_n = floor(10^1.2) = 15: 15^-4 / 10^-4
    assert r == pytest.approx(15.0**-4 / 1e-4, rel=1e-12)
    # the unfloored exponent arithmetic gives n^(1 - alpha chi) = 10^-0.8
    assert r == pytest.approx(10**-0.8, rel=0.3)


def test_regime_ratio_balanced_tends_to_one():
    law, rule = LengthLaw(5.0), ThresholdRule(1.0, 1.0)
    ns = [10**5, 10**10, 10**15]
    r = [empirical_regime_ratio(law, rule, 1.0, n, 0.2) for n in ns]
    assert r[0] == pytest.approx(1.0, abs=1e-9)  # l_n = 10 exactly
    assert all(0.5 < v < 1.5 for v in r)


def test_regime_ratio_at_n_one():
    r = empirical_regime_ratio(LengthLaw(2.0), ThresholdRule(1.0, 1.0), 1.0, 1, 0.5, margin="frechet")
    assert np.isfinite(r) and r > 0
