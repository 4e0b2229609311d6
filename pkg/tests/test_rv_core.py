import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from randlen.rv_core import (
    Regime,
    SlowlyVarying,
    TailSpec,
    ThresholdRule,
    check_t5_conditions,
    chi_is_admissible,
    chi_upper,
    classify_regime,
    debruijn_conjugate,
    length_scale,
    marginal_tail,
    theta_weighted,
    threshold_u,
    weighted_tau,
)

pos_real = st.floats(0.05, 20.0, allow_nan=False)


# -- de Bruijn conjugates ----------------------------------------------------

def test_conjugate_of_one_is_one():
    assert debruijn_conjugate(SlowlyVarying.constant(1)) == SlowlyVarying.constant(1)


def test_conjugate_of_constant_four():
    sharp = debruijn_conjugate(SlowlyVarying.constant(4))
    assert sharp == SlowlyVarying.constant(0.25)
    assert sharp(10.0) * SlowlyVarying.constant(4)(10.0 * sharp(10.0)) == 1.0


def test_log_power_conjugate_defining_limit_drift_shrinks():
    ell = SlowlyVarying.log_power(1.0, 2.0)
    sharp = debruijn_conjugate(ell)
    assert sharp == SlowlyVarying.log_power(1.0, -2.0)
    # the product is (1 - 2 ln ln x / ln x)^2: it tends to 1, slowly
    xs = (1e6, 1e9, 1e15, 1e30, 1e100)
    drift = [abs(sharp(x) * ell(x * sharp(x)) - 1.0) for x in xs]
    assert all(a > b for a, b in zip(drift, drift[1:]))
    assert drift[-1] < 0.1


@given(c=st.floats(0.01, 100.0), beta=st.floats(-3.0, 3.0))
def test_conjugate_is_an_involution(c, beta):
    for ell in (SlowlyVarying.constant(c), SlowlyVarying.log_power(c, beta)):
        back = debruijn_conjugate(debruijn_conjugate(ell))
        assert back.kind == ell.kind
        assert math.isclose(back.c, ell.c, rel_tol=1e-15)
        assert back.beta == ell.beta


def test_slowly_varying_rejects_bad_input():
    with pytest.raises(ValueError):
        SlowlyVarying.constant(0.0)
    with pytest.raises(ValueError):
        SlowlyVarying.log_power(1.0, 1.0)(2.0)


@given(c=st.floats(0.1, 50.0), beta=st.floats(-2.0, 4.0), A=st.floats(1.01, 10.0),
       delta=st.floats(0.01, 1.0))
def test_uniform_bound_holds_past_x0(c, beta, A, delta):
    ell = SlowlyVarying.log_power(c, beta)
    x0 = ell.uniform_bound_x0(A, delta)
    assume(math.isfinite(x0))
    xs = x0 * np.array([1.0 + 1e-9, 1.5, 10.0, 1e3, 1e8])
    xs = xs[np.isfinite(xs) & (xs > math.e)]
    lhs = ell(xs)
    rhs = A * xs**delta
    assert np.all(lhs <= rhs * (1 + 1e-9))


# -- marginal tails ------------------------------------------------------------

@pytest.mark.parametrize(
    "k, c, x, expected",
    [(1, 1, 10, 0.1), (2, 1, 1, 1.0), (2, 4, 10, 0.04)],
)
def test_marginal_tail_examples(k, c, x, expected):
    assert marginal_tail(TailSpec(k, SlowlyVarying.constant(c)), x) == pytest.approx(expected, rel=1e-15)


def test_marginal_tail_refuses_below_validity_point():
    with pytest.raises(ValueError):
        marginal_tail(TailSpec(1.0, SlowlyVarying.log_power(1.0, 1.0)), 2.0)


@given(k=st.floats(0.3, 6.0), c=st.floats(0.1, 10.0), beta=st.floats(-2.0, 2.0))
def test_tail_is_proper_and_nonincreasing_above_x_min(k, c, beta):
    spec = TailSpec(k, SlowlyVarying.log_power(c, beta))
    x = spec.x_min * np.geomspace(1.0, 1e6, 50)
    s = marginal_tail(spec, x)
    assert np.all((s > 0) & (s <= 1))
    assert np.all(np.diff(s) <= 1e-15)


# -- thresholds and scales -----------------------------------------------------

@pytest.mark.parametrize(
    "n, y, k1, c, expected",
    [(1, 1, 1, 1, 1.0), (100, 2, 2, 1, 20.0), (100, 1, 1, 3, 300.0)],
)
def test_threshold_examples(n, y, k1, c, expected):
    assert threshold_u(n, ThresholdRule(y, k1, SlowlyVarying.constant(c))) == pytest.approx(expected, rel=1e-15)


@given(n=st.integers(1, 10**9), y=st.floats(0.1, 5.0), k1=st.floats(0.5, 4.0), c=st.floats(0.1, 10.0))
def test_threshold_normalises_the_tail(n, y, k1, c):
    rule = ThresholdRule(y, k1, SlowlyVarying.constant(c))
    spec = TailSpec(k1, SlowlyVarying.constant(c))
    u = threshold_u(n, rule)
    assume(u > spec.x_min)
    assert n * marginal_tail(spec, u) == pytest.approx(y ** (-k1), rel=1e-9)


def test_log_power_threshold_normalises_asymptotically():
    ell1 = SlowlyVarying.log_power(2.0, 1.0)
    spec = TailSpec(1.0, ell1)
    rule = ThresholdRule(1.0, 1.0, ell1)
    err = [abs(n * marginal_tail(spec, threshold_u(n, rule)) - 1) for n in (10**4, 10**8, 10**16)]
    assert err[0] > err[1] > err[2]


@pytest.mark.parametrize("k1, k, expected", [(1, 2, Fraction(1, 3)), (1, 9, Fraction(4, 5))])
def test_chi_upper_examples(k1, k, expected):
    assert chi_upper(k1, k) == float(expected)


def test_chi_upper_needs_k1_below_k():
    with pytest.raises(ValueError, match="degenerate"):
        chi_upper(2, 2)


@given(k1=st.integers(1, 20), k=st.integers(2, 40), dk=st.integers(1, 10))
def test_chi_upper_monotone(k1, k, dk):
    assume(k1 < k)
    assert chi_upper(k1, k + dk) > chi_upper(k1, k)
    if k1 + dk < k:
        assert chi_upper(k1 + dk, k) < chi_upper(k1, k)


@pytest.mark.parametrize("n, chi, expected", [(1000, 1 / 3, 9), (1, 0.7, 1), (10**5, 0.2, 10)])
def test_length_scale_examples(n, chi, expected):
    assert length_scale(n, chi) == expected


def test_chi_admissibility():
    assert chi_is_admissible(0.2, 1, 3)
    assert not chi_is_admissible(0.5, 1, 3)
    assert not chi_is_admissible("1/2", 1, 3)


# -- weighted extremal index ---------------------------------------------------

@pytest.mark.parametrize(
    "thetas, z, expected",
    [((0.6, 0.6), (1, 7), 0.6), ((0.5, 1.0), (1, 1), 0.75), ((0.5, 1.0), (2, 1), 2 / 3),
     ((0.3, 0.8), (1, 2), 1.9 / 3)],
)
def test_theta_weighted_examples(thetas, z, expected):
    assert theta_weighted(thetas, z, 1) == expected


@given(
    thetas=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=6),
    data=st.data(),
    lam=st.floats(1e-3, 1e3),
    k1=st.floats(0.2, 4.0),
)
def test_theta_weighted_scale_invariant_and_bounded(thetas, data, lam, k1):
    z = data.draw(st.lists(st.floats(0.1, 10.0), min_size=len(thetas), max_size=len(thetas)))
    a = theta_weighted(thetas, z, k1)
    b = theta_weighted(thetas, [lam * w for w in z], k1)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-12)
    assert min(thetas) - 1e-12 <= a <= max(thetas) + 1e-12


def test_theta_weighted_validation():
    with pytest.raises(ValueError):
        theta_weighted((0.5,), (1, 2), 1)
    with pytest.raises(ValueError):
        theta_weighted((0.5, 1.2), (1, 2), 1)
    with pytest.raises(ValueError):
        theta_weighted((0.5, 0.7), (1, 0), 1)


def test_weighted_tau():
    assert weighted_tau([1, 2], 2, 1) == 1.5


# -- regimes -------------------------------------------------------------------

@pytest.mark.parametrize(
    "alpha, chi, label",
    [(4, 0.3, Regime.TERM_DOMINANT), (2, 0.3, Regime.LENGTH_DOMINANT), (5, 0.2, Regime.BALANCED),
     (5, "1/5", Regime.BALANCED), (3, 1 / 3, Regime.BALANCED), (3, Fraction(1, 3), Regime.BALANCED)],
)
def test_classify_regime_examples(alpha, chi, label):
    assert classify_regime(alpha, chi) == label


def test_exact_rationals_are_not_rounded():
    # 3 * (1/3 + 1e-15) differs from 1 exactly, but floats within 1e-12 count as equal
    assert classify_regime(3, Fraction(1, 3) + Fraction(1, 10**15)) == Regime.TERM_DOMINANT
    assert classify_regime(3.0, 1 / 3 + 1e-15) == Regime.BALANCED


@given(alpha=pos_real, chi=pos_real)
def test_classify_regime_trichotomy(alpha, chi):
    label = classify_regime(alpha, chi)
    assert label in set(Regime)
    p = alpha * chi
    if p > 1 + 1e-9:
        assert label == Regime.TERM_DOMINANT
    elif p < 1 - 1e-9:
        assert label == Regime.LENGTH_DOMINANT


@pytest.mark.parametrize(
    "alpha, chi, k1, k, delta, expected",
    [(4, "1/5", 1, 9, "1/2", (True, True)), (4, "1/5", 1, 9, "3/5", (False, True)),
     (1, "3/10", 1, 2, "1/10", (False, False)), (4, 0.2, 1, 9, 0.5, (True, True))],
)
def test_t5_conditions_examples(alpha, chi, k1, k, delta, expected):
    cond = check_t5_conditions(alpha, chi, k1, k, delta)
    assert (cond.tail_ok, cond.extremal_ok) == expected
