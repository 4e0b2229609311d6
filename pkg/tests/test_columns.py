import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randlen import columns as col
from randlen.estimators import hill, intervals_theta
from randlen.rv_core import SlowlyVarying, TailSpec


def _array(coupling, d=3, k1=1.0, k=3.0, mins=None, family="frechet"):
    mins = mins or [col.frechet_column(k1, margin_family=family)] * d
    return col.ArrayModel(
        col.SeriesProfile(d, k1, k), tuple(mins), col.frechet_column(k), coupling
    )


@pytest.mark.parametrize(
    "dyn, theta", [(col.IID(), 1.0), (col.Armax(0.7), 0.3), (col.MovingMax(4), 0.25)]
)
def test_true_extremal_index(dyn, theta):
    assert col.true_extremal_index(col.frechet_column(1.0, dyn)) == pytest.approx(theta)


def test_dynamics_validation():
    with pytest.raises(ValueError):
        col.Armax(1.0)
    with pytest.raises(ValueError):
        col.MovingMax(0)


@pytest.mark.parametrize("dyn", [col.Armax(0.0), col.MovingMax(1)])
def test_degenerate_dynamics_reduce_to_iid(dyn):
    iid = col.sample_column(col.frechet_column(2.0), 500, 11)
    other = col.sample_column(col.frechet_column(2.0, dyn), 500, 11)
    np.testing.assert_array_equal(iid, other)


@pytest.mark.parametrize("family", ["frechet", "pareto"])
@pytest.mark.parametrize("dyn", [col.IID(), col.Armax(0.5), col.MovingMax(3)])
def test_marginal_matches_survival(family, dyn):
    model = col.frechet_column(2.0, dyn, c=3.0, margin_family=family)
    n = 100_000
    x = col.sample_column(model, n, 5)
    for q in (0.99, 0.999):
        p = 1 - q
        emp = np.mean(x > model.quantile(q))
        assert model.survival(model.quantile(q)) == pytest.approx(p, rel=1e-9)
        # binomial error, inflated for the cluster size of dependent paths
        se = np.sqrt(p * (1 - p) / n / model.dynamics.extremal_index)
        assert abs(emp - p) < 5 * se


def test_stationarity_halves_agree():
    x = col.sample_column(col.frechet_column(1.0, col.Armax(0.5)), 100_000, 3)
    a, b = np.sort(x[:50_000]), np.sort(x[50_000:])
    # two-sample KS distance; critical value at 1e-3 is about 1.95 sqrt(2/m), doubled for dependence
    grid = np.quantile(x, np.linspace(0.01, 0.99, 99))
    ks = np.max(np.abs(np.searchsorted(a, grid) - np.searchsorted(b, grid))) / 50_000
    assert ks < 2 * 1.95 * np.sqrt(2 / 50_000)


def test_armax_oracle_hill_and_intervals():
    x = col.sample_column(col.frechet_column(1.0, col.Armax(0.5)), 100_000, 2024)
    assert 0.9 <= hill(x, 500).point <= 1.1
    assert 0.4 <= intervals_theta(x, np.quantile(x, 0.99)).point <= 0.6


def test_log_power_sampling_is_refused():
    model = col.ColumnModel(TailSpec(1.0, SlowlyVarying.log_power(1.0, 1.0)))
    with pytest.raises(ValueError, match="constant"):
        col.sample_column(model, 10, 0)


def test_cumulative_sums_row_prefix():
    m = _array(col.CumulativeSums(), d=3)
    a = col.sample_array(m, 50, 5, seed=1)
    base = a[:, 0]
    np.testing.assert_array_equal(a[:, 1], base)
    np.testing.assert_array_equal(a[:, 2], 2 * base)
    row = np.array([2.0, 2.0, 4.0])
    assert np.array_equal(a[0, :3] / a[0, 0] * 2.0, row)


@given(d=st.integers(2, 8), seed=st.integers(0, 2**32))
@settings(max_examples=25, deadline=None)
def test_cumulative_sums_powers_of_two(d, seed):
    a = col.sample_array(_array(col.CumulativeSums(), d=d), 20, d + 1, seed=seed)
    for i in range(2, d + 1):  # 1-based column i
        np.testing.assert_allclose(a[:, i - 1], 2.0 ** (i - 2) * a[:, 0], rtol=1e-15)
    m = a[:, :d].max(axis=0)
    assert m[0] == m[1] and np.all(np.diff(m[1:]) > 0)


def test_ordered_rows_geometric():
    a = col.sample_array(_array(col.OrderedRows(0.5), d=3), 10, 4, seed=7)
    np.testing.assert_array_equal(a[:, 1], 0.5 * a[:, 0])
    np.testing.assert_array_equal(a[:, 2], 0.25 * a[:, 0])


@given(rho=st.floats(0.05, 1.0), seed=st.integers(0, 2**32))
@settings(max_examples=25, deadline=None)
def test_ordered_rows_first_term_dominates(rho, seed):
    m = _array(col.OrderedRows(rho), d=3)
    z = [1.0, 1.0 / rho, 1.0 / rho**2]
    col.validate_ordered_weights(m, z)
    a = col.sample_array(m, 30, 3, seed=seed)
    w = a * np.array(z)
    assert np.all(w[:, 1:] <= w[:, :1] * (1 + 1e-12))


def test_ordered_weights_rejected_when_order_breaks():
    with pytest.raises(ValueError, match="ordering"):
        col.validate_ordered_weights(_array(col.OrderedRows(0.5), d=2), [1.0, 3.0])


def test_array_determinism_and_width_stability():
    m = _array(col.IndependentColumns(), d=2)
    a = col.sample_array(m, 100, 4, seed=99, replication=3)
    b = col.sample_array(m, 100, 4, seed=99, replication=3)
    wide = col.sample_array(m, 100, 9, seed=99, replication=3)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(a, wide[:, :4])
    assert not np.array_equal(a, col.sample_array(m, 100, 4, seed=99, replication=4))


def test_bulk_tail_indices_are_applied():
    prof = col.SeriesProfile(1, 1.0, 3.0, (6.0,))
    m = col.ArrayModel(prof, (col.frechet_column(1.0),), col.frechet_column(3.0))
    assert prof.bulk_tail_index(1) == 6.0 and prof.bulk_tail_index(2) == 3.0
    a = col.sample_array(m, 200_000, 3, seed=4)
    assert hill(a[:, 1], 2000).point == pytest.approx(6.0, rel=0.15)
    assert hill(a[:, 2], 2000).point == pytest.approx(3.0, rel=0.15)


def test_profile_and_model_validation():
    with pytest.raises(ValueError, match="degenerate"):
        col.SeriesProfile(1, 2.0, 2.0)
    with pytest.raises(ValueError):
        col.SeriesProfile(1, 1.0, 3.0, (2.0,))
    with pytest.raises(ValueError, match="tail index"):
        _array(col.IndependentColumns(), d=2, mins=[col.frechet_column(1.0), col.frechet_column(2.0)])
    with pytest.raises(ValueError, match="minimal column"):
        _array(col.IndependentColumns(), d=3, mins=[col.frechet_column(1.0)])
    # ordered couplings derive every column from the first
    assert _array(col.CumulativeSums(), d=3, mins=[col.frechet_column(1.0)]).d == 3


def test_a2_constants():
    assert col.a2_constants(_array(col.IndependentColumns(), d=2)) == [1.0, 1.0]
    assert col.a2_constants(_array(col.ScaledMinimalColumns((2.0, 0.5)), d=2)) == [2.0, 0.5]
    assert col.a2_constants(_array(col.SharedBoundedFactor(1.0, 2.0), d=2)) == [1.5, 1.5]
    with pytest.raises(ValueError):
        col.a2_constants(_array(col.CumulativeSums(), d=2))


def test_shared_factor_tail_constant_and_joint_tail():
    m = _array(col.SharedBoundedFactor(1.0, 2.0), d=2, family="pareto")
    n = 400_000
    a = col.sample_array(m, n, 2, seed=8)
    # Pareto margins: P{B X > x} = E[B] / x exactly for x >= 2
    for x in (20.0, 100.0):
        assert np.mean(a[:, 0] > x) * x == pytest.approx(1.5, rel=0.1)
    # joint exceedances vanish relative to the marginal tail
    xs = np.quantile(a[:, 0], [0.9, 0.99, 0.999])
    ratio = [np.mean((a[:, 0] > x) & (a[:, 1] > x)) * x for x in xs]
    assert ratio[0] > ratio[1] > ratio[2]
    assert ratio[2] < 0.05


def test_scaled_columns_constants():
    m = _array(col.ScaledMinimalColumns((2.0, 0.5)), d=2, family="pareto")
    a = col.sample_array(m, 400_000, 2, seed=12)
    x = 200.0
    assert np.mean(a[:, 0] > x) * x == pytest.approx(2.0, rel=0.1)
    assert np.mean(a[:, 1] > x) * x == pytest.approx(0.5, rel=0.15)


def test_width_below_d_rejected():
    with pytest.raises(ValueError, match="width"):
        col.sample_array(_array(col.IndependentColumns(), d=3), 10, 2, seed=0)
