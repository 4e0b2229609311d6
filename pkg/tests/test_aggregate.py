import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from randlen.aggregate import (
    WeightVector,
    aggregate_rows,
    running_maxima,
    signed_aggregates,
    weighted_max,
    weighted_sum,
)

pos_floats = st.floats(0.0, 1e6, allow_nan=False)


@pytest.mark.parametrize(
    "z, row, N, mx, sm",
    [((1,), (5,), 1, 5, 5), ((1, 2, 3), (5, 1, 1), 3, 5, 10), ((1, 2, 3), (5, 1, 1), 2, 5, 7)],
)
def test_weighted_examples(z, row, N, mx, sm):
    assert weighted_max(z, row, N) == mx
    assert weighted_sum(z, row, N) == sm


def test_N_beyond_width():
    with pytest.raises(ValueError, match="exceeds"):
        weighted_max((1, 2), (1, 2), 3)
    with pytest.raises(ValueError):
        weighted_sum((1,), (1,), 0)


@pytest.mark.parametrize(
    "z, row, expected",
    [((2, -1), (3, 4), (6, -4, 2)), ((1, -1), (0, 0), (0, 0, 0)),
     ((1, 2, -3, -1), (4, 1, 2, 5), (4, -6, -5))],
)
def test_signed_examples(z, row, expected):
    assert signed_aggregates(z, row) == expected


def test_signed_needs_both_signs():
    with pytest.raises(ValueError, match="degenerate"):
        signed_aggregates((1, 2), (1, 1))


@pytest.mark.parametrize(
    "x, expected", [((1, 2, 3), (1, 2, 3)), ((3, 1, 2), (3, 3, 3)), ((5, 7, 6, 9), (5, 7, 7, 9))]
)
def test_running_maxima_examples(x, expected):
    assert running_maxima(x).tolist() == list(expected)


@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(-1e9, 1e9)))
def test_running_maxima_idempotent(x):
    once = running_maxima(x)
    np.testing.assert_array_equal(running_maxima(once), once)
    np.testing.assert_array_equal(once, np.maximum.accumulate(x))


@given(st.data())
def test_sandwich_and_max_recursion(data):
    width = data.draw(st.integers(1, 12))
    row = data.draw(arrays(np.float64, width, elements=pos_floats))
    z = data.draw(arrays(np.float64, width, elements=st.floats(0.01, 100.0)))
    N = data.draw(st.integers(1, width))
    mx, sm = weighted_max(z, row, N), weighted_sum(z, row, N)
    assert z[0] * row[0] <= mx <= sm
    if N > 1:
        assert mx == max(weighted_max(z, row, N - 1), z[N - 1] * row[N - 1])


@given(st.data())
def test_signed_consistency(data):
    width = data.draw(st.integers(2, 10))
    row = data.draw(arrays(np.float64, width, elements=pos_floats))
    signs = data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=width, max_size=width))
    signs[0], signs[-1] = 1.0, -1.0
    mags = data.draw(arrays(np.float64, width, elements=st.floats(0.01, 100.0)))
    z = np.array(signs) * mags
    ystar, ystarstar, y = signed_aggregates(z, row)
    pos, neg = z > 0, z < 0
    ystar_pos = float(np.max(z[pos] * row[pos]))
    ystar_neg = float(np.min(z[neg] * row[neg]))
    assert ystar == max(ystar_pos, ystar_neg) and ystarstar == min(ystar_pos, ystar_neg)
    assert ystar_pos >= 0 >= ystar_neg
    assert y == pytest.approx(float(np.sum(z * row)), rel=1e-12, abs=1e-6)


@given(st.data())
def test_aggregate_rows_matches_scalar_ops(data):
    n = data.draw(st.integers(1, 20))
    width = data.draw(st.integers(1, 8))
    values = data.draw(arrays(np.float64, (n, width), elements=pos_floats))
    z = data.draw(arrays(np.float64, width, elements=st.floats(0.01, 100.0)))
    N = data.draw(arrays(np.int64, n, elements=st.integers(1, width)))
    ymax, ymin, ysum = aggregate_rows(values, z, N)
    for t in range(n):
        assert ymax[t] == weighted_max(z, values[t], N[t])
        assert ymin[t] == float(np.min(z[: N[t]] * values[t, : N[t]]))
        assert ysum[t] == pytest.approx(weighted_sum(z, values[t], N[t]), rel=1e-12)


def test_aggregate_rows_validation():
    with pytest.raises(ValueError):
        aggregate_rows(np.ones((2, 2)), [1.0, 1.0], [1, 3])
    with pytest.raises(ValueError):
        aggregate_rows(np.ones((2, 2)), [1.0], [1, 1])


def test_weight_vector():
    w = WeightVector((1.0, -2.0, 3.0), fill=0.5, fill_negative=-0.25)
    assert w.pos == [0, 2] and w.neg == [1]
    assert w.is_signed and not w.all_positive and w.bound == 3.0
    assert w.positive_weights(4).tolist() == [1.0, 3.0, 0.5, 0.5]
    assert w.negative_weights(2).tolist() == [-2.0, -0.25]
    with pytest.raises(ValueError):
        w.weights(3)
    with pytest.raises(ValueError, match="nonzero"):
        WeightVector((1.0, 0.0))
