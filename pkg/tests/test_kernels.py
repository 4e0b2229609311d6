import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randlen import _kernels

needs_numba = pytest.mark.skipif(_kernels.numba_impl is None, reason="numba not installed")


def _innov(n, seed):
    return 1.0 / np.random.default_rng(seed).standard_exponential(n)


@needs_numba
@given(n=st.integers(1, 300), phi=st.floats(0.0, 0.95), seed=st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_armax_backends_agree(n, phi, seed):
    x = _innov(n, seed)
    # the numpy path works in log space, so agreement is to rounding only
    np.testing.assert_allclose(
        _kernels.numpy_impl.armax_core(x, phi), _kernels.numba_impl.armax_core(x, phi), rtol=1e-9
    )


@needs_numba
@given(n=st.integers(1, 300), m=st.integers(1, 10), seed=st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_moving_max_and_running_max_agree(n, m, seed):
    x = _innov(n + m - 1, seed)  # n outputs need n + m - 1 innovations
    a = _kernels.numpy_impl.moving_max(x, m)
    assert a.shape == (n,)
    np.testing.assert_array_equal(a, _kernels.numba_impl.moving_max(x, m))
    np.testing.assert_array_equal(_kernels.numpy_impl.running_max(x), _kernels.numba_impl.running_max(x))


@needs_numba
@given(n=st.integers(1, 50), w=st.integers(1, 12), seed=st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_row_aggregates_agree(n, w, seed):
    rng = np.random.default_rng(seed)
    values = 1.0 / rng.standard_exponential((n, w))
    z = rng.uniform(0.5, 2.0, w)
    terms = rng.integers(1, w + 1, n)
    a = _kernels.numpy_impl.row_aggregates(values, z, terms)
    b = _kernels.numba_impl.row_aggregates(values, z, terms)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-12)


def _backend_in_subprocess(flag):
    env = dict(os.environ, RANDLEN_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "import randlen; print(randlen.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_in_subprocess("0") == "numpy"


@needs_numba
def test_env_flag_default_is_numba():
    assert _backend_in_subprocess("1") == "numba"
