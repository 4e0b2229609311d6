"""
Hot numeric loops, compiled with numba when available.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with the same signature. The active backend is chosen once at
import time:

    RANDLEN_NUMBA=0   force the numpy path
    RANDLEN_NUMBA=1   use numba (default; silently falls back if missing)

Both backends are always importable as ``numpy_impl`` and ``numba_impl``
(the latter is ``None`` without numba) so tests and the benchmark can
compare them directly. Results agree to rounding, not bitwise: the numpy
ARMAX path works in log space and numpy sums pairwise.
"""

import os
from types import SimpleNamespace

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_JIT_OPTS = dict(cache=True, nogil=True, fastmath=False, error_model="numpy")


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _armax_core_np(innov, phi):
    # W_t = max(phi*W_{t-1}, (1-phi)*Z_t), W_0 = Z_0, solved as a running max
    # in log space: log W_t = t*log(phi) + max_{j<=t}(a_j - j*log(phi)).
    innov = np.asarray(innov, dtype=np.float64)
    if phi == 0.0:
        return innov.copy()
    t = np.arange(innov.size, dtype=np.float64)
    a = np.log((1.0 - phi) * innov)
    a[0] = np.log(innov[0])
    lphi = np.log(phi)
    out = np.exp(t * lphi + np.maximum.accumulate(a - t * lphi))
    out[0] = innov[0]
    return out


def _moving_max_np(innov, m):
    innov = np.asarray(innov, dtype=np.float64)
    if m == 1:
        return innov.copy()
    win = np.lib.stride_tricks.sliding_window_view(innov, m)
    return win.max(axis=1)


def _row_aggregates_np(values, z, n_terms):
    values = np.asarray(values, dtype=np.float64)
    zy = values * z[: values.shape[1]]
    mask = np.arange(values.shape[1])[None, :] < n_terms[:, None]
    ymax = np.where(mask, zy, -np.inf).max(axis=1)
    ymin = np.where(mask, zy, np.inf).min(axis=1)
    ysum = np.where(mask, zy, 0.0).sum(axis=1)
    return ymax, ymin, ysum


def _running_max_np(x):
    return np.maximum.accumulate(np.asarray(x, dtype=np.float64))


numpy_impl = SimpleNamespace(
    name="numpy",
    armax_core=_armax_core_np,
    moving_max=_moving_max_np,
    row_aggregates=_row_aggregates_np,
    running_max=_running_max_np,
)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(**_JIT_OPTS)
    def _armax_core_nb(innov, phi):
        n = innov.shape[0]
        out = np.empty(n)
        if n == 0:
            return out
        out[0] = innov[0]
        w = 1.0 - phi
        for t in range(1, n):
            a = phi * out[t - 1]
            b = w * innov[t]
            out[t] = a if a > b else b
        return out

    @njit(**_JIT_OPTS)
    def _moving_max_nb(innov, m):
        n = innov.shape[0] - m + 1
        out = np.empty(n)
        for t in range(n):
            mx = innov[t]
            for j in range(1, m):
                v = innov[t + j]
                if v > mx:
                    mx = v
            out[t] = mx
        return out

    @njit(**_JIT_OPTS)
    def _row_aggregates_nb(values, z, n_terms):
        n, width = values.shape
        ymax = np.empty(n)
        ymin = np.empty(n)
        ysum = np.empty(n)
        for i in range(n):
            mx = -np.inf
            mn = np.inf
            s = 0.0
            stop = n_terms[i]
            if stop > width:
                stop = width
            for j in range(stop):
                v = z[j] * values[i, j]
                s += v
                if v > mx:
                    mx = v
                if v < mn:
                    mn = v
            ymax[i] = mx
            ymin[i] = mn
            ysum[i] = s
        return ymax, ymin, ysum

    @njit(**_JIT_OPTS)
    def _running_max_nb(x):
        out = np.empty(x.shape[0])
        mx = -np.inf
        for i in range(x.shape[0]):
            if x[i] > mx:
                mx = x[i]
            out[i] = mx
        return out

    def _as_f8(fn):
        def wrapped(x, *args):
            return fn(np.ascontiguousarray(x, dtype=np.float64), *args)

        wrapped.__name__ = fn.__name__
        return wrapped

    def _row_aggregates_nb_entry(values, z, n_terms):
        return _row_aggregates_nb(
            np.ascontiguousarray(values, dtype=np.float64),
            np.ascontiguousarray(z, dtype=np.float64),
            np.ascontiguousarray(n_terms, dtype=np.int64),
        )

    numba_impl = SimpleNamespace(
        name="numba",
        armax_core=lambda innov, phi: _armax_core_nb(
            np.ascontiguousarray(innov, dtype=np.float64), float(phi)
        ),
        moving_max=lambda innov, m: _moving_max_nb(
            np.ascontiguousarray(innov, dtype=np.float64), int(m)
        ),
        row_aggregates=_row_aggregates_nb_entry,
        running_max=_as_f8(_running_max_nb),
    )
else:  # pragma: no cover
    numba_impl = None


def _select():
    flag = os.environ.get("RANDLEN_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or numba_impl is None:
        return numpy_impl
    return numba_impl


active = _select()
BACKEND = active.name

armax_core = active.armax_core
moving_max = active.moving_max
row_aggregates = active.row_aggregates
running_max = active.running_max
