"""
Tail-index and extremal-index estimators.

All tail indices are reported in the ``k`` parametrisation
(``P{Y > x} ~ x^-k``), not as ``1/k``.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class EstimateReport:
    method: str
    point: float
    stderr: float
    tuning: dict = field(default_factory=dict)
    sample_size: int = 0

    def to_dict(self):
        return asdict(self)


def default_k_order(n):
    """``floor(n^0.6)`` capped at ``n/10``, at least 1.

    A relative slack of 1e-12 keeps exact powers (``10^5 -> 1000``) from
    rounding down in floating point.
    """
    return max(1, min(int(math.floor(n**0.6 * (1 + 1e-12))), n // 10))


def hill(sample, k_order=None):
    """Hill estimator of the tail index from the ``k_order`` largest values.

    Parameters
    ----------
    sample : array_like
        Strictly positive observations (any shape; flattened).
    k_order : int, optional
        Number of upper order statistics; default :func:`default_k_order`.

    Returns
    -------
    EstimateReport
        ``point = 1 / (mean(log X_(n-i+1), i<=k) - log X_(n-k))``,
        ``stderr = point / sqrt(k)``.
    """
    x = np.asarray(sample, dtype=np.float64).ravel()
    n = x.size
    if n < 2:
        raise ValueError("Hill estimator needs at least two values")
    if np.any(~(x > 0)):
        raise ValueError("Hill estimator needs strictly positive values")
    k = default_k_order(n) if k_order is None else int(k_order)
    if not 1 <= k < n:
        raise ValueError(f"k_order must lie in [1, {n - 1}], got {k_order}")
    part = np.partition(x, n - k - 1)
    anchor = part[n - k - 1]
    top = part[n - k:]
    spread = np.mean(np.log(top)) - np.log(anchor)
    if not spread > 0:
        raise ValueError("degenerate sample: zero log-spread above the anchor order statistic")
    point = 1.0 / spread
    return EstimateReport(
        "hill",
        float(point),
        float(point / math.sqrt(k)),
        {"k_order": k, "anchor": float(anchor)},
        n,
    )


def definition_theta(max_exceed_prob, tau_hat, replications=None):
    """Invert ``P{M_n <= u_n} ~ exp(-tau theta)``.

    ``max_exceed_prob`` is the estimate of ``P{M_n <= u_n}`` (the
    probability that the running maximum stays below the threshold).
    The estimate is clipped to ``[0, 1]`` and flagged when that happens.
    ``replications`` (the number of maxima behind the probability) gives
    a binomial delta-method standard error.
    """
    p = float(max_exceed_prob)
    tau = float(tau_hat)
    if not 0.0 < p < 1.0:
        raise ValueError(
            f"degenerate: estimated P(M_n <= u_n) = {p}; increase replications or adjust y"
        )
    if not tau > 0:
        raise ValueError(f"tau_hat must be positive, got {tau}")
    raw = -math.log(p) / tau
    point = min(1.0, max(0.0, raw))
    if replications:
        stderr = math.sqrt((1.0 - p) / (p * replications)) / tau
    else:
        stderr = float("nan")
    return EstimateReport(
        "theta-def",
        point,
        stderr,
        {"p_hat": p, "tau_hat": tau, "raw": raw, "clipped": raw != point},
        int(replications or 0),
    )


def estimate_tau(paths, u):
    """``n`` times the pooled fraction of values above ``u``.

    ``paths`` is ``(replications, n)`` (a single path is accepted too).
    """
    paths = np.atleast_2d(np.asarray(paths, dtype=np.float64))
    n = paths.shape[1]
    hits = int(np.count_nonzero(paths > u))
    if hits == 0:
        raise ValueError(f"no values exceed u={u}; tau cannot be estimated")
    return n * hits / paths.size


def theta_from_paths(paths, u, block_length=None):
    """Definition-based extremal index from replicated paths.

    ``P{M <= u}`` is the fraction of disjoint blocks (one block per path by
    default) whose maximum stays at or below ``u``; ``tau`` is the block
    length times the pooled exceedance fraction. A partial trailing block
    is dropped.
    """
    paths = np.atleast_2d(np.asarray(paths, dtype=np.float64))
    R, n = paths.shape
    m = n if block_length is None else int(block_length)
    if not 1 <= m <= n:
        raise ValueError(f"block_length must lie in [1, {n}], got {block_length}")
    nb = n // m
    blocks = paths[:, : nb * m].reshape(R * nb, m)
    p_hat = float(np.mean(blocks.max(axis=1) <= u))
    tau_hat = estimate_tau(blocks, u)
    rep = definition_theta(p_hat, tau_hat, replications=blocks.shape[0])
    rep.tuning.update({"u": float(u), "block_length": m, "blocks": int(blocks.shape[0])})
    rep.sample_size = int(blocks.size)
    return rep


def _gaps(paths, u):
    gaps = []
    n_exc = 0
    for row in paths:
        t = np.flatnonzero(row > u)
        n_exc += t.size
        if t.size > 1:
            gaps.append(np.diff(t))
    g = np.concatenate(gaps) if gaps else np.empty(0, dtype=np.int64)
    return g, n_exc


def intervals_theta(path, u):
    """Intervals estimator from interexceedance times.

    Pools gaps within each row when given ``(replications, n)``; gaps never
    span two replications.
    """
    paths = np.atleast_2d(np.asarray(path, dtype=np.float64))
    g, n_exc = _gaps(paths, u)
    if g.size < 1:
        raise ValueError("intervals estimator needs at least two exceedances")
    g = g.astype(np.float64)
    n_gaps = g.size
    if g.max() <= 2:
        raw = 2.0 * g.sum() ** 2 / (n_gaps * np.sum(g**2))
        branch = "small-gaps"
    else:
        raw = 2.0 * np.sum(g - 1.0) ** 2 / (n_gaps * np.sum((g - 1.0) * (g - 2.0)))
        branch = "bias-corrected"
    point = min(1.0, raw)
    return EstimateReport(
        "theta-intervals",
        float(point),
        float(math.sqrt(point / max(n_exc, 1))),
        {"u": float(u), "branch": branch, "raw": float(raw), "exceedances": int(n_exc)},
        int(paths.size),
    )


def blocks_theta(path, u, block):
    """Blocks estimator: blocks with an exceedance over total exceedances.

    Blocks are consecutive runs of ``block`` values within each row; a
    shorter trailing block counts as a block.
    """
    block = int(block)
    if block < 1:
        raise ValueError(f"block must be >= 1, got {block}")
    paths = np.atleast_2d(np.asarray(path, dtype=np.float64))
    exc = paths > u
    total = int(exc.sum())
    if total == 0:
        raise ValueError(f"no values exceed u={u}")
    R, n = exc.shape
    nb = -(-n // block)
    padded = np.zeros((R, nb * block), dtype=bool)
    padded[:, :n] = exc
    touched = int(padded.reshape(R, nb, block).any(axis=2).sum())
    point = min(1.0, touched / total)
    return EstimateReport(
        "theta-blocks",
        float(point),
        float(math.sqrt(point / total)),
        {"u": float(u), "block": block, "blocks_with_exceedance": touched, "exceedances": total},
        int(paths.size),
    )
