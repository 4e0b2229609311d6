"""
Weighted maxima and sums of the first ``N`` terms of a row, the signed
split into positive- and negative-weight parts, and running maxima.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class WeightVector:
    """Nonzero real weights; columns past ``len(z)`` take ``fill`` (or
    ``fill_negative`` on the negative side in signed mode)."""

    z: tuple
    fill: float = 1.0
    fill_negative: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(float(w) for w in self.z))
        if not self.z:
            raise ValueError("weight vector is empty")
        if any(w == 0 or not np.isfinite(w) for w in self.z):
            raise ValueError("weights must be finite and nonzero")
        if not self.fill > 0 or not self.fill_negative < 0:
            raise ValueError("fill must be > 0 and fill_negative < 0")

    @property
    def pos(self):
        return [i for i, w in enumerate(self.z) if w > 0]

    @property
    def neg(self):
        return [i for i, w in enumerate(self.z) if w < 0]

    @property
    def all_positive(self):
        return all(w > 0 for w in self.z)

    @property
    def is_signed(self):
        return bool(self.pos) and bool(self.neg)

    @property
    def bound(self):
        return max(max(abs(w) for w in self.z), self.fill, -self.fill_negative)

    def positive_weights(self, width):
        """First ``width`` positive weights, in configured order, padded."""
        w = [self.z[i] for i in self.pos][:width]
        return np.array(w + [self.fill] * (width - len(w)), dtype=np.float64)

    def negative_weights(self, width):
        w = [self.z[i] for i in self.neg][:width]
        return np.array(w + [self.fill_negative] * (width - len(w)), dtype=np.float64)

    def weights(self, width):
        """Positive-mode weights (all entries must be positive)."""
        if not self.all_positive:
            raise ValueError("positive mode needs all weights > 0")
        return self.positive_weights(width)


def _check_terms(z, row, N):
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if N > len(row) or N > len(z):
        raise ValueError(
            f"N={N} exceeds the materialised width ({len(row)} values, {len(z)} weights)"
        )


def weighted_max(z, row, N):
    """``max_{i<=N} z_i Y_i``."""
    _check_terms(z, row, N)
    return float(np.max(np.asarray(z[:N], dtype=np.float64) * np.asarray(row[:N], dtype=np.float64)))


def weighted_sum(z, row, N):
    """``sum_{i<=N} z_i Y_i``."""
    _check_terms(z, row, N)
    return float(np.sum(np.asarray(z[:N], dtype=np.float64) * np.asarray(row[:N], dtype=np.float64)))


def signed_aggregates(z, row, N_pos=None, N_neg=None):
    """Return ``(Y*, Y**, Y)`` for mixed-sign weights.

    ``Y*`` is the maximum over the first ``N_pos`` positive-weight terms,
    ``Y**`` the minimum over the first ``N_neg`` negative-weight terms and
    ``Y`` the sum of both parts. Weights and row values are aligned
    elementwise; ``None`` uses every term of that sign.
    """
    z = np.asarray(z, dtype=np.float64)
    row = np.asarray(row, dtype=np.float64)
    if z.shape != row.shape:
        raise ValueError("weights and row must have the same length")
    pos = np.flatnonzero(z > 0)
    neg = np.flatnonzero(z < 0)
    if pos.size == 0 or neg.size == 0:
        raise ValueError(
            "degenerate signed weights: both signs are required, otherwise "
            "the maximum (all negative) never exceeds a positive threshold"
        )
    N_pos = pos.size if N_pos is None else N_pos
    N_neg = neg.size if N_neg is None else N_neg
    for name, N, size in (("N_pos", N_pos, pos.size), ("N_neg", N_neg, neg.size)):
        if int(N) != N or not 1 <= N <= size:
            raise ValueError(f"{name}={N} must lie in [1, {size}]")
    tp = z[pos[:N_pos]] * row[pos[:N_pos]]
    tn = z[neg[:N_neg]] * row[neg[:N_neg]]
    return float(tp.max()), float(tn.min()), float(tp.sum() + tn.sum())


def running_maxima(values):
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("running maxima of an empty sequence")
    return _kernels.running_max(values)


def aggregate_rows(values, z, n_terms):
    """Row-wise ``(max, min, sum)`` of ``z_i Y_i`` over the first ``n_terms[t]`` columns.

    ``n_terms`` must already be capped to the materialised width.
    """
    values = np.asarray(values, dtype=np.float64)
    n_terms = np.asarray(n_terms, dtype=np.int64)
    if values.ndim != 2 or n_terms.shape != (values.shape[0],):
        raise ValueError("values must be (n, width) and n_terms length n")
    if np.any(n_terms < 1) or np.any(n_terms > values.shape[1]):
        raise ValueError("n_terms must lie in [1, width]")
    z = np.asarray(z, dtype=np.float64)
    if z.size < values.shape[1]:
        raise ValueError("fewer weights than materialised columns")
    return _kernels.row_aggregates(values, z, n_terms)
