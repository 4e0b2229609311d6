"""
Scenario runs: replicate the array, term counts and aggregates.

For each replication ``r`` and each sign side the run

1. draws ``d`` (random-``d`` scenarios) from its own stream,
2. samples an ``n x W`` array with ``W = max(l_n, n_cap, d)``,
3. draws ``N_t`` (or uses ``N_t = l_n``) and caps it at ``W``,
4. aggregates the first ``N_t`` weighted terms of every row.

Replications may run on a thread pool. Every replication writes into its
own slice of preallocated arrays and all random streams are keyed on the
replication index, so the output does not depend on the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import _kernels, _seeding
from ..aggregate import aggregate_rows
from ..columns import sample_array
from ..lengths import sample_d, sample_lengths
from ..rv_core import length_scale, threshold_u

# stream tags per side: (array, lengths, random d)
_STREAMS = {
    False: (_seeding.ARRAY, _seeding.LENGTHS, _seeding.RANDOM_D),
    True: (_seeding.NEG_ARRAY, _seeding.NEG_LENGTHS, _seeding.NEG_RANDOM_D),
}


@dataclass
class SideResult:
    """Per-side output. For the negative side ``extreme`` holds the minimum
    of the (negative) weighted terms, otherwise the maximum."""

    negative: bool
    l_n: int
    width: int
    u_n: float
    extreme: np.ndarray  # (R, n)
    total: np.ndarray  # (R, n)
    n_terms: np.ndarray  # (R, n) int32, after capping
    d_values: np.ndarray  # (R,)
    capped: np.ndarray  # (R,) rows whose N exceeded the width
    first_exceed: np.ndarray  # (R,) rows with |z_1| Y_{t,1} > u_n
    length_exceed: np.ndarray  # (R,) rows with N > l_n (before capping)
    sandwich_violations: int = 0


@dataclass
class ScenarioResult:
    n: int
    replications: int
    sides: list
    backend: str
    y_star: np.ndarray = field(repr=False, default=None)
    y_sum: np.ndarray = field(repr=False, default=None)
    y_starstar: np.ndarray = field(repr=False, default=None)

    @property
    def positive(self):
        return self.sides[0]

    @property
    def negative(self):
        return self.sides[1] if len(self.sides) > 1 else None

    @property
    def signed(self):
        return len(self.sides) > 1

    @property
    def n_terms(self):
        return self.positive.n_terms

    @property
    def cap_frequency(self):
        rows = sum(int(s.capped.sum()) for s in self.sides)
        return rows / (self.n * self.replications * len(self.sides))

    @property
    def sandwich_violations(self):
        return sum(s.sandwich_violations for s in self.sides)

    @property
    def maxima(self):
        """Per-replication maximum of the aggregate ``Y*``."""
        return self.y_star.max(axis=1)


def side_width(side, n, n_cap=None):
    """Materialised width: ``l_n`` for deterministic term counts, else
    ``max(l_n, n_cap)`` with ``n_cap`` defaulting to ``4 l_n``."""
    l_n = length_scale(n, side.chi)
    w = l_n
    if side.length_law is not None:
        w = max(l_n, n_cap if n_cap is not None else 4 * l_n)
    d_max = side.random_d.max if side.random_d is not None else side.array.d
    return l_n, max(w, d_max)


def _padded(weights, fill, width):
    w = list(weights)[:width]
    return np.array(w + [fill] * (width - len(w)), dtype=np.float64)


def _run_side(side, n, seed, reps, n_cap, workers):
    l_n, width = side_width(side, n, n_cap)
    u_n = threshold_u(n, side.rule)
    arr_stream, len_stream, d_stream = _STREAMS[side.negative]
    z = _padded(side.weights, side.fill, width)

    extreme = np.empty((reps, n))
    total = np.empty((reps, n))
    n_terms = np.empty((reps, n), dtype=np.int32)
    d_values = np.empty(reps, dtype=np.int64)
    capped = np.zeros(reps, dtype=np.int64)
    first_exceed = np.zeros(reps, dtype=np.int64)
    length_exceed = np.zeros(reps, dtype=np.int64)
    violations = np.zeros(reps, dtype=np.int64)

    def one(r):
        model = side.array
        if side.random_d is not None:
            model = model.with_d(sample_d(side.random_d, _seeding.rng_for(seed, d_stream, r, 0)))
        values = sample_array(model, n, width, seed, replication=r, stream=arr_stream)
        if side.length_law is not None:
            N = sample_lengths(side.length_law, n, _seeding.rng_for(seed, len_stream, r, 0))
            length_exceed[r] = np.count_nonzero(N > l_n)
            capped[r] = np.count_nonzero(N > width)
            N = np.minimum(N, width)
        else:
            N = np.full(n, l_n, dtype=np.int64)
        ymax, ymin, ysum = aggregate_rows(values, z, N)
        first = z[0] * values[:, 0]
        if side.negative:
            extreme[r] = ymin
            bad = (ymin > first) | (ysum > ymin) | (ymin > 0)
            first_exceed[r] = np.count_nonzero(-first > u_n)
        else:
            extreme[r] = ymax
            # sandwich: z_1 Y_{t,1} <= Y*_t <= Y_t for nonnegative terms
            bad = (first > ymax) | (ymax > ysum)
            first_exceed[r] = np.count_nonzero(first > u_n)
        total[r] = ysum
        n_terms[r] = N
        d_values[r] = model.d
        violations[r] = np.count_nonzero(bad)

    if workers > 1 and reps > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, range(reps)))
    else:
        for r in range(reps):
            one(r)

    return SideResult(
        side.negative, l_n, width, u_n, extreme, total, n_terms, d_values,
        capped, first_exceed, length_exceed, int(violations.sum()),
    )


def run_scenario(cfg, n=None, replications=None, workers=None):
    """Simulate ``cfg`` (optionally at another horizon ``n`` or replication count).

    Returns a :class:`ScenarioResult` with ``(R, n)`` arrays of ``Y*``, ``Y``
    and, in signed mode, ``Y**``.
    """
    n = cfg.n if n is None else int(n)
    reps = cfg.replications if replications is None else int(replications)
    workers = cfg.workers if workers is None else int(workers)
    sides = [_run_side(s, n, cfg.seed, reps, cfg.n_cap, workers) for s in cfg.sides()]
    res = ScenarioResult(n, reps, sides, _kernels.BACKEND)
    pos = sides[0]
    res.y_star = pos.extreme
    if len(sides) == 1:
        res.y_sum = pos.total
    else:
        neg = sides[1]
        res.y_starstar = neg.extreme
        res.y_sum = pos.total + neg.total
    return res
