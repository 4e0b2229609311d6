"""
Stationary column sequences with known tail and extremal indices, and the
doubly-indexed arrays built from them.

Every column is generated in unit-Fréchet space first (a "core" path with
``P{W <= x} = exp(-1/x)``) and then mapped monotonically onto its marginal.
Monotone maps leave the extremal index unchanged, so the ground truth of a
column is fixed by its dynamics alone:

    IID          theta = 1
    Armax(phi)   theta = 1 - phi
    MovingMax(m) theta = 1 / m
"""

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from . import _kernels, _seeding
from .rv_core import SlowlyVarying, TailSpec


# ---------------------------------------------------------------------------
# dynamics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IID:
    kind = "iid"

    @property
    def extremal_index(self):
        return 1.0


@dataclass(frozen=True)
class Armax:
    """Max-autoregression ``W_t = max(phi W_{t-1}, (1 - phi) Z_t)``."""

    phi: float
    kind = "armax"

    def __post_init__(self):
        if not 0.0 <= self.phi < 1.0:
            raise ValueError(f"Armax phi must lie in [0, 1), got {self.phi}")

    @property
    def extremal_index(self):
        return 1.0 - self.phi


@dataclass(frozen=True)
class MovingMax:
    """Moving maximum of ``m`` consecutive i.i.d. innovations."""

    m: int
    kind = "movingmax"

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"MovingMax m must be a positive integer, got {self.m}")

    @property
    def extremal_index(self):
        return 1.0 / self.m


ColumnDynamics = Union[IID, Armax, MovingMax]

MARGIN_FAMILIES = ("frechet", "pareto")


@dataclass(frozen=True)
class ColumnModel:
    """One column: marginal tail, within-column dynamics, margin family.

    ``frechet``: ``P{Y > x} = 1 - exp(-c x^-k)``, tail ``~ c x^-k``.
    ``pareto``:  ``P{Y > x} = c x^-k`` exactly for ``x >= c^(1/k)``.
    """

    marginal: TailSpec
    dynamics: ColumnDynamics = IID()
    margin_family: str = "frechet"

    def __post_init__(self):
        if self.margin_family not in MARGIN_FAMILIES:
            raise ValueError(f"unknown margin family {self.margin_family!r}")

    @property
    def k(self):
        return self.marginal.k

    def with_tail_index(self, k):
        return replace(self, marginal=TailSpec(k, self.marginal.ell))

    def survival(self, x):
        """Exact survival function of the generated marginal."""
        x = np.asarray(x, dtype=np.float64)
        c, k = self.marginal.ell.c, self.k
        if self.margin_family == "frechet":
            out = -np.expm1(-c * x ** (-k))
        else:
            out = np.minimum(1.0, c * x ** (-k))
        return out if out.ndim else float(out)

    def quantile(self, q):
        """Exact inverse of the marginal distribution function."""
        q = np.asarray(q, dtype=np.float64)
        c, k = self.marginal.ell.c, self.k
        if self.margin_family == "frechet":
            out = (-c / np.log(q)) ** (1.0 / k)
        else:
            out = (c / (1.0 - q)) ** (1.0 / k)
        return out if out.ndim else float(out)


def true_extremal_index(model):
    return model.dynamics.extremal_index


def _unit_frechet(rng, size):
    return 1.0 / rng.standard_exponential(size)


def _core_path(dynamics, n, rng):
    if isinstance(dynamics, IID):
        return _unit_frechet(rng, n)
    if isinstance(dynamics, Armax):
        return _kernels.armax_core(_unit_frechet(rng, n), dynamics.phi)
    if isinstance(dynamics, MovingMax):
        m = int(dynamics.m)
        innov = _unit_frechet(rng, n + m - 1)
        if m == 1:
            return innov
        # max of m unit-Frechet variables is Frechet with scale m
        return _kernels.moving_max(innov, m) / m
    raise TypeError(f"unsupported dynamics {dynamics!r}")


def to_margin(core, model):
    """Map a unit-Fréchet path onto the column marginal (monotone increasing)."""
    ell = model.marginal.ell
    if not ell.is_constant:
        raise ValueError(
            "column sampling supports a constant slowly varying factor only"
        )
    c, k = ell.c, model.k
    if model.margin_family == "frechet":
        if c == 1.0:
            return core if k == 1.0 else core ** (1.0 / k)
        return (c * core) ** (1.0 / k)
    # P{W > w} = 1 - exp(-1/w)  ->  Pareto via the tail probability
    return (c / -np.expm1(-1.0 / core)) ** (1.0 / k)


def sample_column(model, n, seed):
    """Stationary path of length ``n``; deterministic given ``seed``."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    rng = _seeding.as_generator(seed)
    return to_margin(_core_path(model.dynamics, int(n), rng), model)


# ---------------------------------------------------------------------------
# couplings across the minimal-index columns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndependentColumns:
    kind = "independent"


@dataclass(frozen=True)
class ScaledMinimalColumns:
    """Column ``i`` is ``c_i^(1/k1)`` times an independent base column."""

    c: tuple
    kind = "scaled"

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        if any(not v > 0 for v in self.c):
            raise ValueError("scaled-column constants must be positive")


@dataclass(frozen=True)
class SharedBoundedFactor:
    """All minimal columns multiplied rowwise by one ``B_t ~ U[lo, hi]``."""

    lo: float
    hi: float
    kind = "shared_factor"

    def __post_init__(self):
        if not 1.0 <= self.lo < self.hi:
            raise ValueError(f"need 1 <= lo < hi, got lo={self.lo}, hi={self.hi}")


@dataclass(frozen=True)
class OrderedRows:
    """Column ``j`` is ``rho^(j-1)`` times column 1."""

    rho: float
    kind = "ordered"

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"OrderedRows rho must lie in (0, 1], got {self.rho}")


@dataclass(frozen=True)
class CumulativeSums:
    """Column ``i`` is the sum of all previous minimal columns."""

    kind = "cumsum"


Coupling = Union[
    IndependentColumns, ScaledMinimalColumns, SharedBoundedFactor, OrderedRows, CumulativeSums
]

# coupling families by the cross-column condition they realise
A1_COUPLINGS = (IndependentColumns,)
A2_COUPLINGS = (ScaledMinimalColumns, SharedBoundedFactor)
A4_COUPLINGS = (OrderedRows, CumulativeSums)


@dataclass(frozen=True)
class SeriesProfile:
    d: int
    k1: float
    k: float
    tail_indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tail_indices", tuple(float(v) for v in self.tail_indices))
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if not 0 < self.k1 < self.k:
            raise ValueError(
                f"degenerate profile: need 0 < k1 < k, got k1={self.k1}, k={self.k}"
            )
        if any(v < self.k for v in self.tail_indices):
            raise ValueError("bulk tail indices must all be >= k")

    def bulk_tail_index(self, i):
        """Tail index of column ``i`` (0-based) for ``i >= d``."""
        j = i - self.d
        if j < len(self.tail_indices):
            return self.tail_indices[j]
        return self.k


@dataclass(frozen=True)
class ArrayModel:
    profile: SeriesProfile
    minimal_columns: tuple
    bulk_column: ColumnModel
    coupling: Coupling = IndependentColumns()

    def __post_init__(self):
        object.__setattr__(self, "minimal_columns", tuple(self.minimal_columns))
        p = self.profile
        need = 1 if isinstance(self.coupling, A4_COUPLINGS) else p.d
        if len(self.minimal_columns) < need:
            raise ValueError(
                f"need at least {need} minimal column models, got {len(self.minimal_columns)}"
            )
        for j, col in enumerate(self.minimal_columns):
            if not math.isclose(col.k, p.k1, rel_tol=1e-12):
                raise ValueError(
                    f"minimal column {j + 1} has tail index {col.k}, expected k1={p.k1}"
                )
        if self.bulk_column.k < p.k:
            raise ValueError(
                f"bulk column tail index {self.bulk_column.k} is below k={p.k}"
            )
        if isinstance(self.coupling, ScaledMinimalColumns) and len(self.coupling.c) < p.d:
            raise ValueError("ScaledMinimalColumns needs one constant per minimal column")

    @property
    def d(self):
        return self.profile.d

    def with_d(self, d):
        """Same model with ``d`` minimal-index columns (for random ``d``)."""
        return replace(self, profile=replace(self.profile, d=int(d)))

    def column_thetas(self):
        """Ground-truth extremal indices of the ``d`` minimal columns."""
        base = self.minimal_columns[0].dynamics.extremal_index
        if isinstance(self.coupling, A4_COUPLINGS):
            return [base] * self.d
        return [c.dynamics.extremal_index for c in self.minimal_columns[: self.d]]


def validate_ordered_weights(model, z):
    """Reject weights that break the pathwise ordering ``z_j rho^(j-1) <= z_1``."""
    if not isinstance(model.coupling, OrderedRows):
        return
    rho = model.coupling.rho
    for j in range(1, model.d):
        if z[j] * rho**j > z[0] * (1 + 1e-12):
            raise ValueError(
                f"OrderedRows ordering fails: z_{j + 1} rho^{j} = {z[j] * rho**j:g} > z_1 = {z[0]:g}"
            )


def sample_array(model, n, l, seed, replication=0, stream=_seeding.ARRAY):
    """``n x l`` matrix: ``d`` coupled minimal columns, then bulk columns.

    Each column draws from its own child stream keyed on
    ``(seed, stream, replication, column)``, so widening the array never
    changes earlier columns.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    d = model.d
    if l < d:
        raise ValueError(f"array width l={l} is below the number of minimal columns d={d}")
    n = int(n)
    out = np.empty((n, int(l)))

    def rng(col):
        return _seeding.rng_for(seed, stream, replication, col)

    cp = model.coupling
    if isinstance(cp, (OrderedRows, CumulativeSums)):
        base = sample_column(model.minimal_columns[0], n, rng(0))
        out[:, 0] = base
        if isinstance(cp, OrderedRows):
            for j in range(1, d):
                out[:, j] = cp.rho**j * base
        else:
            for i in range(1, d):
                out[:, i] = out[:, :i].sum(axis=1)
    else:
        for j in range(d):
            out[:, j] = sample_column(model.minimal_columns[j], n, rng(j))
        if isinstance(cp, ScaledMinimalColumns):
            k1 = model.profile.k1
            for j in range(d):
                out[:, j] *= cp.c[j] ** (1.0 / k1)
        elif isinstance(cp, SharedBoundedFactor):
            fac_rng = _seeding.rng_for(seed, _seeding.FACTOR + stream, replication, 0)
            out[:, :d] *= fac_rng.uniform(cp.lo, cp.hi, size=n)[:, None]

    bulk = model.bulk_column
    for i in range(d, int(l)):
        k_i = model.profile.bulk_tail_index(i)
        col = bulk if k_i == bulk.k else bulk.with_tail_index(k_i)
        out[:, i] = sample_column(col, n, rng(i))
    return out


def a2_constants(model):
    """Limits ``P{Y_i > x} / (x^-k1 ell1(x)) -> c_i`` for the minimal columns."""
    cp = model.coupling
    d = model.d
    k1 = model.profile.k1
    if isinstance(cp, ScaledMinimalColumns):
        return list(cp.c[:d])
    if isinstance(cp, IndependentColumns):
        c1 = model.minimal_columns[0].marginal.ell.c
        return [col.marginal.ell.c / c1 for col in model.minimal_columns[:d]]
    if isinstance(cp, SharedBoundedFactor):
        lo, hi = cp.lo, cp.hi
        eb = (hi ** (k1 + 1) - lo ** (k1 + 1)) / ((k1 + 1) * (hi - lo))
        return [eb] * d
    raise ValueError(
        f"{type(cp).__name__} has no scaling constants; use the ordered/cumulative analysis"
    )


def frechet_column(k=1.0, dynamics=None, c=1.0, margin_family="frechet"):
    """Shorthand for a constant-``ell`` column model."""
    return ColumnModel(
        TailSpec(float(k), SlowlyVarying.constant(c)),
        IID() if dynamics is None else dynamics,
        margin_family,
    )
