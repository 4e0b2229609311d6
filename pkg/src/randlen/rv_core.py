"""
Closed-form regular-variation arithmetic.

Tails ``P{Y > x} = ell(x) x^{-k}`` with ``ell`` drawn from a small closed
family (constants and powers of ``log x``), the normalising threshold built
from the de Bruijn conjugate, the admissible growth exponent for the number
of columns, regime classification for the random term count, and the
weighted extremal-index mixture.

Exponent comparisons are exact when the inputs are rational (``int``,
``Fraction`` or a ``str`` such as ``"1/5"``). Float inputs are read through
their shortest decimal repr and compared with an absolute tolerance of
``1e-12``, so ``alpha=5, chi=0.2`` is balanced while ``alpha=3,
chi=1/3`` (a rounded float) is balanced too.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

TOL = 1e-12


# ---------------------------------------------------------------------------
# exact-or-tolerant scalars
# ---------------------------------------------------------------------------

def _exact(x):
    """Return ``(Fraction, is_exact)`` for a numeric input."""
    if isinstance(x, bool):
        raise TypeError("boolean is not a number here")
    if isinstance(x, np.integer):
        x = int(x)
    elif isinstance(x, np.floating):
        x = float(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x), True
    if isinstance(x, str):
        return Fraction(x.strip()), True
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x)), False
    raise TypeError(f"unsupported numeric type {type(x).__name__}")


def _cmp(a, b, exact):
    """Three-way compare; within ``TOL`` counts as equal unless exact."""
    diff = a - b
    if not exact and abs(diff) <= TOL:
        return 0
    return (diff > 0) - (diff < 0)


def _num(x):
    return float(_exact(x)[0])


# ---------------------------------------------------------------------------
# slowly varying factors and tails
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlowlyVarying:
    """``ell(x) = c`` (kind ``"constant"``) or ``c (ln x)^beta`` for ``x > e``.

    Use :meth:`constant` / :meth:`log_power` to build one.
    """

    kind: str
    c: float
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "logpower"):
            raise ValueError(f"unknown slowly varying kind {self.kind!r}")
        if not self.c > 0 or not math.isfinite(self.c):
            raise ValueError(f"slowly varying constant must be > 0, got {self.c}")
        if self.kind == "constant" and self.beta != 0.0:
            raise ValueError("constant slowly varying factor takes no beta")

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", float(c))

    @classmethod
    def log_power(cls, c, beta):
        return cls("logpower", float(c), float(beta))

    @property
    def is_constant(self):
        return self.kind == "constant"

    @property
    def validity_point(self):
        """Evaluations require ``x`` strictly above this point."""
        return 0.0 if self.is_constant else math.e

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x <= self.validity_point):
            raise ValueError(
                f"slowly varying factor evaluated at x <= {self.validity_point:g}"
            )
        if self.is_constant:
            out = np.full_like(x, self.c)
        else:
            out = self.c * np.log(x) ** self.beta
        return out if out.ndim else float(out)

    def uniform_bound_x0(self, A, delta):
        """Smallest ``x0`` with ``ell(x) <= A x^delta`` for every ``x > x0``."""
        if not A > 1 or not delta > 0:
            raise ValueError("need A > 1 and delta > 0")
        base = (self.c / A) ** (1.0 / delta)
        if self.is_constant:
            return max(base, 0.0)
        floor = math.e
        if self.beta <= 0:
            # ell(x) <= c on x > e
            return max(floor, base)
        # h(t) = ln A + delta t - ln c - beta ln t, t = ln x, convex with
        # minimum at t* = beta/delta; past the last root it stays positive
        h = lambda t: math.log(A) + delta * t - math.log(self.c) - self.beta * math.log(t)
        t_star = self.beta / delta
        lo = max(1.0, t_star)
        if h(lo) >= 0:
            return floor
        hi = 2.0 * lo
        while h(hi) < 0:
            hi *= 2.0
        t0 = brentq(h, lo, hi, xtol=1e-14)
        # beyond float range the bound still holds, just not at a representable x
        return max(floor, math.exp(t0)) if t0 < 709.0 else math.inf


def debruijn_conjugate(ell):
    """Leading-order de Bruijn conjugate, closed on the supported family.

    ``ell_sharp(x) * ell(x * ell_sharp(x)) -> 1``; exact for constants and
    asymptotic (log-ratio drift) for log powers.
    """
    if ell.is_constant:
        return SlowlyVarying.constant(1.0 / ell.c)
    return SlowlyVarying.log_power(1.0 / ell.c, -ell.beta)


@dataclass(frozen=True)
class TailSpec:
    """Regularly varying marginal ``P{Y > x} = ell(x) x^{-k}``."""

    k: float
    ell: SlowlyVarying = SlowlyVarying.constant(1.0)

    def __post_init__(self):
        if not self.k > 0 or not math.isfinite(self.k):
            raise ValueError(f"tail index must be > 0, got {self.k}")

    def _raw(self, x):
        return self.ell(x) * np.asarray(x, dtype=np.float64) ** (-self.k)

    @property
    def x_min(self):
        """Point above which the survival is a proper, nonincreasing tail."""
        if self.ell.is_constant:
            return self.ell.c ** (1.0 / self.k)
        # log-power: decreasing once ln x >= beta/k
        x_a = max(math.e, math.exp(max(self.ell.beta, 0.0) / self.k)) * (1 + 1e-12)
        g = lambda lx: math.log(self.ell.c) + self.ell.beta * math.log(lx) - self.k * lx
        lx_a = math.log(x_a)
        if g(lx_a) <= 0:
            return x_a
        hi = 2.0 * lx_a
        while g(hi) > 0:
            hi *= 2.0
        return math.exp(brentq(g, lx_a, hi, xtol=1e-14))

    def survival(self, x):
        return marginal_tail(self, x)


def marginal_tail(spec, x):
    """``min(1, ell(x) x^{-k})``; rejects ``x`` at or below the validity point."""
    x_arr = np.asarray(x, dtype=np.float64)
    if np.any(x_arr <= spec.ell.validity_point):
        raise ValueError(
            f"x must exceed {spec.ell.validity_point:g} for this tail specification"
        )
    out = np.minimum(1.0, spec._raw(x_arr))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# thresholds and scales
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdRule:
    """``u_n = y n^{1/k1} ell1_sharp(n)`` for the minimal-index column."""

    y: float
    k1: float
    ell1: SlowlyVarying = SlowlyVarying.constant(1.0)

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"threshold scale y must be > 0, got {self.y}")
        if not self.k1 > 0:
            raise ValueError(f"k1 must be > 0, got {self.k1}")


def _ell1_sharp(n, k1, ell1):
    # ell1 = ell^{-k1}  =>  ell = ell1^{-1/k1}; ell1_sharp(x) = ell_sharp(x^{1/k1})
    if ell1.is_constant:
        ell = SlowlyVarying.constant(ell1.c ** (-1.0 / k1))
    else:
        ell = SlowlyVarying.log_power(ell1.c ** (-1.0 / k1), -ell1.beta / k1)
    sharp = debruijn_conjugate(ell)
    x = n ** (1.0 / k1)
    if sharp.is_constant:
        return sharp.c
    if x <= math.e:
        raise ValueError(f"n={n} too small for a log-power threshold (n^(1/k1) <= e)")
    return float(sharp(x))


def threshold_u(n, rule):
    """Threshold at horizon ``n``; for constant ``ell1 = c`` this is ``y (c n)^{1/k1}``."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    if rule.ell1.is_constant:
        return rule.y * (rule.ell1.c * n) ** (1.0 / rule.k1)
    return rule.y * n ** (1.0 / rule.k1) * _ell1_sharp(n, rule.k1, rule.ell1)


def chi_upper(k1, k):
    """Upper bound ``(k - k1) / (k1 (k + 1))`` on the column-growth exponent."""
    fk1, e1 = _exact(k1)
    fk, e2 = _exact(k)
    if fk1 <= 0 or fk <= 0:
        raise ValueError("tail indices must be positive")
    if _cmp(fk, fk1, e1 and e2) <= 0:
        raise ValueError(f"degenerate profile: need k1 < k, got k1={k1}, k={k}")
    return float((fk - fk1) / (fk1 * (fk + 1)))


def _chi_upper_exact(k1, k):
    fk1, e1 = _exact(k1)
    fk, e2 = _exact(k)
    if _cmp(fk, fk1, e1 and e2) <= 0:
        raise ValueError(f"degenerate profile: need k1 < k, got k1={k1}, k={k}")
    return (fk - fk1) / (fk1 * (fk + 1)), e1 and e2


def length_scale(n, chi):
    """``floor(n^chi)``, at least 1 (floating-point power, as configured)."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    chi = _num(chi)
    if not chi > 0:
        raise ValueError(f"chi must be > 0, got {chi}")
    return max(1, math.floor(int(n) ** chi))


def theta_weighted(thetas, z, k1):
    """Extremal index of weighted maxima of independent minimal-index columns.

    ``sum theta_j z_j^k1 / sum z_j^k1``.
    """
    thetas = [float(t) for t in thetas]
    z = [float(w) for w in z]
    if len(thetas) != len(z) or not thetas:
        raise ValueError(
            f"thetas and z must be nonempty and the same length ({len(thetas)} vs {len(z)})"
        )
    if any(w <= 0 for w in z):
        raise ValueError("weights must be positive")
    if any(not 0.0 <= t <= 1.0 for t in thetas):
        raise ValueError("extremal indices must lie in [0, 1]")
    k1 = float(k1)
    if all(t == thetas[0] for t in thetas):
        return thetas[0]
    # exact when the inputs are exactly representable rationals
    fz = [_exact(w)[0] for w in z]
    ft = [_exact(t)[0] for t in thetas]
    fk, _ = _exact(k1)
    if fk.denominator == 1:
        p = int(fk)
        num = sum(t * w**p for t, w in zip(ft, fz))
        den = sum(w**p for w in fz)
        return float(num / den)
    w = np.asarray(z) ** k1
    return float(np.dot(thetas, w) / w.sum())


# ---------------------------------------------------------------------------
# regimes
# ---------------------------------------------------------------------------

class Regime(str, enum.Enum):
    TERM_DOMINANT = "TermDominant"
    LENGTH_DOMINANT = "LengthDominant"
    BALANCED = "Balanced"

    def __str__(self):
        return self.value


def classify_regime(alpha, chi):
    """Compare the term-count tail ``n^{-alpha chi}`` with the term tail ``n^{-1}``."""
    fa, e1 = _exact(alpha)
    fc, e2 = _exact(chi)
    if fa <= 0 or fc <= 0:
        raise ValueError("alpha and chi must be positive")
    c = _cmp(fa * fc, Fraction(1), e1 and e2)
    if c > 0:
        return Regime.TERM_DOMINANT
    if c < 0:
        return Regime.LENGTH_DOMINANT
    return Regime.BALANCED


class T5Conditions(NamedTuple):
    tail_ok: bool  # alpha chi0 > 1 + alpha delta*/k1
    extremal_ok: bool  # alpha chi0 > 1 + (1 - alpha chi)/2


def check_t5_conditions(alpha, chi, k1, k, delta_star):
    """Evaluate the two length-dominant side conditions on ``alpha chi0``."""
    chi0, e0 = _chi_upper_exact(k1, k)
    fa, e1 = _exact(alpha)
    fc, e2 = _exact(chi)
    fk1, e3 = _exact(k1)
    fd, e4 = _exact(delta_star)
    if fa <= 0 or fc <= 0 or fd <= 0:
        raise ValueError("alpha, chi and delta_star must be positive")
    exact = e0 and e1 and e2 and e3 and e4
    lhs = fa * chi0
    tail_ok = _cmp(lhs, 1 + fa / fk1 * fd, exact) > 0
    extremal_ok = _cmp(lhs, 1 + Fraction(1, 2) * (1 - fa * fc), exact) > 0
    return T5Conditions(tail_ok, extremal_ok)


def chi_is_admissible(chi, k1, k):
    """``0 < chi < chi0(k1, k)`` with the same exact/tolerant comparison."""
    chi0, e0 = _chi_upper_exact(k1, k)
    fc, e1 = _exact(chi)
    return fc > 0 and _cmp(fc, chi0, e0 and e1) < 0


def alpha_chi(alpha, chi):
    return float(_exact(alpha)[0] * _exact(chi)[0])


def weighted_tau(z, y, k1, c=None):
    """Limit of ``n P{max_j z_j Y_j > u_n}`` for ``d`` minimal columns: ``sum c_j (z_j/y)^k1``."""
    z = np.asarray(z, dtype=np.float64)
    c = np.ones_like(z) if c is None else np.asarray(c, dtype=np.float64)
    return float(np.sum(c * (z / y) ** k1))


SlowlyVaryingSpec = SlowlyVarying

__all__ = [
    "SlowlyVarying",
    "SlowlyVaryingSpec",
    "TailSpec",
    "ThresholdRule",
    "Regime",
    "T5Conditions",
    "debruijn_conjugate",
    "marginal_tail",
    "threshold_u",
    "chi_upper",
    "length_scale",
    "theta_weighted",
    "classify_regime",
    "check_t5_conditions",
    "chi_is_admissible",
    "weighted_tau",
]
