"""
Random term counts ``N_n`` with regularly varying tails, and the random
number ``d`` of minimal-index columns.

``N = max(min_value, ceil((c / U)^(1/alpha)))`` with ``U`` uniform on
``(0, 1]`` has the exact integer tail ``P{N > j} = c j^-alpha`` (capped at
one) for every integer ``j >= min_value``, which keeps the regime checks
analytic.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _seeding
from .rv_core import SlowlyVarying, ThresholdRule, length_scale, threshold_u

_N_MAX = 2**62


@dataclass(frozen=True)
class LengthLaw:
    alpha: float
    ell_tilde: SlowlyVarying = SlowlyVarying.constant(1.0)
    min_value: int = 1

    def __post_init__(self):
        if not self.alpha > 0 or not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be a positive finite number, got {self.alpha}")
        if int(self.min_value) != self.min_value or self.min_value < 1:
            raise ValueError(f"min_value must be a positive integer, got {self.min_value}")
        if not self.ell_tilde.is_constant:
            raise ValueError("term-count sampling supports a constant slowly varying factor only")

    def tail(self, j):
        """Exact ``P{N > j}``."""
        j = np.asarray(j, dtype=np.float64)
        c = self.ell_tilde.c
        with np.errstate(divide="ignore"):
            p = np.minimum(1.0, c * j ** (-self.alpha))
        out = np.where(j < self.min_value, 1.0, p)
        return out if out.ndim else float(out)


def lengths_from_uniform(law, u):
    """Inverse transform for given uniforms ``u`` in ``(0, 1]``."""
    u = np.asarray(u, dtype=np.float64)
    if np.any((u <= 0) | (u > 1)):
        raise ValueError("uniforms must lie in (0, 1]")
    v = np.ceil((law.ell_tilde.c / u) ** (1.0 / law.alpha))
    v = np.minimum(v, _N_MAX)
    return np.maximum(law.min_value, v.astype(np.int64))


def sample_lengths(law, count, seed):
    """``count`` i.i.d. term counts; deterministic given ``seed``."""
    if int(count) != count or count < 1:
        raise ValueError(f"count must be a positive integer, got {count}")
    rng = _seeding.as_generator(seed)
    u = 1.0 - rng.random(int(count))
    return lengths_from_uniform(law, u)


@dataclass(frozen=True)
class RandomD:
    """Bounded law of the number of minimal-index columns, ``d < C``."""

    support: tuple
    probs: tuple
    C: int

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(int(s) for s in self.support))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if int(self.C) != self.C or self.C <= 1:
            raise ValueError(f"C must be an integer > 1, got {self.C}")
        if not self.support or len(self.support) != len(self.probs):
            raise ValueError("support and probs must be nonempty and the same length")
        if any(p < 0 for p in self.probs) or not math.isclose(sum(self.probs), 1.0, abs_tol=1e-12):
            raise ValueError("probs must be nonnegative and sum to 1")
        if any(s < 1 for s in self.support):
            raise ValueError("support values must be >= 1")

    @property
    def max(self):
        return max(s for s, p in zip(self.support, self.probs) if p > 0)

    def check_bound(self, l_n):
        """Enforce ``d < min(C, l_n)`` on every support point with positive mass."""
        d_n = min(self.C, int(l_n))
        if self.max >= d_n:
            raise ValueError(
                f"random d support reaches {self.max} but must stay below "
                f"d_n = min(C={self.C}, l_n={l_n}) = {d_n}"
            )


def sample_d(rd, seed):
    rng = _seeding.as_generator(seed)
    return int(rng.choice(np.asarray(rd.support), p=np.asarray(rd.probs)))


def empirical_regime_ratio(law, rule, z1, n, chi, margin="pareto"):
    """``P{N > l_n} / P{z1 Y > u_n}`` from the exact laws at horizon ``n``.

    ``margin`` selects the marginal of ``Y``: ``"pareto"`` (exactly
    ``c x^-k1``) or ``"frechet"`` (``1 - exp(-c x^-k1)``).
    """
    l_n = length_scale(n, chi)
    u_n = threshold_u(n, rule)
    p_len = law.tail(l_n)
    x = u_n / float(z1)
    if rule.ell1.is_constant:
        c = rule.ell1.c
        if margin == "pareto":
            p_term = min(1.0, c * x ** (-rule.k1))
        elif margin == "frechet":
            p_term = -math.expm1(-c * x ** (-rule.k1))
        else:
            raise ValueError(f"unknown margin {margin!r}")
    else:
        from .rv_core import TailSpec, marginal_tail

        p_term = marginal_tail(TailSpec(rule.k1, rule.ell1), x)
    return p_len / p_term


__all__ = [
    "LengthLaw",
    "RandomD",
    "ThresholdRule",
    "lengths_from_uniform",
    "sample_lengths",
    "sample_d",
    "empirical_regime_ratio",
]
