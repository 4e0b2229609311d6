"""
Theorem verification: gate the hypotheses, simulate, compare estimates
against predictions wired from the configured ground truth.

Theorem ids
-----------
T2     one minimal-index column, deterministic ``l_n``
T3.1   ``d >= 2`` independent minimal columns, weighted extremal index
T3.2   ordered / cumulative minimal columns, extremal index of one column
T4     random ``d`` and random term counts, term-dominant regime
C3     signed weights, one minimal column per sign
C4     signed weights, random ``d`` per sign
T5i    length-dominant regime with the two side conditions on ``alpha chi0``
T5ii   balanced regime
T6     random ``d`` in the length-dominant regime

Every id checks all of its hypotheses before sampling and raises
:class:`HypothesisError` naming the first one that fails.

Tolerances: extremal index +-0.1 absolute, tail index +-15% relative,
divergence ratio and balance ratio +-50% relative, tau +-10% relative.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .. import columns as col
from ..estimators import estimate_tau, hill, theta_from_paths
from ..rv_core import (
    Regime,
    alpha_chi,
    check_t5_conditions,
    chi_is_admissible,
    chi_upper,
    classify_regime,
    theta_weighted,
    threshold_u,
)
from ..lengths import empirical_regime_ratio
from .scenario import run_scenario, side_width

THEOREMS = ("T2", "T3.1", "T3.2", "T4", "C3", "C4", "T5i", "T5ii", "T6")

THETA_TOL = 0.1
TAIL_REL = 0.15
DIVERGENCE_REL = 0.5
TAU_REL = 0.10
BALANCE_REL = 0.5
CONTROL_GAP = 0.2  # falsification control runs only if theta(z) and theta_1 differ this much
MIN_STRATUM = 100  # replications needed before a d-stratum is tested

ESTIMATOR_NOTE = (
    "extremal indices are estimated as -log P(max <= u_n) / tau over path (or sub-block) "
    "maxima; the aggregate sequences need not be stationary, so reading these estimates "
    "as the limiting extremal index is heuristic"
)


class HypothesisError(ValueError):
    """A theorem hypothesis does not hold for the configuration."""


@dataclass
class Check:
    name: str
    kind: str  # tail | extremal | tau | divergence | control | balance | info
    predicted: object
    estimated: float
    stderr: float
    tolerance: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "predicted": self.predicted,
            "estimated": self.estimated,
            "stderr": self.stderr,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    theorem_id: str
    passed: bool
    predicted: dict
    estimated: dict
    tolerances: dict
    checks: list
    hypotheses: list
    runtime: float
    config: dict
    cap_frequency: float
    sandwich_violations: int
    backend: str
    notes: list = field(default_factory=list)

    def to_dict(self, include_runtime=True):
        d = {
            "theorem_id": self.theorem_id,
            "pass": self.passed,
            "predicted": self.predicted,
            "estimated": self.estimated,
            "tolerances": self.tolerances,
            "checks": [c.to_dict() for c in self.checks],
            "hypotheses": self.hypotheses,
            "cap_frequency": self.cap_frequency,
            "sandwich_violations": self.sandwich_violations,
            "backend": self.backend,
            "notes": self.notes,
            "config": self.config,
        }
        if include_runtime:
            d["runtime"] = self.runtime
        return d

    def failed_checks(self):
        return [c for c in self.checks if c.kind != "info" and not c.passed]


TOLERANCES = {
    "extremal_index_abs": THETA_TOL,
    "tail_index_rel": TAIL_REL,
    "divergence_ratio_rel": DIVERGENCE_REL,
    "tau_rel": TAU_REL,
    "balance_ratio_rel": BALANCE_REL,
}


# ---------------------------------------------------------------------------
# hypothesis gating
# ---------------------------------------------------------------------------

class _Gate:
    def __init__(self, tid):
        self.tid = tid
        self.ok = []

    def require(self, cond, label, why):
        if not cond:
            raise HypothesisError(f"{self.tid}: {why}")
        self.ok.append(label)


def _gate_side(g, side, n, tag=""):
    """Hypotheses shared by every theorem: k1 < k, 0 < chi < chi0, d < l_n."""
    k1, k = side.k1, side.k
    g.require(k1 < k, f"k1{tag} < k{tag}", f"degenerate profile: need k1{tag} < k{tag}, got {k1}, {k}")
    chi0 = chi_upper(k1, k)
    g.require(
        chi_is_admissible(side.chi, k1, k),
        f"0 < chi{tag} < chi0{tag} = {chi0:.6g}",
        f"chi{tag} = {side.chi:g} violates 0 < chi < chi0 = (k - k1)/(k1 (k + 1)) = {chi0:.6g}",
    )
    l_n, _ = side_width(side, n)
    if side.random_d is not None:
        try:
            side.random_d.check_bound(l_n)
        except ValueError as exc:
            raise HypothesisError(f"{g.tid}: {exc}") from None
        g.ok.append(f"d{tag} < min(C, l_n) = {min(side.random_d.C, l_n)}")
    else:
        d = side.array.d
        g.require(
            d <= l_n - 1,
            f"d{tag} = {d} <= l_n - 1 = {l_n - 1}",
            f"d{tag} = {d} must not exceed l_n - 1 = {l_n - 1} at n = {n}",
        )


def _regime_of(side):
    return classify_regime(side.length_law.alpha, side.chi)


def _require_term_dominant(g, side, tag=""):
    g.require(side.length_law is not None, f"N{tag} random", f"needs a length_law for N{tag}")
    a, c = side.length_law.alpha, side.chi
    g.require(
        _regime_of(side) == Regime.TERM_DOMINANT,
        f"alpha{tag} chi{tag} = {alpha_chi(a, c):g} > 1",
        f"alpha{tag} chi{tag} = {alpha_chi(a, c):g} <= 1 violates the term-dominant "
        "condition P{N_n > l_n} = o(P{Y_n1 > u_n})",
    )


def _require_fixed_length(g, cfg):
    g.require(
        cfg.length_law is None,
        "deterministic l_n",
        "this statement covers deterministic l_n terms; remove length_law",
    )


def _coupling_family(array):
    cp = array.coupling
    if isinstance(cp, col.A1_COUPLINGS):
        return "A1"
    if isinstance(cp, col.A2_COUPLINGS):
        return "A2"
    if isinstance(cp, col.OrderedRows):
        return "A3/A4"
    return "A4"


def _require_cumsum_weights(g, side, d):
    if isinstance(side.array.coupling, col.CumulativeSums):
        w = [abs(v) for v in list(side.weights)[:d]] + [abs(side.fill)] * max(0, d - len(side.weights))
        g.require(
            all(a <= b for a, b in zip(w, w[1:])),
            "z_1 <= ... <= z_d",
            "cumulative-sum columns need nondecreasing weights z_1 <= ... <= z_d",
        )


def gate(theorem_id, cfg):
    """Check every hypothesis of ``theorem_id``; return the satisfied list."""
    if theorem_id not in THEOREMS:
        raise HypothesisError(f"unknown theorem id {theorem_id!r}; expected one of {', '.join(THEOREMS)}")
    g = _Gate(theorem_id)
    n = cfg.n
    if theorem_id in ("C3", "C4"):
        g.require(cfg.signed, "signed weights", "needs signed=true with both weight signs")
        pos, neg = cfg.sides()
        for side, tag in ((pos, "+"), (neg, "-")):
            _gate_side(g, side, n, tag)
            _require_term_dominant(g, side, tag)
            if theorem_id == "C3":
                g.require(
                    side.random_d is None and side.array.d == 1,
                    f"unique minimal column{tag}",
                    f"needs a unique minimal-index column on the {tag} side (d = 1, no random d)",
                )
        for h in _horizons(cfg):
            for side, tag in ((pos, "+"), (neg, "-")):
                _gate_side(g, side, h, tag)
        if theorem_id == "C4":
            g.require(
                pos.random_d is not None or neg.random_d is not None,
                "random d",
                "needs random_d or random_d_neg; use C3 for fixed d = 1",
            )
        return g.ok

    g.require(not cfg.signed, "positive weights", "covers positive weights only; use C3/C4 for signed")
    (side,) = cfg.sides()
    _gate_side(g, side, n)
    d = side.array.d
    fam = _coupling_family(side.array)

    if theorem_id == "T2":
        _require_fixed_length(g, cfg)
        g.require(cfg.random_d is None and d == 1, "d = 1", "needs a unique minimal column (d = 1)")
    elif theorem_id == "T3.1":
        _require_fixed_length(g, cfg)
        g.require(cfg.random_d is None and d >= 2, "fixed d >= 2", "needs a fixed d >= 2")
        g.require(fam == "A1", "independent minimal columns", "needs independent minimal columns")
    elif theorem_id == "T3.2":
        _require_fixed_length(g, cfg)
        g.require(cfg.random_d is None and d >= 2, "fixed d >= 2", "needs a fixed d >= 2")
        g.require(
            fam in ("A3/A4", "A4"),
            "ordered maxima of minimal columns",
            "needs ordered or cumulative-sum minimal columns",
        )
        _require_cumsum_weights(g, side, d)
    elif theorem_id in ("T4", "T6"):
        if theorem_id == "T4":
            _require_term_dominant(g, side)
        else:
            _require_length_dominant(g, cfg, side)
        if cfg.random_d is None:
            g.require(d > 1, "d > 1 a.s.", "a fixed d must be > 1; use T2 or T5 for d = 1")
        else:
            g.require(min(cfg.random_d.support) > 1, "d > 1", "random d must be > 1")
        if fam == "A4":
            top = cfg.random_d.max if cfg.random_d is not None else d
            _require_cumsum_weights(g, side, top)
    elif theorem_id == "T5i":
        _require_length_dominant(g, cfg, side)
        g.require(cfg.random_d is None and d == 1, "d = 1", "needs a unique minimal column (d = 1)")
    elif theorem_id == "T5ii":
        g.require(cfg.length_law is not None, "N random", "needs a length_law")
        g.require(cfg.random_d is None and d == 1, "d = 1", "needs a unique minimal column (d = 1)")
        a = cfg.length_law.alpha
        g.require(
            _regime_of(side) == Regime.BALANCED,
            "alpha chi = 1",
            f"alpha chi = {alpha_chi(a, side.chi):g} != 1; the balanced statement needs alpha chi = 1",
        )
        ratio = _analytic_balance(cfg, side)
        g.require(
            abs(ratio - 1.0) <= BALANCE_REL,
            f"P(N > l_n) / P(z_1 Y > u_n) = {ratio:.4g} ~ 1",
            f"P(N > l_n) / P(z_1 Y > u_n) = {ratio:.4g} at n = {n} is not within "
            f"{BALANCE_REL:.0%} of 1; match the constants of the term-count and term tails",
        )
    return g.ok


def _require_length_dominant(g, cfg, side):
    g.require(side.length_law is not None, "N random", "needs a length_law")
    a = side.length_law.alpha
    g.require(
        _regime_of(side) == Regime.LENGTH_DOMINANT,
        f"alpha chi = {alpha_chi(a, side.chi):g} < 1",
        f"alpha chi = {alpha_chi(a, side.chi):g} >= 1; the length-dominant statement needs "
        "P{Y_n1 > u_n} = o(P{N_n > l_n})",
    )
    g.require(cfg.delta_star is not None, "delta_star given", "needs delta_star")
    cond = check_t5_conditions(a, side.chi, side.k1, side.k, cfg.delta_star)
    chi0 = chi_upper(side.k1, side.k)
    g.require(
        cond.tail_ok,
        "alpha chi0 > 1 + alpha delta*/k1",
        f"alpha chi0 = {a * chi0:.6g} <= 1 + alpha delta*/k1 = "
        f"{1 + a * cfg.delta_star / side.k1:.6g}",
    )


def _analytic_balance(cfg, side):
    z1 = abs(list(side.weights)[0])
    return empirical_regime_ratio(
        side.length_law, side.rule, z1, cfg.n, side.chi, margin=side.array.minimal_columns[0].margin_family
    )


# ---------------------------------------------------------------------------
# estimation helpers
# ---------------------------------------------------------------------------

def _tail_check(name, values, k1):
    v = np.asarray(values).ravel()
    v = v[v > 0]
    est = hill(v)
    rel = abs(est.point - k1) / k1
    return Check(
        f"tail_index[{name}]", "tail", k1, est.point, est.stderr, f"+-{TAIL_REL:.0%} rel",
        rel <= TAIL_REL, {"k_order": est.tuning["k_order"], "pooled_positive": int(v.size)},
    )


def _theta_check(name, paths, u, theta, block_length, kind="extremal"):
    est = theta_from_paths(paths, u, block_length)
    ok = abs(est.point - theta) <= THETA_TOL
    return Check(
        f"extremal_index[{name}]", kind, theta, est.point, est.stderr, f"+-{THETA_TOL} abs",
        ok if kind != "info" else True,
        {"u": u, "p_hat": est.tuning["p_hat"], "tau_hat": est.tuning["tau_hat"],
         "clipped": est.tuning["clipped"], "blocks": est.tuning["blocks"],
         "within_tolerance": ok},
    )


def _horizons(cfg):
    """The two horizons of the divergence check: configured, else ``(n/10, n)``."""
    return cfg.divergence_horizons or [max(1, cfg.n // 10), cfg.n]


def _tau_check(name, paths, u, tau):
    est = estimate_tau(paths, u)
    return Check(
        f"tau[{name}]", "tau", tau, est, float("nan"), f"+-{TAU_REL:.0%} rel",
        abs(est / tau - 1) <= TAU_REL, {"u": u},
    )


def _control_check(name, paths, u, theta1, block_length):
    """Falsification control: the estimate must sit away from ``theta1``."""
    est = theta_from_paths(paths, u, block_length)
    outside = abs(est.point - theta1) > THETA_TOL
    return Check(
        f"control[{name} not at theta_1]", "control", f"outside {theta1} +- {THETA_TOL}",
        est.point, est.stderr, f"|est - {theta1}| > {THETA_TOL}", outside,
        {"theta_1": theta1},
    )


def _safe(fn, *args, **kw):
    """Run an estimator; a degenerate sample becomes a failed check
    (or an informational note when the check itself is informational)."""
    try:
        return fn(*args, **kw)
    except ValueError as exc:
        label = _CHECK_LABELS.get(fn.__name__, fn.__name__.strip("_"))
        info = kw.get("kind") == "info"
        return Check(
            f"{label}[{args[0]}]", "info" if info else "error", None, float("nan"), float("nan"),
            "", info, {"error": str(exc)},
        )


_CHECK_LABELS = {
    "_tail_check": "tail_index",
    "_theta_check": "extremal_index",
    "_tau_check": "tau",
    "_control_check": "control",
}


def _side_thetas(side, d):
    """Predicted extremal index of ``Y*`` for ``d`` minimal columns, or None."""
    model = side.array.with_d(d)
    thetas = model.column_thetas()
    fam = _coupling_family(model)
    if d == 1 or fam in ("A3/A4", "A4"):
        # ordered maxima: the extremal index of the dominating column; the
        # shipped ordered couplings give every column the same one
        return thetas[0]
    if fam == "A1":
        z = [abs(w) for w in list(side.weights)[:d]] + [abs(side.fill)] * max(0, d - len(side.weights))
        return theta_weighted(thetas, z, side.k1)
    return None


def _sum_predicted(side, d):
    """Whether the extremal index of ``Y`` is predicted alongside ``Y*``."""
    return d == 1 or _coupling_family(side.array) == "A1"


# ---------------------------------------------------------------------------
# main entry
# ---------------------------------------------------------------------------

def verify_theorem(theorem_id, cfg, workers=None):
    """Gate, simulate and compare; returns a :class:`VerificationReport`."""
    t0 = time.perf_counter()
    hyps = gate(theorem_id, cfg)
    if cfg.signed:
        checks, predicted, notes, res = _verify_signed(theorem_id, cfg, workers)
    else:
        checks, predicted, notes, res = _verify_positive(theorem_id, cfg, workers)
    notes = [ESTIMATOR_NOTE] + notes
    estimated = {
        c.name: {"point": c.estimated, "stderr": c.stderr} for c in checks
    }
    passed = all(c.passed for c in checks if c.kind != "info")
    return VerificationReport(
        theorem_id, passed, predicted, estimated, dict(TOLERANCES), checks, hyps,
        time.perf_counter() - t0, cfg.to_dict(), res.cap_frequency,
        res.sandwich_violations, res.backend, notes,
    )


def _verify_positive(tid, cfg, workers):
    (side,) = cfg.sides()
    res = run_scenario(cfg, workers=workers)
    pos = res.positive
    u = pos.u_n
    k1 = side.k1
    bl = cfg.block_length
    checks, notes = [], []
    predicted = {"tail_index": k1}
    fam = _coupling_family(side.array)

    tail_sum = fam in ("A1", "A2") or tid in ("T2", "T5i", "T5ii")
    checks.append(_safe(_tail_check, "Y*", res.y_star, k1))
    if tail_sum:
        checks.append(_safe(_tail_check, "Y", res.y_sum, k1))
    else:
        notes.append("tail index of Y is not predicted without independent or A2-type minimal columns")

    extremal = True
    if tid == "T5i":
        cond = check_t5_conditions(side.length_law.alpha, side.chi, k1, side.k, cfg.delta_star)
        if not cond.extremal_ok:
            extremal = False
            notes.append(
                "alpha chi0 <= 1 + (1 - alpha chi)/2: the extremal index is not predicted; tail checks only"
            )

    if tid in ("T4", "T6") or cfg.random_d is not None:
        if extremal:
            _stratified(checks, notes, predicted, cfg, side, res, u, bl)
    elif extremal:
        d = side.array.d
        theta = _side_thetas(side, d)
        predicted["extremal_index"] = theta
        checks.append(_safe(_theta_check, "Y*", res.y_star, u, theta, bl))
        if tid == "T3.2":
            checks.append(_safe(_theta_check, "Y", res.y_sum, u, theta, bl, kind="info"))
            notes.append("extremal index of Y is informational for ordered/cumulative columns")
        else:
            checks.append(_safe(_theta_check, "Y", res.y_sum, u, theta, bl))
        if tid == "T3.1":
            z = [abs(w) for w in side.weights[:d]] + [side.fill] * max(0, d - len(side.weights))
            cj = col.a2_constants(side.array)
            tau = sum(c * (zj / float(cfg.threshold["y"])) ** k1 for c, zj in zip(cj, z))
            predicted["tau"] = tau
            for name, paths in (("Y*", res.y_star), ("Y", res.y_sum)):
                checks.append(_safe(_tau_check, name, paths, u, tau))
            theta1 = side.array.column_thetas()[0]
            if abs(theta - theta1) >= CONTROL_GAP:
                checks.append(_safe(_control_check, "Y*", res.y_star, u, theta1, bl))
    if tid == "T5ii":
        checks.append(_balance_check(cfg, side, res))
    return checks, predicted, notes, res


def _stratified(checks, notes, predicted, cfg, side, res, u, bl):
    pos = res.positive
    law = side.length_law
    preds = {}
    for d in sorted(set(pos.d_values.tolist())):
        rows = pos.d_values == d
        theta = _side_thetas(side, d)
        key = f"d={d}"
        if theta is None:
            notes.append(f"{key}: extremal index not predicted for {_coupling_family(side.array)} columns")
            continue
        if law is not None and law.min_value < d:
            notes.append(
                f"{key}: N can fall below d (min_value {law.min_value}); extremal index not checked"
            )
            continue
        if rows.sum() < MIN_STRATUM:
            notes.append(f"{key}: only {int(rows.sum())} replications; stratum not checked")
            continue
        preds[key] = theta
        checks.append(_safe(_theta_check, f"Y*|{key}", res.y_star[rows], u, theta, bl))
        kind = "extremal" if _sum_predicted(side, d) else "info"
        checks.append(_safe(_theta_check, f"Y|{key}", res.y_sum[rows], u, theta, bl, kind=kind))
    if preds:
        predicted["extremal_index"] = preds


def _balance_check(cfg, side, res):
    pos = res.positive
    p_len = pos.length_exceed.sum() / pos.length_exceed.size / cfg.n
    p_term = pos.first_exceed.sum() / pos.first_exceed.size / cfg.n
    ratio = p_len / p_term if p_term > 0 else float("inf")
    return Check(
        "balance_ratio", "balance", 1.0, ratio, float("nan"), f"+-{BALANCE_REL:.0%} rel",
        abs(ratio - 1) <= BALANCE_REL,
        {"p_length": p_len, "p_term": p_term, "analytic": _analytic_balance(cfg, side)},
    )


def _verify_signed(tid, cfg, workers):
    pos_side, neg_side = cfg.sides()
    res = run_scenario(cfg, workers=workers)
    bl = cfg.block_length
    checks, notes, predicted = [], [], {}
    kp, kn = pos_side.k1, neg_side.k1
    u_plus, u_minus = res.positive.u_n, res.negative.u_n

    # (dominant side, its threshold, the other threshold, maximum-type path, sum path)
    cases = []
    if kp <= kn:
        cases.append(("+", pos_side, res.positive, u_plus, neg_side, res.y_star, res.y_sum))
    if kn <= kp:
        cases.append(("-", neg_side, res.negative, u_minus, pos_side, -res.y_starstar, -res.y_sum))

    for tag, side, sres, u, other, ext, tot in cases:
        mname, sname = ("Y*", "Y") if tag == "+" else ("-Y**", "-Y")
        predicted[f"tail_index{tag}"] = side.k1
        checks.append(_safe(_tail_check, mname, ext, side.k1))
        checks.append(_safe(_tail_check, sname, tot, side.k1))
        if side.random_d is None:
            theta = _side_thetas(side, side.array.d)
            predicted[f"extremal_index{tag}"] = theta
            checks.append(_safe(_theta_check, f"{mname}|u{tag}", ext, u, theta, bl))
            checks.append(_safe(_theta_check, f"{sname}|u{tag}", tot, u, theta, bl))
        else:
            preds = {}
            for d in sorted(set(sres.d_values.tolist())):
                rows = sres.d_values == d
                theta = _side_thetas(side, d)
                key = f"d{tag}={d}"
                if theta is None or side.length_law.min_value < d or rows.sum() < MIN_STRATUM:
                    notes.append(f"{key}: extremal index not checked")
                    continue
                preds[key] = theta
                checks.append(_safe(_theta_check, f"{mname}|u{tag}|{key}", ext[rows], u, theta, bl))
                kind = "extremal" if _sum_predicted(side, d) else "info"
                checks.append(
                    _safe(_theta_check, f"{sname}|u{tag}|{key}", tot[rows], u, theta, bl, kind=kind)
                )
            if preds:
                predicted[f"extremal_index{tag}"] = preds

        if side.k1 < other.k1:
            other_tag = "-" if tag == "+" else "+"
            predicted[f"extremal_index|u{other_tag}"] = "does-not-exist"
            checks.extend(_divergence_checks(cfg, tag, side, other, mname, sname, workers, res))
    if kp == kn:
        notes.append("k1+ = k1-: both signs share the minimal tail index; no divergence check")
    return checks, predicted, notes, res


def _divergence_checks(cfg, tag, side, other, mname, sname, workers, res_main):
    lo, hi = _horizons(cfg)
    exponent = 1.0 - side.k1 / other.k1
    pred = (hi / lo) ** exponent
    taus = {}
    for h in (lo, hi):
        res = res_main if h == cfg.n else run_scenario(cfg, n=h, workers=workers)
        u = threshold_u(h, other.rule)
        if tag == "+":
            paths = {mname: res.y_star, sname: res.y_sum}
        else:
            paths = {mname: -res.y_starstar, sname: -res.y_sum}
        taus[h] = {k: _tau_or_nan(v, u) for k, v in paths.items()}
    out = []
    for name in (mname, sname):
        ratio = taus[hi][name] / taus[lo][name]
        ok = math.isfinite(ratio) and abs(ratio / pred - 1) <= DIVERGENCE_REL
        out.append(Check(
            f"divergence[{name}|u{'-' if tag == '+' else '+'}]", "divergence", pred, ratio,
            float("nan"), f"+-{DIVERGENCE_REL:.0%} rel", ok,
            {"horizons": [lo, hi], "tau_lo": taus[lo][name], "tau_hi": taus[hi][name],
             "exponent": exponent},
        ))
    return out


def _tau_or_nan(paths, u):
    try:
        return estimate_tau(paths, u)
    except ValueError:
        return float("nan")
