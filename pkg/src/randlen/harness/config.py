"""
Experiment configuration: JSON parsing with strict field checking.

A configuration is a JSON object. Unknown keys are rejected at every level
so a misspelt field fails loudly instead of silently taking a default.
The parsed :class:`ExperimentConfig` keeps the raw dictionary for echoing
into reports and rebuilds model objects on demand.
"""

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .. import columns as col
from ..aggregate import WeightVector
from ..lengths import LengthLaw, RandomD
from ..rv_core import SlowlyVarying, TailSpec, ThresholdRule


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


_TOP_KEYS = {
    "seed", "n", "replications", "chi", "array", "weights", "length_law",
    "random_d", "threshold", "signed", "chi_pos", "chi_neg", "alpha_pos",
    "alpha_neg", "negative_array", "random_d_neg", "delta_star", "n_cap",
    "block_length", "divergence_horizons", "workers",
}
_REQUIRED = ("seed", "n", "replications", "chi", "array", "weights", "threshold")
_ARRAY_KEYS = {"k1", "k", "d", "minimal_columns", "bulk_column", "bulk_tail_indices", "coupling"}
_COLUMN_KEYS = {"k", "ell", "dynamics", "margin_family"}
_ELL_KEYS = {"kind", "c", "beta"}
_DYN_KEYS = {"kind", "phi", "m"}
_COUPLING_KEYS = {"kind", "c", "lo", "hi", "rho"}
_WEIGHT_KEYS = {"z", "fill", "fill_negative"}
_LAW_KEYS = {"alpha", "ell_tilde", "min_value"}
_RD_KEYS = {"support", "probs", "C"}
_THRESHOLD_KEYS = {"y", "k1", "ell1"}


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(extra)}")


def _pos_int(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 1:
        raise ConfigError(f"{where} must be a positive integer, got {v!r}")
    return int(v)


def _pos_real(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
        raise ConfigError(f"{where} must be a positive finite number, got {v!r}")
    return float(v)


def parse_ell(obj, where="ell"):
    if obj is None:
        return SlowlyVarying.constant(1.0)
    _check_keys(obj, _ELL_KEYS, where)
    kind = obj.get("kind", "constant")
    c = _pos_real(obj.get("c", 1.0), f"{where}.c")
    if kind == "constant":
        if "beta" in obj:
            raise ConfigError(f"{where}: beta is only valid for kind 'log_power'")
        return SlowlyVarying.constant(c)
    if kind == "log_power":
        return SlowlyVarying.log_power(c, float(obj.get("beta", 0.0)))
    raise ConfigError(f"{where}.kind must be 'constant' or 'log_power', got {kind!r}")


def parse_dynamics(obj, where="dynamics"):
    if obj is None:
        return col.IID()
    _check_keys(obj, _DYN_KEYS, where)
    kind = obj.get("kind", "iid")
    try:
        if kind == "iid":
            return col.IID()
        if kind == "armax":
            return col.Armax(float(obj["phi"]))
        if kind == "movingmax":
            return col.MovingMax(int(obj["m"]))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]}") from None
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.kind must be one of iid, armax, movingmax; got {kind!r}")


def parse_column(obj, where, default_k=None):
    _check_keys(obj, _COLUMN_KEYS, where)
    k = obj.get("k", default_k)
    if k is None:
        raise ConfigError(f"{where}: missing field k")
    try:
        return col.ColumnModel(
            TailSpec(_pos_real(k, f"{where}.k"), parse_ell(obj.get("ell"), f"{where}.ell")),
            parse_dynamics(obj.get("dynamics"), f"{where}.dynamics"),
            obj.get("margin_family", "frechet"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_coupling(obj, where="coupling"):
    if obj is None:
        return col.IndependentColumns()
    _check_keys(obj, _COUPLING_KEYS, where)
    kind = obj.get("kind", "independent")
    try:
        if kind == "independent":
            return col.IndependentColumns()
        if kind == "scaled":
            return col.ScaledMinimalColumns(tuple(obj["c"]))
        if kind == "shared_factor":
            return col.SharedBoundedFactor(float(obj["lo"]), float(obj["hi"]))
        if kind == "ordered":
            return col.OrderedRows(float(obj["rho"]))
        if kind == "cumsum":
            return col.CumulativeSums()
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]}") from None
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(
        f"{where}.kind must be one of independent, scaled, shared_factor, ordered, cumsum; got {kind!r}"
    )


def parse_array(obj, where="array"):
    _check_keys(obj, _ARRAY_KEYS, where)
    for key in ("k1", "k", "minimal_columns", "bulk_column"):
        if key not in obj:
            raise ConfigError(f"{where}: missing field {key}")
    k1 = _pos_real(obj["k1"], f"{where}.k1")
    k = _pos_real(obj["k"], f"{where}.k")
    d = _pos_int(obj.get("d", 1), f"{where}.d")
    mins = obj["minimal_columns"]
    if not isinstance(mins, list) or not mins:
        raise ConfigError(f"{where}.minimal_columns must be a nonempty list")
    minimal = [parse_column(m, f"{where}.minimal_columns[{j}]", k1) for j, m in enumerate(mins)]
    bulk = parse_column(obj["bulk_column"], f"{where}.bulk_column", k)
    try:
        profile = col.SeriesProfile(d, k1, k, tuple(obj.get("bulk_tail_indices", ())))
        return col.ArrayModel(profile, tuple(minimal), bulk, parse_coupling(obj.get("coupling")))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_weights(obj, where="weights"):
    _check_keys(obj, _WEIGHT_KEYS, where)
    if "z" not in obj:
        raise ConfigError(f"{where}: missing field z")
    try:
        return WeightVector(
            tuple(obj["z"]), float(obj.get("fill", 1.0)), float(obj.get("fill_negative", -1.0))
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_length_law(obj, where="length_law", alpha=None):
    _check_keys(obj, _LAW_KEYS, where)
    a = obj.get("alpha") if alpha is None else alpha
    if a is None:
        raise ConfigError(f"{where}: missing field alpha")
    try:
        return LengthLaw(
            _pos_real(a, f"{where}.alpha"),
            parse_ell(obj.get("ell_tilde"), f"{where}.ell_tilde"),
            _pos_int(obj.get("min_value", 1), f"{where}.min_value"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_random_d(obj, where="random_d"):
    _check_keys(obj, _RD_KEYS, where)
    try:
        return RandomD(tuple(obj["support"]), tuple(obj["probs"]), int(obj["C"]))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


@dataclass
class SideSpec:
    """Everything needed to simulate one sign of a scenario."""

    array: col.ArrayModel
    weights: tuple  # configured weights of this sign, in order
    fill: float
    chi: float
    length_law: Optional[LengthLaw]
    random_d: Optional[RandomD]
    rule: ThresholdRule
    negative: bool = False

    @property
    def k1(self):
        return self.array.profile.k1

    @property
    def k(self):
        return self.array.profile.k


@dataclass
class ExperimentConfig:
    seed: int
    n: int
    replications: int
    chi: float
    array: col.ArrayModel
    weights: WeightVector
    threshold: dict
    length_law: Optional[LengthLaw] = None
    random_d: Optional[RandomD] = None
    signed: bool = False
    chi_pos: Optional[float] = None
    chi_neg: Optional[float] = None
    alpha_pos: Optional[float] = None
    alpha_neg: Optional[float] = None
    negative_array: Optional[col.ArrayModel] = None
    random_d_neg: Optional[RandomD] = None
    delta_star: Optional[float] = None
    n_cap: Optional[int] = None
    block_length: Optional[int] = None
    divergence_horizons: Optional[list] = None
    workers: int = 1
    raw: dict = field(default_factory=dict, repr=False)

    # -- derived pieces ----------------------------------------------------

    def rule_for(self, array):
        """Threshold rule for ``array``: configured ``y`` with that array's ``k1``
        and the first minimal column's slowly varying factor unless overridden."""
        t = self.threshold
        k1 = float(t.get("k1", array.profile.k1)) if not self.signed else array.profile.k1
        ell1 = (
            parse_ell(t["ell1"], "threshold.ell1")
            if "ell1" in t and not self.signed
            else array.minimal_columns[0].marginal.ell
        )
        return ThresholdRule(float(t["y"]), k1, ell1)

    @property
    def rule(self):
        return self.rule_for(self.array)

    def sides(self):
        """One :class:`SideSpec` in positive mode, two (``+``, ``-``) in signed mode."""
        if not self.signed:
            return [
                SideSpec(self.array, self.weights.z, self.weights.fill, self.chi,
                         self.length_law, self.random_d, self.rule)
            ]
        law = self.raw.get("length_law") or {}
        pos_law = parse_length_law(law, "length_law", self.alpha_pos) if self.alpha_pos else None
        neg_law = parse_length_law(law, "length_law", self.alpha_neg) if self.alpha_neg else None
        zp = tuple(self.weights.z[i] for i in self.weights.pos)
        zn = tuple(self.weights.z[i] for i in self.weights.neg)
        return [
            SideSpec(self.array, zp, self.weights.fill, self.chi_pos, pos_law,
                     self.random_d, self.rule_for(self.array)),
            SideSpec(self.negative_array, zn, self.weights.fill_negative, self.chi_neg,
                     neg_law, self.random_d_neg, self.rule_for(self.negative_array), True),
        ]

    def with_overrides(self, **changes):
        """New config from the raw dictionary with top-level fields replaced."""
        raw = copy.deepcopy(self.raw)
        raw.update(changes)
        return from_dict(raw)

    def to_dict(self):
        return copy.deepcopy(self.raw)


def from_dict(raw, seed=None):
    """Validate ``raw`` and build an :class:`ExperimentConfig`.

    ``seed`` overrides the configured seed.
    """
    _check_keys(raw, _TOP_KEYS, "config")
    raw = copy.deepcopy(raw)
    if seed is not None:
        raw["seed"] = seed
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"config: missing field {key}")
    s = raw["seed"]
    if isinstance(s, bool) or not isinstance(s, int) or not 0 <= s < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {s!r}")
    n = _pos_int(raw["n"], "n")
    reps = _pos_int(raw["replications"], "replications")
    chi = _pos_real(raw["chi"], "chi")
    array = parse_array(raw["array"])
    weights = parse_weights(raw["weights"])
    t = raw["threshold"]
    _check_keys(t, _THRESHOLD_KEYS, "threshold")
    if "y" not in t:
        raise ConfigError("threshold: missing field y")
    _pos_real(t["y"], "threshold.y")
    signed = bool(raw.get("signed", False))

    law = raw.get("length_law")
    length_law = parse_length_law(law) if law is not None and not signed else None
    rd = raw.get("random_d")
    random_d = parse_random_d(rd) if rd is not None else None

    cfg = ExperimentConfig(
        seed=s, n=n, replications=reps, chi=chi, array=array, weights=weights,
        threshold=dict(t), length_law=length_law, random_d=random_d, signed=signed,
        raw=raw,
    )
    if raw.get("delta_star") is not None:
        cfg.delta_star = _pos_real(raw["delta_star"], "delta_star")
    if raw.get("n_cap") is not None:
        cfg.n_cap = _pos_int(raw["n_cap"], "n_cap")
    if raw.get("block_length") is not None:
        cfg.block_length = _pos_int(raw["block_length"], "block_length")
        if cfg.block_length > n:
            raise ConfigError(f"block_length={cfg.block_length} exceeds n={n}")
    if raw.get("divergence_horizons") is not None:
        h = raw["divergence_horizons"]
        if not isinstance(h, list) or len(h) != 2:
            raise ConfigError("divergence_horizons must be a list of two horizons")
        lo, hi = (_pos_int(v, "divergence_horizons") for v in h)
        if not lo < hi:
            raise ConfigError("divergence_horizons must be increasing")
        cfg.divergence_horizons = [lo, hi]
    cfg.workers = _pos_int(raw.get("workers", 1), "workers")

    if not signed:
        if not weights.all_positive:
            raise ConfigError(
                "weights must all be positive unless signed=true; negative weights "
                "need the signed decomposition"
            )
        for key in ("chi_pos", "chi_neg", "alpha_pos", "alpha_neg", "negative_array", "random_d_neg"):
            if raw.get(key) is not None:
                raise ConfigError(f"{key} is only valid with signed=true")
        if isinstance(array.coupling, col.OrderedRows):
            try:
                col.validate_ordered_weights(array, weights.weights(array.d))
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        return cfg

    # signed mode
    if not weights.is_signed:
        raise ConfigError(
            "signed mode needs both positive and negative weights; with one sign "
            "only, the maximum never exceeds a positive threshold"
        )
    if raw.get("negative_array") is None:
        raise ConfigError("signed mode needs negative_array")
    if "k1" in t or "ell1" in t:
        raise ConfigError("threshold.k1/ell1 are taken from each side's array in signed mode")
    cfg.negative_array = parse_array(raw["negative_array"], "negative_array")
    cfg.chi_pos = _pos_real(raw.get("chi_pos", chi), "chi_pos")
    cfg.chi_neg = _pos_real(raw.get("chi_neg", chi), "chi_neg")
    if law is not None:
        _check_keys(law, _LAW_KEYS, "length_law")
        a = law.get("alpha")
        cfg.alpha_pos = _pos_real(raw.get("alpha_pos", a), "alpha_pos") if raw.get("alpha_pos", a) else None
        cfg.alpha_neg = _pos_real(raw.get("alpha_neg", a), "alpha_neg") if raw.get("alpha_neg", a) else None
        if cfg.alpha_pos is None or cfg.alpha_neg is None:
            raise ConfigError("signed mode with a length law needs alpha_pos and alpha_neg")
    elif raw.get("alpha_pos") is not None or raw.get("alpha_neg") is not None:
        raise ConfigError("alpha_pos/alpha_neg need a length_law block (for ell_tilde and min_value)")
    if raw.get("random_d_neg") is not None:
        cfg.random_d_neg = parse_random_d(raw["random_d_neg"], "random_d_neg")
    for side in cfg.sides():
        if isinstance(side.array.coupling, col.OrderedRows):
            w = [abs(v) for v in side.weights] + [abs(side.fill)] * side.array.d
            try:
                col.validate_ordered_weights(side.array, w[: side.array.d])
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
    return cfg


def load_config(path, seed=None):
    """Read and validate a JSON configuration file."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p} is not valid JSON: {exc}") from None
    return from_dict(raw, seed=seed)
