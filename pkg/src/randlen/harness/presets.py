"""
Shipped scenario configurations, one per theorem id.

Each builder returns a plain dictionary in the JSON config format; the
``configs/`` directory holds the same dictionaries written to disk.
Thresholds ``y`` are chosen so that ``theta * tau`` sits between about 1
and 2.5, where the definition-based estimator has the least variance.
"""

import json
from pathlib import Path

SEED = 20240917


def _armax(phi, k=1.0):
    return {"k": k, "dynamics": {"kind": "armax", "phi": phi}}


def t2(seed=SEED + 1):
    return {
        "seed": seed, "n": 10_000, "replications": 500, "chi": 0.2,
        "array": {
            "k1": 1.0, "k": 3.0, "d": 1,
            "minimal_columns": [_armax(0.5)],
            "bulk_column": {"k": 3.0},
        },
        "weights": {"z": [1.0]},
        "threshold": {"y": 0.5},
    }


def t3_1(seed=SEED + 2):
    return {
        "seed": seed, "n": 10_000, "replications": 1000, "chi": 0.2,
        "array": {
            "k1": 1.0, "k": 3.0, "d": 2,
            "minimal_columns": [_armax(0.7), _armax(0.2)],
            "bulk_column": {"k": 3.0},
            "coupling": {"kind": "independent"},
        },
        "weights": {"z": [1.0, 2.0]},
        "threshold": {"y": 0.75},
    }


def t3_2(seed=SEED + 3):
    return {
        "seed": seed, "n": 10_000, "replications": 500, "chi": 0.2,
        "array": {
            "k1": 1.0, "k": 3.0, "d": 3,
            "minimal_columns": [_armax(0.5)],
            "bulk_column": {"k": 3.0},
            "coupling": {"kind": "cumsum"},
        },
        "weights": {"z": [1.0, 1.0, 1.0]},
        "threshold": {"y": 1.0},
    }


def _random_d_array(k):
    return {
        "k1": 1.0, "k": k, "d": 2,
        "minimal_columns": [_armax(0.7), _armax(0.2), _armax(0.7)],
        "bulk_column": {"k": k},
        "coupling": {"kind": "independent"},
    }


def t4(seed=SEED + 4):
    return {
        "seed": seed, "n": 10_000, "replications": 1000, "chi": 0.2,
        "array": _random_d_array(3.0),
        "weights": {"z": [1.0, 1.0, 2.0]},
        "length_law": {"alpha": 8.0, "min_value": 4},
        "random_d": {"support": [2, 3], "probs": [0.5, 0.5], "C": 4},
        "threshold": {"y": 1.0},
    }


def _signed_arrays():
    pos = {
        "k1": 1.0, "k": 3.0, "d": 1,
        "minimal_columns": [_armax(0.5)],
        "bulk_column": {"k": 3.0},
    }
    neg = {
        "k1": 2.0, "k": 5.0, "d": 1,
        "minimal_columns": [_armax(0.2, k=2.0)],
        "bulk_column": {"k": 5.0},
    }
    return pos, neg


def c3(seed=SEED + 5):
    pos, neg = _signed_arrays()
    return {
        "seed": seed, "n": 10_000, "replications": 500, "chi": 0.2,
        "signed": True, "chi_pos": 0.2, "chi_neg": 0.2,
        "alpha_pos": 8.0, "alpha_neg": 8.0,
        "array": pos, "negative_array": neg,
        "weights": {"z": [1.0, -1.0]},
        "length_law": {"alpha": 8.0},
        "threshold": {"y": 0.5},
        "divergence_horizons": [1000, 10_000],
    }


def c4(seed=SEED + 6):
    cfg = c3(seed)
    cfg["array"] = {
        "k1": 1.0, "k": 3.0, "d": 2,
        "minimal_columns": [_armax(0.7), _armax(0.2), _armax(0.7)],
        "bulk_column": {"k": 3.0},
    }
    cfg["weights"] = {"z": [1.0, 1.0, 2.0, -1.0]}
    cfg["length_law"] = {"alpha": 8.0, "min_value": 4}
    cfg["random_d"] = {"support": [2, 3], "probs": [0.5, 0.5], "C": 4}
    cfg["replications"] = 1000
    cfg["threshold"] = {"y": 1.0}
    cfg["n"] = 20_000
    cfg["divergence_horizons"] = [2000, 20_000]
    return cfg


def t5i(seed=SEED + 7):
    return {
        "seed": seed, "n": 10_000, "replications": 500, "chi": 0.2,
        "array": {
            "k1": 1.0, "k": 9.0, "d": 1,
            "minimal_columns": [_armax(0.5)],
            "bulk_column": {"k": 9.0},
        },
        "weights": {"z": [1.0]},
        "length_law": {"alpha": 4.0},
        "delta_star": 0.5,
        "threshold": {"y": 0.5},
    }


def t5ii(seed=SEED + 8):
    cfg = t5i(seed)
    cfg["length_law"] = {"alpha": 5.0}
    cfg["threshold"] = {"y": 0.8}
    del cfg["delta_star"]
    return cfg


def t6(seed=SEED + 9):
    return {
        "seed": seed, "n": 10_000, "replications": 1000, "chi": 0.2,
        "array": _random_d_array(9.0),
        "weights": {"z": [1.0, 1.0, 2.0]},
        "length_law": {"alpha": 4.0, "min_value": 4},
        "random_d": {"support": [2, 3], "probs": [0.5, 0.5], "C": 4},
        "delta_star": 0.5,
        "threshold": {"y": 1.0},
    }


PRESETS = {
    "T2": t2, "T3.1": t3_1, "T3.2": t3_2, "T4": t4, "C3": c3, "C4": c4,
    "T5i": t5i, "T5ii": t5ii, "T6": t6,
}


def write_all(directory):
    """Write every preset as ``<id>.json`` into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for tid, build in PRESETS.items():
        p = d / f"{tid.replace('.', '_')}.json"
        p.write_text(json.dumps(build(), indent=2) + "\n")
        out.append(p)
    return out
