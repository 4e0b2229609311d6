"""
CSV export of aggregate paths and JSON report files.

Paths are written one row per ``(replicate, t)`` with 17 significant
digits, which round-trips every float64 exactly.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

HEADER = ("replicate", "t", "y_star", "y_sum", "n_terms")


class ExportError(OSError):
    pass


def _fmt(x):
    return "%.17g" % x


def sandwich_audit(result):
    """Count rows breaking ``z_1 Y_{t,1} <= Y*_t <= Y_t`` (positive mode) or
    the sign split ``Y*_t >= 0 >= Y**_t`` (signed mode).

    The first inequality is audited during simulation, where ``z_1 Y_{t,1}``
    is still available; this adds the checks visible on the stored paths.
    """
    bad = result.sandwich_violations
    if result.signed:
        bad += int(np.count_nonzero(result.y_star < 0) + np.count_nonzero(result.y_starstar > 0))
    else:
        bad += int(np.count_nonzero(result.y_star > result.y_sum))
    return bad


def export_paths(result, path):
    """Write ``replicate,t,y_star,y_sum,n_terms`` rows ordered by ``(replicate, t)``.

    ``replicate`` is 0-based, ``t`` is 1-based. Raises ``ValueError`` if the
    result is empty or fails the sandwich audit and :class:`ExportError` if
    the destination cannot be written.
    """
    R, n = result.y_star.shape
    if R == 0 or n == 0:
        raise ValueError("nothing to export: empty result")
    bad = sandwich_audit(result)
    if bad:
        raise ValueError(f"sandwich audit failed on {bad} rows; refusing to export")
    p = Path(path)
    try:
        with p.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(HEADER)
            for r in range(R):
                ys, yt, nt = result.y_star[r], result.y_sum[r], result.n_terms[r]
                w.writerows(
                    (r, t + 1, _fmt(ys[t]), _fmt(yt[t]), int(nt[t])) for t in range(n)
                )
    except OSError as exc:
        raise ExportError(f"cannot write paths to {p}: {exc.strerror or exc}") from None
    return p


def import_paths(path):
    """Read a paths CSV back into ``(R, n)`` arrays.

    Returns a dict with ``y_star``, ``y_sum`` (float64) and ``n_terms`` (int).
    Rows must form a complete ``(replicate, t)`` grid.
    """
    p = Path(path)
    try:
        with p.open(newline="") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader, ()))
            if header != HEADER:
                raise ValueError(f"{p}: expected header {','.join(HEADER)}, got {','.join(header)}")
            rows = list(reader)
    except OSError as exc:
        raise ExportError(f"cannot read paths from {p}: {exc.strerror or exc}") from None
    if not rows:
        raise ValueError(f"{p}: no data rows")
    rep = np.array([int(r[0]) for r in rows])
    t = np.array([int(r[1]) for r in rows])
    R, n = int(rep.max()) + 1, int(t.max())
    if len(rows) != R * n:
        raise ValueError(f"{p}: {len(rows)} rows do not form a {R} x {n} grid")
    out = {
        "y_star": np.empty((R, n)),
        "y_sum": np.empty((R, n)),
        "n_terms": np.empty((R, n), dtype=np.int64),
    }
    for (r, tt), row in zip(zip(rep, t), rows):
        out["y_star"][r, tt - 1] = float(row[2])
        out["y_sum"][r, tt - 1] = float(row[3])
        out["n_terms"][r, tt - 1] = int(row[4])
    return out


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_json(obj, path):
    p = Path(path)
    try:
        p.write_text(json.dumps(_clean(obj), indent=2) + "\n")
    except OSError as exc:
        raise ExportError(f"cannot write report to {p}: {exc.strerror or exc}") from None
    return p
