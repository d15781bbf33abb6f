"""CSV and JSON emission of computed grids and reports.

Numbers are written with 12 significant digits, files are UTF-8 with LF line
endings.  CSV files start with a header row; summary blocks (extrema, bounds)
follow the data as ``# key: value`` comment lines, which ``numpy.loadtxt``
and ``pandas.read_csv(comment="#")`` skip.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict

import numpy as np

from .errors import ConfigError
from .sweep import SweepGrid

SIG_DIGITS = 12


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.{SIG_DIGITS}g}"


def round_sig(x) -> float:
    return float(fmt(float(x)))


def _csv_text(header, rows, comments=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    for key, value in comments:
        buf.write(f"# {key}: {value}\n")
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, ensure_ascii=False) + "\n"


def write_output(text, out=None):
    """Write to ``out`` (a path) or standard output when ``out`` is None or ``-``."""
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# sweep


def sweep_text(grid: SweepGrid, fmt_name="csv", config=None):
    rows = [[round_sig(t), round_sig(x), round_sig(w)] for t, x, w in grid.rows()]
    if fmt_name == "csv":
        return _csv_text(["theta", "xi", "w"], rows)
    payload = {"kind": "sweep"}
    if config is not None:
        payload["config"] = {k: (round_sig(v) if isinstance(v, float) else v) for k, v in asdict(config).items()}
    payload["columns"] = ["theta", "xi", "w"]
    payload["rows"] = rows
    return _json_text(payload)


def parse_sweep(text) -> SweepGrid:
    """Inverse of :func:`sweep_text` for either format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(text)
            columns, rows = payload["columns"], payload["rows"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError("input", f"not a sweep JSON document ({exc})") from None
        if columns != ["theta", "xi", "w"]:
            raise ConfigError("input", f"unexpected columns {columns!r}")
    else:
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        reader = csv.reader(lines)
        header = next(reader, None)
        if header != ["theta", "xi", "w"]:
            raise ConfigError("input", f"expected header theta,xi,w, got {header!r}")
        try:
            rows = [[float(v) for v in row] for row in reader]
        except ValueError as exc:
            raise ConfigError("input", f"malformed row ({exc})") from None
    if any(len(r) != 3 for r in rows):
        raise ConfigError("input", "every row needs exactly three values")
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return SweepGrid(arr[:, 0], arr[:, 1], arr[:, 2])


# bounds


def _extremum_obj(e):
    return {"params": [round_sig(p) for p in e.params], "value": round_sig(e.value)}


def _params_str(params):
    return ";".join(fmt(p) for p in params)


def bounds_text(report, fmt_name="csv"):
    general = report.grid_spec["parametrization"] == "general"
    if general:
        alphas, betas = report.axes
        columns = ["alpha", "beta", "lambda_min", "lambda_max"]
        rows = [[round_sig(a), round_sig(b), round_sig(report.lambda_min_grid[i, j]),
                 round_sig(report.lambda_max_grid[i, j])]
                for i, a in enumerate(alphas) for j, b in enumerate(betas)]
    else:
        (thetas,) = report.axes
        columns = ["theta", "lambda_min", "lambda_max"]
        rows = [[round_sig(t), round_sig(lo), round_sig(hi)]
                for t, lo, hi in zip(thetas, report.lambda_min_grid, report.lambda_max_grid)]
    if fmt_name == "csv":
        comments = [
            ("global_min", f"params={_params_str(report.global_min.params)} value={fmt(report.global_min.value)}"),
            ("global_max", f"params={_params_str(report.global_max.params)} value={fmt(report.global_max.value)}"),
            ("argmin", " ".join(_params_str(e.params) for e in report.argmin)),
            ("argmax", " ".join(_params_str(e.params) for e in report.argmax)),
        ]
        return _csv_text(columns, rows, comments)
    spec = {k: (round_sig(v) if isinstance(v, float) else v) for k, v in report.grid_spec.items()}
    return _json_text({
        "kind": "bounds",
        "grid_spec": spec,
        "columns": columns,
        "rows": rows,
        "extrema": {
            "global_min": _extremum_obj(report.global_min),
            "global_max": _extremum_obj(report.global_max),
            "argmin": [_extremum_obj(e) for e in report.argmin],
            "argmax": [_extremum_obj(e) for e in report.argmax],
        },
    })


# classical


def classical_text(cb, fmt_name="csv"):
    rows = [[s.x1.value, s.x2.value, s.y2.value, s.y3.value, w] for s, w in cb.per_strategy.items()]
    if fmt_name == "csv":
        return _csv_text(["x1", "x2", "y2", "y3", "w"], rows,
                         [("w_min", fmt(cb.w_min)), ("w_max", fmt(cb.w_max))])
    return _json_text({
        "kind": "classical",
        "columns": ["x1", "x2", "y2", "y3", "w"],
        "rows": rows,
        "w_min": cb.w_min,
        "w_max": cb.w_max,
    })


# qkd


def _violation_obj(v):
    return {"angles": [round_sig(a) for a in v.angles], "phase": round_sig(v.phase), "w": round_sig(v.w)}


def _points_str(points):
    return " ".join(f"{_params_str(v.angles)}@{fmt(v.phase)}" for v in points)


def qkd_text(assessments, fmt_name="csv"):
    if fmt_name == "csv":
        columns = ["setting", "family", "parametrization", "deterministic", "marginals_random",
                   "violates_lower", "violates_upper", "secure",
                   "lower_w", "lower_angles", "lower_phase", "upper_w", "upper_angles", "upper_phase",
                   "lower_points", "upper_points"]
        rows = []
        for a in assessments:
            lo, hi = a.best_lower_violation, a.best_upper_violation
            rows.append([str(a.setting), str(a.family), a.parametrization,
                         fmt(a.deterministic), fmt(a.marginals_random),
                         fmt(a.violates_lower), fmt(a.violates_upper), fmt(a.secure),
                         fmt(lo.w), _params_str(lo.angles), fmt(lo.phase),
                         fmt(hi.w), _params_str(hi.angles), fmt(hi.phase),
                         _points_str(a.lower_points), _points_str(a.upper_points)])
        return _csv_text(columns, rows)
    return _json_text({
        "kind": "qkd",
        "assessments": [
            {
                "setting": str(a.setting),
                "family": str(a.family),
                "parametrization": a.parametrization,
                "deterministic": a.deterministic,
                "marginals_random": a.marginals_random,
                "violates_lower": a.violates_lower,
                "violates_upper": a.violates_upper,
                "secure": a.secure,
                "best_lower_violation": _violation_obj(a.best_lower_violation),
                "best_upper_violation": _violation_obj(a.best_upper_violation),
                "lower_points": [_violation_obj(v) for v in a.lower_points],
                "upper_points": [_violation_obj(v) for v in a.upper_points],
            }
            for a in assessments
        ],
    })
