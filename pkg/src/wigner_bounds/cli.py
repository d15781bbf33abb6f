"""Command line front end.

Subcommands: ``sweep``, ``bounds``, ``classical``, ``qkd``, ``verify``.
Angles are radians and may be written as decimals or as ``pi`` fractions
(``pi/4``, ``-5pi/8``, ``3*pi/4``).  Values come from, in increasing order
of precedence: built-in defaults, a ``--config`` file of ``key=value`` lines,
and command line flags.

Exit codes: 0 success, 2 configuration error, 3 numerical-consistency error
(including a failed ``verify``), 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from fractions import Fraction

from . import serialize
from .bounds import classical_enumeration, point_extrema, scan_general_extrema, scan_quantum_extrema
from .errors import ConfigError, DomainError, NumericalConsistencyError
from .qkd import qkd_report
from .sweep import SweepConfig, check_envelope, run_sweep
from .wigner import FilippSvozil, General

log = logging.getLogger("wigner_bounds")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

_PI_RE = re.compile(r"^([+-]?)\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+))?$", re.IGNORECASE)


def parse_angle(text) -> float:
    """Parse ``1.5``, ``pi``, ``-pi/3``, ``5pi/8`` or ``5*pi/8`` to radians."""
    s = str(text).strip()
    m = _PI_RE.match(s)
    if m:
        sign, coef, den = m.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        frac = Fraction(coef or 1) / Fraction(den or 1)
        value = math.pi * frac.numerator / frac.denominator
        return -value if sign == "-" else value
    value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {text!r}")
    return value


def _int(text):
    return int(str(text).strip())


def _float(text):
    return float(str(text).strip())


# option name -> parser applied to values given as text
_OPTIONS = {
    "theta_min": parse_angle,
    "theta_max": parse_angle,
    "theta_steps": _int,
    "xi_min": parse_angle,
    "xi_max": parse_angle,
    "xi_steps": _int,
    "visibility": _float,
    "alpha_min": parse_angle,
    "alpha_max": parse_angle,
    "beta_min": parse_angle,
    "beta_max": parse_angle,
    "grid_steps": _int,
    "phase_steps": _int,
    "parametrization": str,
    "format": str,
    "out": str,
    "tolerance": _float,
}

_DEFAULTS = {
    "sweep": {"theta_min": 0.0, "theta_max": math.pi, "theta_steps": 200,
              "xi_min": 0.0, "xi_max": math.pi, "xi_steps": 200, "visibility": 1.0},
    "bounds": {"theta_min": 0.0, "theta_max": math.pi, "theta_steps": 1000, "parametrization": "fs",
               "alpha_min": -math.pi, "alpha_max": math.pi, "beta_min": -math.pi, "beta_max": math.pi,
               "grid_steps": 200},
    "classical": {},
    "qkd": {"theta_steps": 500, "phase_steps": 64, "parametrization": "fs"},
    "verify": {"tolerance": 1e-9},
}
for _d in _DEFAULTS.values():
    _d.setdefault("format", "csv")
    _d.setdefault("out", "-")


def read_config(path) -> dict:
    """Parse a ``key=value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}", "expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _OPTIONS:
                raise ConfigError(key, f"unknown configuration key in {path}")
            values[key] = value
    return values


def _add_common(p):
    p.add_argument("--config", help="key=value file; command line flags take precedence")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", metavar="PATH", help="output file (default: standard output)")


def _add(p, *names, **kw):
    for name in names:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=str, default=None, **kw)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wigner-bounds",
        description="Classical and quantum bounds of the modified Wigner inequality.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="W over a (theta, xi) grid for the phi(xi) states")
    _add_common(p)
    _add(p, "theta_min", "theta_max", "theta_steps", "xi_min", "xi_max", "xi_steps", "visibility")

    p = sub.add_parser("bounds", help="eigenvalue bounds and their refined extrema")
    _add_common(p)
    _add(p, "theta_min", "theta_max", "theta_steps", "alpha_min", "alpha_max", "beta_min", "beta_max")
    _add(p, "grid_steps", help="points per axis in general mode")
    p.add_argument("--parametrization", choices=["fs", "general"])

    p = sub.add_parser("classical", help="W of the 16 deterministic local strategies")
    _add_common(p)

    p = sub.add_parser("qkd", help="QKD suitability of the Gamma/Delta state families")
    _add_common(p)
    _add(p, "theta_steps", "phase_steps")
    p.add_argument("--parametrization", choices=["fs", "general"])

    p = sub.add_parser("verify", help="check a sweep grid against the quantum envelope")
    p.add_argument("input", help="sweep output (CSV or JSON), or - for standard input")
    p.add_argument("--config")
    p.add_argument("--format", choices=["csv", "json"], help="report format")
    p.add_argument("--out", metavar="PATH")
    _add(p, "tolerance")
    return parser


def resolve_options(args) -> dict:
    """Merge defaults, config file and flags for the chosen subcommand."""
    opts = dict(_DEFAULTS[args.command])
    layers = []
    if getattr(args, "config", None):
        layers.append(read_config(args.config))
    layers.append({k: v for k, v in vars(args).items() if k in _OPTIONS and v is not None})
    for layer in layers:
        for key, raw in layer.items():
            if key not in opts:
                # keys meant for other subcommands are tolerated in shared config files
                continue
            try:
                opts[key] = _OPTIONS[key](raw) if isinstance(raw, str) else raw
            except ValueError as exc:
                raise ConfigError(key, str(exc)) from None
    if opts["format"] not in ("csv", "json"):
        raise ConfigError("format", f"expected csv or json, got {opts['format']!r}")
    if "parametrization" in opts and opts["parametrization"] not in ("fs", "general"):
        raise ConfigError("parametrization", f"expected fs or general, got {opts['parametrization']!r}")
    return opts


def _steps(opts, key, minimum=2):
    n = opts[key]
    if n < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {n}")
    return n


def cmd_sweep(opts):
    cfg = SweepConfig(**{k: opts[k] for k in ("theta_min", "theta_max", "theta_steps",
                                              "xi_min", "xi_max", "xi_steps", "visibility")})
    grid = run_sweep(cfg)
    return serialize.sweep_text(grid, opts["format"], cfg)


def cmd_bounds(opts):
    if opts["parametrization"] == "general":
        steps = _steps(opts, "grid_steps", minimum=1)
        if steps == 1:
            report = point_extrema(General(opts["alpha_min"], opts["beta_min"]))
        else:
            report = scan_general_extrema((opts["alpha_min"], opts["alpha_max"]),
                                          (opts["beta_min"], opts["beta_max"]), steps)
    else:
        steps = _steps(opts, "theta_steps", minimum=1)
        if steps == 1 or opts["theta_min"] == opts["theta_max"]:
            report = point_extrema(FilippSvozil(opts["theta_min"]))
        else:
            report = scan_quantum_extrema(opts["theta_min"], opts["theta_max"], steps)
    return serialize.bounds_text(report, opts["format"])


def cmd_classical(opts):
    return serialize.classical_text(classical_enumeration(), opts["format"])


def cmd_qkd(opts):
    report = qkd_report(_steps(opts, "theta_steps"), _steps(opts, "phase_steps"), opts["parametrization"])
    return serialize.qkd_text(report, opts["format"])


class VerificationFailed(NumericalConsistencyError):
    pass


def cmd_verify(opts, source):
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    grid = serialize.parse_sweep(text)
    check = check_envelope(grid, tol=opts["tolerance"])
    summary = {
        "rows": check.rows,
        "outside_envelope": len(check.outside),
        "below_classical": check.below_classical,
        "above_classical": check.above_classical,
        "ok": check.ok,
    }
    if opts["format"] == "json":
        out = serialize._json_text({"kind": "verify", **summary})
    else:
        out = serialize._csv_text(list(summary), [[serialize.fmt(v) for v in summary.values()]])
    return out, check


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        opts = resolve_options(args)
        if args.command == "verify":
            text, check = cmd_verify(opts, args.input)
        else:
            text = {"sweep": cmd_sweep, "bounds": cmd_bounds, "classical": cmd_classical,
                    "qkd": cmd_qkd}[args.command](opts)
            check = None
        serialize.write_output(text, opts["out"])
        if check is not None and not check.ok:
            for theta, xi, w, lo, hi in check.outside[:10]:
                log.error("w=%r at theta=%r xi=%r outside [%r, %r]", w, theta, xi, lo, hi)
            raise VerificationFailed(f"{len(check.outside)} of {check.rows} rows outside the quantum envelope")
    except (ConfigError, DomainError) as exc:
        print(f"wigner-bounds: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalConsistencyError as exc:
        print(f"wigner-bounds: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"wigner-bounds: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
