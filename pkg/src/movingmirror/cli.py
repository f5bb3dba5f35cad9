"""Command-line front end: ``movingmirror {rate,sweep,resonance,convergence,check}``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
Options may also come from a flat JSON config file (``--config``) whose keys
mirror the long flag names; flags given on the command line win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .emission import THETA_MAX_DEG, EmissionQuery, Method, rate_direct
from .errors import MovingMirrorError
from .resonance import ResonanceResult, delta_s_analytic, delta_s_numeric
from .serialize import read_table, to_csv, to_json
from .sweeps import KINDS, Grid, convergence_report, default_spec, run_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

DEFAULTS = {
    "theta": 78.0,
    "k_dq0": 0.03,
    "format": "csv",
    "out": None,
    "precision": 17,
    "order": 3,
    "method": "closed-form",
    "numeric": False,
}


class UsageError(Exception):
    pass


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def _str_list(text) -> list[str]:
    if isinstance(text, (list, tuple)):
        return [str(x) for x in text]
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _common(p: argparse.ArgumentParser, scenario: bool = True) -> None:
    p.add_argument("--config", help="flat JSON file of option values")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--precision", type=int, default=None, help="significant digits, 6..17 (default 17)")
    if scenario:
        p.add_argument("--theta", type=float, default=None, help="emission angle in degrees (default 78)")
        p.add_argument("--k-dq0", dest="k_dq0", type=float, default=None, help="k*dq0 (default 0.03)")
        p.add_argument("--order", type=int, default=None, help="truncation order M (default 3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="movingmirror", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="normalized emission rate at one detuning")
    _common(p)
    p.add_argument("--delta", type=float, default=None, help="detuning Omega0/k - 1 - sin(theta)")
    p.add_argument("--method", default=None, help="perturbative | closed-form | truncated[:M]")

    p = sub.add_parser("sweep", help="figure data: figure1, figure1_insert, figure2, convergence")
    p.add_argument("kind", choices=KINDS)
    _common(p)
    p.add_argument("--min", dest="grid_min", type=float, default=None)
    p.add_argument("--max", dest="grid_max", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--spacing", choices=["log", "linear"], default=None)
    p.add_argument("--methods", default=None, help="comma list, e.g. perturbative,closed-form,truncated:3")
    p.add_argument("--orders", default=None, help="comma list of orders for the convergence kind")

    p = sub.add_parser("resonance", help="analytic (and optionally numeric) resonance shift")
    _common(p)
    p.add_argument("--numeric", action="store_true", default=None, help="also locate the truncated-system peak")

    p = sub.add_parser("convergence", help="g1, rho and residual versus truncation order")
    _common(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--orders", default=None, help="comma list, ascending (default 1,2,3,4,5,6)")

    p = sub.add_parser("check", help="verify a written sweep: row count and monotone grid")
    p.add_argument("path")
    p.add_argument("--rows", type=int, default=None, help="expected row count (JSON files carry it in meta)")
    return parser


def _load_config(path: str, allowed: set[str]) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"--config {path}: top level must be an object of option values")
    out = {}
    for key, value in doc.items():
        norm = key.replace("-", "_")
        norm = {"min": "grid_min", "max": "grid_max"}.get(norm, norm)
        if norm not in allowed:
            raise UsageError(f"--config {path}: unknown key {key!r}")
        out[norm] = value
    return out


def _resolve(args: argparse.Namespace) -> dict:
    opts = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    merged = {k: DEFAULTS.get(k) for k in opts}
    if getattr(args, "config", None):
        merged.update(_load_config(args.config, set(opts) - {"kind", "path"}))
    merged.update({k: v for k, v in opts.items() if v is not None})
    return merged


def _validate(o: dict) -> None:
    if "precision" in o and not 6 <= int(o["precision"]) <= 17:
        raise UsageError(f"--precision must lie in [6, 17], got {o['precision']}")
    if "theta" in o:
        th = float(o["theta"])
        if not 0.0 <= th <= THETA_MAX_DEG:
            raise UsageError(f"--theta must lie in [0, {THETA_MAX_DEG}] degrees, got {th:g}")
    if "k_dq0" in o and not float(o["k_dq0"]) > 0.0:
        raise UsageError(f"--k-dq0 must be > 0, got {float(o['k_dq0']):g}")
    if "order" in o and int(o["order"]) < 1:
        raise UsageError(f"--order must be >= 1, got {o['order']}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write(o: dict, meta: dict, columns: list[str], rows: list[dict]) -> None:
    prec = int(o["precision"])
    if o["format"] == "json":
        _emit(to_json(meta, rows, prec), o["out"])
    else:
        _emit(to_csv(columns, rows, prec), o["out"])


def _meta(command: str, **extra) -> dict:
    return {"tool": "movingmirror", "version": __version__, "command": command, **extra}


def cmd_rate(o: dict) -> int:
    if o.get("delta") is None:
        raise UsageError("--delta is required")
    try:
        method = Method.parse(str(o["method"]), default_order=int(o["order"]))
    except ValueError as exc:
        raise UsageError(f"--method: {exc}") from None
    q = EmissionQuery(float(o["theta"]), float(o["k_dq0"]), float(o["delta"]), method)
    s = rate_direct(q)
    row = {
        "theta_deg": q.theta_deg,
        "k_dq0": q.k_dq0,
        "delta": q.delta,
        "method": method.label,
        "rho": s.rho,
        "singular": int(s.singular),
    }
    _write(o, _meta("rate"), list(row), [row])
    return EXIT_OK


def _sweep_spec(o: dict):
    kind = o["kind"]
    base = default_spec(kind, float(o["theta"]), float(o["k_dq0"]))
    g = base.grid
    try:
        grid = Grid(
            float(o["grid_min"]) if o.get("grid_min") is not None else g.min,
            float(o["grid_max"]) if o.get("grid_max") is not None else g.max,
            int(o["count"]) if o.get("count") is not None else g.count,
            o["spacing"] if o.get("spacing") is not None else g.spacing,
        )
    except ValueError as exc:
        raise UsageError(f"grid: {exc}") from None
    changes = {"grid": grid}
    if o.get("methods") is not None:
        try:
            changes["methods"] = tuple(
                Method.parse(m, default_order=int(o["order"])) for m in _str_list(o["methods"])
            )
        except ValueError as exc:
            raise UsageError(f"--methods: {exc}") from None
    if o.get("orders") is not None:
        try:
            changes["orders"] = tuple(_int_list(o["orders"]))
        except ValueError:
            raise UsageError(f"--orders: expected comma-separated integers, got {o['orders']!r}") from None
    try:
        return default_spec(kind, float(o["theta"]), float(o["k_dq0"]), **changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(o: dict) -> int:
    spec = _sweep_spec(o)
    result = run_sweep(spec)
    meta = dict(result.metadata, command="sweep", columns=result.columns)
    _write(o, meta, result.columns, result.rows)
    return EXIT_OK


def _resonance_row(r: ResonanceResult) -> dict:
    lo, hi = r.bracket if r.bracket else (math.nan, math.nan)
    return {
        "theta_deg": r.theta,
        "k_dq0": r.k_dq0,
        "delta_s_analytic": r.delta_s_analytic,
        "delta_s_numeric": r.delta_s_numeric if r.delta_s_numeric is not None else math.nan,
        "bracket_lo": lo,
        "bracket_hi": hi,
        "iterations": r.iterations,
        "order": r.order if r.order is not None else "",
    }


def cmd_resonance(o: dict) -> int:
    theta, kd = float(o["theta"]), float(o["k_dq0"])
    if o["numeric"]:
        if theta == 0.0:
            raise UsageError("--numeric needs --theta > 0")
        r = delta_s_numeric(theta, kd, int(o["order"]))
    else:
        r = ResonanceResult(theta, kd, delta_s_analytic(theta, kd))
    row = _resonance_row(r)
    _write(o, _meta("resonance"), list(row), [row])
    return EXIT_OK


def cmd_convergence(o: dict) -> int:
    if o.get("delta") is None:
        raise UsageError("--delta is required")
    try:
        orders = _int_list(o["orders"]) if o.get("orders") is not None else [1, 2, 3, 4, 5, 6]
    except ValueError:
        raise UsageError(f"--orders: expected comma-separated integers, got {o['orders']!r}") from None
    try:
        table = convergence_report(float(o["theta"]), float(o["k_dq0"]), float(o["delta"]), orders)
    except ValueError as exc:
        raise UsageError(f"--orders: {exc}") from None
    rows = [
        {
            "order": r.order,
            "g1_re": r.g1.real,
            "g1_im": r.g1.imag,
            "rho": r.rho,
            "residual": r.residual,
            "rel_change": r.rel_change if r.rel_change is not None else math.nan,
            "converged": int(r.converged),
        }
        for r in table
    ]
    _write(o, _meta("convergence"), list(rows[0]), rows)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    try:
        text = Path(args.path).read_text()
        meta, columns, rows = read_table(text)
    except (OSError, ValueError) as exc:
        raise UsageError(f"check: cannot read {args.path}: {exc}") from None
    expected = args.rows
    if expected is None:
        expected = meta.get("spec", {}).get("grid", {}).get("count")
    problems = []
    if expected is not None and len(rows) != int(expected):
        problems.append(f"expected {expected} rows, found {len(rows)}")
    if not rows:
        problems.append("no rows")
    else:
        axis = [r[columns[0]] for r in rows]
        if any(not isinstance(v, (int, float)) for v in axis):
            problems.append(f"grid column {columns[0]!r} is not numeric")
        elif any(b <= a for a, b in zip(axis, axis[1:])):
            problems.append(f"grid column {columns[0]!r} is not strictly increasing")
    if problems:
        raise UsageError("check failed: " + "; ".join(problems))
    print(f"ok: {len(rows)} rows, grid column {columns[0]!r} strictly increasing")
    return EXIT_OK


COMMANDS = {
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "resonance": cmd_resonance,
    "convergence": cmd_convergence,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        opts = _resolve(args)
        _validate(opts)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"movingmirror {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MovingMirrorError as exc:
        print(f"movingmirror {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"movingmirror {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
