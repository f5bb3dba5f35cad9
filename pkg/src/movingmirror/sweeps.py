"""Grid evaluations behind the emission-rate and resonance-shift figures.

Row flags are bit masks: FLAG_SINGULAR marks a near-singular solve,
FLAG_NUDGED a grid point moved off the resonance, FLAG_ERROR a point whose
evaluation raised (its value is NaN).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .emission import EmissionQuery, Method, ModeContext, rate_direct
from .errors import MovingMirrorError
from .resonance import delta_s_analytic, delta_s_closed_form, delta_s_numeric
from .sidebands import solve

__all__ = [
    "FLAG_ERROR",
    "FLAG_NUDGED",
    "FLAG_SINGULAR",
    "ConvergenceRow",
    "Grid",
    "SweepResult",
    "SweepSpec",
    "convergence_report",
    "default_spec",
    "run_sweep",
]

FLAG_SINGULAR = 1
FLAG_NUDGED = 2
FLAG_ERROR = 4

KINDS = ("figure1", "figure1_insert", "figure2", "convergence")
NUDGE_RTOL = 1e-9
NUDGE = 1e-6
CONVERGED_RTOL = 1e-10


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    count: int
    spacing: str = "log"

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"grid count must be >= 2, got {self.count}")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"grid spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.spacing == "log" and not self.min > 0:
            raise ValueError("log spacing requires min > 0")
        if not self.max > self.min:
            raise ValueError("grid max must exceed min")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.min), math.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    theta: float = 78.0
    k_dq0: float = 0.03
    grid: Grid | None = None
    methods: tuple[Method, ...] = ()
    orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {KINDS}")
        if self.grid is None:
            raise ValueError("sweep needs a grid (use default_spec for the standard ones)")
        if self.kind == "figure1_insert":
            ds = delta_s_analytic(self.theta, self.k_dq0)
            if not self.grid.min < ds < self.grid.max:
                raise ValueError(f"figure1_insert grid must straddle Delta_s = {ds:.6g}")
        if self.kind == "convergence" and not self.orders:
            raise ValueError("convergence sweep needs orders")

    @property
    def columns(self) -> list[str]:
        if self.kind == "figure2":
            cols = ["theta_deg", "delta_s_analytic"]
            cols += [f"delta_s_{m.label}" for m in self.methods]
            cols += [f"flag_{m.label}" for m in self.methods]
            return cols
        methods = self.effective_methods
        return ["delta"] + [f"rho_{m.label}" for m in methods] + [f"flag_{m.label}" for m in methods]

    @property
    def effective_methods(self) -> tuple[Method, ...]:
        if self.kind == "convergence":
            return tuple(Method.truncated(o) for o in self.orders)
        return self.methods

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "theta": self.theta,
            "k_dq0": self.k_dq0,
            "grid": {
                "min": self.grid.min,
                "max": self.grid.max,
                "count": self.grid.count,
                "spacing": self.grid.spacing,
            },
            "methods": [m.label for m in self.methods],
            "orders": list(self.orders),
        }


def default_spec(kind: str, theta: float = 78.0, k_dq0: float = 0.03, **overrides) -> SweepSpec:
    """The standard grid and columns for each sweep kind; keyword overrides replace fields."""
    if kind == "figure1":
        spec = SweepSpec(
            kind,
            theta,
            k_dq0,
            Grid(1e-8, 1e-3, 400, "log"),
            (Method.perturbative(), Method.closed_form(), Method.truncated(3)),
        )
    elif kind == "figure1_insert":
        ds = delta_s_analytic(theta, k_dq0)
        spec = SweepSpec(
            kind, theta, k_dq0, Grid(ds / 3.0, ds * 3.0, 300, "log"), (Method.closed_form(), Method.truncated(3))
        )
    elif kind == "figure2":
        spec = SweepSpec(kind, theta, k_dq0, Grid(1.0, 89.0, 89, "linear"))
    elif kind == "convergence":
        spec = SweepSpec(kind, theta, k_dq0, Grid(1e-8, 1e-3, 20, "log"), orders=(3, 6))
    else:
        raise ValueError(f"unknown sweep kind {kind!r}; expected one of {KINDS}")
    return replace(spec, **overrides) if overrides else spec


@dataclass
class SweepResult:
    spec: SweepSpec
    columns: list[str]
    rows: list[dict]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])


def _resonances(theta: float, k_dq0: float) -> list[float]:
    out = [delta_s_analytic(theta, k_dq0)]
    try:
        out.append(delta_s_closed_form(theta, k_dq0))
    except (MovingMirrorError, ValueError):
        pass
    return [d for d in out if d > 0]


def _nudge(delta: float, poles: list[float]) -> tuple[float, bool]:
    for p in poles:
        if abs(delta - p) <= NUDGE_RTOL * p:
            return delta * (1.0 + NUDGE), True
    return delta, False


def _delta_rows(spec: SweepSpec) -> list[dict]:
    poles = _resonances(spec.theta, spec.k_dq0)
    methods = spec.effective_methods
    rows = []
    for d in spec.grid.points():
        d, nudged = _nudge(float(d), poles)
        row = {"delta": d}
        for m in methods:
            flag = FLAG_NUDGED if nudged else 0
            try:
                sample = rate_direct(EmissionQuery(spec.theta, spec.k_dq0, d, m))
                value = sample.rho
                flag |= FLAG_SINGULAR if sample.singular else 0
            except (ValueError, MovingMirrorError):
                value = math.nan
                flag |= FLAG_ERROR
            row[f"rho_{m.label}"] = value
            row[f"flag_{m.label}"] = flag
        rows.append(row)
    return rows


def _angle_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for th in spec.grid.points():
        th = float(th)
        row = {"theta_deg": th}
        try:
            row["delta_s_analytic"] = delta_s_analytic(th, spec.k_dq0)
        except ValueError:
            row["delta_s_analytic"] = math.nan
        for m in spec.methods:
            flag = 0
            try:
                if m.kind != "truncated":
                    raise ValueError(f"numeric shift needs a truncated method, got {m.label}")
                value = delta_s_numeric(th, spec.k_dq0, m.order).delta_s_numeric
            except (ValueError, MovingMirrorError):
                value, flag = math.nan, FLAG_ERROR
            row[f"delta_s_{m.label}"] = value
            row[f"flag_{m.label}"] = flag
        rows.append(row)
    return rows


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every grid point in order; per-point failures land in the flag columns."""
    t0 = time.perf_counter()
    rows = _angle_rows(spec) if spec.kind == "figure2" else _delta_rows(spec)
    meta = {
        "tool": "movingmirror",
        "version": __version__,
        "deterministic": True,
        "wall_time_s": time.perf_counter() - t0,
        "spec": spec.to_dict(),
    }
    return SweepResult(spec, spec.columns, [{c: r[c] for c in spec.columns} for r in rows], meta)


@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    g1: complex
    rho: float
    residual: float
    rel_change: float | None
    converged: bool = False


def convergence_report(theta: float, k_dq0: float, delta: float, orders) -> list[ConvergenceRow]:
    """g1, rho and residual per truncation order at one point.

    The first order whose relative change in g1 from its predecessor is
    below 1e-10 is marked ``converged``.
    """
    orders = [int(o) for o in orders]
    if not orders or any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be nonempty and strictly ascending")
    if k_dq0 < 0:
        raise ValueError(f"k_dq0 must be >= 0, got {k_dq0!r}")
    ctx = ModeContext.from_angle(theta, k_dq0, delta)
    rows: list[ConvergenceRow] = []
    prev = None
    marked = False
    for order in orders:
        if delta <= 0 or k_dq0 == 0:
            g1, rho, resid = 0j, 0.0, 0.0
        else:
            sol = solve(ctx.omega, ctx.params, ctx.dq0, order)
            g1, resid = sol.g1, sol.residual
            rho = rate_direct(EmissionQuery(theta, k_dq0, delta, Method.truncated(order))).rho
        change = None
        if prev is not None:
            change = abs(g1 - prev) / abs(g1) if g1 != 0 else abs(g1 - prev)
        hit = change is not None and change < CONVERGED_RTOL and not marked
        marked = marked or hit
        rows.append(ConvergenceRow(order, g1, rho, resid, change, hit))
        prev = g1
    return rows
