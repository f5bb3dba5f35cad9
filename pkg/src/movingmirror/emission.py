"""Photon number and angular emission rate from the downshifted sideband.

The rate is reported as the dimensionless

    rho = cos(theta)**2 * |g1(omega)|**2 / sqrt(Delta * (Delta + 2 sin(theta))),

evaluated at omega = Omega0 - k, i.e. d2R/(dk dOmega) with the factor
S k**2 / (2 pi**3) divided out. Delta = Omega0/k - 1 - sin(theta) is the
detuning of the mechanical frequency from the grazing-wave threshold.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .kernel import ChannelParams, kx_branch
from .sidebands import (
    DEFAULT_ORDER,
    PIVOT_RTOL,
    closed_form_denominator,
    closed_form_solution,
    perturbative_solution,
    solve,
)

__all__ = [
    "EmissionQuery",
    "EmissionSample",
    "Method",
    "ModeContext",
    "THETA_MAX_DEG",
    "g1_amplitude",
    "kx_smalldelta_approx",
    "number_average",
    "rate",
    "rate_direct",
    "rate_from_number",
]

THETA_MAX_DEG = 89.9

# (2 pi**3 / (S k**2)) * (S k**2 / ((2 pi)**3 Delta_t)) * Delta_t: the rate
# normalization applied to the number-operator coefficient.
_RATE_PER_NUMBER = 2 * math.pi**3 / (2 * math.pi) ** 3


@dataclass(frozen=True)
class Method:
    """How g1 is obtained: ``perturbative``, ``closed_form`` or ``truncated`` at ``order``."""

    kind: str
    order: int | None = None

    def __post_init__(self):
        if self.kind not in ("perturbative", "closed_form", "truncated"):
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.kind == "truncated":
            if self.order is None or int(self.order) != self.order or self.order < 1:
                raise ValueError(f"truncated method needs an integer order >= 1, got {self.order!r}")
        elif self.order is not None:
            raise ValueError(f"{self.kind} takes no order")

    @classmethod
    def perturbative(cls) -> "Method":
        return cls("perturbative")

    @classmethod
    def closed_form(cls) -> "Method":
        return cls("closed_form")

    @classmethod
    def truncated(cls, order: int = DEFAULT_ORDER) -> "Method":
        return cls("truncated", int(order))

    @classmethod
    def parse(cls, text: str, default_order: int = DEFAULT_ORDER) -> "Method":
        """Accepts ``perturbative``, ``closed-form``, ``truncated``, ``truncated:5``, ``truncated(5)``, ``truncated_5``."""
        t = text.strip().lower().replace("-", "_")
        if t in ("perturbative", "closed_form"):
            return cls(t)
        m = re.fullmatch(r"truncated(?:[:_(](\d+)\)?)?", t)
        if m is None:
            raise ValueError(f"unknown method {text!r}")
        return cls.truncated(int(m.group(1)) if m.group(1) else default_order)

    @property
    def label(self) -> str:
        return f"truncated_{self.order}" if self.kind == "truncated" else self.kind

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class EmissionQuery:
    """One point of the angular rate: angle in degrees, k*dq0 and detuning."""

    theta_deg: float
    k_dq0: float
    delta: float
    method: Method = Method("closed_form")

    def __post_init__(self):
        if not 0.0 <= self.theta_deg <= THETA_MAX_DEG:
            raise ValueError(f"theta must lie in [0, {THETA_MAX_DEG}] degrees, got {self.theta_deg!r}")
        if not self.k_dq0 > 0.0:
            raise ValueError(f"k_dq0 must be > 0, got {self.k_dq0!r}")
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")
        if isinstance(self.method, str):
            object.__setattr__(self, "method", Method.parse(self.method))

    @property
    def theta(self) -> float:
        return math.radians(self.theta_deg)

    def context(self) -> "ModeContext":
        return ModeContext.from_angle(self.theta_deg, self.k_dq0, self.delta)


@dataclass(frozen=True)
class ModeContext:
    """Dimensional channel built from (theta, k*dq0, Delta) with unit photon frequency.

    k is recomputed as hypot(kx, k_par) so that every consumer of the
    context, including :func:`number_average`, sees the same base frequency
    omega = Omega0 - k bit for bit.
    """

    k: float
    kx: float
    k_par: float
    omega0: float
    dq0: float

    @classmethod
    def from_angle(cls, theta_deg: float, k_dq0: float, delta: float) -> "ModeContext":
        th = math.radians(theta_deg)
        kx, k_par = math.cos(th), math.sin(th)
        k = math.hypot(kx, k_par)
        return cls(k=k, kx=kx, k_par=k_par, omega0=k * (1.0 + k_par / k + delta), dq0=k_dq0 / k)

    @property
    def params(self) -> ChannelParams:
        return ChannelParams(self.k_par, self.omega0)

    @property
    def omega(self) -> float:
        """Base frequency Omega0 - k of the vacuum fluctuation that is downshifted."""
        return self.omega0 - self.k

    @property
    def realized_delta(self) -> float:
        """Detuning as represented in floating point, (omega - k_par)/k."""
        return (self.omega - self.k_par) / self.k


@dataclass(frozen=True)
class EmissionSample:
    query: EmissionQuery
    rho: float
    singular: bool = False


def g1_amplitude(omega: float, params: ChannelParams, dq0: float, method: Method) -> tuple[complex, bool]:
    """g1(omega) by the chosen method, with a near-singularity flag."""
    if method.kind == "perturbative":
        return perturbative_solution(omega, params, dq0)[0], False
    if method.kind == "closed_form":
        g1 = closed_form_solution(omega, params, dq0)[0]
        denom = closed_form_denominator(omega, params, dq0)
        k0 = abs(kx_branch(omega, params).value)
        scale = max(k0, abs(denom - k0))
        # Near grazing dK/domega ~ 1/K, so one ulp of omega can move the
        # denominator by far more than PIVOT_RTOL * scale; a denominator
        # within that resolution is zero to working precision.
        floor = max(
            abs(closed_form_denominator(math.nextafter(omega, to), params, dq0) - denom)
            for to in (-math.inf, math.inf)
        )
        return g1, bool(abs(denom) < max(PIVOT_RTOL * scale, 2.0 * floor))
    sol = solve(omega, params, dq0, method.order)
    return sol.g1, sol.condition_flag


def _number_average(kx: float, params: ChannelParams, dq0: float, method: Method) -> tuple[float, bool]:
    if not kx > 0.0:
        raise ValueError(f"kx must be > 0, got {kx!r}")
    k = math.hypot(kx, params.k_par)
    omega = params.omega0 - k
    if omega - params.k_par <= 0.0 or dq0 == 0.0:
        return 0.0, False
    g1, singular = g1_amplitude(omega, params, dq0, method)
    kk = kx_branch(omega, params).value.real
    return 4.0 * kx * kx / k * abs(g1) ** 2 / kk, singular


def number_average(kx: float, params: ChannelParams, dq0: float, method: Method | str = "closed_form") -> float:
    """Coefficient of Delta_t in the averaged output photon number.

    (4 kx**2 / k) * Theta(Omega0 - k - k_par) * |g1(Omega0 - k)|**2 / K(Omega0 - k),
    with k = hypot(kx, k_par).
    """
    if isinstance(method, str):
        method = Method.parse(method)
    return _number_average(kx, params, dq0, method)[0]


def rate_direct(query: EmissionQuery) -> EmissionSample:
    """Angular rate from the closed expression in (theta, Delta, g1)."""
    if query.delta <= 0.0:
        return EmissionSample(query, 0.0)
    ctx = query.context()
    d = ctx.realized_delta
    if d <= 0.0:
        # Delta below the resolution of Omega0 in double precision.
        return EmissionSample(query, 0.0)
    s = ctx.k_par / ctx.k
    cos2 = (ctx.kx / ctx.k) ** 2
    g1, singular = g1_amplitude(ctx.omega, ctx.params, ctx.dq0, query.method)
    rho = cos2 * abs(g1) ** 2 / math.sqrt(d * (d + 2.0 * s))
    return EmissionSample(query, rho, singular)


def rate_from_number(query: EmissionQuery) -> EmissionSample:
    """Angular rate obtained by converting the number-operator average."""
    if query.delta <= 0.0:
        return EmissionSample(query, 0.0)
    ctx = query.context()
    n, singular = _number_average(ctx.kx, ctx.params, ctx.dq0, query.method)
    return EmissionSample(query, _RATE_PER_NUMBER * n, singular)


def rate(theta_deg: float, k_dq0: float, delta: float, method: Method | str = "closed_form") -> float:
    """Shorthand for ``rate_direct(EmissionQuery(...)).rho``."""
    if isinstance(method, str):
        method = Method.parse(method)
    return rate_direct(EmissionQuery(theta_deg, k_dq0, delta, method)).rho


def kx_smalldelta_approx(query: EmissionQuery) -> float:
    """Leading small-Delta form k*sqrt(2 sin(theta) Delta) of K(Omega0 - k), with k = 1."""
    if query.delta < 0.0:
        raise ValueError("small-Delta approximation needs Delta >= 0")
    return math.sqrt(2.0 * math.sin(query.theta) * query.delta)
