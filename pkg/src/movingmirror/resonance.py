"""Location of the motion-shifted emission resonance Delta_s.

Three estimates are available:

* :func:`delta_s_analytic` - lowest order in k*dq0 of the zero of the
  M = 1 closed-form denominator;
* :func:`delta_s_closed_form` - that zero computed exactly by root finding;
* :func:`delta_s_numeric` - the argmax of the truncated-system rate.

The numeric peak is, by our choice, compared with the analytic one through
argmax positions: the rate diverges at the shifted resonance, and at finite
precision that divergence is a sharp finite peak.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .emission import THETA_MAX_DEG, EmissionQuery, Method, ModeContext, rate_direct
from .errors import MovingMirrorError, NoPeakError, NonrelativisticWarning, SingularSystemError
from .sidebands import DEFAULT_ORDER, closed_form_denominator

__all__ = [
    "ResonanceResult",
    "delta_s_analytic",
    "delta_s_closed_form",
    "delta_s_numeric",
    "shift_vs_angle_sweep",
]

SCAN_DECADES = 2.0
SCAN_POINTS = 60
REFINE_RTOL = 1e-6


@dataclass(frozen=True)
class ResonanceResult:
    theta: float
    k_dq0: float
    delta_s_analytic: float
    delta_s_numeric: float | None = None
    bracket: tuple[float, float] | None = None
    iterations: int = 0
    order: int | None = None
    error: str | None = field(default=None, compare=False)

    def frequency_shift(self, k: float = 1.0, numeric: bool = False) -> float:
        """Shift of the resonant mechanical frequency, delta_Omega = k * Delta_s."""
        ds = self.delta_s_numeric if numeric else self.delta_s_analytic
        if ds is None:
            raise ValueError("no numeric shift in this result")
        return k * ds


def delta_s_analytic(theta: float, k_dq0: float) -> float:
    """Lowest-order shift for angle ``theta`` in degrees.

    (k dq0)**4/32 * sin^3 (1 + sin)^4 * (1/cos - 1/sqrt(3 sin^2 + 4 sin + 1))^2
    """
    if not 0.0 <= theta < 90.0:
        raise ValueError(f"theta must lie in [0, 90) degrees, got {theta!r}")
    if not k_dq0 > 0.0:
        raise ValueError(f"k_dq0 must be > 0, got {k_dq0!r}")
    th = math.radians(theta)
    s, c = math.sin(th), math.cos(th)
    gap = 1.0 / c - 1.0 / math.sqrt(3.0 * s * s + 4.0 * s + 1.0)
    return k_dq0**4 / 32.0 * s**3 * (1.0 + s) ** 4 * gap * gap


def _denominator(theta: float, k_dq0: float, delta: float) -> float:
    ctx = ModeContext.from_angle(theta, k_dq0, delta)
    return closed_form_denominator(ctx.omega, ctx.params, ctx.dq0).real


def delta_s_closed_form(theta: float, k_dq0: float) -> float:
    """Zero of the M = 1 denominator, bracketed around the analytic estimate."""
    guess = delta_s_analytic(theta, k_dq0)
    if guess == 0.0:
        return 0.0
    lo, hi = guess / 10.0, guess * 10.0
    f = lambda x: _denominator(theta, k_dq0, x)  # noqa: E731
    if f(lo) * f(hi) > 0:
        raise NoPeakError(f"closed-form denominator keeps its sign on [{lo:.3g}, {hi:.3g}]")
    return optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def _log_rho(theta: float, k_dq0: float, method: Method, u: float) -> float:
    try:
        rho = rate_direct(EmissionQuery(theta, k_dq0, math.exp(u), method)).rho
    except SingularSystemError:
        return math.inf
    return math.log(rho) if rho > 0 else -math.inf


def delta_s_numeric(theta: float, k_dq0: float, order: int = DEFAULT_ORDER) -> ResonanceResult:
    """Argmax of the truncated-system rate.

    A 60-point log scan over two decades either side of the analytic shift
    gives a bracketing triplet (lo, mid, hi) with rho(mid) above both ends.
    Ternary refinement then probes the midpoint of the wider half and keeps
    the triplet property, until the bracket is narrower than 1e-6 * mid.
    The returned peak therefore always beats both bracket ends.
    """
    if not 0.0 < theta <= THETA_MAX_DEG:
        raise ValueError(f"theta must lie in (0, {THETA_MAX_DEG}] degrees, got {theta!r}")
    if order < 3:
        raise ValueError(f"numeric resonance search needs order >= 3, got {order!r}")
    method = Method.truncated(order)
    analytic = delta_s_analytic(theta, k_dq0)
    f = lambda u: _log_rho(theta, k_dq0, method, u)  # noqa: E731

    centre = math.log(analytic)
    span = SCAN_DECADES * math.log(10.0)
    us = np.linspace(centre - span, centre + span, SCAN_POINTS)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonrelativisticWarning)
        vals = np.array([f(u) for u in us])
    if caught:
        warnings.warn(
            f"{len(caught)} scan points exceed the Omega0*dq0 warning level; last: {caught[-1].message}",
            NonrelativisticWarning,
            stacklevel=2,
        )
    i = int(np.argmax(vals))
    if i == 0 or i == SCAN_POINTS - 1:
        raise NoPeakError(
            f"rate is monotone over [{math.exp(us[0]):.3g}, {math.exp(us[-1]):.3g}] "
            f"at theta={theta}, k_dq0={k_dq0}"
        )

    a, b, c = us[i - 1], us[i], us[i + 1]
    fb = vals[i]
    iterations = 0
    while math.exp(c) - math.exp(a) > REFINE_RTOL * math.exp(b) and math.isfinite(fb):
        iterations += 1
        if c - b > b - a:
            x = 0.5 * (b + c)
            fx = f(x)
            if fx > fb:
                a, b, fb = b, x, fx
            else:
                c = x
        else:
            x = 0.5 * (a + b)
            fx = f(x)
            if fx > fb:
                c, b, fb = b, x, fx
            else:
                a = x
        if iterations > 500:
            break
    return ResonanceResult(
        theta=theta,
        k_dq0=k_dq0,
        delta_s_analytic=analytic,
        delta_s_numeric=math.exp(b),
        bracket=(math.exp(a), math.exp(c)),
        iterations=iterations,
        order=order,
    )


def shift_vs_angle_sweep(
    k_dq0: float, thetas, numeric: bool = False, order: int = DEFAULT_ORDER
) -> list[ResonanceResult]:
    """Shift per angle, in input order. Failures are recorded on the result, not raised."""
    out = []
    for th in thetas:
        th = float(th)
        try:
            if not 0.0 < th <= THETA_MAX_DEG:
                raise ValueError(f"theta must lie in (0, {THETA_MAX_DEG}] degrees, got {th!r}")
            if numeric:
                out.append(delta_s_numeric(th, k_dq0, order))
            else:
                out.append(ResonanceResult(th, k_dq0, delta_s_analytic(th, k_dq0)))
        except (ValueError, MovingMirrorError) as exc:
            analytic = math.nan
            try:
                analytic = delta_s_analytic(th, k_dq0)
            except ValueError:
                pass
            out.append(ResonanceResult(th, k_dq0, analytic, order=order if numeric else None, error=str(exc)))
    return out
