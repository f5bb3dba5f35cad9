"""Scalar frequency functions shared by the sideband and emission code.

Units follow c = 1, so frequencies and wavenumbers are both inverse lengths.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate

__all__ = [
    "ChannelParams",
    "LineshapeParams",
    "Regime",
    "Wavenumber",
    "h_aux",
    "kx_branch",
    "lineshape",
    "lineshape_integral",
    "lineshape_square_integral",
]


@dataclass(frozen=True)
class ChannelParams:
    """Conserved parameters of one scattering channel.

    k_par is the magnitude of the wavevector component parallel to the
    mirror, omega0 the mechanical angular frequency.
    """

    k_par: float
    omega0: float

    def __post_init__(self):
        if not (self.k_par >= 0.0 and math.isfinite(self.k_par)):
            raise ValueError(f"k_par must be finite and >= 0, got {self.k_par!r}")
        if not (self.omega0 > 0.0 and math.isfinite(self.omega0)):
            raise ValueError(f"omega0 must be finite and > 0, got {self.omega0!r}")


class Regime(str, enum.Enum):
    TRAVELLING = "travelling"
    EVANESCENT = "evanescent"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Wavenumber:
    value: complex
    regime: Regime

    def __complex__(self):
        return complex(self.value)


def kx_branch(omega: float, params: ChannelParams) -> Wavenumber:
    """Normal wavenumber K(omega) with the cut on [-k_par, k_par].

    Outside the cut K = sign(omega) * sqrt(omega**2 - k_par**2), so a wave
    at negative frequency has K < 0 (the photon wavevector is k_x = -K > 0).
    On the cut K = +i*sqrt(k_par**2 - omega**2) for either sign of omega,
    which makes the field decay for x > 0. The branch points give exactly 0.

    The radicand is factored as (|omega| - k_par) * (|omega| + k_par) to keep
    full relative precision next to the branch points.
    """
    omega = float(omega)
    a = abs(omega)
    near = a - params.k_par
    if near > 0.0:
        root = math.sqrt(near * (a + params.k_par))
        return Wavenumber(complex(math.copysign(root, omega), 0.0), Regime.TRAVELLING)
    if near < 0.0:
        return Wavenumber(complex(0.0, math.sqrt(-near * (a + params.k_par))), Regime.EVANESCENT)
    return Wavenumber(0j, Regime.BOUNDARY)


def h_aux(omega: float, params: ChannelParams) -> float:
    """Coupling function H(omega) = omega*Omega0 - K(omega)**2.

    K**2 = omega**2 - k_par**2 on every branch, so H is real.
    """
    omega = float(omega)
    return omega * params.omega0 - omega * omega + params.k_par * params.k_par


@dataclass(frozen=True)
class LineshapeParams:
    """Lorentzian spectral profile of a damped oscillation.

    delta_t is the damping (coarse-graining) time; omega0 * delta_t must be
    at least 1e3 for the sharply-peaked approximation to hold.
    """

    omega0: float
    delta_t: float

    def __post_init__(self):
        if not (self.omega0 > 0.0 and self.delta_t > 0.0):
            raise ValueError("omega0 and delta_t must be positive")
        if self.omega0 * self.delta_t < 1e3:
            raise ValueError(
                f"omega0*delta_t = {self.omega0 * self.delta_t:.3g} < 1e3; "
                "the lineshape is not sharply peaked"
            )

    @classmethod
    def sharp(cls, omega0: float, q: float = 1e6) -> "LineshapeParams":
        return cls(omega0=omega0, delta_t=q / omega0)

    @property
    def width(self) -> float:
        return 1.0 / self.delta_t


def lineshape(Omega: float, p: LineshapeParams) -> float:
    g = p.width
    x = Omega - p.omega0
    return (g / math.pi) / (x * x + g * g)


# Analytic integrals of h and h**2 over [L, inf) measured from the peak; used
# to close the finite quadrature window.
def _tail(L: float, g: float) -> float:
    return 0.5 - math.atan(L / g) / math.pi


def _tail_sq(L: float, g: float) -> float:
    return (math.pi / (4 * g) - L / (2 * (L * L + g * g)) - math.atan(L / g) / (2 * g)) / math.pi**2


def _window_quad(f, p: LineshapeParams, half_widths: float) -> float:
    L = half_widths * p.width
    val, _ = integrate.quad(
        f, p.omega0 - L, p.omega0 + L, points=[p.omega0], epsabs=0.0, epsrel=1e-12, limit=200
    )
    return val


def lineshape_integral(p: LineshapeParams, half_widths: float = 1e3, tails: bool = True) -> float:
    """Integral of the lineshape over omega0 +- half_widths/delta_t.

    With ``tails`` the analytic contribution beyond the window is added, so the
    result approximates the full-line integral (exactly 1).
    """
    val = _window_quad(lambda w: lineshape(w, p), p, half_widths)
    if tails:
        val += 2.0 * _tail(half_widths * p.width, p.width)
    return val


def lineshape_square_integral(p: LineshapeParams, half_widths: float = 1e3, tails: bool = True) -> float:
    """Integral of the squared lineshape; full-line value is delta_t / (2 pi)."""
    val = _window_quad(lambda w: lineshape(w, p) ** 2, p, half_widths)
    if tails:
        val += 2.0 * _tail_sq(half_widths * p.width, p.width)
    return val
