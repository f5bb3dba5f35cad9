"""Coupled sideband amplitudes g_m(omega) of the retarded field.

The amplitudes solve the symmetric tridiagonal system

    i K(omega_m) g_m + (dq0/2) [H(omega_{m-1}) g_{m-1} + H(omega_m) g_{m+1}] = Y_m,

with omega_m = omega - m*Omega0, truncated to m in [-M, M]. The only
nonzero drive terms are Y_1 = -(dq0/2) H(omega) and
Y_{-1} = -(dq0/2) H(omega + Omega0).

Three solution routes are provided: the uncoupled (perturbative) result, the
closed form of the M = 1 truncation, and a general tridiagonal solve. A
dense LU solve is kept as an independent check on the tridiagonal one.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BranchPointError,
    DegenerateDriveError,
    NonrelativisticWarning,
    SingularSystemError,
)
from .kernel import ChannelParams, Regime, h_aux, kx_branch

__all__ = [
    "DEFAULT_ORDER",
    "PIVOT_RTOL",
    "SidebandSolution",
    "SidebandSystem",
    "advanced_coefficients",
    "build_system",
    "closed_form_denominator",
    "closed_form_solution",
    "perturbative_solution",
    "solve",
    "solve_dense_oracle",
    "solve_tridiagonal",
]

DEFAULT_ORDER = 3
PIVOT_RTOL = 1e-12
VELOCITY_LIMIT = 0.3
VELOCITY_WARN = 0.1
REFINE_STEPS = 2


@dataclass(frozen=True)
class SidebandSystem:
    """Truncated system for the amplitudes at base frequency ``omega``.

    Arrays are indexed by position p = m + order, so ``diag[order]`` is the
    m = 0 row and ``offdiag[p]`` couples rows m and m + 1.
    """

    omega: float
    params: ChannelParams
    dq0: float
    order: int
    diag: np.ndarray
    offdiag: np.ndarray
    rhs: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.order, self.order + 1)

    @property
    def frequencies(self) -> np.ndarray:
        return self.omega - self.indices * self.params.omega0

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )

    def matvec(self, g: np.ndarray) -> np.ndarray:
        out = self.diag * g
        out[:-1] += self.offdiag * g[1:]
        out[1:] += self.offdiag * g[:-1]
        return out

    @property
    def scale(self) -> float:
        """Largest entry magnitude of the matrix."""
        return float(max(np.abs(self.diag).max(), np.abs(self.offdiag).max(initial=0.0)))


@dataclass(frozen=True)
class SidebandSolution:
    """Amplitudes g_m for m = -order..order, stored by position m + order."""

    values: np.ndarray
    order: int
    condition_flag: bool = False
    residual: float = 0.0

    def __getitem__(self, m: int) -> complex:
        if abs(m) > self.order:
            raise KeyError(m)
        return complex(self.values[m + self.order])

    @property
    def g(self) -> dict[int, complex]:
        return {m: complex(v) for m, v in zip(range(-self.order, self.order + 1), self.values)}

    @property
    def g1(self) -> complex:
        return self[1]

    @property
    def g0(self) -> complex:
        return self[0]

    @property
    def g_minus1(self) -> complex:
        return self[-1]


def build_system(omega: float, params: ChannelParams, dq0: float, order: int = DEFAULT_ORDER) -> SidebandSystem:
    if int(order) != order or order < 1:
        raise ValueError(f"truncation order must be an integer >= 1, got {order!r}")
    order = int(order)
    if not dq0 >= 0.0:
        raise ValueError(f"dq0 must be >= 0, got {dq0!r}")
    velocity = params.omega0 * dq0
    if velocity >= VELOCITY_LIMIT:
        raise ValueError(
            f"nonrelativistic assumption violated: Omega0*dq0 = {velocity:.3g} >= {VELOCITY_LIMIT}"
        )
    if velocity > VELOCITY_WARN:
        warnings.warn(
            f"Omega0*dq0 = {velocity:.3g} exceeds {VELOCITY_WARN}; long-wavelength expansion is marginal",
            NonrelativisticWarning,
            stacklevel=2,
        )

    m = np.arange(-order, order + 1)
    w = omega - m * params.omega0
    diag = np.array([1j * kx_branch(x, params).value for x in w], dtype=complex)
    half = 0.5 * dq0
    offdiag = np.array([half * h_aux(x, params) for x in w[:-1]], dtype=complex)
    rhs = np.zeros(2 * order + 1, dtype=complex)
    rhs[order + 1] = -half * h_aux(omega, params)
    rhs[order - 1] = -half * h_aux(omega + params.omega0, params)
    return SidebandSystem(float(omega), params, float(dq0), order, diag, offdiag, rhs)


def _zero_solution(system: SidebandSystem) -> SidebandSolution:
    return SidebandSolution(np.zeros(2 * system.order + 1, dtype=complex), system.order)


def _finish(system: SidebandSystem, g: np.ndarray, flagged: bool) -> SidebandSolution:
    residual = float(np.abs(system.matvec(g) - system.rhs).max())
    return SidebandSolution(g, system.order, flagged, residual)


def solve_tridiagonal(system: SidebandSystem) -> SidebandSolution:
    """Thomas elimination from m = -M upward.

    Pivots below ``PIVOT_RTOL`` times the largest matrix entry set
    ``condition_flag`` but still return the quotient; only an exactly zero
    pivot raises.
    """
    if system.dq0 == 0.0:
        return _zero_solution(system)
    a = system.offdiag
    n = len(system.diag)
    tiny = PIVOT_RTOL * system.scale
    flagged = False
    cp = np.empty(n - 1, dtype=complex)
    dp = np.empty(n, dtype=complex)

    piv = system.diag[0]
    for i in range(n):
        if i > 0:
            piv = system.diag[i] - a[i - 1] * cp[i - 1]
        if piv == 0:
            raise SingularSystemError(f"zero pivot at sideband m = {i - system.order}")
        if abs(piv) < tiny:
            flagged = True
        if i < n - 1:
            cp[i] = a[i] / piv
        prev = a[i - 1] * dp[i - 1] if i > 0 else 0.0
        dp[i] = (system.rhs[i] - prev) / piv

    g = np.empty(n, dtype=complex)
    g[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        g[i] = dp[i] - cp[i] * g[i + 1]
    return _finish(system, g, flagged)


def solve_dense_oracle(system: SidebandSystem) -> SidebandSolution:
    """Reference solve by LU with partial pivoting on the full matrix."""
    if system.dq0 == 0.0:
        return _zero_solution(system)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(system.dense(), check_finite=True)
    pivots = np.abs(np.diag(lu))
    if (pivots == 0).any():
        raise SingularSystemError("exactly singular sideband matrix")
    flagged = bool(pivots.min() < PIVOT_RTOL * system.scale)
    g = scipy.linalg.lu_solve((lu, piv), system.rhs)
    # Iterative refinement: the row swaps of partial pivoting can cancel
    # small components (g0 near grazing); residual corrections restore
    # componentwise accuracy.
    for _ in range(REFINE_STEPS):
        g = g + scipy.linalg.lu_solve((lu, piv), system.rhs - system.matvec(g))
    return _finish(system, g, flagged)


def solve(omega: float, params: ChannelParams, dq0: float, order: int = DEFAULT_ORDER) -> SidebandSolution:
    return solve_tridiagonal(build_system(omega, params, dq0, order))


def _outer_wavenumbers(omega: float, params: ChannelParams) -> tuple[complex, complex]:
    k_up = kx_branch(omega - params.omega0, params)
    k_down = kx_branch(omega + params.omega0, params)
    for name, kk in (("omega - Omega0", k_up), ("omega + Omega0", k_down)):
        if kk.regime is Regime.BOUNDARY:
            raise BranchPointError(f"K({name}) = 0: sideband on the branch point")
    return k_up.value, k_down.value


def closed_form_denominator(omega: float, params: ChannelParams, dq0: float) -> complex:
    """K(omega) + (dq0/2)^2 [H(omega)^2/K(omega_1) + H(omega_-1)^2/K(omega_-1)].

    Real whenever all three wavenumbers are travelling; its zero is the
    resonance of the M = 1 truncation.
    """
    k1, km1 = _outer_wavenumbers(omega, params)
    k0 = kx_branch(omega, params).value
    h = h_aux(omega, params)
    hm1 = h_aux(omega + params.omega0, params)
    return k0 + (0.5 * dq0) ** 2 * (h * h / k1 + hm1 * hm1 / km1)


def closed_form_solution(omega: float, params: ChannelParams, dq0: float) -> tuple[complex, complex, complex]:
    """Exact amplitudes (g1, g_-1, g0) of the m in {-1, 0, 1} truncation."""
    k1, km1 = _outer_wavenumbers(omega, params)
    if dq0 == 0.0:
        return 0j, 0j, 0j
    k0 = kx_branch(omega, params).value
    h = h_aux(omega, params)
    hm1 = h_aux(omega + params.omega0, params)
    if h == 0.0:
        raise DegenerateDriveError("H(omega) = 0: g_-1 and g0 ratios are undefined")
    coupling = (0.5 * dq0) ** 2 * (h * h / k1 + hm1 * hm1 / km1)
    denom = k0 + coupling
    if denom == 0:
        raise SingularSystemError("closed-form denominator is exactly zero")
    g1 = 0.5j * (k0 / k1) * dq0 * h / denom
    g_minus1 = (k1 * hm1) / (km1 * h) * g1
    # -1 - 2i K(omega_1) g1 / (dq0 H) simplifies to -1 + K/D = -coupling/D;
    # the quotient form avoids cancelling against -1 when |g0| << 1.
    g0 = -coupling / denom
    return complex(g1), complex(g_minus1), complex(g0)


def perturbative_solution(omega: float, params: ChannelParams, dq0: float) -> tuple[complex, complex]:
    """First-order amplitudes (g1, g_-1), ignoring sideband coupling."""
    k1, km1 = _outer_wavenumbers(omega, params)
    g1 = 0.5j * dq0 * h_aux(omega, params) / k1
    g_minus1 = 0.5j * dq0 * h_aux(omega + params.omega0, params) / km1
    return complex(g1), complex(g_minus1)


def advanced_coefficients(solution: SidebandSolution) -> SidebandSolution:
    """Coefficients f_m = conj(g_m) of the advanced solution."""
    return SidebandSolution(
        np.conj(solution.values), solution.order, solution.condition_flag, solution.residual
    )
