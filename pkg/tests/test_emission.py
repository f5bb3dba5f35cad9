import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from movingmirror.emission import (
    EmissionQuery,
    Method,
    kx_smalldelta_approx,
    number_average,
    rate,
    rate_direct,
    rate_from_number,
)
from movingmirror.kernel import ChannelParams
from movingmirror.resonance import delta_s_analytic, delta_s_closed_form

from conftest import FIG_KDQ0, FIG_THETA, context, loglog_slope, rel

# 40-digit mpmath evaluations at theta = 78 deg, k dq0 = 0.03, Delta = 1e-3.
RHO_CLOSED = 0.0227570798338795
RHO_M3 = 0.022679810876888792
RHO_PERT = 0.01906028163009159
ALL_METHODS = [Method.perturbative(), Method.closed_form(), Method.truncated(3)]


@pytest.mark.parametrize(
    "method, expected",
    [(Method.closed_form(), RHO_CLOSED), (Method.truncated(3), RHO_M3), (Method.perturbative(), RHO_PERT)],
)
def test_figure_point_frozen(method, expected):
    q = EmissionQuery(FIG_THETA, FIG_KDQ0, 1e-3, method)
    assert rel(rate_direct(q).rho, expected) <= 1e-10
    assert rel(rate_from_number(q).rho, expected) <= 1e-10


@pytest.mark.parametrize("delta", [-0.1, -1e-300, 0.0, -5.0])
@pytest.mark.parametrize("method", ALL_METHODS)
def test_no_emission_at_or_below_threshold(delta, method):
    q = EmissionQuery(FIG_THETA, FIG_KDQ0, delta, method)
    assert rate_direct(q).rho == 0.0
    assert rate_from_number(q).rho == 0.0


def test_number_average_threshold_and_static():
    p = ChannelParams(0.5, 1.4)  # Omega0 < k + k_par for kx = 0.8
    assert number_average(0.8, p, 0.01) == 0.0
    assert number_average(0.3, ChannelParams(0.5, 2.0), 0.0) == 0.0
    with pytest.raises(ValueError):
        number_average(0.0, p, 0.01)


def test_number_average_closed_form_value():
    ctx = context(FIG_THETA, FIG_KDQ0, 1e-3)
    n = number_average(ctx.kx, ctx.params, ctx.dq0, "closed-form")
    assert rel(n * 2 * math.pi**3 / (2 * math.pi) ** 3, RHO_CLOSED) <= 1e-10


@pytest.mark.parametrize(
    "method, lo, hi, target",
    [(Method.closed_form(), -14, -12, 0.5), (Method.perturbative(), -14, -12, -0.5)],
)
def test_threshold_power_laws(method, lo, hi, target):
    ds = np.logspace(lo, hi, 9)
    rho = [rate(FIG_THETA, FIG_KDQ0, d, method) for d in ds]
    assert abs(loglog_slope(ds, rho) - target) <= 0.02


def test_two_path_identity_seeded(rng):
    for _ in range(50):
        q = EmissionQuery(
            float(rng.uniform(0.5, 89.5)),
            float(10 ** rng.uniform(-3, -1.3)),
            float(10 ** rng.uniform(-10, -0.3)),
            ALL_METHODS[int(rng.integers(3))],
        )
        a, b = rate_direct(q), rate_from_number(q)
        assert rel(b.rho, a.rho) <= 1e-12
        assert a.singular == b.singular


@settings(max_examples=80, deadline=None)
@given(
    theta=st.floats(0.0, 89.9),
    log_kd=st.floats(-4.0, -1.5),
    delta=st.floats(-1.0, 1.0),
    which=st.integers(0, 2),
)
def test_rate_nonnegative_and_paths_agree(theta, log_kd, delta, which):
    q = EmissionQuery(theta, 10**log_kd, delta, ALL_METHODS[which])
    a, b = rate_direct(q), rate_from_number(q)
    assert a.rho >= 0.0
    if delta <= 0:
        assert a.rho == 0.0 and b.rho == 0.0
    else:
        assert rel(b.rho, a.rho) <= 1e-12 or abs(b.rho - a.rho) <= 1e-300


def test_singular_flag_at_shifted_resonance():
    root = delta_s_closed_form(FIG_THETA, FIG_KDQ0)
    assert rate_direct(EmissionQuery(FIG_THETA, FIG_KDQ0, root, Method.closed_form())).singular
    assert not rate_direct(EmissionQuery(FIG_THETA, FIG_KDQ0, 1e-3, Method.closed_form())).singular


def test_singular_flag_at_analytic_shift():
    # The analytic value is the lowest-order estimate of the root; it sits
    # 7e-6 relative away from it, so its denominator is small but not 1e-12 small.
    ds = delta_s_analytic(FIG_THETA, FIG_KDQ0)
    near = rate_direct(EmissionQuery(FIG_THETA, FIG_KDQ0, ds, "closed_form"))
    far = rate_direct(EmissionQuery(FIG_THETA, FIG_KDQ0, 10 * ds, "closed_form"))
    assert near.rho > 1e4 * far.rho


def test_nonperturbative_suppression():
    ds = delta_s_analytic(FIG_THETA, FIG_KDQ0)
    for d in np.logspace(-12, math.log10(ds / 10), 25):
        assert rate(FIG_THETA, FIG_KDQ0, d, "closed_form") < rate(FIG_THETA, FIG_KDQ0, d, "perturbative")


def test_crossover_gap_shrinks_with_delta():
    kd4 = FIG_KDQ0**4
    gaps = []
    for d in np.logspace(math.log10(100 * kd4), -0.5, 15):
        c, p = rate(FIG_THETA, FIG_KDQ0, d, "closed_form"), rate(FIG_THETA, FIG_KDQ0, d, "perturbative")
        gaps.append(abs(c - p) / p)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 0.05


@pytest.mark.xfail(strict=True, reason="relative gap is ~1.0 at 100 (k dq0)^4 for this angle (see README)")
def test_crossover_one_percent():
    for d in np.logspace(math.log10(100 * FIG_KDQ0**4), -3, 10):
        c, p = rate(FIG_THETA, FIG_KDQ0, d, "closed_form"), rate(FIG_THETA, FIG_KDQ0, d, "perturbative")
        assert abs(c - p) / p <= 1e-2


def _off_resonance_grid():
    ds = delta_s_analytic(FIG_THETA, FIG_KDQ0)
    return [d for d in np.logspace(-8, -3, 30) if abs(d - ds) > 10 * ds]


def test_truncation_orders_agree_to_measured_level():
    for d in _off_resonance_grid():
        a = rate(FIG_THETA, FIG_KDQ0, d, Method.truncated(3))
        b = rate(FIG_THETA, FIG_KDQ0, d, Method.truncated(6))
        assert rel(a, b) <= 1e-6


@pytest.mark.xfail(strict=True, reason="M = 3 truncation error in rho is up to ~7e-7 relative (see README)")
def test_truncation_orders_agree_to_1e8():
    for d in _off_resonance_grid():
        a = rate(FIG_THETA, FIG_KDQ0, d, Method.truncated(3))
        b = rate(FIG_THETA, FIG_KDQ0, d, Method.truncated(6))
        assert rel(a, b) <= 1e-8


def test_kx_smalldelta_examples():
    q = EmissionQuery(FIG_THETA, FIG_KDQ0, 1e-6)
    assert kx_smalldelta_approx(q) == pytest.approx(1.3986762318233664e-3, rel=1e-13)
    assert kx_smalldelta_approx(EmissionQuery(FIG_THETA, FIG_KDQ0, 0.0)) == 0.0
    with pytest.raises(ValueError):
        kx_smalldelta_approx(EmissionQuery(FIG_THETA, FIG_KDQ0, -1e-3))


@pytest.mark.parametrize("delta", [1e-12, 1e-9, 1e-6, 1e-4])
def test_kx_smalldelta_leading_term(delta):
    q = EmissionQuery(FIG_THETA, FIG_KDQ0, delta)
    s = math.sin(q.theta)
    exact = math.sqrt(delta * (delta + 2 * s))
    ratio = exact / kx_smalldelta_approx(q)
    assert 1.0 <= ratio <= 1.0 + delta


def test_query_validation_and_method_parsing():
    with pytest.raises(ValueError):
        EmissionQuery(90.0, 0.03, 1e-3)
    with pytest.raises(ValueError):
        EmissionQuery(45.0, 0.0, 1e-3)
    with pytest.raises(ValueError):
        EmissionQuery(45.0, 0.03, math.nan)
    assert EmissionQuery(45.0, 0.03, 1e-3, "truncated:5").method == Method.truncated(5)
    for text, label in [
        ("closed-form", "closed_form"),
        ("perturbative", "perturbative"),
        ("truncated", "truncated_3"),
        ("truncated(6)", "truncated_6"),
        ("truncated_4", "truncated_4"),
    ]:
        assert Method.parse(text).label == label
    for bad in ("exact", "truncated:0", "truncated:x"):
        with pytest.raises(ValueError):
            Method.parse(bad)


def test_derived_channel_quantities():
    ctx = context(FIG_THETA, FIG_KDQ0, 2e-4)
    s = math.sin(math.radians(FIG_THETA))
    assert ctx.k_par / ctx.k == pytest.approx(s, rel=1e-15)
    assert ctx.omega / ctx.k == pytest.approx(2e-4 + s, rel=1e-14)
    assert ctx.omega0 / ctx.k == pytest.approx(1 + s + 2e-4, rel=1e-15)
    assert ctx.realized_delta == pytest.approx(2e-4, rel=1e-10)
