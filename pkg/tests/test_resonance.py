import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from movingmirror.emission import EmissionQuery, Method, rate_direct
from movingmirror.errors import NoPeakError
from movingmirror.resonance import (
    ResonanceResult,
    delta_s_analytic,
    delta_s_closed_form,
    delta_s_numeric,
    shift_vs_angle_sweep,
)

from conftest import FIG_KDQ0, FIG_THETA, rel

# 40-digit mpmath evaluation of the analytic shift at 78 deg, k dq0 = 0.03.
DELTA_S_FIG = 7.187098545011099e-6


def test_headline_value():
    ds = delta_s_analytic(FIG_THETA, FIG_KDQ0)
    assert rel(ds, 7.187e-6) <= 1e-3
    assert rel(ds, DELTA_S_FIG) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(0.5, 89.5), kd=st.floats(1e-4, 0.1), s=st.floats(0.1, 10.0))
def test_quartic_scaling(theta, kd, s):
    assert rel(delta_s_analytic(theta, s * kd) / delta_s_analytic(theta, kd), s**4) <= 1e-12


def test_quartic_doubling_example():
    assert rel(delta_s_analytic(40.0, 0.02), 16 * delta_s_analytic(40.0, 0.01)) <= 1e-14


def test_vanishes_at_normal_incidence():
    assert delta_s_analytic(0.0, FIG_KDQ0) == 0.0
    small = [delta_s_analytic(t, FIG_KDQ0) for t in (1e-1, 1e-2, 1e-3)]
    assert small[0] > small[1] > small[2] > 0
    # sin^3 prefactor times a gap that itself vanishes like sin: ~ theta^5
    assert abs(math.log(small[0] / small[2]) / math.log(100) - 5) < 0.05


def test_monotone_in_angle_and_range():
    thetas = np.arange(1.0, 90.0, 1.0)
    ds = np.array([delta_s_analytic(t, FIG_KDQ0) for t in thetas])
    assert np.all(np.diff(ds) > 0)
    assert ds[-1] / ds[0] > 1e3


def test_analytic_domain():
    with pytest.raises(ValueError):
        delta_s_analytic(90.0, 0.03)
    with pytest.raises(ValueError):
        delta_s_analytic(-1.0, 0.03)
    with pytest.raises(ValueError):
        delta_s_analytic(45.0, 0.0)


def test_closed_form_root_near_analytic():
    root = delta_s_closed_form(FIG_THETA, FIG_KDQ0)
    assert rel(root, DELTA_S_FIG) < 1e-4


@pytest.mark.parametrize("theta", [10.0, 30.0, 60.0, 78.0, 85.0])
def test_closed_form_root_matches_analytic_across_angles(theta):
    # The analytic shift is the leading term of this root; at k dq0 = 0.03
    # the roots sit well above the 1e-16 resolution of Delta next to Omega0.
    assert rel(delta_s_closed_form(theta, FIG_KDQ0), delta_s_analytic(theta, FIG_KDQ0)) < 1e-4


@pytest.fixture(scope="module")
def fig_numeric():
    return delta_s_numeric(FIG_THETA, FIG_KDQ0, 3)


def test_numeric_below_analytic(fig_numeric):
    r = fig_numeric
    assert r.delta_s_numeric < r.delta_s_analytic
    assert (r.delta_s_analytic - r.delta_s_numeric) / r.delta_s_analytic < 0.5


def test_numeric_bracket_invariants(fig_numeric):
    r = fig_numeric
    lo, hi = r.bracket
    assert lo < r.delta_s_numeric < hi
    assert hi - lo <= 1e-6 * r.delta_s_numeric * (1 + 1e-9)
    assert r.iterations > 0 and r.order == 3


def test_peak_correspondence(fig_numeric):
    r = fig_numeric
    f = lambda d: rate_direct(EmissionQuery(FIG_THETA, FIG_KDQ0, d, Method.truncated(3))).rho  # noqa: E731
    peak = f(r.delta_s_numeric)
    assert peak > f(r.bracket[0]) and peak > f(r.bracket[1])


def test_numeric_order_3_vs_6(fig_numeric):
    r6 = delta_s_numeric(FIG_THETA, FIG_KDQ0, 6)
    assert rel(fig_numeric.delta_s_numeric, r6.delta_s_numeric) <= 1e-3


def test_numeric_at_30_degrees():
    r = delta_s_numeric(30.0, FIG_KDQ0, 3)
    assert 0 < r.delta_s_numeric < math.inf
    assert 0.5 <= r.delta_s_numeric / r.delta_s_analytic <= 2.0


def test_numeric_domain():
    with pytest.raises(ValueError):
        delta_s_numeric(FIG_THETA, FIG_KDQ0, 2)
    with pytest.raises(ValueError):
        delta_s_numeric(0.0, FIG_KDQ0, 3)
    with pytest.raises(ValueError):
        delta_s_numeric(89.95, FIG_KDQ0, 3)


def test_order1_and_order3_peaks_differ_measurably():
    root1 = delta_s_closed_form(FIG_THETA, FIG_KDQ0)
    peak3 = delta_s_numeric(FIG_THETA, FIG_KDQ0, 3).delta_s_numeric
    assert rel(peak3, root1) > 1e-3


def test_no_peak_raises(monkeypatch):
    import movingmirror.resonance as res

    monkeypatch.setattr(res, "_log_rho", lambda theta, kd, method, u: u)
    with pytest.raises(NoPeakError):
        res.delta_s_numeric(FIG_THETA, FIG_KDQ0, 3)


def test_sweep_examples():
    out = shift_vs_angle_sweep(FIG_KDQ0, [10.0, 45.0, 78.0])
    vals = [r.delta_s_analytic for r in out]
    assert vals[0] < vals[1] < vals[2]
    assert rel(vals[2], 7.187e-6) <= 1e-3
    single = shift_vs_angle_sweep(FIG_KDQ0, [78.0])
    assert rel(single[0].delta_s_analytic, 7.187e-6) <= 1e-3


def test_sweep_records_errors_and_keeps_order():
    out = shift_vs_angle_sweep(FIG_KDQ0, [20.0, 95.0, 0.0, 40.0], numeric=True)
    assert [r.theta for r in out] == [20.0, 95.0, 0.0, 40.0]
    assert out[0].error is None and out[3].error is None
    assert out[1].error and out[2].error
    assert math.isnan(out[1].delta_s_analytic)
    assert 0.5 < out[0].delta_s_numeric / out[0].delta_s_analytic < 2.0


def test_frequency_shift_relation():
    r = ResonanceResult(FIG_THETA, FIG_KDQ0, DELTA_S_FIG)
    assert r.frequency_shift(k=2.5) == pytest.approx(2.5 * DELTA_S_FIG)
    with pytest.raises(ValueError):
        r.frequency_shift(numeric=True)
