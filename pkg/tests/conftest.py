import math

import numpy as np
import pytest

from movingmirror import ModeContext

# Scenario of the emission-rate figure.
FIG_THETA = 78.0
FIG_KDQ0 = 0.03


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b) / np.maximum(np.abs(b), 1e-300)


def loglog_slope(x, y):
    return np.polyfit(np.log(x), np.log(y), 1)[0]


@pytest.fixture
def fig_context():
    """Channel of the figure scenario at Delta = 1e-3 with k = 1 exactly."""
    s = math.sin(math.radians(FIG_THETA))
    return {"k_par": s, "omega0": 1.0 + s + 1e-3, "dq0": FIG_KDQ0}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def context(theta, k_dq0, delta):
    return ModeContext.from_angle(theta, k_dq0, delta)
