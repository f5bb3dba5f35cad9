"""Emission rate versus detuning for the three amplitude methods.

Prints a coarse table at theta = 78 deg, k dq0 = 0.03: the perturbative rate
grows without bound as Delta -> 0, the nonperturbative ones vanish like
sqrt(Delta), and all of them peak near the shifted resonance Delta_s.
"""
import numpy as np

from movingmirror import delta_s_analytic, rate

THETA, KDQ0 = 78.0, 0.03

if __name__ == "__main__":
    ds = delta_s_analytic(THETA, KDQ0)
    print(f"Delta_s (analytic) = {ds:.4e}")
    print(f"{'Delta':>10} {'perturbative':>14} {'closed form':>14} {'truncated M=3':>14}")
    for d in np.logspace(-12, -3, 19):
        vals = [rate(THETA, KDQ0, d, m) for m in ("perturbative", "closed_form", "truncated:3")]
        print(f"{d:10.2e} " + " ".join(f"{v:14.6e}" for v in vals))
