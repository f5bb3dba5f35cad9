"""Analytic and numeric resonance shift as a function of angle."""
from movingmirror import delta_s_analytic, delta_s_closed_form, delta_s_numeric

KDQ0 = 0.03

if __name__ == "__main__":
    print(f"{'theta':>6} {'analytic':>12} {'M=1 root':>12} {'M=3 peak':>12}")
    for theta in (10.0, 30.0, 50.0, 70.0, 78.0, 85.0):
        a = delta_s_analytic(theta, KDQ0)
        c = delta_s_closed_form(theta, KDQ0)
        n = delta_s_numeric(theta, KDQ0, 3).delta_s_numeric
        print(f"{theta:6.1f} {a:12.5e} {c:12.5e} {n:12.5e}")
