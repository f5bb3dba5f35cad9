"""How g1 and the rate change with the truncation order M."""
from movingmirror.sweeps import convergence_report

if __name__ == "__main__":
    for delta in (1e-7, 1e-5, 1e-3):
        print(f"Delta = {delta:g}")
        for row in convergence_report(78.0, 0.03, delta, range(1, 9)):
            change = "" if row.rel_change is None else f"{row.rel_change:.2e}"
            print(f"  M={row.order}  |g1|={abs(row.g1):.12e}  rho={row.rho:.12e}  change={change}")
