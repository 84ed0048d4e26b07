"""Mean-field phase structure: Mott lobes, the superfluid order parameter
and how truncation schemes move the transition.

Run: python3 demos/02_gutzwiller_phase_diagram.py
Writes demos/out_gutzwiller_sweep.csv (plot it with the figs front end).
"""

from pathlib import Path

from bosetail import basis
from bosetail.gutzwiller import mott_boundary_j
from bosetail.sweep import SweepSpec, detect_mott_boundary, emit_csv, run_sweep

OUT = Path(__file__).parent / "out_gutzwiller_sweep.csv"

# Order parameter and filling along a J cut through the first Mott lobe,
# for a small hard cutoff, its tail-extended variant, and a reference.
spec = SweepSpec(
    solver="gutzwiller",
    mu_list=(0.4,),
    j_list=tuple(round(0.005 * k, 3) for k in range(0, 17)),
    schemes=(basis.fock(4), basis.cts(4, 0.0), basis.fock(20)),
)
records = run_sweep(spec)
OUT.write_text(emit_csv(records))
print(f"wrote {len(records)} rows to {OUT.name}")

print("\nJ/U    phi(fock4)  phi(cts4)   phi(fock20)")
by = {(r.scheme_kind, r.n_c, r.j_over_u): r for r in records}
for j in spec.j_list:
    row = [by[("fock", 4, j)].phi, by[("cts", 4, j)].phi,
           by[("fock", 20, j)].phi]
    print(f"{j:5.3f}  " + "  ".join(f"{phi:9.5f}" for phi in row))

# Where the lobe closes: bisect the onset of the order parameter and
# compare with the second-order perturbative formula.
print("\nMott boundary at mu/U = 0.4 (z = 6):")
print(f"  analytic formula   J_c/U = {mott_boundary_j(0.4, 6):.6f}")
for scheme, label in ((basis.fock(20), "fock:20"),
                      (basis.fock(4), "fock:4 "),
                      (basis.cts(4, 0.0), "cts:4  ")):
    jc = detect_mott_boundary("gutzwiller", scheme, 0.4, (0.01, 0.08),
                              tol_j=1e-4)
    print(f"  {label} bisection  J_c/U = {jc:.6f}")
