"""Anderson impurity diagnostics: pole structure of the connected
propagator and the spectral sum rules behind the DMFT loop.

Run: python3 demos/03_impurity_spectra.py
"""

import numpy as np

from bosetail import basis
from bosetail.bdmft import matsubara_grid
from bosetail.impurity import (
    AndersonParams,
    build_aim_hamiltonian,
    diagonalize,
    ground_observables,
    lehmann_green,
)

grid = matsubara_grid(beta_fict=40.0, n_omega=256)

# Decoupled impurity at mu/U = 0.4: ground state |1>, so the propagator
# has exactly two poles, particle addition at U - mu and removal at mu.
atomic = AndersonParams(j_over_u=0.4, mu_over_u=0.4, z=6, phi_c=0.0,
                        eps=(0.5,), v=(0.0,), w=(0.0,))
model = build_aim_hamiltonian(atomic, basis.fock(6))
eig = diagonalize(model)
ed = ground_observables(model, eig)
g = lehmann_green(model, eig, ed.phi, grid, 40.0)

iw = 1j * grid
analytic = 2.0 / (iw - 0.6) - 1.0 / (iw + 0.4)
print("atomic limit: ground energy", f"{ed.e_aim:.6f}")
print("max |g11 - two-pole formula| =",
      f"{np.max(np.abs(g.g11 - analytic)):.2e}")

# High-frequency sum rule: iw*g11 -> <[db, db^dag]> = 1.
tail = (iw * g.g11).real[-10:]
print("Re(iw g11) on the last grid points:",
      " ".join(f"{x:.4f}" for x in tail[-4:]))

# Now couple one bath orbital and break the symmetry with a condensate
# seed: the anomalous component switches on.
broken = AndersonParams(j_over_u=0.4, mu_over_u=0.4, z=6, phi_c=0.5,
                        eps=(0.7,), v=(0.2,), w=(0.05,))
model_b = build_aim_hamiltonian(broken, basis.fock(8))
eig_b = diagonalize(model_b)
ed_b = ground_observables(model_b, eig_b)
g_b = lehmann_green(model_b, eig_b, ed_b.phi, grid, 40.0)
print(f"\nwith condensate drive: <b0> = {ed_b.phi:.5f}, "
      f"<n0> = {ed_b.n_mean:.5f}, coupling energy = {ed_b.h_hyb_mean:.5f}")
print(f"anomalous component at the lowest frequency: {g_b.g12[0]:.5f}")

# Resolution of the identity: the spectral weights of db^dag exhaust the
# direct ground-state expectation.
v0 = eig_b.vectors[:, 0]
db = model_b.b0 - ed_b.phi * np.eye(model_b.dim)
weights = eig_b.vectors.T @ (db.T @ v0)
print(f"\nsum of |<m|db^dag|0>|^2 = {float(weights @ weights):.12f}")
print(f"<0|db db^dag|0> direct  = {float(v0 @ (db @ db.T) @ v0):.12f}")
