from dataclasses import replace

import numpy as np
import pytest

from bosetail import basis
from bosetail.impurity import (
    AndersonParams,
    build_aim_hamiltonian,
    diagonalize,
    ground_observables,
    lehmann_green,
)

GRID = 2.0 * np.pi * np.arange(1, 257) / 40.0


def params(j=0.4, mu=0.4, z=6, phi_c=0.0, eps=(0.5,), v=(0.0,), w=(0.0,)):
    return AndersonParams(j_over_u=j, mu_over_u=mu, z=z, phi_c=phi_c,
                          eps=eps, v=v, w=w)


class TestHamiltonian:
    def test_decoupled_atomic_limit(self):
        model = build_aim_hamiltonian(params(), basis.fock(6))
        ed = ground_observables(model)
        assert ed.e_aim == pytest.approx(-0.4, abs=1e-12)
        assert ed.phi == pytest.approx(0.0, abs=1e-12)
        assert ed.n_mean == pytest.approx(1.0, abs=1e-12)
        assert ed.h_hyb_mean == pytest.approx(0.0, abs=1e-14)

    def test_second_order_perturbation_oracle(self):
        # oracle: independent Kronecker assembly of the decoupled problem
        # and an explicit second-order sum over its product eigenstates
        n_c, eps, vv, mu = 6, 0.5, 0.05, 0.4
        ks = np.arange(n_c, dtype=float)
        b = np.zeros((n_c, n_c))
        b[np.arange(n_c - 1), np.arange(1, n_c)] = np.sqrt(ks[1:])
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        h0 = np.kron(np.diag(0.5 * ks * (ks - 1) - mu * ks), np.eye(2)) \
            + eps * np.kron(np.eye(n_c), a.T @ a)
        h1 = np.kron(b, a.T) + np.kron(b.T, a)  # a^dag b0 + a b0^dag
        e0_diag = np.diag(h0)
        i0 = int(np.argmin(e0_diag))
        assert e0_diag[i0] == pytest.approx(-0.4)
        coupling = h1[:, i0]
        corr2 = sum(coupling[m] ** 2 / (e0_diag[i0] - e0_diag[m])
                    for m in range(len(e0_diag)) if m != i0)
        assert corr2 == pytest.approx(-1.0 / 0.9, rel=1e-12)

        model = build_aim_hamiltonian(
            params(eps=(eps,), v=(vv,), w=(0.0,)), basis.fock(n_c))
        ed = ground_observables(model)
        expected = -0.4 + vv ** 2 * corr2
        assert abs(ed.e_aim - expected) < 50 * vv ** 4
        assert ed.h_hyb_mean < 0.0

    def test_symmetry_and_sparsity(self):
        p = params(phi_c=0.3, eps=(0.5, 1.1), v=(0.1, 0.05), w=(0.02, 0.01))
        model = build_aim_hamiltonian(p, basis.cts(4, 0.8))
        assert np.array_equal(model.h, model.h.T)
        nnz_per_col = (model.h != 0.0).sum(axis=0)
        assert np.all(nnz_per_col <= 3 * (1 + 2 * p.l_b))

    def test_condensate_drive_breaks_symmetry(self):
        p = params(j=1.0, phi_c=1.0, eps=(0.5,), v=(0.0,), w=(0.0,))
        ed = ground_observables(build_aim_hamiltonian(p, basis.fock(10)))
        assert ed.phi > 0.5

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            build_aim_hamiltonian(
                params(eps=(0.5,) * 4, v=(0.1,) * 4, w=(0.0,) * 4),
                basis.fock(100))

    def test_param_validation(self):
        with pytest.raises(ValueError):
            params(eps=(0.5, 1.0), v=(0.1,), w=(0.0,))
        with pytest.raises(ValueError):
            params(eps=(1e-9,), v=(0.1,), w=(0.0,))
        with pytest.raises(ValueError):
            params(eps=(), v=(), w=())

    def test_gauge_flip_of_condensate_drive(self):
        base = dict(j=0.4, mu=0.4, eps=(0.6,), v=(0.15,), w=(0.05,))
        up = ground_observables(build_aim_hamiltonian(
            params(phi_c=0.8, **base), basis.fock(8)))
        # bypass the loop-level sign convention to probe the mirror state
        p_down = replace(params(phi_c=0.8, **base), phi_c=-0.8)
        down = ground_observables(build_aim_hamiltonian(p_down, basis.fock(8)))
        assert up.phi == pytest.approx(-down.phi, abs=1e-10)
        assert up.n_mean == pytest.approx(down.n_mean, abs=1e-10)
        assert up.nn_mean == pytest.approx(down.nn_mean, abs=1e-10)
        assert up.e_aim == pytest.approx(down.e_aim, abs=1e-12)

    def test_hard_core_occupancies(self):
        p = params(phi_c=0.5, eps=(0.4, 0.9), v=(0.2, 0.1), w=(0.05, 0.02))
        model = build_aim_hamiltonian(p, basis.fock(8))
        eig = diagonalize(model)
        v0 = eig.vectors[:, 0]
        for nb in model.bath_n:
            occ = float(v0 @ nb @ v0)
            assert -1e-12 <= occ <= 1.0 + 1e-12


class TestLehmann:
    def test_atomic_spectrum_against_analytic_formula(self):
        model = build_aim_hamiltonian(params(), basis.fock(6))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        g = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        iw = 1j * GRID
        expected = 2.0 / (iw - 0.6) - 1.0 / (iw + 0.4)
        assert np.max(np.abs(g.g11 - expected)) < 1e-12
        assert np.max(np.abs(g.g12)) < 1e-12

    def test_commutator_sum_rule(self):
        p = params(phi_c=0.4, eps=(0.5, 1.3), v=(0.2, 0.1), w=(0.04, 0.01))
        model = build_aim_hamiltonian(p, basis.fock(10))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        g = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        tail = (1j * GRID * g.g11).real[-26:]  # last decade of the grid
        assert np.max(np.abs(tail - 1.0)) < 0.02

    def test_completeness_of_spectral_weights(self):
        p = params(phi_c=0.4, eps=(0.5,), v=(0.2,), w=(0.05,))
        model = build_aim_hamiltonian(p, basis.fock(8))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        v0 = eig.vectors[:, 0]
        db = model.b0 - ed.phi * np.eye(model.dim)
        weights = eig.vectors.T @ (db.T @ v0)
        direct = float(v0 @ (db @ db.T) @ v0)
        assert abs(float(weights @ weights) - direct) < 1e-10

    def test_symmetric_phase_has_no_anomalous_part(self):
        model = build_aim_hamiltonian(
            params(eps=(0.5,), v=(0.12,), w=(0.0,)), basis.fock(6))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        assert abs(ed.phi) < 1e-12
        g = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        assert np.max(np.abs(g.g12)) < 1e-12

    def test_reality_condition(self):
        p = params(phi_c=0.4, eps=(0.5,), v=(0.2,), w=(0.05,))
        model = build_aim_hamiltonian(p, basis.fock(8))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        g_pos = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        g_neg = lehmann_green(model, eig, ed.phi, -GRID, 40.0)
        assert np.max(np.abs(g_neg.g11 - np.conj(g_pos.g11))) < 1e-14


class TestTailConsistency:
    def test_vanishing_amplitude_matches_bigger_fock(self):
        p = params(phi_c=0.5, eps=(0.5, 1.2), v=(0.15, 0.08), w=(0.04, 0.02))
        tail = ground_observables(build_aim_hamiltonian(p, basis.cts(4, 1e-11)))
        ref = ground_observables(build_aim_hamiltonian(p, basis.fock(5)))
        assert np.max(np.abs(tail.energies - ref.energies)) < 1e-10
        assert tail.phi == pytest.approx(ref.phi, abs=1e-10)
        assert tail.n_mean == pytest.approx(ref.n_mean, abs=1e-10)
        assert tail.nn_mean == pytest.approx(ref.nn_mean, abs=1e-10)
        assert tail.h_hyb_mean == pytest.approx(ref.h_hyb_mean, abs=1e-10)
        assert tail.e_aim == pytest.approx(ref.e_aim, abs=1e-10)


class TestDegenerateGround:
    def test_flagged_but_not_fatal(self):
        # at mu = U the atomic levels |1> and |2> are degenerate and the
        # fluctuation operator connects them
        p = params(mu=1.0, eps=(0.5,), v=(0.0,), w=(0.0,))
        model = build_aim_hamiltonian(p, basis.fock(6))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        g = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        assert g.degenerate_ground
        assert np.all(np.isfinite(g.g11))

    def test_not_flagged_in_generic_case(self):
        model = build_aim_hamiltonian(params(), basis.fock(6))
        eig = diagonalize(model)
        ed = ground_observables(model, eig)
        g = lehmann_green(model, eig, ed.phi, GRID, 40.0)
        assert not g.degenerate_ground
