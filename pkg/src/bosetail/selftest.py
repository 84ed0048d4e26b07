"""Built-in oracle battery: series sums, spectral sum rules, the two-site
resolvent check and the bath-fit round trip, with one negative control.

Every check recomputes its expected values from scratch (literal series
summation, analytic pole formulas, independent Kronecker assemblies), so
a corrupted closed form in the library cannot silently agree with it.
"""

from __future__ import annotations

import math
import time
from dataclasses import replace

import numpy as np

from . import basis, numerics
from .bdmft import fit_bath, hybridization_from_bath, matsubara_grid
from .impurity import AndersonParams, build_aim_hamiltonian, diagonalize, \
    ground_observables, lehmann_green


class _Report:
    def __init__(self):
        self.lines = []
        self.ok = True

    def check(self, name: str, passed: bool, detail: str = ""):
        self.ok &= bool(passed)
        status = "ok" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        self.lines.append(f"[{status:4s}] {name}{suffix}")

    def text(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return "\n".join(self.lines + [f"selftest: {verdict}"])


def _tail_sum(alpha, n_c, weight=lambda n: 1.0, terms=400):
    a2 = alpha * alpha
    t = a2 ** n_c / math.factorial(n_c)
    parts = []
    for n in range(n_c, n_c + terms):
        parts.append(weight(n) * t)
        t *= a2 / (n + 1)
    return math.fsum(parts)


def _close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _leakage_mismatch(ops) -> float:
    """Zero-leakage residual: column norm of b on the tail state minus the
    exact occupation moment. Vanishes for a correct operator set."""
    col = ops.b[:, -1]
    return abs(float(col @ col) - float(ops.n[-1, -1]))


def _check_basis(rep: _Report):
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        for n_c in (2, 4, 8):
            ops = basis.build_operators(basis.cts(n_c, alpha))
            s = _tail_sum(alpha, n_c)
            hop = alpha ** n_c / (math.sqrt(s) * math.sqrt(math.factorial(n_c - 1)))
            n_mean = _tail_sum(alpha, n_c, lambda n: n) / s
            nn_mean = _tail_sum(alpha, n_c, lambda n: n * (n - 1)) / s
            for got, want in ((ops.b[n_c - 1, n_c], hop),
                              (ops.b[n_c, n_c], alpha),
                              (ops.n[n_c, n_c], n_mean),
                              (ops.nn[n_c, n_c], nn_mean)):
                worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    rep.check("tail closed forms vs series summation", worst <= 1e-12,
              f"worst rel dev {worst:.2e}")

    # orthonormality of the extended basis, via explicit Fock coefficients
    alpha, n_c, n_max = 1.3, 4, 200
    norm = 1.0 / math.sqrt(_tail_sum(alpha, n_c))
    coeff = np.zeros(n_max + 1)
    coeff[n_c] = norm * alpha ** n_c / math.sqrt(math.factorial(n_c))
    for n in range(n_c, n_max):
        coeff[n + 1] = coeff[n] * alpha / math.sqrt(n + 1.0)
    vecs = np.zeros((n_c + 1, n_max + 1))
    for k in range(n_c):
        vecs[k, k] = 1.0
    vecs[n_c] = coeff
    gram_dev = np.max(np.abs(vecs @ vecs.T - np.eye(n_c + 1)))
    rep.check("extended basis orthonormality", gram_dev <= 1e-12,
              f"gram dev {gram_dev:.2e}")

    leak = max(_leakage_mismatch(basis.build_operators(basis.cts(n_c, a)))
               for a in (0.5, 1.0, 2.0) for n_c in (2, 4, 8))
    rep.check("annihilator acts without leakage", leak <= 1e-12,
              f"worst mismatch {leak:.2e}")

    # negative control: a corrupted hop coefficient must trip the check
    ops = basis.build_operators(basis.cts(4, 1.0))
    bad_b = ops.b.copy()
    bad_b[3, 4] *= 1.01
    corrupted = basis.OperatorSet(ops.dim, bad_b, bad_b.T.copy(), ops.n,
                                  ops.nn, ops.norm_const)
    rep.check("negative control: corrupted coefficient is caught",
              _leakage_mismatch(corrupted) > 1e-6)


def _check_lehmann(rep: _Report):
    grid = matsubara_grid(40.0, 256)
    p = AndersonParams(j_over_u=0.4, mu_over_u=0.4, z=6, phi_c=0.0,
                       eps=(0.5,), v=(0.0,), w=(0.0,))
    model = build_aim_hamiltonian(p, basis.fock(6))
    eig = diagonalize(model)
    ed = ground_observables(model, eig)
    g = lehmann_green(model, eig, ed.phi, grid, 40.0)
    iw = 1j * grid
    dev = np.max(np.abs(g.g11 - (2.0 / (iw - 0.6) - 1.0 / (iw + 0.4))))
    rep.check("atomic spectral function vs pole formula", dev <= 1e-12,
              f"max dev {dev:.2e}")
    rep.check("anomalous part vanishes in the symmetric phase",
              np.max(np.abs(g.g12)) <= 1e-12)

    p2 = replace(p, phi_c=0.4, eps=(0.5, 1.3), v=(0.2, 0.1), w=(0.04, 0.01))
    model2 = build_aim_hamiltonian(p2, basis.fock(10))
    eig2 = diagonalize(model2)
    ed2 = ground_observables(model2, eig2)
    g2 = lehmann_green(model2, eig2, ed2.phi, grid, 40.0)
    tail = (1j * grid * g2.g11).real[-26:]
    rep.check("commutator sum rule at high frequency",
              float(np.max(np.abs(tail - 1.0))) < 0.02,
              f"max dev {np.max(np.abs(tail - 1.0)):.3f}")

    v0 = eig2.vectors[:, 0]
    db = model2.b0 - ed2.phi * np.eye(model2.dim)
    weights = eig2.vectors.T @ (db.T @ v0)
    resolution = abs(float(weights @ weights) - float(v0 @ (db @ db.T) @ v0))
    rep.check("spectral weights resolve the identity", resolution <= 1e-10,
              f"dev {resolution:.2e}")


def _check_two_site(rep: _Report):
    # non-interacting impurity + one soft bath mode, solved exactly:
    # the propagator must equal [g0^-1 - Delta]^-1 with Delta = V^2/(iw-eps)
    m = 12
    ks = np.arange(m, dtype=float)
    b = np.zeros((m, m))
    b[np.arange(m - 1), np.arange(1, m)] = np.sqrt(ks[1:])
    n = np.diag(ks)
    eye = np.eye(m)
    e0, eps, vv = 0.3, 0.7, 0.15
    h = (e0 * np.kron(n, eye) + eps * np.kron(eye, n)
         + vv * (np.kron(b.T, eye) @ np.kron(eye, b)
                 + np.kron(b, eye) @ np.kron(eye, b.T)))
    eig = numerics.eigh(h)

    class _Stub:
        dim = m * m
        b0 = np.kron(b, eye)

    grid = matsubara_grid(40.0, 256)
    v0 = eig.vectors[:, 0]
    phi = float(v0 @ _Stub.b0 @ v0)
    g = lehmann_green(_Stub, eig, phi, grid, 40.0)
    iw = 1j * grid
    expected = 1.0 / (iw - e0 - vv ** 2 / (iw - eps))
    rel = float(np.max(np.abs(g.g11 - expected) / np.abs(expected)))
    rep.check("two-site resolvent composition", rel < 0.01,
              f"max rel dev {rel:.2e}")


def _check_bath_fit(rep: _Report):
    grid = matsubara_grid(40.0, 256)
    true = AndersonParams(j_over_u=0.4, mu_over_u=0.4, z=6, phi_c=0.0,
                          eps=(0.8,), v=(0.2,), w=(0.05,))
    target = hybridization_from_bath(true, grid)
    init = replace(true, eps=(1.0,), v=(0.1,), w=(0.01,))
    fit = fit_bath(target, 1, init, max_evals=8000)
    dev = max(abs(fit.params.eps[0] - 0.8), abs(fit.params.v[0] - 0.2),
              abs(fit.params.w[0] - 0.05))
    rep.check("bath-fit round trip", dev <= 1e-5 and not fit.flagged,
              f"worst param dev {dev:.2e}")

    zero = hybridization_from_bath(replace(true, v=(0.0,), w=(0.0,)), grid)
    fit0 = fit_bath(zero, 1, init)
    rep.check("zero hybridization decouples the bath",
              abs(fit0.params.v[0]) <= 1e-6 and abs(fit0.params.w[0]) <= 1e-6)


def selftest(verbose: bool = False) -> tuple[bool, str]:
    """Run the oracle battery; returns (all_passed, report_text)."""
    t0 = time.perf_counter()
    rep = _Report()
    _check_basis(rep)
    _check_lehmann(rep)
    _check_two_site(rep)
    _check_bath_fit(rep)
    rep.lines.append(f"elapsed: {time.perf_counter() - t0:.1f} s")
    return rep.ok, rep.text()
