"""Exact diagonalization of the effective Anderson impurity model.

One interacting bosonic site (in a truncated local basis) couples to a
few hard-core bath orbitals through normal (V_l) and anomalous (W_l)
hoppings, plus a linear condensate drive from the surrounding lattice:

    H = (U/2) n0(n0-1) - mu n0 + sum_l eps_l a_l^dag a_l
        - J z phi_c (b0^dag + b0)
        + sum_l [ V_l (a_l^dag b0 + a_l b0^dag) + W_l (a_l b0 + a_l^dag b0^dag) ]

Everything is real (couplings and the order parameter can be chosen real
and nonnegative by gauge freedom), so the Hamiltonian is a real symmetric
matrix on the product space (impurity basis) x {0,1}^(number of baths).

Basis enumeration: the impurity factor is leftmost in the Kronecker
products, bath orbital 0 is the most significant bath bit, i.e. index
= ((imp * 2 + n_bath0) * 2 + n_bath1) * 2 + ... This fixes matrix
layouts bit-reproducibly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import numerics
from .basis import TruncationScheme, build_operators

MAX_PRODUCT_DIM = 1024
EPS_MIN = 1e-6          # bath energies are kept away from zero
MAX_BATH = 4

# hard-core bath mode: a|1> = |0>
_A_HC = np.array([[0.0, 1.0], [0.0, 0.0]])
_N_HC = np.array([[0.0, 0.0], [0.0, 1.0]])
_I2 = np.eye(2)


@dataclass(frozen=True)
class AndersonParams:
    """Model and bath parameters of the effective impurity problem."""

    j_over_u: float
    mu_over_u: float
    z: int
    phi_c: float
    eps: tuple[float, ...]
    v: tuple[float, ...]
    w: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(float(x) for x in self.eps))
        object.__setattr__(self, "v", tuple(float(x) for x in self.v))
        object.__setattr__(self, "w", tuple(float(x) for x in self.w))
        l_b = len(self.eps)
        if not 1 <= l_b <= MAX_BATH:
            raise ValueError(f"need between 1 and {MAX_BATH} bath orbitals")
        if len(self.v) != l_b or len(self.w) != l_b:
            raise ValueError("eps, v, w must have equal length")
        if any(e < EPS_MIN for e in self.eps):
            raise ValueError(f"bath energies must be >= {EPS_MIN}")

    @property
    def l_b(self) -> int:
        return len(self.eps)


@dataclass(frozen=True, eq=False)
class EDResult:
    """Ground-state observables of one impurity diagonalization."""

    energies: np.ndarray
    phi: float           # <b0>
    n_mean: float
    nn_mean: float
    h_hyb_mean: float    # expectation of the V/W coupling line
    e_aim: float         # ground-state energy


@dataclass(eq=False)
class NambuGreen:
    """Normal and anomalous components on a fictitious Matsubara grid.

    Only positive frequencies are stored; the negative axis follows from
    g(-iw) = conj(g(iw)) for real couplings. The same container carries
    connected impurity propagators and hybridization functions.
    """

    beta_fict: float
    omegas: np.ndarray
    g11: np.ndarray
    g12: np.ndarray
    degenerate_ground: bool = False

    def copy_with(self, g11, g12) -> "NambuGreen":
        return NambuGreen(self.beta_fict, self.omegas, g11, g12,
                          self.degenerate_ground)


class AimModel:
    """Hamiltonian matrix plus the lifted operators needed for observables."""

    def __init__(self, params: AndersonParams, scheme: TruncationScheme):
        ops = build_operators(scheme)
        l_b = params.l_b
        dim = ops.dim * 2 ** l_b
        if dim > MAX_PRODUCT_DIM:
            raise ValueError(
                f"product dimension {dim} exceeds {MAX_PRODUCT_DIM}; "
                "reduce the cutoff or the bath count")

        self.params = params
        self.scheme = scheme
        self.dim = dim

        def lift_imp(mat):
            return np.kron(mat, np.eye(2 ** l_b))

        def lift_bath(mat, l):
            factors = [np.eye(ops.dim)] + [_I2] * l_b
            factors[1 + l] = mat
            return reduce(np.kron, factors)

        self.b0 = lift_imp(ops.b)
        self.n0 = lift_imp(ops.n)
        self.nn0 = lift_imp(ops.nn)
        self.bath_n = [lift_bath(_N_HC, l) for l in range(l_b)]

        j, mu, z = params.j_over_u, params.mu_over_u, params.z
        h = 0.5 * self.nn0 - mu * self.n0
        h = h - j * z * params.phi_c * (self.b0 + self.b0.T)
        h_hyb = np.zeros_like(h)
        for l in range(l_b):
            a = lift_bath(_A_HC, l)
            h = h + params.eps[l] * self.bath_n[l]
            h_hyb = h_hyb + params.v[l] * (a.T @ self.b0 + a @ self.b0.T)
            h_hyb = h_hyb + params.w[l] * (a @ self.b0 + a.T @ self.b0.T)
        self.h_hyb = h_hyb
        self.h = numerics.symmetrize(h + h_hyb)


def build_aim_hamiltonian(params: AndersonParams,
                          scheme: TruncationScheme) -> AimModel:
    """Assemble the impurity Hamiltonian and its companion operators."""
    return AimModel(params, scheme)


def diagonalize(model: AimModel) -> numerics.EigenDecomposition:
    return numerics.eigh(model.h)


def ground_observables(model: AimModel,
                       eig: numerics.EigenDecomposition | None = None) -> EDResult:
    """Ground-state expectation values by quadratic forms.

    With a nonnegative condensate drive the ground state comes out with
    <b0> >= 0; the sign convention is inherited from phi_c (flipping its
    sign flips <b0> and nothing else).
    """
    if eig is None:
        eig = diagonalize(model)
    v0 = eig.vectors[:, 0]
    return EDResult(
        energies=eig.values,
        phi=float(v0 @ model.b0 @ v0),
        n_mean=float(v0 @ model.n0 @ v0),
        nn_mean=float(v0 @ model.nn0 @ v0),
        h_hyb_mean=float(v0 @ model.h_hyb @ v0),
        e_aim=float(eig.values[0]),
    )


def lehmann_green(model: AimModel, eig: numerics.EigenDecomposition,
                  phi: float, omegas: np.ndarray,
                  beta_fict: float) -> NambuGreen:
    """Connected Green's function from the spectral sum over eigenstates.

    Built from the fluctuation operator db = b0 - phi, with phi the
    ground-state <b0>, so the condensate contribution is removed:
      g11(iw) = sum_m |<m|db^dag|0>|^2/(iw - dE_m) - |<m|db|0>|^2/(iw + dE_m)
      g12(iw) = sum_m <0|db|m><m|db|0> [1/(iw - dE_m) - 1/(iw + dE_m)]
    A degenerate ground state with nonzero cross elements is flagged but
    not fatal.
    """
    v0 = eig.vectors[:, 0]
    db = model.b0 - phi * np.eye(model.dim)
    x = eig.vectors.T @ (db.T @ v0)   # <m|db^dag|0>
    y = eig.vectors.T @ (db @ v0)     # <m|db|0>
    de = eig.values - eig.values[0]

    keep = de >= 1e-12
    dropped = ~keep
    dropped[0] = False  # the ground state itself never contributes (db has zero diagonal there)
    degenerate = bool(np.any(dropped & ((np.abs(x) > 1e-10) | (np.abs(y) > 1e-10))))
    xk, yk, dek = x[keep], y[keep], de[keep]

    iw = 1j * np.asarray(omegas, dtype=float)[:, None]
    g11 = (xk ** 2 / (iw - dek) - yk ** 2 / (iw + dek)).sum(axis=1)
    g12 = (xk * yk * (1.0 / (iw - dek) - 1.0 / (iw + dek))).sum(axis=1)
    return NambuGreen(beta_fict, np.asarray(omegas, dtype=float), g11, g12,
                      degenerate_ground=degenerate)
