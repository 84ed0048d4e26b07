"""Truncated single-site bosonic bases and projected ladder operators.

Two truncations of the infinite occupation basis are supported: the hard
cutoff keeping the number states |0..n_c-1|, and the same set extended by
a single normalized coherent-tail state carrying all occupations n >= n_c
of a coherent state with real amplitude alpha. The tail state is
orthogonal to every retained number state by construction, so the
extended basis stays orthonormal and the annihilator acts inside it
without leakage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# relative cutoff for the factorially decaying tail series
TAIL_RELATIVE_EPS = 1e-17

FOCK = "fock"
CTS = "cts"


@dataclass(frozen=True)
class TruncationScheme:
    """Basis choice: kind 'fock' keeps |0..n_c-1|, kind 'cts' appends the
    tail state with amplitude alpha (meaningful only for 'cts')."""

    kind: str
    n_c: int
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in (FOCK, CTS):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.n_c < 1:
            raise ValueError("n_c must be a positive integer")
        if self.kind == CTS:
            if self.n_c < 2:
                raise ValueError("tail-extended scheme needs n_c >= 2")
            if self.alpha < 0.0:
                raise ValueError("alpha must be nonnegative")
        elif self.alpha != 0.0:
            raise ValueError("alpha has no meaning for a hard cutoff")

    @property
    def dim(self) -> int:
        return self.n_c + 1 if self.kind == CTS else self.n_c

    def label(self) -> str:
        return f"{self.kind}:{self.n_c}"


def fock(n_c: int) -> TruncationScheme:
    return TruncationScheme(FOCK, n_c)


def cts(n_c: int, alpha: float) -> TruncationScheme:
    return TruncationScheme(CTS, n_c, float(alpha))


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """Dense matrices of b, b^dag, n, n(n-1) projected on the chosen basis.

    b_dag is exactly b.T; n and nn are diagonal (number operators stay
    diagonal because the tail state has support only on n >= n_c).
    norm_const is the tail-state normalization, 1.0 for a hard cutoff.
    """

    dim: int
    b: np.ndarray
    b_dag: np.ndarray
    n: np.ndarray
    nn: np.ndarray
    norm_const: float


def _tail_q(alpha: float, n_c: int) -> float:
    """Tail sum of the squared coherent series in units of its first term.

    Q = sum_{k>=0} alpha^(2k) * n_c! / (n_c+k)!. Computed by the term
    recursion t_{k+1} = t_k * alpha^2/(n_c+k+1); terms decay factorially,
    so the ratio-test stop is safe. Factoring out the first term keeps
    every intermediate O(1) for any alpha >= 0, which a naive
    exp(alpha^2)-minus-partial-sum evaluation would not (cancellation).
    """
    a2 = alpha * alpha
    cap = int(10 * (n_c + a2 + 20))
    t = 1.0
    q = 1.0
    for k in range(cap):
        t *= a2 / (n_c + k + 1)
        q += t
        if t < TAIL_RELATIVE_EPS * q:
            break
    return q


def cts_norm_const(alpha: float, n_c: int) -> float:
    """Normalization constant of the tail state.

    Equals (sum_{n>=n_c} alpha^(2n)/n!)^(-1/2). Diverges as alpha -> 0
    for n_c >= 1 (the limit is handled exactly in build_operators, where
    the tail column degenerates to the Fock |n_c| column); here alpha=0
    returns inf for n_c >= 1 and 1.0 for n_c = 0.
    """
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    if n_c < 0:
        raise ValueError("n_c must be nonnegative")
    if alpha == 0.0:
        return 1.0 if n_c == 0 else math.inf
    q = _tail_q(alpha, n_c)
    return math.sqrt(math.factorial(n_c)) * alpha ** (-n_c) / math.sqrt(q)


def cts_moments(alpha: float, n_c: int) -> tuple[float, float]:
    """Expectations of n and n(n-1) in the tail state.

    Closed forms follow from the squared norms of b|tail| and bb|tail|:
    n_mean  = alpha^2 + n_c/Q,
    nn_mean = alpha^4 + n_c(n_c-1)/Q + alpha^2 n_c/Q,
    with Q the factored tail sum. Both limits at alpha=0 are the pure
    Fock-state values n_c and n_c(n_c-1).
    """
    if n_c < 2:
        raise ValueError("moments need n_c >= 2")
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    a2 = alpha * alpha
    q = _tail_q(alpha, n_c)
    n_mean = a2 + n_c / q
    nn_mean = a2 * a2 + n_c * (n_c - 1) / q + a2 * n_c / q
    return n_mean, nn_mean


def _fock_operators(m: int, norm_const: float = 1.0) -> OperatorSet:
    ks = np.arange(m, dtype=float)
    b = np.zeros((m, m))
    if m > 1:
        b[np.arange(m - 1), np.arange(1, m)] = np.sqrt(ks[1:])
    n = np.diag(ks)
    nn = np.diag(ks * (ks - 1.0))
    return OperatorSet(m, b, b.T.copy(), n, nn, norm_const)


def build_operators(scheme: TruncationScheme) -> OperatorSet:
    """Projected operator matrices for the given truncation.

    Hard cutoff: the textbook <m|b|n> = sqrt(n) delta_{m,n-1} block.
    Tail-extended: the extra column of b holds sqrt(n_c/Q) on the
    |n_c-1| row and alpha on the tail diagonal; n and nn gain the exact
    tail moments on their diagonal. alpha=0 is special-cased to the hard
    cutoff of n_c+1 states, which it equals in exact arithmetic.
    """
    if scheme.kind == FOCK:
        return _fock_operators(scheme.n_c)
    if scheme.alpha == 0.0:
        return _fock_operators(scheme.n_c + 1)

    n_c = scheme.n_c
    alpha = scheme.alpha
    dim = n_c + 1
    q = _tail_q(alpha, n_c)

    ops = _fock_operators(dim)
    b = ops.b.copy()
    # overwrite the last column: b acts on the tail state exactly in-basis
    b[:, n_c] = 0.0
    b[n_c - 1, n_c] = math.sqrt(n_c / q)
    b[n_c, n_c] = alpha

    n_mean, nn_mean = cts_moments(alpha, n_c)
    n = ops.n.copy()
    nn = ops.nn.copy()
    n[n_c, n_c] = n_mean
    nn[n_c, n_c] = nn_mean

    norm_const = math.sqrt(math.factorial(n_c)) * alpha ** (-n_c) / math.sqrt(q)
    return OperatorSet(dim, b, b.T.copy(), n, nn, norm_const)
