"""Shared numerical kernels.

Dense symmetric eigendecomposition, derivative-free scalar and simplex
minimization, and damped fixed-point iteration. Everything here is
deterministic: no randomized starts, no tie-breaking by address.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import optimize as _sciopt

MAX_DIM = 1024

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0   # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


class EigenDecomposition(NamedTuple):
    values: np.ndarray   # ascending
    vectors: np.ndarray  # orthonormal columns, vectors[:, k] pairs with values[k]


class ScalarMinResult(NamedTuple):
    x: float
    fun: float
    n_evals: int


class MultiMinResult(NamedTuple):
    x: np.ndarray
    fun: float
    converged: bool
    n_evals: int


class FixedPointResult(NamedTuple):
    x: float | np.ndarray
    iters: int
    converged: bool


def symmetrize(a) -> np.ndarray:
    """Return the symmetric part (a + a.T)/2 as a float64 array."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def eigh(a) -> EigenDecomposition:
    """Full spectrum of a real symmetric matrix, eigenvalues ascending.

    The input is symmetrized on entry, so tiny asymmetries from matrix
    assembly cannot leak into complex arithmetic. Non-finite entries are
    rejected.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension {a.shape[0]} exceeds limit {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    values, vectors = np.linalg.eigh(symmetrize(a))
    return EigenDecomposition(values, vectors)


def minimize_scalar(f: Callable[[float], float], lo: float, hi: float,
                    tol: float) -> ScalarMinResult:
    """Golden-section minimization of f on [lo, hi].

    For a unimodal f the returned x is within tol of the true minimizer.
    Both endpoints are evaluated as well, so the returned value never
    exceeds f(lo) or f(hi). Evaluation count is bounded by
    ceil(log((hi-lo)/tol)/log(phi)) plus a small constant.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")

    n_evals = 0

    def ev(x):
        nonlocal n_evals
        n_evals += 1
        return float(f(x))

    a, b = lo, hi
    h = b - a
    if h <= tol:
        xm = 0.5 * (a + b)
        return ScalarMinResult(xm, ev(xm), n_evals)

    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = ev(c)
    fd = ev(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = ev(d)

    if fc <= fd:
        x_best, f_best = c, fc
    else:
        x_best, f_best = d, fd

    # parabolic polish with well-separated samples: comparisons alone cannot
    # resolve a smooth minimum below ~sqrt(eps); a three-point vertex from
    # points spaced s apart recovers it to ~eps/s
    s = max(tol, 1e-5 * max(1.0, abs(x_best)))
    if x_best - s > lo and x_best + s < hi:
        f_m = ev(x_best - s)
        f_p = ev(x_best + s)
        denom = f_m - 2.0 * f_best + f_p
        if denom > 0.0:
            x_v = x_best + 0.5 * s * (f_m - f_p) / denom
            if lo < x_v < hi and abs(x_v - x_best) <= s:
                f_v = ev(x_v)
                # ties go to the vertex: at a flat-bottom minimum the
                # fitted vertex is the sharper estimate
                if f_v <= f_best:
                    x_best, f_best = x_v, f_v

    # a boundary minimum is never bracketed by interior points
    f_lo = ev(lo)
    f_hi = ev(hi)
    if f_hi < f_best:
        x_best, f_best = hi, f_hi
    if f_lo < f_best:
        x_best, f_best = lo, f_lo
    return ScalarMinResult(x_best, f_best, n_evals)


def scan_minimize_scalar(f: Callable[[float], float], lo: float, hi: float,
                         tol: float, n_scan: int = 24) -> ScalarMinResult:
    """Coarse grid scan followed by golden-section refinement.

    Robust against multiple local minima where plain golden section
    assumes unimodality; the refinement runs on the grid interval
    bracketing the best scanned point.
    """
    if n_scan < 3:
        raise ValueError("n_scan must be at least 3")
    xs = np.linspace(lo, hi, n_scan)
    fs = [float(f(x)) for x in xs]
    i = int(np.argmin(fs))
    sub_lo = xs[max(i - 1, 0)]
    sub_hi = xs[min(i + 1, n_scan - 1)]
    refined = minimize_scalar(f, float(sub_lo), float(sub_hi), tol)
    n_evals = n_scan + refined.n_evals
    if fs[i] < refined.fun:
        return ScalarMinResult(float(xs[i]), fs[i], n_evals)
    return ScalarMinResult(refined.x, refined.fun, n_evals)


def minimize_multi(f: Callable[[np.ndarray], float], x0: Sequence[float],
                   tol: float = 1e-10, max_evals: int = 20000,
                   xatol: float | None = None,
                   initial_step: float | None = None) -> MultiMinResult:
    """Derivative-free simplex (Nelder-Mead) descent from x0.

    Returns the best point found; converged=False when the evaluation
    budget ran out first. tol stops on function-value spread; xatol (same
    as tol when omitted) stops on simplex size. initial_step overrides the
    default simplex spread, which pays off when x0 is already close.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if not np.isfinite(f(x0)):
        raise ValueError("objective is not finite at x0")
    options = {"xatol": tol if xatol is None else xatol, "fatol": tol,
               "maxfev": int(max_evals), "maxiter": int(max_evals)}
    if initial_step is not None:
        n = len(x0)
        sim = np.tile(x0, (n + 1, 1))
        for i in range(n):
            sim[i + 1, i] += initial_step * max(abs(x0[i]), 0.1)
        options["initial_simplex"] = sim
    res = _sciopt.minimize(f, x0, method="Nelder-Mead", options=options)
    return MultiMinResult(np.asarray(res.x, dtype=float), float(res.fun),
                          bool(res.success), int(res.nfev))


def fixed_point(map_fn: Callable, x0, mixing: float = 1.0, tol: float = 1e-10,
                max_iter: int = 1000) -> FixedPointResult:
    """Damped fixed-point iteration x <- (1-mixing)*x + mixing*map_fn(x).

    Convergence criterion is the sup-norm step size. Scalars in, scalars
    out; vectors are iterated componentwise.
    """
    if not 0.0 < mixing <= 1.0:
        raise ValueError("mixing must lie in (0, 1]")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    scalar = np.ndim(x0) == 0
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    converged = False
    iters = 0
    for iters in range(1, max_iter + 1):
        fx = np.atleast_1d(np.asarray(map_fn(float(x[0]) if scalar else x),
                                      dtype=float))
        x_new = (1.0 - mixing) * x + mixing * fx
        if not np.all(np.isfinite(x_new)):
            x = x_new
            break
        step = float(np.max(np.abs(x_new - x)))
        x = x_new
        if step < tol:
            converged = True
            break
    out = float(x[0]) if scalar else x
    return FixedPointResult(out, iters, converged)
