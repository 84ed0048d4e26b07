"""Parameter sweeps, phase-boundary detection, benchmark timing and the
CSV result schema shared by all front ends."""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from multiprocessing import get_context

from . import bdmft as _bdmft
from . import gutzwiller as _gutz
from .basis import CTS, FOCK, TruncationScheme
from .bdmft import BdmftConfig, WarmStart
from .gutzwiller import GutzwillerConfig

GUTZWILLER = "gutzwiller"
BDMFT = "bdmft"

CSV_HEADER = ["solver", "scheme_kind", "n_c", "alpha_opt", "mu_over_u",
              "j_over_u", "z", "l_bath", "phi", "n_mean", "e_tot", "e_paper",
              "g_c0", "e_kin_con", "iters", "time_ms", "converged"]
BENCH_HEADER = CSV_HEADER + ["speedup_vs_ref"]

# boundary probes sit arbitrarily close to the critical point, where the
# fixed point slows down; stock iteration caps would bias the bisection
BOUNDARY_GUTZ_MAX_ITER = 60000
BOUNDARY_BDMFT_MAX_ITER = 800
PHI_THRESHOLD = 1e-6


class BracketError(RuntimeError):
    """Raised when a bisection bracket does not straddle the transition."""

    def __init__(self, end: str, j: float, phi: float):
        self.end = end
        super().__init__(
            f"{end} bracket end j={j:g} has phi={phi:.3g}, which does not "
            f"straddle the threshold {PHI_THRESHOLD:g}")


def _round12(v: float) -> float:
    return float(f"{v:.12g}")


@dataclass(frozen=True)
class ResultRecord:
    """One CSV row of converged observables plus run metadata.

    Float fields are stored rounded to 12 significant digits, so a record
    survives an emit/parse round trip unchanged.
    """

    solver: str
    scheme_kind: str
    n_c: int
    alpha_opt: float
    mu_over_u: float
    j_over_u: float
    z: int
    l_bath: int | None
    phi: float
    n_mean: float
    e_tot: float
    e_paper: float | None
    g_c0: float | None
    e_kin_con: float | None
    iters: int
    time_ms: float
    converged: bool

    def __post_init__(self):
        for name in ("alpha_opt", "mu_over_u", "j_over_u", "phi", "n_mean",
                     "e_tot", "e_paper", "g_c0", "e_kin_con", "time_ms"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _round12(float(v)))

    def sort_key(self):
        return (self.scheme_kind, self.n_c, self.mu_over_u, self.j_over_u)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def emit_csv(records, extra: dict | None = None) -> str:
    """Serialize records to CSV text (UTF-8 friendly, LF line endings).

    extra maps record id() keys to one additional trailing column, which
    is how benchmark tables append their speedup without disturbing the
    base schema.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = list(CSV_HEADER)
    if extra is not None:
        header.append("speedup_vs_ref")
    writer.writerow(header)
    for rec in records:
        row = [_fmt(getattr(rec, name)) for name in CSV_HEADER]
        if extra is not None:
            row.append(_fmt(extra.get(id(rec))))
        writer.writerow(row)
    return out.getvalue()


def parse_csv(text: str) -> list[ResultRecord]:
    """Parse CSV text back into records; inverse of emit_csv."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][: len(CSV_HEADER)] != CSV_HEADER:
        raise ValueError("CSV header does not match the result schema")

    def opt_float(s):
        return None if s == "" else float(s)

    records = []
    for row in rows[1:]:
        if not row:
            continue
        (solver, scheme_kind, n_c, alpha_opt, mu, j, z, l_bath, phi, n_mean,
         e_tot, e_paper, g_c0, e_kin_con, iters, time_ms, conv) = row[: len(CSV_HEADER)]
        records.append(ResultRecord(
            solver=solver, scheme_kind=scheme_kind, n_c=int(n_c),
            alpha_opt=float(alpha_opt), mu_over_u=float(mu), j_over_u=float(j),
            z=int(z), l_bath=None if l_bath == "" else int(l_bath),
            phi=float(phi), n_mean=float(n_mean), e_tot=float(e_tot),
            e_paper=opt_float(e_paper), g_c0=opt_float(g_c0),
            e_kin_con=opt_float(e_kin_con), iters=int(iters),
            time_ms=float(time_ms), converged=conv == "true"))
    return records


@dataclass(frozen=True)
class SweepSpec:
    solver: str
    mu_list: tuple[float, ...]
    j_list: tuple[float, ...]
    schemes: tuple[TruncationScheme, ...]
    z: int = 6
    l_b: int = 2
    alpha_scheme: str = _bdmft.ALPHA_EAIM
    alpha_value: float = 0.0
    repeats: int = 5
    cold_start: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.solver not in (GUTZWILLER, BDMFT):
            raise ValueError(f"unknown solver {self.solver!r}")
        if not self.mu_list:
            raise ValueError("mu_list must not be empty")
        if not self.j_list:
            raise ValueError("j_list must not be empty")
        if not self.schemes:
            raise ValueError("schemes must not be empty")
        if any(j < 0 for j in self.j_list):
            raise ValueError("all J values must be nonnegative")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def _gutz_config(spec: SweepSpec, scheme: TruncationScheme, mu: float,
                 j: float, phi_seeds=None) -> GutzwillerConfig:
    kw = {}
    if phi_seeds is not None:
        kw["phi_seeds"] = phi_seeds
    return GutzwillerConfig(j_over_u=j, mu_over_u=mu, scheme=scheme,
                            z=spec.z, **kw)


def _bdmft_config(spec: SweepSpec, scheme: TruncationScheme, mu: float,
                  j: float) -> BdmftConfig:
    return BdmftConfig(j_over_u=j, mu_over_u=mu, scheme=scheme, z=spec.z,
                       l_b=spec.l_b, alpha_scheme=spec.alpha_scheme,
                       alpha_value=spec.alpha_value)


def _record_gutzwiller(spec, scheme, mu, j, res) -> ResultRecord:
    return ResultRecord(
        solver=GUTZWILLER, scheme_kind=scheme.kind, n_c=scheme.n_c,
        alpha_opt=res.alpha_opt, mu_over_u=mu, j_over_u=j, z=spec.z,
        l_bath=None, phi=res.phi, n_mean=res.n_mean, e_tot=res.e_site,
        e_paper=res.e_paper, g_c0=None, e_kin_con=None, iters=res.iters,
        time_ms=res.wall_time_s * 1e3, converged=res.converged)


def _record_bdmft(spec, scheme, mu, j, res) -> ResultRecord:
    return ResultRecord(
        solver=BDMFT, scheme_kind=scheme.kind, n_c=scheme.n_c,
        alpha_opt=res.alpha_opt, mu_over_u=mu, j_over_u=j, z=spec.z,
        l_bath=spec.l_b, phi=res.phi, n_mean=res.n_mean, e_tot=res.e_tot_site,
        e_paper=None, g_c0=res.g_c0, e_kin_con=res.e_kin_con, iters=res.iters,
        time_ms=res.wall_time_s * 1e3, converged=res.converged)


def _failure_record(spec, scheme, mu, j) -> ResultRecord:
    nan = float("nan")
    return ResultRecord(
        solver=spec.solver, scheme_kind=scheme.kind, n_c=scheme.n_c,
        alpha_opt=0.0, mu_over_u=mu, j_over_u=j, z=spec.z,
        l_bath=spec.l_b if spec.solver == BDMFT else None,
        phi=nan, n_mean=nan, e_tot=nan, e_paper=None, g_c0=None,
        e_kin_con=None, iters=0, time_ms=0.0, converged=False)


def _run_series(args) -> list[ResultRecord]:
    """All J points for one (scheme, mu) pair, warm-starting along J."""
    spec, scheme, mu = args
    records = []
    warm_gutz = None
    warm_bdmft = None
    for j in sorted(spec.j_list):
        try:
            if spec.solver == GUTZWILLER:
                cfg = _gutz_config(spec, scheme, mu, j, phi_seeds=warm_gutz)
                res = _gutz.solve(cfg)
                records.append(_record_gutzwiller(spec, scheme, mu, j, res))
                if not spec.cold_start and res.converged:
                    # previous solution joins the stock seeds as an extra
                    # candidate; multistable points keep their cold answer
                    warm_gutz = ((0.0, 0.5, res.phi)
                                 if res.phi >= 0.1 else (0.0, 0.5))
            else:
                cfg = _bdmft_config(spec, scheme, mu, j)
                res = _bdmft.solve(cfg, warm=warm_bdmft)
                records.append(_record_bdmft(spec, scheme, mu, j, res))
                if not spec.cold_start and res.converged:
                    warm_bdmft = WarmStart(phi_c=res.phi, bath=res.bath,
                                           alpha=res.alpha_opt)
        except Exception:
            records.append(_failure_record(spec, scheme, mu, j))
    return records


def run_sweep(spec: SweepSpec) -> list[ResultRecord]:
    """Cartesian product of schemes x mu x J, sorted deterministically.

    Each (scheme, mu) series runs its J axis in ascending order so warm
    starts stay within a series; distinct series are independent and may
    run on parallel workers with identical results.
    """
    tasks = [(spec, scheme, mu) for scheme in spec.schemes
             for mu in spec.mu_list]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers,
                                 mp_context=get_context("spawn")) as pool:
            chunks = list(pool.map(_run_series, tasks))
    else:
        chunks = [_run_series(t) for t in tasks]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=ResultRecord.sort_key)
    return records


def detect_mott_boundary(solver: str, scheme: TruncationScheme,
                         mu_over_u: float, j_bracket: tuple[float, float],
                         tol_j: float = 1e-4, z: int = 6, l_b: int = 2,
                         alpha_scheme: str = _bdmft.ALPHA_EAIM,
                         alpha_value: float = 0.0) -> float:
    """Bisection on J of the superfluid indicator phi > 1e-6.

    The probe solves run with raised iteration caps because the fixed
    point slows down critically near the transition.
    """
    if solver == GUTZWILLER:
        def phi_at(j: float) -> float:
            cfg = GutzwillerConfig(j_over_u=j, mu_over_u=mu_over_u,
                                   scheme=scheme, z=z,
                                   max_iter=BOUNDARY_GUTZ_MAX_ITER)
            if scheme.kind == CTS:
                return _gutz.solve(cfg).phi
            return _gutz.solve_fixed_alpha(cfg).phi
    elif solver == BDMFT:
        def phi_at(j: float) -> float:
            cfg = BdmftConfig(j_over_u=j, mu_over_u=mu_over_u, scheme=scheme,
                              z=z, l_b=l_b, alpha_scheme=alpha_scheme,
                              alpha_value=alpha_value,
                              max_sc_iter=BOUNDARY_BDMFT_MAX_ITER)
            return _bdmft.solve(cfg).phi
    else:
        raise ValueError(f"unknown solver {solver!r}")

    lo, hi = float(j_bracket[0]), float(j_bracket[1])
    phi_lo = phi_at(lo)
    if phi_lo >= PHI_THRESHOLD:
        raise BracketError("lower", lo, phi_lo)
    phi_hi = phi_at(hi)
    if phi_hi <= PHI_THRESHOLD:
        raise BracketError("upper", hi, phi_hi)
    while hi - lo > tol_j:
        mid = 0.5 * (lo + hi)
        if phi_at(mid) > PHI_THRESHOLD:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def bench(spec: SweepSpec) -> tuple[list[ResultRecord], dict]:
    """Median cold-start wall time per (scheme, J), plus the speedup of
    every scheme against the reference.

    The reference is the hard cutoff with the largest n_c in the scheme
    list (the conventional high-cutoff baseline); the protocol is fixed,
    so only ratios are meaningful across machines.
    """
    if spec.repeats < 3:
        raise ValueError("bench needs repeats >= 3")
    fock_schemes = [s for s in spec.schemes if s.kind == FOCK]
    reference = (max(fock_schemes, key=lambda s: s.n_c) if fock_schemes
                 else spec.schemes[0])

    records = []
    times: dict[tuple, float] = {}
    for scheme in spec.schemes:
        for mu in spec.mu_list:
            for j in sorted(spec.j_list):
                samples = []
                rec = None
                for _ in range(spec.repeats):
                    if spec.solver == GUTZWILLER:
                        res = _gutz.solve(_gutz_config(spec, scheme, mu, j))
                        rec = _record_gutzwiller(spec, scheme, mu, j, res)
                    else:
                        res = _bdmft.solve(_bdmft_config(spec, scheme, mu, j))
                        rec = _record_bdmft(spec, scheme, mu, j, res)
                    samples.append(res.wall_time_s * 1e3)
                rec = replace(rec, time_ms=statistics.median(samples))
                records.append(rec)
                times[(scheme.kind, scheme.n_c, mu, j)] = rec.time_ms

    speedups = {}
    for rec in records:
        ref_time = times.get((reference.kind, reference.n_c, rec.mu_over_u,
                              rec.j_over_u))
        speedups[id(rec)] = (ref_time / rec.time_ms
                             if ref_time and rec.time_ms > 0 else None)
    records.sort(key=ResultRecord.sort_key)
    return records, speedups
