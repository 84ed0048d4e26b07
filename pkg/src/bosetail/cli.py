"""Command-line front end.

Subcommands: gutzwiller and bdmft (single points), sweep, boundary, bench
and selftest. Options may come from a plain key=value config file via
--config; explicit flags win. Exit codes: 0 success, 1 validation error,
2 selftest failure, 3 boundary non-convergence.
"""

from __future__ import annotations

import argparse
import sys

from . import bdmft as _bdmft
from . import gutzwiller as _gutz
from .basis import TruncationScheme, cts, fock
from .bdmft import BdmftConfig
from .gutzwiller import GutzwillerConfig
from .selftest import selftest
from .sweep import (
    BDMFT,
    GUTZWILLER,
    BracketError,
    SweepSpec,
    bench,
    detect_mott_boundary,
    emit_csv,
    run_sweep,
    _record_bdmft,
    _record_gutzwiller,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SELFTEST = 2
EXIT_BOUNDARY = 3


def parse_scheme(text: str) -> TruncationScheme:
    """fock:<n_c> or cts:<n_c>."""
    try:
        kind, n_c = text.split(":")
        n_c = int(n_c)
    except ValueError:
        raise ValueError(f"scheme must look like fock:8 or cts:5, got {text!r}")
    if kind == "fock":
        return fock(n_c)
    if kind == "cts":
        return cts(n_c, 0.0)
    raise ValueError(f"unknown scheme kind {kind!r}")


def parse_alpha_scheme(text: str) -> tuple[str, float]:
    if text == "eaim":
        return _bdmft.ALPHA_EAIM, 0.0
    if text == "etot":
        return _bdmft.ALPHA_ETOT, 0.0
    if text.startswith("fixed:"):
        return _bdmft.ALPHA_FIXED, float(text.split(":", 1)[1])
    raise ValueError(
        f"alpha scheme must be eaim, etot or fixed:<value>, got {text!r}")


def parse_mu_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def load_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment; keys match long flag names
    with dashes replaced by underscores."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _j_grid(args) -> tuple[float, ...]:
    if getattr(args, "j", None) is not None:
        return (args.j,)
    if args.j_min is None or args.j_max is None:
        raise ValueError("need --j or --j-min/--j-max")
    step = args.j_step if args.j_step else (args.j_max - args.j_min)
    if step <= 0:
        raise ValueError("--j-step must be positive")
    count = int(round((args.j_max - args.j_min) / step)) + 1
    return tuple(round(args.j_min + i * step, 12) for i in range(count))


def _write_out(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p, *, solver_flag: bool):
    p.add_argument("--config", help="key=value config file; flags override")
    if solver_flag:
        p.add_argument("--solver", choices=(GUTZWILLER, BDMFT),
                       default=GUTZWILLER)
    p.add_argument("--mu", type=parse_mu_list, default=None,
                   help="chemical potential(s) over U, comma separated")
    p.add_argument("--j", type=float, default=None, help="single J/U value")
    p.add_argument("--j-min", type=float, default=None)
    p.add_argument("--j-max", type=float, default=None)
    p.add_argument("--j-step", type=float, default=None)
    p.add_argument("--scheme", action="append", type=parse_scheme,
                   default=None, help="fock:<n_c> or cts:<n_c>; repeatable")
    p.add_argument("--z", type=int, default=6)
    p.add_argument("--lb", type=int, default=2, help="bath orbitals (bdmft)")
    p.add_argument("--alpha-scheme", type=parse_alpha_scheme,
                   default=(_bdmft.ALPHA_EAIM, 0.0),
                   help="eaim | etot | fixed:<value>")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--cold-start", action="store_true",
                   help="disable warm starts along the J axis")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.add_argument("--tol-j", type=float, default=1e-4,
                   help="bisection resolution for boundary")


class _Parser(argparse.ArgumentParser):
    # argparse exits with its own status on bad flags; route everything
    # through the single validation exit code instead
    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bosetail",
        description="Bose-Hubbard solvers on soft-truncated number bases")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, needs_solver in (("gutzwiller", False), ("bdmft", False),
                               ("sweep", True), ("boundary", True),
                               ("bench", True), ("selftest", False)):
        sub = subs.add_parser(name)
        if name != "selftest":
            _add_common(sub, solver_flag=needs_solver)
    return parser


def _apply_config_file(parser, args, argv):
    """Re-parse with config entries expanded to flags; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    file_values = load_config_file(args.config)
    command, *rest = argv
    user_flags = set(a for a in rest if a.startswith("--"))
    cfg_flags: list[str] = []
    for key, val in file_values.items():
        flag = "--" + key.replace("_", "-")
        if flag in user_flags:
            continue
        if key == "cold_start":
            if val.lower() in ("1", "true", "yes"):
                cfg_flags.append("--cold-start")
        elif key == "scheme":
            for item in val.split(","):
                cfg_flags.extend(["--scheme", item.strip()])
        else:
            cfg_flags.extend([flag, val])
    return parser.parse_args([command] + cfg_flags + rest)


def _single_scheme(args) -> TruncationScheme:
    schemes = args.scheme or [fock(8)]
    if len(schemes) != 1:
        raise ValueError("this command takes exactly one --scheme")
    return schemes[0]


def _single_mu(args) -> float:
    if not args.mu or len(args.mu) != 1:
        raise ValueError("this command takes exactly one --mu value")
    return args.mu[0]


def _spec_from_args(args, solver: str) -> SweepSpec:
    alpha_scheme, alpha_value = args.alpha_scheme
    return SweepSpec(
        solver=solver, mu_list=tuple(args.mu or ()), j_list=_j_grid(args),
        schemes=tuple(args.scheme or ()), z=args.z, l_b=args.lb,
        alpha_scheme=alpha_scheme, alpha_value=alpha_value,
        repeats=args.repeats, cold_start=args.cold_start,
        workers=args.workers)


def cmd_gutzwiller(args) -> int:
    scheme = _single_scheme(args)
    mu = _single_mu(args)
    j = _j_grid(args)[0]
    spec = _spec_from_args(args, GUTZWILLER)
    cfg = GutzwillerConfig(j_over_u=j, mu_over_u=mu, scheme=scheme, z=args.z)
    res = _gutz.solve(cfg)
    rec = _record_gutzwiller(spec, scheme, mu, j, res)
    _write_out(emit_csv([rec]), args.out)
    return EXIT_OK


def cmd_bdmft(args) -> int:
    scheme = _single_scheme(args)
    mu = _single_mu(args)
    j = _j_grid(args)[0]
    alpha_scheme, alpha_value = args.alpha_scheme
    spec = _spec_from_args(args, BDMFT)
    cfg = BdmftConfig(j_over_u=j, mu_over_u=mu, scheme=scheme, z=args.z,
                      l_b=args.lb, alpha_scheme=alpha_scheme,
                      alpha_value=alpha_value)
    res = _bdmft.solve(cfg)
    rec = _record_bdmft(spec, scheme, mu, j, res)
    _write_out(emit_csv([rec]), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = _spec_from_args(args, args.solver)
    records = run_sweep(spec)
    _write_out(emit_csv(records), args.out)
    return EXIT_OK


def cmd_boundary(args) -> int:
    scheme = _single_scheme(args)
    mu = _single_mu(args)
    if args.j_min is None or args.j_max is None:
        raise ValueError("boundary needs --j-min and --j-max as the bracket")
    alpha_scheme, alpha_value = args.alpha_scheme
    try:
        j_c = detect_mott_boundary(
            args.solver, scheme, mu, (args.j_min, args.j_max),
            tol_j=args.tol_j, z=args.z, l_b=args.lb,
            alpha_scheme=alpha_scheme, alpha_value=alpha_value)
    except BracketError as exc:
        print(f"boundary failed: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    _write_out(f"{j_c:.12g}\n", args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = _spec_from_args(args, args.solver)
    records, speedups = bench(spec)
    _write_out(emit_csv(records, extra=speedups), args.out)
    return EXIT_OK


def cmd_selftest(_args) -> int:
    ok, report = selftest()
    print(report)
    return EXIT_OK if ok else EXIT_SELFTEST


COMMANDS = {
    "gutzwiller": cmd_gutzwiller,
    "bdmft": cmd_bdmft,
    "sweep": cmd_sweep,
    "boundary": cmd_boundary,
    "bench": cmd_bench,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(parser, args, argv)
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
