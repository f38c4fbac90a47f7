"""Command-line entry point ``opvbilayer``.

Exit codes: 0 on success, 2 when a solve does not converge, 3 for
configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import experiments as ex
from .asymptotics import format_currents, zeroth_order_context
from .config import Config, load_config
from .errors import AsymptoticsError, CharacteristicPointError, ConfigError
from .solver import format_diagnostics

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_NOCONV, EXIT_CONFIG = 0, 2, 3


def _add_globals(ap: argparse.ArgumentParser, suppress: bool) -> None:
    # subcommands accept the global flags too; SUPPRESS keeps earlier values
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    ap.add_argument("--config", type=Path, default=d(None),
                    help="flat key = value configuration file")
    ap.add_argument("--out", type=Path, default=d(None),
                    help="output CSV path (stdout when omitted)")
    ap.add_argument("--vdiff", type=float, default=d(None), help="potential difference V_diff")
    ap.add_argument("--with-asymptotics", action="store_true", default=d(False),
                    help="also write the asymptotic profile (solve)")
    ap.add_argument("--zero-bc", action="store_true", default=d(False),
                    help="zero contact densities")
    ap.add_argument("--no-generation", action="store_true", default=d(False),
                    help="set the exciton generation to 0")
    ap.add_argument("--kd-const", type=float, metavar="KD", default=d(None),
                    help="field-independent interface dissociation rate")
    ap.add_argument("--parallel", type=int, default=d(0), metavar="N",
                    help="solve sweep points cold in N worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opvbilayer",
                                 description="Bilayer OPV drift-diffusion solver and asymptotics")
    _add_globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)
    cmds = {}
    for name, text in (("solve", "single steady solve"), ("sweep", "IV sweep"),
                       ("oc", "open-circuit bias by bisection"), ("opp", "optimal power point"),
                       ("compare", "numeric vs asymptotic profiles"),
                       ("shunt", "dark shunt sweep and difference check"),
                       ("kdconst", "sweep with constant interface dissociation rate")):
        cmds[name] = sub.add_parser(name, help=text)
        _add_globals(cmds[name], suppress=True)
    for flag in ("--start", "--stop", "--step"):
        cmds["sweep"].add_argument(flag, type=float)
    return ap


def _resolve_config(args) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    changes = {}
    if args.zero_bc:
        changes.update(ex.ZERO_BC)
    if args.no_generation:
        changes["GT"] = 0.0
    if args.kd_const is not None:
        if not args.kd_const > 0:
            raise ConfigError("--kd-const must be positive")
        changes["kd_in_const"] = args.kd_const
    if changes:
        cfg = dataclasses.replace(cfg, params=cfg.params.with_updates(**changes))
    if args.vdiff is not None:
        cfg.V_diff = args.vdiff
    if args.parallel < 0:
        raise ConfigError("--parallel must be non-negative")
    return cfg


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _asym_path(out: Path) -> Path:
    return out.with_name(out.stem + "_asymptotic" + out.suffix)


def _cmd_solve(cfg: Config, args) -> int:
    out = args.out
    res = ex.run_single(cfg, with_asymptotics=args.with_asymptotics, out=out,
                        asym_out=_asym_path(out) if out is not None else None)
    sys.stderr.write(format_diagnostics(res.diagnostics, res.state, res.current))
    if res.asymptotics is not None:
        ctx = zeroth_order_context(cfg.params, cfg.V_diff)
        sys.stderr.write(format_currents(res.asymptotics.currents, ctx))
    if out is None:
        sys.stdout.write(f"J = {res.current.J:.10g}\n")
    return EXIT_OK if res.diagnostics.converged else EXIT_NOCONV


def _report_curve(curve, out: Path | None) -> int:
    _emit(curve.to_csv(), out)
    sys.stderr.write(curve.annotation_text())
    bad = [p.V_diff for p in curve.points if not p.converged]
    if bad:
        sys.stderr.write("unconverged = " + ",".join(f"{v:g}" for v in bad) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        cmd = args.command
        if cmd == "solve":
            return _cmd_solve(cfg, args)
        if cmd == "sweep":
            curve = ex.run_iv_sweep(cfg, args.start, args.stop, args.step, parallel=args.parallel)
            return _report_curve(curve, args.out)
        if cmd == "oc":
            V = ex.find_open_circuit(cfg)
            _emit(f"V_oc = {V:.10g}\n", args.out)
            return EXIT_OK
        if cmd == "opp":
            V, P = ex.find_optimal_power(cfg)
            _emit(f"V_opp = {V:.10g}\nP_max = {P:.10g}\n", args.out)
            return EXIT_OK
        if cmd == "compare":
            out = args.out if args.out is not None else Path("compare.csv")
            cols = ex.compare_asymptotics(cfg, out)
            sys.stderr.write(f"J_num = {cols['J_num']:.10g}\n" + format_currents(cols["currents"]))
            return EXIT_OK
        if cmd == "shunt":
            out = args.out if args.out is not None else Path("shunt.csv")
            ex.run_shunt(cfg, parallel=args.parallel, out=out)
            return EXIT_OK
        if cmd == "kdconst":
            kd = cfg.params.kd_in_const or 2763.0
            res = ex.run_kdconst(cfg, kd, parallel=args.parallel)
            for line in res["asymptotic"].annotation_text().splitlines():
                sys.stderr.write(f"asymptotic_{line}\n")
            return _report_curve(res["numeric"], args.out)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except CharacteristicPointError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOCONV
    except AsymptoticsError as exc:
        sys.stderr.write(f"asymptotics error: {exc}\n")
        return EXIT_CONFIG
    ap.error(f"unknown command {args.command}")
    return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
