"""Command line entry point: ``igsrelay {eval,optimize,sweep,validate}``."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict

from . import analytic, mc, optimize
from .model import SignalConfig, SystemParams
from .sweep import ConfigError, load_sweep_config, rows_to_csv, run_sweep
from .validation import validate

SEED_ENV = "IGSRELAY_SEED"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV}={raw!r} is not an integer") from None


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario (gains in dB, powers in W)")
    g.add_argument("--p-s", type=float, default=1.0)
    g.add_argument("--p-max", type=float, default=1.0)
    g.add_argument("--pi-sr-db", type=float, default=20.0)
    g.add_argument("--pi-rd-db", type=float, default=20.0)
    g.add_argument("--pi-rr-db", type=float, default=10.0)
    g.add_argument("--pi-sd-db", type=float, default=3.0)
    g.add_argument("--rate", type=float, default=1.0, help="target rate, b/s/Hz")


def _params(args) -> SystemParams:
    return SystemParams.from_db(p_s=args.p_s, p_max=args.p_max, pi_sr_db=args.pi_sr_db,
                                pi_rd_db=args.pi_rd_db, pi_rr_db=args.pi_rr_db,
                                pi_sd_db=args.pi_sd_db, rate=args.rate)


def cmd_eval(args) -> int:
    params = _params(args)
    sig = SignalConfig(args.p_r if args.p_r is not None else params.p_max, args.c_x).check(params)
    kinds = ["upper-bound", "exact-quadrature"]
    if sig.c_x == 0.0:
        kinds.append("exact-closed-form")
    if sig.c_x == 1.0:
        kinds.append("asymptotic")
    print(f"{'kind':<18s} {'p_sr':>12s} {'p_rd':>12s} {'p_e2e':>12s}")
    for kind in kinds:
        b = analytic.breakdown(params, sig, kind)
        print(f"{kind:<18s} {b.p_sr:12.6g} {b.p_rd:12.6g} {b.p_e2e:12.6g}")
    if args.mc:
        est = mc.estimate_outage(params, sig, args.mc, args.seed, workers=args.workers)
        print(f"{'monte-carlo':<18s} {est.sr.p_hat:12.6g} {est.rd.p_hat:12.6g} {est.e2e.p_hat:12.6g}"
              f"  (se {est.e2e.std_err:.2g}, n={args.mc}, seed={args.seed})")
    return 0


def cmd_optimize(args) -> int:
    params = _params(args)
    p_r = args.p_r if args.p_r is not None else params.p_max
    if args.mode == "cx":
        res = optimize.optimize_cx(params, p_r, args.tol)
    elif args.mode == "power-pgs":
        res = optimize.optimize_power_pgs(params, args.tol)
    elif args.mode == "power-ub":
        res = optimize.optimize_power_ub(params, args.c_x, args.tol)
    else:
        res = optimize.optimize_joint(params, args.tol)
    for key, value in asdict(res).items():
        print(f"{key:<10s} {value}")
    return 0 if res.converged else 1


def cmd_sweep(args) -> int:
    try:
        spec = load_sweep_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return 2
    text = rows_to_csv(run_sweep(spec, workers=args.workers))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def cmd_validate(args) -> int:
    report = validate(args.seed, args.samples)
    print("\n".join(report.lines()))
    print(f"{'all checks passed' if report.passed else 'VALIDATION FAILED'} "
          f"(n={report.n}, seed={report.seed})")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igsrelay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    seed_help = f"RNG seed (default: ${SEED_ENV} or 0)"

    p = sub.add_parser("eval", help="outage of one signaling choice")
    _add_scenario_args(p)
    p.add_argument("--p-r", type=float, help="relay power in W (default: p_max)")
    p.add_argument("--c-x", type=float, default=0.0, help="circularity coefficient in [0, 1]")
    p.add_argument("--mc", type=int, default=0, metavar="N", help="also simulate N blocks")
    p.add_argument("--seed", type=int, default=None, help=seed_help)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="optimize relay signaling")
    _add_scenario_args(p)
    p.add_argument("--mode", choices=("cx", "power-pgs", "power-ub", "joint"), default="joint")
    p.add_argument("--p-r", type=float, help="fixed relay power for --mode cx (default: p_max)")
    p.add_argument("--c-x", type=float, default=0.0, help="fixed c_x for --mode power-ub")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="run a sweep config and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV path, or - for stdout")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="Monte Carlo validation of the analytic results")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None, help=seed_help)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
