"""Run every sweep config in scripts/configs and write one CSV per figure.

    python scripts/reproduce_figures.py [--out results] [--workers 4] [--mc 100000]

``--mc N`` turns on Monte Carlo validation of each row with N blocks.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import replace
from pathlib import Path

from igsrelay.sweep import load_sweep_config, rows_to_csv, run_sweep

CONFIG_DIR = Path(__file__).resolve().parent / "configs"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--mc", type=int, default=0, metavar="N")
    parser.add_argument("configs", nargs="*", type=Path,
                        help="configs to run (default: all in scripts/configs)")
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for path in args.configs or sorted(CONFIG_DIR.glob("*.ini")):
        spec = load_sweep_config(path)
        if args.mc:
            spec = replace(spec, methods=spec.methods + ("mc-validate",), mc_samples=args.mc)
        t0 = time.perf_counter()
        rows = run_sweep(spec, workers=args.workers)
        target = args.out / f"{path.stem}.csv"
        target.write_text(rows_to_csv(rows), encoding="utf-8")
        print(f"{path.name:<20s} {len(rows):5d} rows  {time.perf_counter() - t0:6.1f}s  -> {target}")


if __name__ == "__main__":
    main()
