"""Command line entry point: ``run``, ``check-conditions`` and ``plot``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conditions import check_conditions, parse_horizon
from .harness.config import read_config
from .harness.csvio import write_csv
from .harness.experiment import ConfigError, ExperimentConfig, run_experiment
from .harness.plot import render_plot
from .scheduler import InvariantViolation
from .weights import WeightFunctions

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oraclesched", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate and write CSV metrics")
    run.add_argument("--config")
    run.add_argument("--oracle")
    run.add_argument("--topology", help="switch:M or grid:RxC")
    run.add_argument("--load", type=float)
    run.add_argument("--steps", type=int)
    run.add_argument("--replications", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out-dir")
    run.add_argument("--stride", type=int)

    cc = sub.add_parser("check-conditions", help="sampled check of C1-C6")
    cc.add_argument("--family", default="power")
    cc.add_argument("--a", type=float, default=0.5)
    cc.add_argument("--b", type=float, default=0.25)
    cc.add_argument("--horizon", default="constant",
                    help="constant[:H] | explinear[:c1,c2] | lineargap[:xi] | randomsearch[:n]")
    cc.add_argument("--c", type=float, default=0.5)
    cc.add_argument("--n", type=int, default=16, help="queue count for default horizon constants")

    pl = sub.add_parser("plot", help="SVG chart from aggregate CSVs")
    pl.add_argument("--inputs", nargs="+", required=True)
    pl.add_argument("--labels", nargs="+")
    pl.add_argument("--out", required=True)
    return p


def _run(args) -> int:
    values = read_config(args.config) if args.config else {}
    for key in ("oracle", "topology", "load", "steps", "replications", "seed", "out_dir", "stride"):
        val = getattr(args, key)
        if val is not None:
            values[key] = val
    cfg = ExperimentConfig.from_mapping(values)
    result = run_experiment(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = out / f"{cfg.oracle}_runs.csv"
    agg = out / f"{cfg.oracle}_aggregate.csv"
    write_csv(result.logs, runs, agg)
    tails = ", ".join(f"{v:.3f}" for v in result.tail_means())
    print(f"{cfg.oracle} on {cfg.topology}: tail mean queue length per replication [{tails}]")
    print(f"wrote {runs} and {agg}")
    return EXIT_OK


def _check(args) -> int:
    try:
        wf = WeightFunctions(args.family, args.a, args.b)
        horizon = parse_horizon(args.horizon, args.n)
    except (ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc
    report = check_conditions(wf, horizon, args.c)
    print(f"{wf}  horizon={horizon}  c={args.c}")
    print(report.table())
    print("all conditions consistent" if report.passed else f"failing: {', '.join(report.failed)}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "check-conditions":
            return _check(args)
        render_plot(args.inputs, args.out, args.labels)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
