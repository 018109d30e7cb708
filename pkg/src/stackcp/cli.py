"""Command line entry point: ``stackcp {run,oracle-check,stability-probe,synth}``."""

import argparse
import logging
import sys
from pathlib import Path

from ._random import child_seed
from .config import load_config
from .errors import StackCPError
from .experiment import run_experiment, run_oracle_check, run_stability_probe
from .io import write_dataset
from .synthetic import SyntheticSpec, generate


def _add_overrides(p):
    p.add_argument("--config", help="key = value experiment file")
    p.add_argument("--alpha", help="miscoverage level(s), comma separated")
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--epsilon", type=float, help="bisection tolerance in response units")
    p.add_argument("--u", type=float, help="search bracket half-width in standard deviations")
    p.add_argument("--train-frac", type=float)
    p.add_argument("--out")
    p.add_argument("--expand-bracket", action="store_true", default=None)


def _config(args):
    overrides = {
        "alpha": args.alpha,
        "folds": args.folds,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "u": args.u,
        "train_frac": args.train_frac,
        "out": args.out,
        "expand_bracket": args.expand_bracket,
    }
    extra = getattr(args, "trials", None)
    if extra is not None:
        overrides["probe_trials"] = extra
    return load_config(args.config, {k: None if v is None else str(v) for k, v in overrides.items()})


def cmd_run(args):
    result = run_experiment(_config(args))
    print(result.table)
    for path in result.files:
        print(f"wrote {path}")
    return 0


def cmd_oracle_check(args):
    sizes = [int(s) for s in args.sizes.split(",")]
    cases = run_oracle_check(sizes, range(args.seeds), args.alpha)
    for c in cases:
        status = "ok  " if c.passed else "FAIL"
        flag = " truncated" if c.truncated else ""
        print(f"{status} n={c.n} M={c.n_learners} seed={c.seed} err={c.max_error:.3g} tol={c.tolerance:.3g}{flag}")
    failed = sum(not c.passed for c in cases)
    print(f"{len(cases) - failed}/{len(cases)} oracle comparisons within tolerance")
    return 1 if failed else 0


def cmd_stability_probe(args):
    cfg = _config(args)
    report = run_stability_probe(cfg)
    print("eps,delta_hat,h_hat")
    for e, d, h in report.rows():
        print(f"{e:.6g},{d:.4f},{h:.4f}")
    eps, slack = report.best_slack()
    print(f"trials={report.trials} smallest delta_hat+h_hat={slack:.4f} at eps={eps:.6g}")
    print(f"wrote {Path(cfg.out) / 'stability.csv'}")
    return 0


def cmd_synth(args):
    spec = SyntheticSpec(args.n, args.d, args.function, args.noise, args.sigma, child_seed(args.seed, "synthetic"))
    write_dataset(args.out, generate(spec), "y")
    print(f"wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="stackcp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="stacked CP vs split CP on a dataset")
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle-check", help="compare bisection against brute-force grids")
    p.add_argument("--sizes", default="30,50,80")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds per size")
    p.add_argument("--alpha", type=float, default=0.1)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("stability-probe", help="estimate delta(eps) and h(eps) on synthetic data")
    _add_overrides(p)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_stability_probe)

    p = sub.add_parser("synth", help="write a synthetic dataset to CSV")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--function", default="linear")
    p.add_argument("--noise", default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="synthetic.csv")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (StackCPError, FileNotFoundError, ValueError) as exc:
        print(f"stackcp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
