"""Command-line entry point: ``mlchain <subcommand> ...``.

Subcommands: synth, eval, positions, scaling, stats, ttest. Every command
is deterministic given its input files, flags and ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import __version__
from ..data import DataFormatError, load, save_csv, stats
from ..linlearn import STEP_RULES, OptimizerConfig
from ..metrics import METRICS
from ..synth import make_spec, sample
from .experiments import DEFAULT_M_VALUES, chain_position_experiment, label_scaling_experiment
from .harness import ALGORITHMS, AlgorithmSpec, Comparison, derive_seed, run_cv
from .tstats import paired_ttest

CHAIN_ALGOS = {"cc", "ns"}


def _write(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _optimizer_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("base learner")
    g.add_argument("--lambda", dest="lam", type=float, default=1e-4, help="L2 strength (default 1e-4)")
    g.add_argument("--max-iter", type=int, default=1000)
    g.add_argument("--tol", type=float, default=1e-6, help="gradient-norm tolerance")
    g.add_argument("--step-rule", choices=STEP_RULES, default="backtracking")
    return p


def _data_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("dataset")
    g.add_argument("--data", required=True, help="dataset file")
    g.add_argument("--format", choices=("csv", "arff"), default="csv")
    g.add_argument("--label-count", type=int, required=True, help="number of label columns")
    g.add_argument("--labels-at", choices=("front", "back"), default="back", help="ARFF label position")
    return p


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(args.max_iter, args.tol, args.step_rule, args.lam)


def _load(args):
    return load(args.data, args.label_count, args.format, args.labels_at)


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mlchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    opt, dat = _optimizer_parent(), _data_parent()

    p = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    p.add_argument("--labels", type=int, required=True)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--train", type=int, required=True, help="training rows")
    p.add_argument("--test", type=int, default=0, help="test rows, written to <out>-test.csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", parents=[dat, opt], help="cross-validate learners, write a JSON report")
    p.add_argument("--algo", action="append", required=True,
                   help=f"one of {', '.join(ALGORITHMS)}; repeat or comma-separate to compare")
    p.add_argument("--order", choices=("identity", "random"), default=None,
                   help="chain order for cc/ns (default identity)")
    p.add_argument("--subset-correction", action="store_true")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--ensemble-size", type=int, default=10)
    p.add_argument("--level2-targets", choices=("predicted", "true"), default="predicted")
    p.add_argument("--standardize", action="store_true", help="z-score features per training fold")
    p.add_argument("--out", default=None, help="report path (default stdout)")

    p = sub.add_parser("positions", parents=[dat, opt], help="position-wise CC error increase over BR")
    p.add_argument("--orders", type=int, default=100)
    p.add_argument("--folds", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="curve CSV path (default stdout)")

    p = sub.add_parser("scaling", parents=[opt], help="synthetic label-count sweep of BR/CC/NS")
    p.add_argument("--labels", type=_int_list, default=list(DEFAULT_M_VALUES), help="e.g. 5,10,15,20,25")
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--train", type=int, default=50)
    p.add_argument("--test", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="table CSV path (default stdout)")

    p = sub.add_parser("stats", parents=[dat], help="dataset statistics")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("ttest", help="paired t-tests between two eval reports")
    p.add_argument("--a", required=True, help="first report")
    p.add_argument("--b", required=True, help="second report")
    p.add_argument("--algo-a", default=None, help="algorithm name in report a (default: first)")
    p.add_argument("--algo-b", default=None, help="algorithm name in report b (default: first)")
    p.add_argument("--out", default=None)
    return parser


def cmd_synth(args, parser) -> None:
    spec = make_spec(args.labels, args.tau, args.noise, derive_seed(args.seed, 0))
    out = Path(args.out)
    save_csv(sample(spec, args.train, derive_seed(args.seed, 1)), out)
    written = [out]
    if args.test > 0:
        test_path = out.with_name(out.stem + "-test" + (out.suffix or ".csv"))
        save_csv(sample(spec, args.test, derive_seed(args.seed, 2)), test_path)
        written.append(test_path)
    for path in written:
        print(path)


def cmd_eval(args, parser) -> None:
    algos = [a.strip() for item in args.algo for a in item.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            parser.error(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    if args.order is not None and not CHAIN_ALGOS & set(algos):
        parser.error("--order only applies to --algo cc or ns")
    config = _config(args)
    specs = [
        AlgorithmSpec(
            algo=a,
            order=args.order or "identity",
            threshold=args.threshold,
            ensemble_size=args.ensemble_size,
            config=config,
            standardize=args.standardize,
            level2_targets=args.level2_targets,
        )
        for a in algos
    ]
    report = run_cv(
        _load(args), specs, args.folds, args.repeats, args.seed,
        subset_correction=args.subset_correction, dataset_name=args.data,
    )
    _write(report.to_json(), args.out)


def cmd_positions(args, parser) -> None:
    curve = chain_position_experiment(_load(args), args.orders, args.seed, _config(args), args.folds)
    _write(curve.to_csv(), args.out)


def cmd_scaling(args, parser) -> None:
    table = label_scaling_experiment(
        args.labels, args.tau, args.noise, args.repetitions, args.train, args.test, args.seed, _config(args)
    )
    _write(table.to_csv(), args.out)


def cmd_stats(args, parser) -> None:
    s = stats(_load(args)).as_dict()
    if args.json:
        print(json.dumps(s, indent=2))
    else:
        for k, v in s.items():
            print(f"{k}={v}")


def _pick(report: dict, name, which: str):
    algos = report.get("algorithms") or {}
    if not algos:
        raise ValueError(f"report {which} contains no algorithms")
    if name is None:
        name = next(iter(algos))
    if name not in algos:
        raise ValueError(f"report {which} has no algorithm {name!r}; available: {', '.join(algos)}")
    return name, algos[name]


def cmd_ttest(args, parser) -> None:
    docs = []
    for path in (args.a, args.b):
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("schema") != "mlchain.report":
            raise ValueError(f"{path} is not an mlchain report")
        docs.append(doc)
    name_a, res_a = _pick(docs[0], args.algo_a, "a")
    name_b, res_b = _pick(docs[1], args.algo_b, "b")
    keys = ("folds", "repeats", "seed", "n")
    same_splits = all(docs[0]["provenance"].get(k) == docs[1]["provenance"].get(k) for k in keys)
    rows = []
    for metric in METRICS:
        a = res_a["metrics"][metric]["folds"]
        b = res_b["metrics"][metric]["folds"]
        if len(a) != len(b):
            raise ValueError(f"fold counts differ: {len(a)} vs {len(b)}")
        c = Comparison(name_a, name_b, metric, paired_ttest(a, b), sum(a) / len(a), sum(b) / len(b))
        rows.append(c.to_dict())
    out = {"a": args.a, "b": args.b, "same_splits": same_splits, "significance": rows}
    _write(json.dumps(out, indent=2) + "\n", args.out)


COMMANDS = {
    "synth": cmd_synth,
    "eval": cmd_eval,
    "positions": cmd_positions,
    "scaling": cmd_scaling,
    "stats": cmd_stats,
    "ttest": cmd_ttest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args, parser)
    except (ValueError, DataFormatError, OSError, KeyError) as exc:
        print(f"mlchain {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
