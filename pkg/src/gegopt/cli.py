"""``bench`` command line: run experiments, list functions, tune hyperparameters."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import Algorithm
from .harness import (
    COMPOSITE_DIMS,
    ExperimentSpec,
    function_names,
    report_csv,
    report_json,
    resolve_function,
    run_experiment,
    write_report,
)

log = logging.getLogger("gegopt.cli")


def _csv_list(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def parse_cf_range(text: str) -> list[int]:
    """``"3"``, ``"1..10"`` or ``"1,4,7..9"`` to a list of composition ids."""
    ids: list[int] = []
    for part in _csv_list(text):
        lo, sep, hi = part.partition("..")
        try:
            a = int(lo)
            b = int(hi) if sep else a
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad composition range {part!r}") from None
        if a > b:
            raise argparse.ArgumentTypeError(f"empty composition range {part!r}")
        ids.extend(range(a, b + 1))
    return ids


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_common(p: argparse.ArgumentParser, pop: int, iters: int, trials: int) -> None:
    p.add_argument("--pop", type=_positive, default=pop, help="population size")
    p.add_argument("--iters", type=_positive, default=iters, help="iterations per run")
    p.add_argument("--trials", type=_positive, default=trials, help="independent seeded trials")
    p.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    p.add_argument("--out", type=Path, help="report path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="report format (default: from --out suffix, else csv)")
    p.add_argument("--workers", type=_positive, default=1, help="parallel trial processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="classical benchmark experiment")
    run.add_argument("--algo", type=_csv_list, default=["gego", "geo", "ga"])
    run.add_argument("--fn", type=_csv_list, required=True, help="function names, see `bench list`")
    run.add_argument("--dim", type=_positive, help="dimension for free-dimension functions")
    _add_common(run, pop=20, iters=100, trials=40)

    comp = sub.add_parser("composite", help="composition-function experiment")
    comp.add_argument("--algo", type=_csv_list, default=["gego", "geo", "ga"])
    comp.add_argument("--cf", type=parse_cf_range, default=list(range(1, 11)))
    comp.add_argument("--dim", type=_positive, default=COMPOSITE_DIMS)
    comp.add_argument("--data-dir", type=Path, help="directory with cf<k>_D<dim>.txt files")
    _add_common(comp, pop=50, iters=1000, trials=40)

    sub.add_parser("list", help="list functions and algorithms")

    hpo = sub.add_parser("hpo", help="network hyperparameter search")
    hpo.add_argument("--algo", default="gego")
    hpo.add_argument("--adapter", default="surrogate", help="surrogate or exec:<command>")
    hpo.add_argument("--timeout", type=float, default=600.0, help="seconds per external evaluation")
    _add_common(hpo, pop=10, iters=15, trials=10)
    return parser


def _experiment(args, functions: list[str], dims: Optional[int], data_dir) -> int:
    spec = ExperimentSpec(args.algo, functions, dims, args.pop, args.iters, args.trials,
                          args.seed, str(data_dir) if data_dir else None)
    for name in spec.functions:
        resolve_function(name, spec.dims, spec.data_dir)
    report = run_experiment(spec, workers=args.workers)
    fmt = args.format or (args.out.suffix.lstrip(".").lower() if args.out else "csv")
    if fmt not in ("csv", "json"):
        fmt = "csv"
    if args.out is not None:
        write_report(report, fmt, args.out)
    else:
        sys.stdout.write(report_csv(report) if fmt == "csv" else report_json(report))
    notes = dict.fromkeys((c.function, n) for c in report.cells for n in c.annotations)
    for function, note in notes:
        log.warning("%s: %s", function, note)
    if report.failed:
        for cell in report.failed:
            print(f"bench: {cell.function}/{cell.algorithm} failed: {cell.error}", file=sys.stderr)
        return 1
    return 0


def _list() -> int:
    print("functions:")
    for name in function_names():
        print(f"  {name}")
    print("algorithms:")
    for algo in Algorithm:
        print(f"  {algo.value}")
    return 0


def _hpo(args) -> int:
    import json

    from .hpo import run_hpo

    report = run_hpo(args.algo, args.adapter, args.pop, args.iters, args.trials, args.seed,
                     timeout=args.timeout)
    if args.out is not None:
        report.write(args.out)
    else:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    for note in report.annotations:
        log.warning("hpo: %s", note)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="bench: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _list()
        if args.command == "run":
            return _experiment(args, args.fn, args.dim, None)
        if args.command == "composite":
            return _experiment(args, [f"cf{k}" for k in args.cf], args.dim, args.data_dir)
        return _hpo(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
