"""
gcn-lab command line

    gcn-lab validate  --data DIR
    gcn-lab cc        --data DIR --out FILE
    gcn-lab train     --data DIR (--preset NAME | --config FILE) [--seed N] [--out FILE]
    gcn-lab sweep     --data DIR --grid FILE --out DIR [--jobs N]
    gcn-lab replicate --data DIR --preset NAME --seeds N --out DIR [--jobs N]
    gcn-lab table     --runs DIR --format csv|text --out FILE

Exit codes: 0 success, 1 failure, 2 usage or configuration error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .. import __version__
from ..errors import ConfigurationError, GcnLabError
from ..experiments import (
    TEMPLATES,
    emit_grid_table,
    emit_table,
    get_preset,
    load_grid,
    load_run_reports,
    replicate,
    run_grid,
)
from ..graphio import compute_stats, load_dataset
from ..graphio.stats import REFERENCE_STATS, compare_with_reference, reference_key
from ..topology import local_clustering_coefficients
from ..training import TrainingEventManager, load_run_config, progress_logger, train

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class UsageError(Exception):
    """Bad command-line usage; exits with code 2"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _non_negative(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gcn-lab", description="GCN and ConfGCN experiment toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    commands.required = True

    validate = commands.add_parser("validate", help="load a dataset and print its statistics")
    validate.add_argument("--data", required=True, type=Path)

    cc = commands.add_parser("cc", help="write local clustering coefficients")
    cc.add_argument("--data", required=True, type=Path)
    cc.add_argument("--out", required=True, type=Path)

    train_cmd = commands.add_parser("train", help="train one model")
    train_cmd.add_argument("--data", required=True, type=Path)
    source = train_cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset")
    source.add_argument("--config", type=Path)
    train_cmd.add_argument("--seed", type=_non_negative, default=None)
    train_cmd.add_argument("--out", type=Path, help="report file (stdout when omitted)")

    sweep = commands.add_parser("sweep", help="grid search over activation, width and loss")
    sweep.add_argument("--data", required=True, type=Path)
    sweep.add_argument("--grid", required=True, type=Path)
    sweep.add_argument("--out", required=True, type=Path)
    sweep.add_argument("--jobs", type=_positive, default=None)

    rep = commands.add_parser("replicate", help="train a preset over seeds 0..N-1")
    rep.add_argument("--data", required=True, type=Path)
    rep.add_argument("--preset", required=True)
    rep.add_argument("--seeds", required=True, type=int)
    rep.add_argument("--out", required=True, type=Path)
    rep.add_argument("--jobs", type=_positive, default=None)

    table = commands.add_parser("table", help="aggregate a runs directory into a table")
    table.add_argument("--runs", required=True, type=Path)
    table.add_argument("--format", choices=["csv", "text"], default="csv")
    table.add_argument("--out", required=True, type=Path)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


# Commands


def cmd_validate(args) -> int:
    dataset = load_dataset(args.data)
    stats = compute_stats(dataset)
    reference = REFERENCE_STATS.get(reference_key(stats.name))
    deviations = compare_with_reference(stats, reference)
    sys.stdout.write(
        TEMPLATES.render("dataset_stats", stats=stats, reference=reference, deviations=deviations)
    )
    return EXIT_OK


def cmd_cc(args) -> int:
    dataset = load_dataset(args.data)
    cc = local_clustering_coefficients(dataset.adjacency)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as handle:
        for node, value in enumerate(cc):
            handle.write(f"{node} {float(value)!r}\n")
    logger.info(f"Wrote {len(cc)} clustering coefficients to {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    if args.preset:
        preset = get_preset(args.preset)
        model, label = preset.model, preset.name
        tcfg = preset.train_config(args.seed or 0)
    else:
        run_config = load_run_config(args.config)
        model, label = run_config.model, None
        tcfg = run_config.train
        if args.seed is not None:
            tcfg = tcfg.model_copy(update={"seed": args.seed})
    dataset = load_dataset(args.data)

    events = TrainingEventManager()
    events.register_handler("*", progress_logger(every=10, log=logger))
    report = train(model, tcfg, dataset, events=events, preset=label)
    if args.out:
        report.write(args.out)
        logger.info(f"Wrote report {args.out}")
    else:
        sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = load_grid(args.grid)
    base = get_preset(grid.base_preset)
    dataset = load_dataset(args.data)
    cells = run_grid(
        grid,
        base.model,
        dataset,
        jobs=args.jobs,
        runs_dir=args.out / "runs",
        base_train=base.train_config(),
        label=base.name,
    )
    name = f"sweep_{base.name}_{dataset.name}"
    emit_grid_table(cells, "csv", args.out / "tables" / f"{name}.csv")
    title = f"Sweep of {base.name} on {dataset.name}"
    sys.stdout.write(emit_grid_table(cells, "text", title=title))
    failed = sum(cell.status == "failed" for cell in cells)
    if failed:
        logger.warning(f"{failed} of {len(cells)} cell(s) failed")
    return EXIT_OK


def cmd_replicate(args) -> int:
    if args.seeds < 2:
        raise UsageError(f"--seeds must be at least 2, got {args.seeds}")
    preset = get_preset(args.preset)
    dataset = load_dataset(args.data)
    result = replicate(preset.name, dataset, args.seeds, jobs=args.jobs,
                       runs_dir=args.out / "runs")
    name = f"{preset.name}_{dataset.name}"
    emit_table([result], "csv", args.out / "tables" / f"{name}.csv")
    sys.stdout.write(emit_table([result], "text"))
    return EXIT_OK


def cmd_table(args) -> int:
    results = load_run_reports(args.runs)
    if not results:
        logger.error(f"No aggregatable runs under {args.runs}")
        return EXIT_FAILURE
    emit_table(results, args.format, args.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "cc": cmd_cc,
    "train": cmd_train,
    "sweep": cmd_sweep,
    "replicate": cmd_replicate,
    "table": cmd_table,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(e, file=sys.stderr)
        return EXIT_USAGE

    configure_logging(args.verbose, args.quiet)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as e:
        print(f"gcn-lab {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GcnLabError, FileNotFoundError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
