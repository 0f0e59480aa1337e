import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from analysis import analyze, write_report
from moea_core import RegionScoring
from output_formatters import print_analysis, print_run_record, print_run_summary
from run_artifacts import Algorithm, RunConfig, execute_run, load_run, read_manifest, verify_instance
from utilities import ArtifactError, ContractViolation, configure_logging
from vfmso.instance import generate_instance, save_instance
from vfmso.settings import PRESETS

logger = logging.getLogger(__name__)

# Flags of `run` that map one-to-one onto RunConfig fields.
RUN_FIELDS = (
    "algorithm",
    "problem",
    "population_size",
    "budget",
    "learning_fraction",
    "region_updates",
    "epsilon_fraction",
    "first_region_at",
    "region_interval",
    "region_scoring",
    "seed",
)


def _run_configs(args) -> list[RunConfig]:
    if args.manifest:
        manifest_path = Path(args.manifest)
        manifest = read_manifest(manifest_path)
        verify_instance(manifest)
        base = manifest.config
        output = args.output_dir or str(manifest_path.parent)
        return [RunConfig.model_validate({**base.model_dump(), "output_dir": output})]

    if not args.algorithm or not args.problem:
        raise ContractViolation("run needs --algorithm and --problem (or --manifest)")
    values = {name: getattr(args, name) for name in RUN_FIELDS if getattr(args, name) is not None}
    output = Path(args.output_dir or "runs")
    if args.runs == 1:
        return [RunConfig(**values, output_dir=str(output))]
    seed = values.pop("seed", 0)
    return [
        RunConfig(**values, seed=s, output_dir=str(output / f"seed-{s}"))
        for s in range(seed, seed + args.runs)
    ]


def run_command(args):
    print("Starting run command...")
    configs = _run_configs(args)
    if args.workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=min(args.workers, len(configs))) as executor:
            manifests = list(executor.map(execute_run, configs))
    else:
        manifests = [execute_run(config) for config in configs]
    for config, manifest in zip(configs, manifests):
        print_run_summary(manifest, args.format, config.output_dir)
    print(f"Run command complete ({len(configs)} run{'s' if len(configs) != 1 else ''}).")


def generate_instance_command(args):
    print("Starting generate-instance command...")
    n_cars, n_workshops = args.cars, args.workshops
    if args.preset:
        preset = PRESETS[args.preset]
        n_cars = n_cars or preset["n_cars"]
        n_workshops = n_workshops or preset["n_workshops"]
    if not n_cars or not n_workshops:
        raise ContractViolation("give --cars and --workshops, or a --preset")

    name = args.name or Path(args.out).stem
    instance = generate_instance(n_cars, n_workshops, np.random.default_rng(args.seed), name=name)
    path = save_instance(instance, args.out)
    print(
        f"Wrote instance '{instance.name}' ({len(instance.cars)} cars, "
        f"{len(instance.workshops)} workshops, {instance.component_count} components) to {path}"
    )


def analyze_command(args):
    print("Starting analyze command...")
    report = analyze(args.di, args.ap, label=args.label)
    print_analysis(report, args.format)
    if args.out:
        pairs_path, summary_path = write_report(report, args.out)
        print(f"Wrote {pairs_path} and {summary_path}")


def show_command(args):
    record = load_run(Path(args.run_dir))
    print_run_record(record, args.format)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a whole number, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Preference-guided multi-objective evolution: runs, instances and analysis"
    )
    parser.add_argument(
        "--log-level",
        default=None,
        help="Logging level (overrides APDI_LOG_LEVEL; default INFO).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Define commands
    parsers = {
        "run": subparsers.add_parser("run", help="Run one algorithm on one problem and save its artifacts."),
        "generate-instance": subparsers.add_parser(
            "generate-instance", help="Generate a synthetic fleet maintenance instance."
        ),
        "analyze": subparsers.add_parser(
            "analyze", help="Compare paired plain and preference runs seed by seed."
        ),
        "show": subparsers.add_parser("show", help="Summarise a saved run directory."),
    }

    # Add arguments
    run_parser = parsers["run"]
    run_parser.add_argument("--algorithm", choices=[a.value for a in Algorithm])
    run_parser.add_argument("--problem", help="zdt1, zdt2, dtlz1, dtlz2 or vfmso:<instance file>.")
    run_parser.add_argument("--population-size", type=int, default=None)
    run_parser.add_argument(
        "--budget", type=int, default=None,
        help="Evaluations (default 22000 ZDT, 120000 DTLZ, 1200000 VFMSO).",
    )
    run_parser.add_argument("--learning-fraction", type=float, default=None)
    run_parser.add_argument("--region-updates", type=int, default=None)
    run_parser.add_argument("--epsilon-fraction", type=float, default=None)
    run_parser.add_argument(
        "--first-region-at", type=int, default=None, help="Evaluation count of the first region build."
    )
    run_parser.add_argument(
        "--region-interval", type=int, default=None, help="Evaluations between region builds."
    )
    run_parser.add_argument(
        "--region-scoring",
        choices=[s.value for s in RegionScoring],
        default=None,
        help="How a region changes the second criterion (default whole-front).",
    )
    run_parser.add_argument("--seed", type=int, default=None)
    run_parser.add_argument(
        "--runs", type=_positive_int, default=1, help="Number of consecutive seeds to run."
    )
    run_parser.add_argument(
        "--workers", type=_positive_int, default=1, help="Processes running seeds in parallel (default 1)."
    )
    run_parser.add_argument("--output-dir", "-o", default=None, help="Run directory (default ./runs).")
    run_parser.add_argument("--manifest", default=None, help="Re-run the configuration of a saved manifest.")

    instance_parser = parsers["generate-instance"]
    instance_parser.add_argument("--cars", type=int, default=None)
    instance_parser.add_argument("--workshops", type=int, default=None)
    instance_parser.add_argument("--preset", choices=sorted(PRESETS), default=None)
    instance_parser.add_argument("--seed", type=int, default=0)
    instance_parser.add_argument("--name", default=None)
    instance_parser.add_argument("--out", required=True, help="Instance file to write (JSON).")

    analyze_parser = parsers["analyze"]
    analyze_parser.add_argument("--di", nargs="+", required=True, help="Plain runs, or directories of seed runs.")
    analyze_parser.add_argument("--ap", nargs="+", required=True, help="Preference runs, or directories of seed runs.")
    analyze_parser.add_argument("--label", default=None, help="Column label of the summary table.")
    analyze_parser.add_argument("--out", default=None, help="Directory for pairs.csv and summary.csv.")

    parsers["show"].add_argument("run_dir", help="A directory written by the run command.")

    for name in ("run", "analyze", "show"):
        parsers[name].add_argument(
            "--format",
            choices=["pretty", "json", "table"],
            default="pretty",
            help="The output format for the results.",
        )

    # Set default functions
    func_map = {
        "run": run_command,
        "generate-instance": generate_instance_command,
        "analyze": analyze_command,
        "show": show_command,
    }
    for cmd, sub_parser in parsers.items():
        sub_parser.set_defaults(func=func_map[cmd])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        args.func(args)
    except (ContractViolation, ArtifactError, ValidationError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
