# src/output_formatters.py

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from analysis import AnalysisReport
from run_artifacts import RunManifest, RunRecord, front_objectives

console = Console()


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    return str(value)


def print_json(data) -> None:
    console.print_json(data=data)


def print_table(title: str, columns: list[str], rows: list[list]) -> None:
    table = Table(title=title, show_lines=False)
    for column in columns:
        table.add_column(column, overflow="fold")
    for row in rows:
        table.add_row(*(_fmt(v) for v in row))
    console.print(table)


def print_pretty(title: str, fields: dict) -> None:
    width = max((len(k) for k in fields), default=0)
    body = "\n".join(f"[bold]{k:<{width}}[/bold]  {_fmt(v)}" for k, v in fields.items())
    console.print(Panel(body, title=title, expand=False))


# --- Run summaries ---


def _manifest_fields(manifest: RunManifest) -> dict:
    config = manifest.config
    return {
        "algorithm": config.algorithm.value,
        "problem": manifest.problem_name,
        "seed": config.seed,
        "population": config.population_size,
        "budget": config.budget,
        "evaluations": manifest.evaluations,
        "region builds": manifest.region_builds,
        "front size": manifest.front_size,
    }


def print_run_summary(manifest: RunManifest, output_format: str = "pretty", directory=None) -> None:
    fields = _manifest_fields(manifest)
    if output_format == "json":
        print_json(manifest.model_dump(mode="json"))
    elif output_format == "table":
        print_table("Run", list(fields), [list(fields.values())])
    else:
        print_pretty(f"Run {directory}" if directory is not None else "Run", fields)


def print_run_record(record: RunRecord, output_format: str = "pretty") -> None:
    if output_format == "json":
        print_json(
            {
                "manifest": record.manifest.model_dump(mode="json"),
                "events": [e.model_dump(mode="json") for e in record.events],
                "front": front_objectives(record.front).tolist(),
            }
        )
        return

    print_run_summary(record.manifest, "pretty" if output_format == "pretty" else "table", record.directory)
    if record.events:
        print_table(
            "Preference region builds",
            ["#", "evaluations", "shape", "convex", "concave", "front", "knee", "upper bound"],
            [
                [n + 1, e.evaluations, e.shape, e.num_convex, e.num_concave, e.front_size, e.knee, e.upper_bound]
                for n, e in enumerate(record.events)
            ],
        )
    else:
        console.print("No preference region was built in this run.")

    F = front_objectives(record.front)
    if F.size:
        columns = [c for c in record.front.columns if c != "genome"]
        print_table(
            f"Final front ({F.shape[0]} solutions)",
            ["objective", "min", "max"],
            [[name, float(F[:, m].min()), float(F[:, m].max())] for m, name in enumerate(columns)],
        )


# --- Analysis ---


def print_analysis(report: AnalysisReport, output_format: str = "pretty") -> None:
    if output_format == "json":
        print_json(
            {
                "label": report.label,
                "pairs": [p.as_row() for p in report.pairs],
                "summary": [
                    {"region": place, "relation": relation, "count": count}
                    for place, relation, count in report.summary()
                ],
            }
        )
        return

    frame = report.pairs_frame()
    print_table(
        f"Knee relations: {report.label}",
        list(frame.columns),
        frame.values.tolist(),
    )
    print_table(
        "Summary",
        ["", "relation", report.label],
        [list(row) for row in report.summary()],
    )
    if output_format == "pretty":
        better = sum(p.ap_not_worse for p in report.pairs)
        print_pretty(
            "Restricted-region hypervolume",
            {"pairs": len(report.pairs), "preference run not worse": better},
        )
