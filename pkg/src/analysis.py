# src/analysis.py

"""
Paired comparison of plain and preference-driven runs.

For each seed the knee of the plain run's final front is checked against the
preference region of the preference run's final build: is it inside, and is it
dominated by, dominating, or incomparable to the preference run's solutions. Both
fronts are also cut down to that region and compared by hypervolume against a
reference point shared by the pair.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from metrics import Relation, classify_knee_relation, hypervolume, restrict_to_region
from preference import PreferenceRegion, find_knee
from run_artifacts import MANIFEST_FILE, RunRecord, front_objectives, load_run
from utilities import ArtifactError

logger = logging.getLogger(__name__)

REPORT_FORMAT = "apdi-analysis/1"
INSIDE = "In preference region"
OUTSIDE = "Outside p-region"
SUMMARY_ROWS = [
    (INSIDE, Relation.INCOMPARABLE),
    (INSIDE, Relation.DOMINATED),
    (INSIDE, Relation.DOMINATING),
    (OUTSIDE, Relation.INCOMPARABLE),
    (OUTSIDE, Relation.DOMINATED),
]


@dataclass
class PairAnalysis:
    seed: int
    di_knee: list[float]
    knee_in_region: bool
    relation: Relation
    ap_dominating_knee: int
    dominated_by_knee: int
    hv_ap: float
    hv_di: float

    @property
    def ap_not_worse(self) -> bool:
        return self.hv_ap >= self.hv_di

    def as_row(self) -> dict:
        return {
            "seed": self.seed,
            "di_knee": " ".join(repr(v) for v in self.di_knee),
            "knee_in_region": self.knee_in_region,
            "relation": self.relation.value,
            "ap_dominating_knee": self.ap_dominating_knee,
            "dominated_by_knee": self.dominated_by_knee,
            "hv_ap": self.hv_ap,
            "hv_di": self.hv_di,
            "ap_not_worse": self.ap_not_worse,
        }


@dataclass
class AnalysisReport:
    label: str
    pairs: list[PairAnalysis] = field(default_factory=list)

    def summary(self) -> list[tuple[str, str, int]]:
        """Counts in the five-row region x relation layout; an unexpected combination gets its own row."""
        counts: dict[tuple[str, Relation], int] = {row: 0 for row in SUMMARY_ROWS}
        for pair in self.pairs:
            key = (INSIDE if pair.knee_in_region else OUTSIDE, pair.relation)
            counts[key] = counts.get(key, 0) + 1
        return [(place, relation.value, count) for (place, relation), count in counts.items()]

    def pairs_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.as_row() for p in self.pairs])

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.summary(), columns=["region", "relation", self.label])


def expand_run_dirs(paths) -> list[Path]:
    """A directory holding a manifest is a run; otherwise its seed-* children are."""
    runs = []
    for path in map(Path, paths):
        if (path / MANIFEST_FILE).is_file():
            runs.append(path)
            continue
        children = sorted(p for p in path.glob("seed-*") if (p / MANIFEST_FILE).is_file())
        if not children:
            raise ArtifactError(f"{path}: neither a run directory nor a directory of seed runs")
        runs.extend(children)
    return runs


def pair_by_seed(di_runs: list[RunRecord], ap_runs: list[RunRecord]) -> list[tuple[RunRecord, RunRecord]]:
    def by_seed(records, side):
        table, duplicated = {}, []
        for record in records:
            seed = record.manifest.config.seed
            if seed in table:
                duplicated.append(f"{side} seed {seed} ({table[seed].directory}, {record.directory})")
            table[seed] = record
        return table, duplicated

    di, problems = by_seed(di_runs, "plain")
    ap, ap_problems = by_seed(ap_runs, "preference")
    problems += ap_problems
    problems += [f"seed {s} has no preference run" for s in sorted(set(di) - set(ap))]
    problems += [f"seed {s} has no plain run" for s in sorted(set(ap) - set(di))]
    problems += [
        f"{ap[s].directory} recorded no region build" for s in sorted(set(ap) & set(di)) if not ap[s].events
    ]
    if problems:
        raise ArtifactError("cannot pair runs: " + "; ".join(problems))
    if not di:
        raise ArtifactError("no runs to analyse")
    return [(di[s], ap[s]) for s in sorted(di)]


def final_region(record: RunRecord) -> PreferenceRegion:
    event = record.events[-1]
    knee = np.array(event.knee, dtype=float)
    return PreferenceRegion(knee, np.array(event.upper_bound, dtype=float), np.zeros_like(knee))


def analyze_pair(di: RunRecord, ap: RunRecord) -> PairAnalysis:
    di_front = front_objectives(di.front)
    ap_front = front_objectives(ap.front)
    if di_front.shape[0] == 0 or ap_front.shape[0] == 0:
        raise ArtifactError(f"empty front in {di.directory if di_front.shape[0] == 0 else ap.directory}")

    region = final_region(ap)
    knee = find_knee(di_front)
    comparison = classify_knee_relation(knee, ap_front, region)

    ap_inside = restrict_to_region(ap_front, region)
    di_inside = restrict_to_region(di_front, region)
    union = np.vstack([ap_inside, di_inside])
    if union.shape[0]:
        ref = union.max(axis=0)
        hv_ap, hv_di = hypervolume(ap_inside, ref), hypervolume(di_inside, ref)
    else:
        hv_ap = hv_di = 0.0

    return PairAnalysis(
        seed=di.manifest.config.seed,
        di_knee=knee.tolist(),
        knee_in_region=comparison.knee_in_region,
        relation=comparison.relation,
        ap_dominating_knee=comparison.dominated_by,
        dominated_by_knee=comparison.dominates,
        hv_ap=hv_ap,
        hv_di=hv_di,
    )


def analyze(di_paths, ap_paths, label: str | None = None) -> AnalysisReport:
    di_runs = [load_run(p) for p in expand_run_dirs(di_paths)]
    ap_runs = [load_run(p) for p in expand_run_dirs(ap_paths)]
    pairs = pair_by_seed(di_runs, ap_runs)
    if label is None:
        first_di, first_ap = pairs[0]
        label = f"{first_di.manifest.config.algorithm.value} vs {first_ap.manifest.config.algorithm.value}"
    report = AnalysisReport(label=label, pairs=[analyze_pair(di, ap) for di, ap in pairs])
    logger.info("Analysed %d seed pairs (%s)", len(report.pairs), label)
    return report


def write_report(report: AnalysisReport, out_dir) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, frame in (("pairs.csv", report.pairs_frame()), ("summary.csv", report.summary_frame())):
        path = out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(f"# {REPORT_FORMAT}\n")
            frame.to_csv(f, index=False, lineterminator="\n")
        written.append(path)
    return written[0], written[1]
