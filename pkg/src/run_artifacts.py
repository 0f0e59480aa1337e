# src/run_artifacts.py

"""
Run configuration and the three artifacts every run leaves behind:

  front.csv      final non-dominated solutions, objectives then a genome summary
  events.json    every preference-region build
  manifest.json  the fully resolved configuration plus run totals

Each file starts with (or carries) a format version; nothing time-dependent is written,
so rerunning a manifest reproduces its directory byte for byte.
"""

import enum
import hashlib
import logging
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import BaseModel, Field, PositiveInt, ValidationError, field_validator, model_validator

from benchmark_problems import PROBLEMS, get_problem
from moea_core import EvolutionConfig, Problem, RegionEvent, RegionScoring, RunResult, Variant, run
from utilities import ArtifactError, spawn_streams

logger = logging.getLogger(__name__)

FRONT_FORMAT = "apdi-front/1"
EVENTS_FORMAT = "apdi-events/1"
MANIFEST_FORMAT = "apdi-manifest/1"

FRONT_FILE = "front.csv"
EVENTS_FILE = "events.json"
MANIFEST_FILE = "manifest.json"

VFMSO_PREFIX = "vfmso:"
DEFAULT_POPULATION = 100
DEFAULT_BUDGETS = {"zdt": 22000, "dtlz": 120000, "vfmso": 1200000}


class Algorithm(str, enum.Enum):
    DI_1 = "di-1"
    DI_2 = "di-2"
    AP_DI_1 = "ap-di-1"
    AP_DI_2 = "ap-di-2"

    @property
    def preference_enabled(self) -> bool:
        return self.value.startswith("ap-")

    @property
    def variant(self) -> Variant:
        return Variant.DI_1 if self.value.endswith("1") else Variant.DI_2


def default_budget(problem: str) -> int:
    key = problem.lower()
    if key.startswith(VFMSO_PREFIX):
        return DEFAULT_BUDGETS["vfmso"]
    return DEFAULT_BUDGETS["zdt"] if key.startswith("zdt") else DEFAULT_BUDGETS["dtlz"]


class RunConfig(BaseModel):
    algorithm: Algorithm
    problem: str
    population_size: PositiveInt = DEFAULT_POPULATION
    budget: Optional[PositiveInt] = None
    learning_fraction: float = Field(0.5, gt=0.0, lt=1.0)
    region_updates: PositiveInt = 12
    epsilon_fraction: float = Field(0.05, ge=0.0)
    first_region_at: Optional[PositiveInt] = None
    region_interval: Optional[PositiveInt] = None
    region_scoring: RegionScoring = RegionScoring.WHOLE_FRONT
    seed: int = Field(0, ge=0, lt=2**64)
    # Not written to the manifest; a rerun chooses its own directory.
    output_dir: str = Field("runs", exclude=True)

    @field_validator("problem")
    @classmethod
    def _known_problem(cls, value: str) -> str:
        if value.lower().startswith(VFMSO_PREFIX):
            if not value[len(VFMSO_PREFIX):]:
                raise ValueError("vfmso problems need an instance file: vfmso:<path>")
            return VFMSO_PREFIX + value[len(VFMSO_PREFIX):]
        if value.lower() not in PROBLEMS:
            raise ValueError(
                f"unknown problem '{value}'; choose from {', '.join(sorted(PROBLEMS))} or vfmso:<path>"
            )
        return value.lower()

    @model_validator(mode="after")
    def _resolve_budget(self):
        if self.budget is None:
            self.budget = default_budget(self.problem)
        # Surfaces budget-split errors at configuration time.
        self.evolution_config()
        return self

    @property
    def instance_path(self) -> Optional[Path]:
        if self.problem.startswith(VFMSO_PREFIX):
            return Path(self.problem[len(VFMSO_PREFIX):])
        return None

    def evolution_config(self) -> EvolutionConfig:
        try:
            return EvolutionConfig(
                population_size=self.population_size,
                total_budget=self.budget,
                preference_enabled=self.algorithm.preference_enabled,
                learning_fraction=self.learning_fraction,
                region_updates=self.region_updates,
                variant=self.algorithm.variant,
                epsilon_fraction=self.epsilon_fraction,
                rng_seed=self.seed,
                first_region_at=self.first_region_at,
                region_interval=self.region_interval,
                region_scoring=self.region_scoring,
            )
        except ValidationError as e:
            raise ValueError(e.errors()[0]["msg"]) from None


class RunManifest(BaseModel):
    format_version: str = MANIFEST_FORMAT
    config: RunConfig
    problem_name: str
    evaluations: int
    region_builds: int
    front_size: int
    instance_sha256: Optional[str] = None


class EventLog(BaseModel):
    format_version: str = EVENTS_FORMAT
    events: list[RegionEvent]


def _file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def build_problem(config: RunConfig) -> Problem:
    """The problem a configuration names; VFMSO sample sets come from the seed's second stream."""
    path = config.instance_path
    if path is None:
        return get_problem(config.problem)

    # Imported here so benchmark-only runs never touch the scheduling package.
    from vfmso.instance import load_instance
    from vfmso.problem import VfmsoProblem

    instance = load_instance(path)
    return VfmsoProblem.seeded(instance, spawn_streams(config.seed)[1])


# --- Writers ---


def write_front(path: Path, result: RunResult, problem: Problem) -> int:
    members = result.population.non_dominated()
    columns = [f"f{m + 1}" for m in range(problem.n_obj)]
    frame = pd.DataFrame([m.objectives for m in members], columns=columns)
    frame["genome"] = [problem.describe_genome(m.genome) for m in members]
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# {FRONT_FORMAT}\n")
        frame.to_csv(f, index=False, lineterminator="\n")
    return len(members)


def write_events(path: Path, events: list[RegionEvent]) -> None:
    path.write_text(EventLog(events=events).model_dump_json(indent=2) + "\n", encoding="utf-8")


def write_manifest(path: Path, manifest: RunManifest) -> None:
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")


def save_run(run_dir: Path, config: RunConfig, result: RunResult, problem: Problem) -> RunManifest:
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    front_size = write_front(run_dir / FRONT_FILE, result, problem)
    write_events(run_dir / EVENTS_FILE, result.events)
    instance = config.instance_path
    manifest = RunManifest(
        config=config,
        problem_name=problem.name,
        evaluations=result.evaluations,
        region_builds=len(result.events),
        front_size=front_size,
        instance_sha256=_file_digest(instance) if instance is not None else None,
    )
    write_manifest(run_dir / MANIFEST_FILE, manifest)
    logger.info("Wrote %d solutions and %d region events to %s", front_size, len(result.events), run_dir)
    return manifest


# --- Readers ---


def read_front(path: Path) -> pd.DataFrame:
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if header != f"# {FRONT_FORMAT}":
            raise ArtifactError(f"{path}: expected header '# {FRONT_FORMAT}', found '{header}'")
        frame = pd.read_csv(f, float_precision="round_trip", keep_default_na=False)
    return frame


def front_objectives(frame: pd.DataFrame):
    columns = [c for c in frame.columns if c.startswith("f") and c[1:].isdigit()]
    return frame[columns].to_numpy(dtype=float)


def read_events(path: Path) -> list[RegionEvent]:
    try:
        log = EventLog.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ArtifactError(f"{path}: malformed event log ({e.error_count()} problems)") from None
    if log.format_version != EVENTS_FORMAT:
        raise ArtifactError(f"{path}: unsupported event log format '{log.format_version}'")
    return log.events


def read_manifest(path: Path) -> RunManifest:
    try:
        manifest = RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ArtifactError(f"{path}: malformed manifest ({e.error_count()} problems)") from None
    if manifest.format_version != MANIFEST_FORMAT:
        raise ArtifactError(f"{path}: unsupported manifest format '{manifest.format_version}'")
    return manifest


def verify_instance(manifest: RunManifest) -> None:
    """Raises ArtifactError when the instance file a manifest names is not the one it ran on."""
    path = manifest.config.instance_path
    if path is None or manifest.instance_sha256 is None:
        return
    if not path.is_file():
        raise ArtifactError(f"instance file {path} named by the manifest does not exist")
    digest = _file_digest(path)
    if digest != manifest.instance_sha256:
        raise ArtifactError(
            f"instance file {path} has changed since the run "
            f"(sha256 {digest[:12]}..., manifest records {manifest.instance_sha256[:12]}...)"
        )


def execute_run(config: RunConfig) -> RunManifest:
    """Builds, runs and saves one configuration; usable as a process-pool task."""
    problem = build_problem(config)
    result = run(problem, config.evolution_config())
    return save_run(Path(config.output_dir), config, result, problem)


class RunRecord(BaseModel):
    """A run directory loaded back from disk."""

    model_config = {"arbitrary_types_allowed": True}

    directory: Path
    manifest: RunManifest
    front: pd.DataFrame
    events: list[RegionEvent]


def load_run(run_dir) -> RunRecord:
    run_dir = Path(run_dir)
    missing = [name for name in (FRONT_FILE, EVENTS_FILE, MANIFEST_FILE) if not (run_dir / name).is_file()]
    if missing:
        raise ArtifactError(f"{run_dir}: missing {', '.join(missing)}")
    return RunRecord(
        directory=run_dir,
        manifest=read_manifest(run_dir / MANIFEST_FILE),
        front=read_front(run_dir / FRONT_FILE),
        events=read_events(run_dir / EVENTS_FILE),
    )
