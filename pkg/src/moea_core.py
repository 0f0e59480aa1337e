# src/moea_core.py

"""
Diversity-indicator based multi-objective evolution with an optional automatic
preference region.

The engine alternates two survivor-selection schemes:
  * (mu + mu) generational selection while the population still spans several
    dominance ranks, ranking the last admitted front by crowding distance (DI-1)
    or by diversity contribution (DI-2);
  * (mu + 1) steady-state selection once every member is non-dominated, always
    ranking by diversity contribution.

With preference enabled, the first half of the budget (the learning phase) runs
exactly like the plain algorithm. From then on a knee-centred region is rebuilt on a
fixed evaluation schedule and the distance to its knee becomes the third ranking key:
the last admitted front is ordered by second criterion, ties broken by knee distance.
RegionScoring.IN_REGION instead spreads only the in-region members and orders the rest
by knee distance alone.
"""

import enum
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from preference import (
    PreferenceRegion,
    compute_preference_region,
    first_enum_p,
    knee_distances,
    locate_knee,
    update_enum_p,
)
from ranking_utils import crowding_distance, diversity_contribution, fast_nondominated_sort
from utilities import ContractViolation, spawn_streams

logger = logging.getLogger(__name__)


class Problem(ABC):
    """A minimisation problem together with the variation operators suited to its genome."""

    name: str = "problem"
    n_obj: int = 2

    @abstractmethod
    def random_genome(self, rng: np.random.Generator) -> Any: ...

    @abstractmethod
    def evaluate(self, genome) -> np.ndarray: ...

    @abstractmethod
    def crossover(self, a, b, rng: np.random.Generator) -> tuple[Any, Any]: ...

    @abstractmethod
    def mutate(self, genome, rng: np.random.Generator) -> Any: ...

    def describe_genome(self, genome) -> str:
        return str(genome)


class Variant(str, enum.Enum):
    DI_1 = "DI-1"
    DI_2 = "DI-2"


class RegionScoring(str, enum.Enum):
    """How the second criterion is computed on a front while a region is active."""

    # Criterion over the whole front; the knee distance only breaks its ties.
    WHOLE_FRONT = "whole-front"
    # Criterion over the in-region members only; the rest score -inf and are
    # ordered by knee distance.
    IN_REGION = "in-region"


class EvolutionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    population_size: PositiveInt = 100
    total_budget: PositiveInt
    preference_enabled: bool = False
    learning_fraction: float = Field(0.5, gt=0.0, lt=1.0)
    region_updates: PositiveInt = 12
    variant: Variant = Variant.DI_1
    region_scoring: RegionScoring = RegionScoring.WHOLE_FRONT
    epsilon_fraction: float = Field(0.05, ge=0.0)
    rng_seed: int = Field(0, ge=0, lt=2**64)
    # Overrides for the region schedule; None means "derive from the budget".
    first_region_at: Optional[PositiveInt] = None
    region_interval: Optional[PositiveInt] = None

    @model_validator(mode="after")
    def _check_budget_split(self):
        if self.learning_fraction * self.total_budget < self.population_size:
            raise ValueError(
                "learning_fraction * total_budget must cover at least one population "
                f"({self.learning_fraction} * {self.total_budget} < {self.population_size})"
            )
        if self.first_region_at is not None and self.first_region_at < self.population_size:
            raise ValueError("first_region_at must not precede the initial population")
        if self.first_region_at is not None and self.first_region_at >= self.total_budget:
            raise ValueError(
                f"first_region_at ({self.first_region_at}) must fall before the end of the budget "
                f"({self.total_budget})"
            )
        return self


class RegionEvent(BaseModel):
    """One preference-region build, as recorded in the run's event log."""

    evaluations: int
    knee: list[float]
    upper_bound: list[float]
    shape: str
    num_convex: int
    num_concave: int
    front_size: int


@dataclass
class Individual:
    genome: Any
    objectives: np.ndarray
    rank: int = 0
    secondary_score: float = float("nan")
    knee_distance: float = float("inf")


@dataclass
class Population:
    members: list[Individual]
    capacity: int

    def __len__(self) -> int:
        return len(self.members)

    def objective_matrix(self) -> np.ndarray:
        return np.array([m.objectives for m in self.members], dtype=float)

    def is_layered(self) -> bool:
        """True when more than one dominance rank is present (ranks must be current)."""
        return any(m.rank > 0 for m in self.members)

    def non_dominated(self) -> list[Individual]:
        return [m for m in self.members if m.rank == 0]


@dataclass
class EvaluationCounter:
    total: int
    spent: int = 0

    @property
    def exhausted(self) -> bool:
        return self.spent >= self.total


@dataclass
class RunResult:
    population: Population
    events: list[RegionEvent] = field(default_factory=list)
    evaluations: int = 0


Criterion = Callable[[np.ndarray], np.ndarray]


def evaluate_genome(problem: Problem, genome, budget: EvaluationCounter) -> Individual:
    objectives = np.asarray(problem.evaluate(genome), dtype=float)
    budget.spent += 1
    if objectives.shape != (problem.n_obj,) or not np.all(np.isfinite(objectives)):
        raise ContractViolation(f"{problem.name} returned invalid objectives {objectives}")
    return Individual(genome=genome, objectives=objectives)


def _front_scores(
    F: np.ndarray,
    criterion: Criterion,
    region: Optional[PreferenceRegion],
    scoring: RegionScoring = RegionScoring.WHOLE_FRONT,
) -> np.ndarray:
    if region is None or scoring is RegionScoring.WHOLE_FRONT:
        return criterion(F)
    scores = np.full(F.shape[0], -np.inf)
    inside = region.contains(F)
    if inside.any():
        scores[inside] = criterion(F[inside])
    return scores


def _score_front(
    members: list[Individual],
    F: np.ndarray,
    front: list[int],
    criterion: Criterion,
    region: Optional[PreferenceRegion],
    scoring: RegionScoring,
) -> None:
    scores = _front_scores(F[front], criterion, region, scoring)
    distances = knee_distances(F[front], region) if region is not None else np.full(len(front), np.inf)
    for position, index in enumerate(front):
        members[index].secondary_score = float(scores[position])
        members[index].knee_distance = float(distances[position])


def _assign_ranks(members: list[Individual], F: np.ndarray) -> list[list[int]]:
    fronts = fast_nondominated_sort(F)
    for rank, front in enumerate(fronts):
        for index in front:
            members[index].rank = rank
    return fronts


def score_members(
    members: list[Individual],
    criterion: Criterion,
    region: Optional[PreferenceRegion] = None,
    scoring: RegionScoring = RegionScoring.WHOLE_FRONT,
) -> list[list[int]]:
    """Refreshes rank, secondary score and knee distance of every member; returns the fronts."""
    if not members:
        return []
    F = np.array([m.objectives for m in members], dtype=float)
    fronts = _assign_ranks(members, F)
    for front in fronts:
        _score_front(members, F, front, criterion, region, scoring)
    return fronts


def truncate(
    members: list[Individual],
    keep: int,
    criterion: Criterion,
    region: Optional[PreferenceRegion] = None,
    scoring: RegionScoring = RegionScoring.WHOLE_FRONT,
) -> list[Individual]:
    """
    Keeps `keep` members: whole fronts first, then the last partially admitted front
    ordered by second criterion (descending) and, with a region, knee distance (ascending).

    Every member gets a fresh rank; only the split front is scored.
    """
    if not members:
        return []
    F = np.array([m.objectives for m in members], dtype=float)
    fronts = _assign_ranks(members, F)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= keep:
            chosen.extend(front)
            if len(chosen) == keep:
                break
            continue
        _score_front(members, F, front, criterion, region, scoring)
        slots = keep - len(chosen)
        ordered = sorted(
            front,
            key=lambda i: (
                -members[i].secondary_score,
                members[i].knee_distance if region is not None else 0.0,
                i,
            ),
        )
        chosen.extend(ordered[:slots])
        break
    return [members[i] for i in sorted(chosen)]


def _second_criterion(variant: Variant) -> Criterion:
    return crowding_distance if variant is Variant.DI_1 else diversity_contribution


def _pick_parents(pop: Population, rng: np.random.Generator) -> tuple[Individual, Individual]:
    size = len(pop.members)
    first, second = rng.choice(size, size=2, replace=size < 2)
    return pop.members[first], pop.members[second]


def generational_step(
    pop: Population,
    problem: Problem,
    config: EvolutionConfig,
    region: Optional[PreferenceRegion] = None,
    *,
    rng: np.random.Generator,
    budget: EvaluationCounter,
) -> Population:
    """(mu + mu) step: mu offspring (fewer if the budget runs out), then truncation to mu."""
    offspring: list[Individual] = []
    while len(offspring) < pop.capacity and not budget.exhausted:
        a, b = _pick_parents(pop, rng)
        children = problem.crossover(a.genome, b.genome, rng)
        for child in children:
            if len(offspring) == pop.capacity or budget.exhausted:
                break
            offspring.append(evaluate_genome(problem, problem.mutate(child, rng), budget))

    merged = pop.members + offspring
    criterion = _second_criterion(config.variant)
    kept = truncate(merged, pop.capacity, criterion, region, config.region_scoring)
    return Population(kept, pop.capacity)


def steady_state_step(
    pop: Population,
    problem: Problem,
    config: EvolutionConfig,
    region: Optional[PreferenceRegion] = None,
    *,
    rng: np.random.Generator,
    budget: EvaluationCounter,
) -> Population:
    """(mu + 1) step; the diversity contribution is the second criterion for both variants."""
    if budget.exhausted:
        return pop
    a, b = _pick_parents(pop, rng)
    child, _ = problem.crossover(a.genome, b.genome, rng)
    offspring = evaluate_genome(problem, problem.mutate(child, rng), budget)
    kept = truncate(
        pop.members + [offspring], pop.capacity, diversity_contribution, region, config.region_scoring
    )
    return Population(kept, pop.capacity)


def build_region(
    pop: Population, config: EvolutionConfig, evaluations: int
) -> tuple[PreferenceRegion, RegionEvent]:
    F = pop.objective_matrix()
    front = F[fast_nondominated_sort(F)[0]]
    report = locate_knee(front, epsilon_fraction=config.epsilon_fraction)
    region = compute_preference_region(report.knee, report.bounds.worst)
    event = RegionEvent(
        evaluations=evaluations,
        knee=region.knee.tolist(),
        upper_bound=region.upper_bound.tolist(),
        shape=report.verdict.shape.value,
        num_convex=report.verdict.num_convex,
        num_concave=report.verdict.num_concave,
        front_size=int(front.shape[0]),
    )
    return region, event


def run(
    problem: Problem,
    config: EvolutionConfig,
    observer: Optional[Callable[[RegionEvent], None]] = None,
) -> RunResult:
    """Runs one seeded optimisation until the evaluation budget is spent."""
    rng = spawn_streams(config.rng_seed)[0]
    budget = EvaluationCounter(config.total_budget)
    mu = config.population_size
    criterion = _second_criterion(config.variant)

    members = [
        evaluate_genome(problem, problem.random_genome(rng), budget)
        for _ in range(min(mu, config.total_budget))
    ]
    score_members(members, criterion)
    pop = Population(members, mu)
    logger.info(
        "Starting %s%s on %s: mu=%d, budget=%d, seed=%d",
        "AP-" if config.preference_enabled else "",
        config.variant.value,
        problem.name,
        mu,
        config.total_budget,
        config.rng_seed,
    )

    region: Optional[PreferenceRegion] = None
    events: list[RegionEvent] = []
    threshold = first_enum_p(config) if config.preference_enabled else None
    steady = False

    while not budget.exhausted:
        if threshold is not None and budget.spent >= threshold:
            region, event = build_region(pop, config, budget.spent)
            events.append(event)
            logger.info(
                "Region %d at %d evaluations: knee=%s, shape=%s",
                len(events), budget.spent, np.round(region.knee, 6).tolist(), event.shape,
            )
            if observer is not None:
                observer(event)
            threshold = update_enum_p(threshold, config)

        if pop.is_layered():
            if steady:
                logger.debug("Back to generational selection at %d evaluations", budget.spent)
                steady = False
            pop = generational_step(pop, problem, config, region, rng=rng, budget=budget)
        else:
            if not steady:
                logger.debug("Steady-state selection from %d evaluations", budget.spent)
                steady = True
            pop = steady_state_step(pop, problem, config, region, rng=rng, budget=budget)

    score_members(pop.members, criterion, region, config.region_scoring)
    logger.info("Finished after %d evaluations with %d region builds", budget.spent, len(events))
    return RunResult(population=pop, events=events, evaluations=budget.spent)
