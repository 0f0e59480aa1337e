import numpy as np
import pytest
from pydantic import ValidationError

from benchmark_problems import get_problem
from moea_core import (
    EvaluationCounter,
    EvolutionConfig,
    Individual,
    Population,
    Problem,
    RegionScoring,
    Variant,
    evaluate_genome,
    generational_step,
    run,
    score_members,
    steady_state_step,
    truncate,
)
from preference import compute_preference_region, knee_distances
from ranking_utils import crowding_distance, diversity_contribution, dominates, fast_nondominated_sort


class ScriptedProblem(Problem):
    """Genomes are objective vectors; offspring come from a queue of scripted vectors."""

    name = "scripted"
    n_obj = 2

    def __init__(self, offspring):
        self.offspring = [np.asarray(o, dtype=float) for o in offspring]

    def random_genome(self, rng):
        return rng.random(2)

    def evaluate(self, genome):
        return np.asarray(genome, dtype=float)

    def crossover(self, a, b, rng):
        return a, b

    def mutate(self, genome, rng):
        return self.offspring.pop(0) if self.offspring else genome


def _members(points):
    return [Individual(genome=np.asarray(p, float), objectives=np.asarray(p, float)) for p in points]


def _population(points, capacity=None):
    members = _members(points)
    score_members(members, diversity_contribution)
    return Population(members, capacity or len(members))


def _objectives(pop):
    return sorted(tuple(m.objectives.tolist()) for m in pop.members)


# --- configuration ---


def test_config_rejects_learning_phase_shorter_than_population():
    with pytest.raises(ValidationError):
        EvolutionConfig(total_budget=150, population_size=100)
    with pytest.raises(ValidationError):
        EvolutionConfig(total_budget=1000, learning_fraction=1.0)
    with pytest.raises(ValidationError):
        EvolutionConfig(total_budget=1000, region_updates=0)


@pytest.mark.parametrize("first_region_at", [50, 1000, 1500])
def test_config_rejects_region_start_outside_the_run(first_region_at):
    with pytest.raises(ValidationError, match="first_region_at"):
        EvolutionConfig(total_budget=1000, first_region_at=first_region_at)


def test_config_defaults():
    config = EvolutionConfig(total_budget=22_000)
    assert (config.population_size, config.learning_fraction, config.region_updates) == (100, 0.5, 12)
    assert config.variant is Variant.DI_1
    assert config.region_scoring is RegionScoring.WHOLE_FRONT
    assert not config.preference_enabled


# --- truncation ---


def test_truncation_fills_by_rank_first():
    members = _members([(3, 3), (1, 2), (2, 1), (4, 4), (2, 2.5)])
    kept = truncate(members, 3, crowding_distance)
    ranks = sorted(m.rank for m in kept)
    assert ranks == [0, 0, 1]
    removed_ranks = [m.rank for m in members if all(m is not k for k in kept)]
    assert min(removed_ranks) >= max(ranks)


def test_truncation_without_region_keeps_highest_criterion():
    points = np.column_stack([np.linspace(0, 1, 16), 1 - np.linspace(0, 1, 16) ** 0.5])
    members = _members(points)
    kept = truncate(members, 8, diversity_contribution)
    scores = diversity_contribution(points)
    expected = sorted(sorted(range(16), key=lambda i: (-scores[i], i))[:8])
    assert [int(np.flatnonzero((points == m.objectives).all(axis=1))[0]) for m in kept] == expected


@pytest.mark.parametrize("scoring", list(RegionScoring))
def test_truncation_with_region_matches_total_order(scoring):
    rng = np.random.default_rng(21)
    t = np.sort(rng.random(16))
    points = np.column_stack([t, 1 - t])
    region = compute_preference_region((0.5, 0.5), (1.0, 1.0))
    members = _members(points)
    kept = truncate(members, 8, crowding_distance, region, scoring)

    if scoring is RegionScoring.WHOLE_FRONT:
        scores = crowding_distance(points)
    else:
        inside = np.all(points <= region.upper_bound, axis=1)
        scores = np.full(16, -np.inf)
        scores[inside] = crowding_distance(points[inside])
    distances = knee_distances(points, region)
    order = sorted(range(16), key=lambda i: (-scores[i], distances[i], i))
    assert [m.objectives.tolist() for m in kept] == [points[i].tolist() for i in sorted(order[:8])]


def test_region_keeps_the_spread_of_the_whole_front():
    points = [(0.0, 1.0), (0.2, 0.8), (0.4, 0.6), (0.7, 0.3), (1.0, 0.0)]
    region = compute_preference_region((0.4, 0.6), (1.0, 1.0))
    kept = truncate(_members(points), 3, crowding_distance, region)
    assert [m.objectives.tolist() for m in kept] == [[0.0, 1.0], [0.7, 0.3], [1.0, 0.0]]


def test_knee_distance_breaks_criterion_ties():
    # both extremes score +inf; without a region the lower index wins
    points = [(1.0, 0.0), (0.7, 0.3), (0.4, 0.6), (0.2, 0.8), (0.0, 1.0)]
    region = compute_preference_region((0.4, 0.6), (1.0, 1.0))
    assert [m.objectives.tolist() for m in truncate(_members(points), 1, crowding_distance)] == [[1.0, 0.0]]
    kept = truncate(_members(points), 1, crowding_distance, region)
    assert [m.objectives.tolist() for m in kept] == [[0.0, 1.0]]


def test_in_region_scoring_orders_outsiders_by_knee_distance():
    # only the knee is inside; everything else ties at -inf and knee distance decides
    points = [(0.0, 1.0), (0.2, 0.8), (0.4, 0.6), (0.7, 0.3), (1.0, 0.0)]
    region = compute_preference_region((0.4, 0.6), (0.4, 0.6))
    kept = truncate(_members(points), 2, crowding_distance, region, RegionScoring.IN_REGION)
    assert [m.objectives.tolist() for m in kept] == [[0.2, 0.8], [0.4, 0.6]]


def test_only_the_split_front_is_scored():
    members = _members([(0.0, 1.0), (1.0, 0.0), (2.0, 2.0), (3.0, 2.5), (2.5, 3.0)])
    kept = truncate(members, 4, crowding_distance)
    assert len(kept) == 4
    assert all(np.isnan(m.secondary_score) for m in members[:3])
    assert all(m.secondary_score == np.inf for m in members[3:])
    assert [m.rank for m in members] == [0, 0, 1, 2, 2]


# --- selection steps ---


def test_generational_step_keeps_parents_over_dominated_offspring(rng):
    parents = [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0), (2.0, 2.0)]
    pop = _population(parents)
    problem = ScriptedProblem([(5.0, 5.0)] * 4)
    budget = EvaluationCounter(100)
    config = EvolutionConfig(total_budget=100, population_size=4)
    new = generational_step(pop, problem, config, rng=rng, budget=budget)
    assert _objectives(new) == sorted(parents)
    assert budget.spent == 4


def test_generational_step_stops_at_budget(rng):
    pop = _population([(0.0, 1.0), (1.0, 0.0), (2.0, 2.0), (3.0, 3.0)])
    problem = ScriptedProblem([(0.5, 0.5)] * 4)
    budget = EvaluationCounter(total=3)
    config = EvolutionConfig(total_budget=100, population_size=4)
    new = generational_step(pop, problem, config, rng=rng, budget=budget)
    assert budget.spent == 3
    assert len(new) == 4


def test_steady_state_discards_dominated_offspring(rng):
    parents = [(0.0, 1.0), (0.3, 0.5), (0.6, 0.2), (1.0, 0.0)]
    pop = _population(parents)
    budget = EvaluationCounter(10)
    config = EvolutionConfig(total_budget=100, population_size=4)
    new = steady_state_step(pop, ScriptedProblem([(2.0, 2.0)]), config, rng=rng, budget=budget)
    assert _objectives(new) == sorted(parents)
    assert budget.spent == 1


def test_steady_state_removes_one_of_a_duplicate_pair(rng):
    parents = [(0.0, 1.0), (0.3, 0.5), (0.6, 0.2), (1.0, 0.0)]
    pop = _population(parents)
    config = EvolutionConfig(total_budget=100, population_size=4)
    new = steady_state_step(
        pop, ScriptedProblem([(0.3, 0.5)]), config, rng=rng, budget=EvaluationCounter(10)
    )
    assert _objectives(new) == sorted(parents)


@pytest.mark.parametrize("scoring", list(RegionScoring))
def test_steady_state_with_region_matches_three_key_order(rng, scoring):
    parents = [(0.0, 1.0), (0.3, 0.5), (0.6, 0.2), (1.0, 0.0)]
    child = (0.45, 0.3)
    region = compute_preference_region((0.3, 0.5), (1.0, 1.0))
    pop = _population(parents)
    config = EvolutionConfig(total_budget=100, population_size=4, region_scoring=scoring)
    new = steady_state_step(
        pop, ScriptedProblem([child]), config, region, rng=rng, budget=EvaluationCounter(10)
    )

    merged = np.array(parents + [child])
    if scoring is RegionScoring.WHOLE_FRONT:
        scores = diversity_contribution(merged)
    else:
        inside = np.all(merged <= region.upper_bound, axis=1)
        scores = np.full(5, -np.inf)
        scores[inside] = diversity_contribution(merged[inside])
    distances = knee_distances(merged, region)
    removed = sorted(range(5), key=lambda i: (-scores[i], distances[i], i))[-1]
    expected = sorted(tuple(p) for i, p in enumerate(merged.tolist()) if i != removed)
    assert _objectives(new) == expected


@pytest.mark.parametrize("with_region", [False, True])
def test_selection_never_loses_ground_to_the_previous_population(with_region):
    problem = get_problem("zdt1")
    rng = np.random.default_rng(11)
    config = EvolutionConfig(total_budget=2_000, population_size=12, variant=Variant.DI_2)
    budget = EvaluationCounter(config.total_budget)
    members = [evaluate_genome(problem, problem.random_genome(rng), budget) for _ in range(12)]
    score_members(members, diversity_contribution)
    pop = Population(members, 12)
    region = compute_preference_region((0.3, 0.5), (1.0, 4.0)) if with_region else None

    for i in range(120):
        previous = pop.objective_matrix()
        step = generational_step if i % 2 == 0 else steady_state_step
        pop = step(pop, problem, config, region, rng=rng, budget=budget)
        current = pop.objective_matrix()
        for a in current[fast_nondominated_sort(current)[0]]:
            assert not any(dominates(b, a) for b in previous)
    assert budget.spent == 12 + 60 * 12 + 60


# --- full runs ---


def test_plain_run_has_no_region_events():
    config = EvolutionConfig(total_budget=600, population_size=20, variant=Variant.DI_2, rng_seed=3)
    result = run(get_problem("zdt1"), config)
    assert result.events == []
    assert result.evaluations == 600
    assert len(result.population) == 20


def test_preference_run_builds_thirteen_regions():
    seen = []
    config = EvolutionConfig(
        total_budget=2_200, population_size=10, preference_enabled=True, rng_seed=7
    )
    result = run(get_problem("zdt1"), config, observer=seen.append)
    assert len(result.events) == 13
    assert seen == result.events
    assert [e.evaluations for e in result.events][0] >= 1_100
    assert result.events[-1].evaluations >= 2_190
    for event in result.events:
        assert np.all(np.array(event.knee) <= np.array(event.upper_bound))


def test_runs_are_deterministic():
    config = EvolutionConfig(total_budget=1_000, population_size=12, preference_enabled=True, rng_seed=42)
    first = run(get_problem("zdt2"), config)
    second = run(get_problem("zdt2"), config)
    assert [e.model_dump() for e in first.events] == [e.model_dump() for e in second.events]
    assert np.array_equal(first.population.objective_matrix(), second.population.objective_matrix())


def test_final_population_is_ranked():
    config = EvolutionConfig(total_budget=800, population_size=16, rng_seed=1)
    result = run(get_problem("dtlz2"), config)
    front = result.population.non_dominated()
    assert front
    for a in front:
        assert not any(dominates(b.objectives, a.objectives) for b in result.population.members)


@pytest.mark.slow
def test_full_budget_zdt1_run_builds_thirteen_regions():
    config = EvolutionConfig(total_budget=22_000, preference_enabled=True, rng_seed=7)
    result = run(get_problem("zdt1"), config)
    assert len(result.events) == 13
    assert result.evaluations == 22_000
    assert len(result.population.non_dominated()) <= 100
