import numpy as np
import pytest
from conftest import make_component

from utilities import ContractViolation
from vfmso.chromosome import Chromosome, init_chromosome
from vfmso.evaluation import DueDateSampleSet, evaluate, penalty_cost, sample_due_dates
from vfmso.grouping import FleetIndex, execution_window
from vfmso.problem import VfmsoProblem

TINY_SAMPLES = np.array(
    [
        [82.0, 88.5, 93.0, 97.25, 101.0, 104.0, 106.5, 111.0, 115.75, 119.0],
        [100.5, 102.0, 104.5, 106.0, 108.0, 109.5, 111.0, 113.25, 116.0, 119.5],
    ]
)


# --- penalty ---


def test_penalty_anchors():
    assert penalty_cost(D=0.0, d=100.0, c=30.0, s=10.0, L=0.0) == 40.0
    assert penalty_cost(D=-5.0, d=100.0, c=30.0, s=10.0, L=0.0) == 40.0
    assert penalty_cost(D=100.0, d=100.0, c=30.0, s=10.0, L=0.0) == 0.0
    assert penalty_cost(D=130.0, d=100.0, c=30.0, s=10.0, L=0.0) == 0.0
    assert penalty_cost(D=75.0, d=100.0, c=30.0, s=10.0, L=0.0) == pytest.approx(10.0)


def test_penalty_rejects_degenerate_life():
    with pytest.raises(ContractViolation):
        penalty_cost(D=5.0, d=10.0, c=1.0, s=1.0, L=10.0)


# --- sampling ---


def test_samples_are_truncated_to_the_window(rng):
    component = make_component(0, 0, 100.0, 10.0)
    samples = sample_due_dates(component, rng)
    window = execution_window(component)
    assert samples.shape == (1000,)
    assert samples.min() >= window.start and samples.max() <= window.end
    assert abs(samples.mean() - 100.0) < 4 * 10.0 / np.sqrt(1000)
    assert abs((samples > 100.0).mean() - 0.5) < 0.05


def test_sample_sets_are_reproducible(tiny_instance):
    first = DueDateSampleSet.generate(tiny_instance, np.random.default_rng(3))
    second = DueDateSampleSet.generate(tiny_instance, np.random.default_rng(3))
    assert first.samples.shape == (2, 1000)
    assert np.array_equal(first.samples, second.samples)


# --- objectives ---


def _straight_line_objectives(start):
    # one group {0, 1} on workshop 0: set-up 1 h + 3 h + 2 h, set-up cost 10, repair costs 40 and 60
    workload = 1.0 + 3.0 + 2.0
    cost = 10.0 + 40.0 + 60.0
    failures = 0.0
    for full_cost, row in ((40.0 + 10.0, TINY_SAMPLES[0]), (60.0 + 10.0, TINY_SAMPLES[1])):
        penalties = 0.0
        for d in row:
            if start > d:
                failures += 1.0 / len(row)
            elif start < d:
                penalties += full_cost * (d - start) / (d - 0.0)
        cost += penalties / len(row)
    return workload, cost, failures


@pytest.mark.parametrize("start", [100.0, 105.0, 112.5, 120.0])
def test_micro_instance_matches_hand_computation(tiny_instance, start):
    plan = Chromosome(groups=[((0, 1),)], start_times=[[start]], teams=[[0]])
    result = evaluate(plan, tiny_instance, DueDateSampleSet(TINY_SAMPLES))
    expected = _straight_line_objectives(start)
    assert result.objectives == pytest.approx(expected, abs=1e-9)
    assert result.workshop_workload == {0: pytest.approx(6.0)}
    assert result.car_cost == {0: pytest.approx(expected[1])}


def test_waiting_time_counts_as_workload(tiny_instance):
    plan = Chromosome(groups=[((0,), (1,))], start_times=[[101.0, 101.0]], teams=[[0, 0]])
    result = evaluate(plan, tiny_instance, DueDateSampleSet(TINY_SAMPLES))
    # 4 h then 3 h, the second waits 4 h behind the first
    assert result.total_workload == pytest.approx(4.0 + 3.0 + 4.0)


def _singletons_at(instance, edge):
    fleet = FleetIndex(instance)
    starts = [
        [getattr(execution_window(c), edge) for c in car.components] for car in instance.cars
    ]
    groups = [tuple((j,) for j in range(len(car.components))) for car in instance.cars]
    teams = [[fleet.valid_slots(i, (j,))[0] for j in range(len(car.components))] for i, car in enumerate(instance.cars)]
    return Chromosome(groups=groups, start_times=starts, teams=teams)


def test_window_edges_pull_objectives_apart(tiny_instance):
    samples = DueDateSampleSet.generate(tiny_instance, np.random.default_rng(0))
    late = evaluate(_singletons_at(tiny_instance, "end"), tiny_instance, samples)
    early = evaluate(_singletons_at(tiny_instance, "start"), tiny_instance, samples)
    assert late.expected_failures == pytest.approx(2.0, abs=0.01)
    assert late.component_penalties.sum() == pytest.approx(0.0, abs=1e-9)
    assert early.expected_failures == pytest.approx(0.0, abs=0.01)
    assert early.expected_failures < late.expected_failures
    assert early.component_penalties.sum() > late.component_penalties.sum()


def test_failures_and_penalties_are_monotone_in_the_date(tiny_instance):
    samples = DueDateSampleSet(TINY_SAMPLES)
    previous = None
    for start in np.linspace(100.0, 120.0, 41):
        plan = Chromosome(groups=[((0, 1),)], start_times=[[float(start)]], teams=[[0]])
        result = evaluate(plan, tiny_instance, samples)
        if previous is not None:
            assert np.all(result.component_failures >= previous.component_failures)
            assert np.all(result.component_penalties <= previous.component_penalties + 1e-12)
        previous = result


def test_evaluation_is_deterministic_and_bounded(small_instance):
    fleet = FleetIndex(small_instance)
    samples = DueDateSampleSet.generate(small_instance, np.random.default_rng(4))
    plan = init_chromosome(fleet, np.random.default_rng(9))
    first = evaluate(plan, fleet, samples)
    second = evaluate(plan, small_instance, samples)
    assert np.array_equal(first.objectives, second.objectives)
    assert np.all(first.objectives >= 0)
    assert first.expected_failures <= small_instance.component_count
    assert first.total_workload == pytest.approx(sum(first.workshop_workload.values()))
    assert first.total_cost == pytest.approx(sum(first.car_cost.values()))


def test_sample_set_must_match_instance(small_instance, tiny_instance, rng):
    plan = init_chromosome(small_instance, rng)
    with pytest.raises(ContractViolation):
        evaluate(plan, small_instance, DueDateSampleSet(TINY_SAMPLES))


def test_problem_adapter_runs_variation(small_instance):
    problem = VfmsoProblem.seeded(small_instance, np.random.default_rng(2))
    rng = np.random.default_rng(3)
    a, b = problem.random_genome(rng), problem.random_genome(rng)
    child, _ = problem.crossover(a, b, rng)
    objectives = problem.evaluate(problem.mutate(child, rng))
    assert objectives.shape == (3,)
    assert np.all(np.isfinite(objectives))
    assert problem.describe_genome(a).startswith("operations=")
