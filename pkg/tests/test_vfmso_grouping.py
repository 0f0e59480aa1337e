from itertools import combinations

import numpy as np
import pytest
from conftest import make_component

from utilities import ContractViolation
from vfmso.grouping import (
    FleetIndex,
    component_groupability,
    execution_window,
    random_group_structure,
)
from vfmso.items import CarSpec, ComponentSpec


def _car(components, workshops=(0,)):
    return CarSpec(
        id=0,
        components=components,
        setup_time={k: 1.0 for k in workshops},
        setup_cost={k: 10.0 for k in workshops},
    )


def test_execution_window_formula():
    window = execution_window(make_component(0, 0, 100.0, 10.0))
    assert (window.start, window.end) == (80.0, 120.0)
    window = execution_window(make_component(0, 0, 50.0, 1.0))
    assert (window.start, window.end) == (48.0, 52.0)


def test_generated_windows_are_four_sigma_wide(v1_instance):
    for car in v1_instance.cars:
        for component in car.components:
            assert execution_window(component).width == pytest.approx(4 * component.rul_std)


def test_non_positive_spread_rejected():
    broken = ComponentSpec.model_construct(
        car_id=0, index=0, kind="tire", rul_mean=10.0, rul_std=0.0, previous_repair=0.0,
        processing_time={0: 1.0}, maintenance_cost={0: 1.0},
    )
    with pytest.raises(ContractViolation):
        execution_window(broken)


def test_disjoint_windows_are_not_groupable():
    car = _car([make_component(0, 0, 100.0, 5.0), make_component(0, 1, 200.0, 5.0)])
    assert not component_groupability(car).is_feasible((0, 1))


def test_nested_windows_group_on_the_inner_window():
    car = _car([make_component(0, 0, 100.0, 10.0), make_component(0, 1, 100.0, 2.0)])
    groupability = component_groupability(car)
    assert groupability.is_feasible((0, 1))
    assert groupability.intersection((0, 1)) == (96.0, 104.0)


def test_groups_need_a_common_workshop():
    car = _car(
        [make_component(0, 0, 100.0, 10.0, workshops=(0,)), make_component(0, 1, 100.0, 10.0, workshops=(1,))],
        workshops=(0, 1),
    )
    assert not component_groupability(car).is_feasible((0, 1))


def _eight_component_car(seed):
    rng = np.random.default_rng(seed)
    components = [
        make_component(
            0, j, float(rng.uniform(100, 200)), float(rng.uniform(2, 15)),
            workshops=tuple(sorted(rng.choice(3, size=int(rng.integers(1, 4)), replace=False).tolist())),
        )
        for j in range(8)
    ]
    return _car(components, workshops=(0, 1, 2))


@pytest.mark.parametrize("seed", range(5))
def test_feasible_subsets_match_exhaustive_check(seed):
    car = _eight_component_car(seed)
    groupability = component_groupability(car)
    bounds = [(c.rul_mean - 2 * c.rul_std, c.rul_mean + 2 * c.rul_std) for c in car.components]
    expected_pairs = [
        (i, j)
        for i, j in combinations(range(8), 2)
        if max(bounds[i][0], bounds[j][0]) <= min(bounds[i][1], bounds[j][1])
        and set(car.components[i].processing_time) & set(car.components[j].processing_time)
    ]
    assert groupability.feasible_pairs() == expected_pairs

    for size in (3, 4):
        for subset in combinations(range(8), size):
            overlap = max(bounds[j][0] for j in subset) <= min(bounds[j][1] for j in subset)
            shared = set.intersection(*(set(car.components[j].processing_time) for j in subset))
            assert groupability.is_feasible(subset) == (overlap and bool(shared))


def test_disjoint_windows_give_singletons(rng):
    car = _car([make_component(0, j, 100.0 * (j + 1), 5.0) for j in range(5)])
    for _ in range(20):
        assert random_group_structure(car, rng) == ((0,), (1,), (2,), (3,), (4,))


def test_identical_windows_sometimes_form_one_group():
    car = _car([make_component(0, j, 100.0, 5.0) for j in range(4)])
    structures = [random_group_structure(car, np.random.default_rng(s)) for s in range(1000)]
    assert ((0, 1, 2, 3),) in structures


def test_random_structures_are_feasible_partitions(v1_instance, rng):
    fleet = FleetIndex(v1_instance)
    for i, car in enumerate(v1_instance.cars):
        partition = random_group_structure(car, rng)
        assert sorted(j for g in partition for j in g) == list(range(len(car.components)))
        assert [g[0] for g in partition] == sorted(g[0] for g in partition)
        assert all(fleet.groupability[i].is_feasible(g) for g in partition)
