import os
import sys

import numpy as np
import pytest

SRC = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
if SRC not in sys.path:
    sys.path.insert(0, SRC)

from vfmso.instance import generate_instance  # noqa: E402
from vfmso.items import CarSpec, ComponentSpec, VfmsoInstance, WorkshopSpec  # noqa: E402


def brute_force_fronts(F):
    """Strip-and-repeat layering with an explicit pairwise dominance loop."""
    F = [tuple(map(float, row)) for row in F]

    def dom(a, b):
        return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))

    remaining = list(range(len(F)))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(dom(F[j], F[i]) for j in remaining if j != i)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_component(car_id, index, mean, std, workshops=(0,), time=2.0, cost=100.0, previous=0.0, kind="brake"):
    return ComponentSpec(
        car_id=car_id,
        index=index,
        kind=kind,
        rul_mean=mean,
        rul_std=std,
        previous_repair=previous,
        processing_time={k: time for k in workshops},
        maintenance_cost={k: cost for k in workshops},
    )


@pytest.fixture
def tiny_instance():
    """One car, two components with overlapping windows, one workshop with one team."""
    car = CarSpec(
        id=0,
        components=[
            make_component(0, 0, 100.0, 10.0, time=3.0, cost=40.0),
            make_component(0, 1, 110.0, 5.0, time=2.0, cost=60.0),
        ],
        setup_time={0: 1.0},
        setup_cost={0: 10.0},
    )
    return VfmsoInstance(
        name="tiny",
        cars=[car],
        workshops=[WorkshopSpec(id=0, teams=1, capable_kinds=["brake"])],
    )


@pytest.fixture(scope="session")
def v1_instance():
    return generate_instance(20, 3, np.random.default_rng(2024), name="v1")


@pytest.fixture(scope="session")
def small_instance():
    return generate_instance(5, 2, np.random.default_rng(7), name="small")
