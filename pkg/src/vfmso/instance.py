# vfmso/instance.py

"""Synthetic fleet instances and their JSON files."""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from utilities import ContractViolation
from vfmso.items import CarSpec, ComponentSpec, VfmsoInstance, WorkshopSpec
from vfmso.settings import (
    CAPABILITY_PROBABILITY,
    COMPONENT_KINDS,
    COMPONENTS_PER_CAR,
    MAINTENANCE_COST,
    PREVIOUS_REPAIR_AGE,
    PROCESSING_TIME,
    RUL_MEAN_BANDS,
    RUL_STD_FRACTION,
    SETUP_COST,
    SETUP_TIME,
    TEAMS_PER_WORKSHOP,
)

logger = logging.getLogger(__name__)


def _draw(rng: np.random.Generator, bounds: tuple[float, float], digits: int = 2) -> float:
    return round(float(rng.uniform(*bounds)), digits)


def _capability_matrix(n_workshops: int, rng: np.random.Generator) -> np.ndarray:
    """Workshop x kind capabilities where every kind is covered and no workshop is idle."""
    matrix = rng.random((n_workshops, len(COMPONENT_KINDS))) < CAPABILITY_PROBABILITY
    while True:
        idle = np.flatnonzero(~matrix.any(axis=1))
        uncovered = ~matrix.any(axis=0)
        if idle.size == 0 and not uncovered.any():
            return matrix
        row = idle[0] if idle.size else rng.integers(n_workshops)
        logger.debug("Regenerating capabilities of workshop %d", row)
        matrix[row] = rng.random(len(COMPONENT_KINDS)) < CAPABILITY_PROBABILITY


def _random_workshops(n_workshops: int, rng: np.random.Generator) -> list[WorkshopSpec]:
    teams = rng.integers(TEAMS_PER_WORKSHOP[0], TEAMS_PER_WORKSHOP[1] + 1, size=n_workshops)
    capabilities = _capability_matrix(n_workshops, rng)
    return [
        WorkshopSpec(
            id=k,
            teams=int(teams[k]),
            capable_kinds=[kind for kind, able in zip(COMPONENT_KINDS, capabilities[k]) if able],
        )
        for k in range(n_workshops)
    ]


def _random_component(
    car_id: int, index: int, kind: str, capable: list[int], rng: np.random.Generator
) -> ComponentSpec:
    mean = _draw(rng, RUL_MEAN_BANDS[kind])
    std = round(mean * float(rng.uniform(*RUL_STD_FRACTION)), 2)
    return ComponentSpec(
        car_id=car_id,
        index=index,
        kind=kind,
        rul_mean=mean,
        rul_std=std,
        previous_repair=-_draw(rng, PREVIOUS_REPAIR_AGE),
        processing_time={k: _draw(rng, PROCESSING_TIME) for k in capable},
        maintenance_cost={k: _draw(rng, MAINTENANCE_COST) for k in capable},
    )


def generate_instance(
    n_cars: int,
    workshops: Union[int, list[WorkshopSpec]],
    rng: np.random.Generator,
    name: str = "fleet",
) -> VfmsoInstance:
    """A fleet of `n_cars` cars with 13 components each, serviced by the given workshops."""
    if n_cars < 1:
        raise ContractViolation("an instance needs at least one car")
    if isinstance(workshops, int):
        if workshops < 1:
            raise ContractViolation("an instance needs at least one workshop")
        workshops = _random_workshops(workshops, rng)

    capable_by_kind = {
        kind: [w.id for w in workshops if kind in w.capable_kinds] for kind in COMPONENT_KINDS
    }
    uncovered = [kind for kind, ids in capable_by_kind.items() if not ids]
    if uncovered:
        raise ContractViolation(f"no workshop can repair {', '.join(uncovered)}")

    cars = []
    for i in range(n_cars):
        components = [
            _random_component(i, j, kind, capable_by_kind[kind], rng)
            for j, kind in enumerate(COMPONENTS_PER_CAR)
        ]
        cars.append(
            CarSpec(
                id=i,
                components=components,
                setup_time={w.id: _draw(rng, SETUP_TIME) for w in workshops},
                setup_cost={w.id: _draw(rng, SETUP_COST) for w in workshops},
            )
        )
    instance = VfmsoInstance(name=name, cars=cars, workshops=workshops)
    logger.info(
        "Generated instance '%s': %d cars, %d workshops, %d team slots",
        name, n_cars, len(workshops), len(instance.team_slots),
    )
    return instance


def save_instance(instance: VfmsoInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(instance.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def load_instance(path: Union[str, Path]) -> VfmsoInstance:
    return VfmsoInstance.model_validate_json(Path(path).read_text(encoding="utf-8"))
