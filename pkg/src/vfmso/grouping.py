# vfmso/grouping.py

"""
Execution windows and the grouping rules for components of one car.

A set of components can be maintained in one visit when their execution windows
share a common point and at least one workshop can repair all of them. Windows are
intervals, so a common point exists exactly when the latest start does not pass the
earliest end.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from utilities import ContractViolation
from vfmso.items import CarSpec, ComponentSpec, VfmsoInstance
from vfmso.settings import WINDOW_SIGMAS


@dataclass(frozen=True)
class ExecutionWindow:
    start: float
    end: float

    @property
    def width(self) -> float:
        return self.end - self.start


def execution_window(component: ComponentSpec) -> ExecutionWindow:
    """[mu - 2 sigma, mu + 2 sigma] of the component's remaining-useful-life distribution."""
    if component.rul_std <= 0:
        raise ContractViolation(
            f"component {component.car_id}.{component.index} needs a positive RUL spread"
        )
    spread = WINDOW_SIGMAS * component.rul_std
    return ExecutionWindow(component.rul_mean - spread, component.rul_mean + spread)


Group = tuple[int, ...]
Partition = tuple[Group, ...]


@dataclass(frozen=True)
class Groupability:
    """Feasibility structure of one car: which component subsets may share a visit."""

    windows: tuple[ExecutionWindow, ...]
    capable: tuple[frozenset[int], ...]

    def intersection(self, members) -> tuple[float, float] | None:
        start = max(self.windows[j].start for j in members)
        end = min(self.windows[j].end for j in members)
        return (start, end) if start <= end else None

    def common_workshops(self, members) -> frozenset[int]:
        return frozenset.intersection(*(self.capable[j] for j in members))

    def is_feasible(self, members) -> bool:
        members = tuple(members)
        if not members:
            return False
        return self.intersection(members) is not None and bool(self.common_workshops(members))

    def feasible_pairs(self) -> list[tuple[int, int]]:
        return [pair for pair in combinations(range(len(self.windows)), 2) if self.is_feasible(pair)]


def component_groupability(car: CarSpec) -> Groupability:
    return Groupability(
        windows=tuple(execution_window(c) for c in car.components),
        capable=tuple(c.capable_workshops for c in car.components),
    )


def canonical(groups) -> Partition:
    return tuple(sorted((tuple(sorted(g)) for g in groups), key=lambda g: g[0]))


def random_group_structure(
    car: CarSpec, rng: np.random.Generator, groupability: Groupability | None = None
) -> Partition:
    """
    Greedy random partition: components are shuffled, and each joins the group being
    grown while that group stays feasible; otherwise it opens a new group.
    """
    groupability = groupability or component_groupability(car)
    order = rng.permutation(len(car.components))
    groups: list[list[int]] = []
    for j in order.tolist():
        if groups and groupability.is_feasible(groups[-1] + [j]):
            groups[-1].append(j)
        else:
            groups.append([j])
    return canonical(groups)


class FleetIndex:
    """Per-instance lookup tables shared by the chromosome operators and the decoder."""

    def __init__(self, instance: VfmsoInstance):
        self.instance = instance
        self.groupability = [component_groupability(car) for car in instance.cars]
        self.team_slots = instance.team_slots
        self.offsets = instance.component_offsets()
        self.previous_repair = np.array(
            [c.previous_repair for car in instance.cars for c in car.components], dtype=float
        )
        self._slots_by_workshop: dict[int, list[int]] = {}
        for slot, (workshop, _) in enumerate(self.team_slots):
            self._slots_by_workshop.setdefault(workshop, []).append(slot)

    @property
    def n_cars(self) -> int:
        return len(self.instance.cars)

    def valid_slots(self, car_index: int, members) -> list[int]:
        """Team slots of every workshop able to repair all members, in slot order."""
        workshops = self.groupability[car_index].common_workshops(members)
        return sorted(s for w in workshops for s in self._slots_by_workshop.get(w, []))


def fleet_index(source) -> FleetIndex:
    return source if isinstance(source, FleetIndex) else FleetIndex(source)
