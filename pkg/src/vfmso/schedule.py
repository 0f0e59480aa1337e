# vfmso/schedule.py

"""Genotype-phenotype mapping: first-come-first-served placement of group operations."""

from dataclasses import dataclass

import numpy as np

from vfmso.chromosome import Chromosome
from vfmso.grouping import fleet_index


@dataclass(frozen=True)
class ScheduledOperation:
    car_index: int
    car_id: int
    group_index: int
    members: tuple[int, ...]
    slot: int
    workshop: int
    team: int
    requested_start: float
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration

    @property
    def waiting_time(self) -> float:
        return self.start - self.requested_start


@dataclass(frozen=True)
class Schedule:
    operations: list[ScheduledOperation]
    # Effective maintenance date per component, in flattened (car, component) order.
    maintenance_dates: np.ndarray


def decode(chromosome: Chromosome, instance) -> Schedule:
    """
    Operations are handled in order of requested start (ties: car id, then group index).
    Each starts as soon as its request time, its team and its car all allow.
    """
    fleet = fleet_index(instance)
    requests = []
    for i, partition in enumerate(chromosome.groups):
        car = fleet.instance.cars[i]
        for g, members in enumerate(partition):
            requests.append((chromosome.start_times[i][g], car.id, g, i, members, chromosome.teams[i][g]))
    requests.sort(key=lambda r: (r[0], r[1], r[2]))

    team_free: dict[int, float] = {}
    car_free: dict[int, float] = {}
    dates = np.empty(fleet.instance.component_count)
    operations = []
    for requested, car_id, g, i, members, slot in requests:
        car = fleet.instance.cars[i]
        workshop, team = fleet.team_slots[slot]
        duration = car.setup_time[workshop] + sum(
            car.components[j].processing_time[workshop] for j in members
        )
        start = max(requested, team_free.get(slot, requested), car_free.get(i, requested))
        team_free[slot] = car_free[i] = start + duration
        for j in members:
            dates[fleet.offsets[i] + j] = start
        operations.append(
            ScheduledOperation(
                car_index=i,
                car_id=car_id,
                group_index=g,
                members=tuple(members),
                slot=slot,
                workshop=workshop,
                team=team,
                requested_start=requested,
                start=start,
                duration=duration,
            )
        )
    return Schedule(operations=operations, maintenance_dates=dates)
