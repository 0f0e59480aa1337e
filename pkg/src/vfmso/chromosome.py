# vfmso/chromosome.py

"""
Three-vector encoding of a fleet maintenance plan and its variation operators.

For every car the chromosome holds a partition of the car's components into groups,
one requested start time per group and one team slot per group (an index into
`VfmsoInstance.team_slots`). Operators always hand back valid chromosomes: a start
time outside its group's window intersection, or a team whose workshop cannot repair
every member, is redrawn uniformly among the valid choices.
"""

from dataclasses import dataclass

import numpy as np

from utilities import ContractViolation
from vfmso.grouping import FleetIndex, Partition, fleet_index, random_group_structure
from vfmso.settings import CARS_PER_CUT


@dataclass
class Chromosome:
    groups: list[Partition]
    start_times: list[list[float]]
    teams: list[list[int]]

    def copy(self) -> "Chromosome":
        return Chromosome(
            groups=list(self.groups),
            start_times=[list(s) for s in self.start_times],
            teams=[list(t) for t in self.teams],
        )

    @property
    def group_count(self) -> int:
        return sum(len(g) for g in self.groups)


def validate_chromosome(chromosome: Chromosome, instance) -> None:
    """Raises ContractViolation naming the first broken invariant."""
    fleet = fleet_index(instance)
    if not (len(chromosome.groups) == len(chromosome.start_times) == len(chromosome.teams) == fleet.n_cars):
        raise ContractViolation("chromosome vectors must have one entry per car")
    for i, partition in enumerate(chromosome.groups):
        car = fleet.instance.cars[i]
        members = sorted(j for group in partition for j in group)
        if members != list(range(len(car.components))):
            raise ContractViolation(f"car {car.id}: groups do not partition its components")
        if not (len(partition) == len(chromosome.start_times[i]) == len(chromosome.teams[i])):
            raise ContractViolation(f"car {car.id}: one start time and one team per group expected")
        groupability = fleet.groupability[i]
        for g, group in enumerate(partition):
            window = groupability.intersection(group)
            if window is None:
                raise ContractViolation(f"car {car.id} group {group}: windows do not overlap")
            start = chromosome.start_times[i][g]
            if not window[0] <= start <= window[1]:
                raise ContractViolation(f"car {car.id} group {group}: start {start} outside {window}")
            if chromosome.teams[i][g] not in fleet.valid_slots(i, group):
                raise ContractViolation(f"car {car.id} group {group}: team slot cannot repair the group")


def _repair_car(
    fleet: FleetIndex,
    car_index: int,
    partition: Partition,
    starts: list[float],
    teams: list[int],
    rng: np.random.Generator,
) -> tuple[list[float], list[int]]:
    # Candidates are matched to groups by position; anything invalid is redrawn.
    groupability = fleet.groupability[car_index]
    new_starts, new_teams = [], []
    for g, group in enumerate(partition):
        low, high = groupability.intersection(group)
        start = starts[g] if g < len(starts) else None
        if start is None or not low <= start <= high:
            start = float(rng.uniform(low, high))
        valid = fleet.valid_slots(car_index, group)
        team = teams[g] if g < len(teams) else None
        if team not in valid:
            team = int(valid[rng.integers(len(valid))])
        new_starts.append(start)
        new_teams.append(team)
    return new_starts, new_teams


def init_chromosome(instance, rng: np.random.Generator) -> Chromosome:
    fleet = fleet_index(instance)
    groups, starts, teams = [], [], []
    for i, car in enumerate(fleet.instance.cars):
        partition = random_group_structure(car, rng, fleet.groupability[i])
        car_starts, car_teams = _repair_car(fleet, i, partition, [], [], rng)
        groups.append(partition)
        starts.append(car_starts)
        teams.append(car_teams)
    return Chromosome(groups, starts, teams)


def _segment_mask(n_cars: int, rng: np.random.Generator) -> np.ndarray:
    """True where the first child inherits from the first parent, alternating at each cut."""
    n_cuts = min(max(1, n_cars // CARS_PER_CUT), n_cars - 1)
    if n_cuts <= 0:
        return np.ones(n_cars, dtype=bool)
    cuts = np.sort(rng.choice(np.arange(1, n_cars), size=n_cuts, replace=False))
    segment = np.searchsorted(cuts, np.arange(n_cars), side="right")
    return segment % 2 == 0


def crossover(
    a: Chromosome, b: Chromosome, rng: np.random.Generator, instance
) -> tuple[Chromosome, Chromosome]:
    """
    Multi-point crossover on car boundaries. Group structures travel together with
    their start times; the team vector is cut independently and then repaired.
    """
    fleet = fleet_index(instance)
    n = fleet.n_cars
    structure_mask = _segment_mask(n, rng)
    team_mask = _segment_mask(n, rng)

    children = []
    for first, second in ((a, b), (b, a)):
        groups, starts, teams = [], [], []
        for i in range(n):
            layout = first if structure_mask[i] else second
            staffing = first if team_mask[i] else second
            car_starts, car_teams = _repair_car(
                fleet, i, layout.groups[i], layout.start_times[i], staffing.teams[i], rng
            )
            groups.append(layout.groups[i])
            starts.append(car_starts)
            teams.append(car_teams)
        children.append(Chromosome(groups, starts, teams))
    return children[0], children[1]


def mutate(chromosome: Chromosome, rng: np.random.Generator, instance) -> Chromosome:
    fleet = fleet_index(instance)
    mutant = chromosome.copy()
    n = fleet.n_cars

    # Group structure first: start times and teams depend on it.
    for i, car in enumerate(fleet.instance.cars):
        if rng.random() < 1.0 / n:
            partition = random_group_structure(car, rng, fleet.groupability[i])
            mutant.groups[i] = partition
            mutant.start_times[i], mutant.teams[i] = _repair_car(
                fleet, i, partition, mutant.start_times[i], mutant.teams[i], rng
            )

    rate = 1.0 / mutant.group_count
    for i, partition in enumerate(mutant.groups):
        groupability = fleet.groupability[i]
        for g, group in enumerate(partition):
            if rng.random() < rate:
                low, high = groupability.intersection(group)
                mutant.start_times[i][g] = float(rng.uniform(low, high))
            if rng.random() < rate:
                valid = fleet.valid_slots(i, group)
                mutant.teams[i][g] = int(valid[rng.integers(len(valid))])
    return mutant
