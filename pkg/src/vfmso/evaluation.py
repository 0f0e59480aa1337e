# vfmso/evaluation.py

"""
Monte Carlo objectives of a maintenance plan.

Every component carries a frozen set of sampled due dates inside its execution window.
Maintaining after a sampled due date counts as a failure; maintaining before it wastes
the part of the component's life not yet used, charged pro rata on the full repair
cost (maintenance cost plus the car's set-up cost at that workshop).
"""

from dataclasses import dataclass, field

import numpy as np

from utilities import ContractViolation
from vfmso.chromosome import Chromosome
from vfmso.grouping import execution_window, fleet_index
from vfmso.items import ComponentSpec, VfmsoInstance
from vfmso.schedule import decode
from vfmso.settings import DUE_DATE_SAMPLES


def sample_due_dates(
    component: ComponentSpec, rng: np.random.Generator, n: int = DUE_DATE_SAMPLES
) -> np.ndarray:
    """n draws from Normal(mu, sigma) truncated to the execution window by rejection."""
    window = execution_window(component)
    samples = np.empty(0)
    while samples.size < n:
        draws = rng.normal(component.rul_mean, component.rul_std, size=n)
        accepted = draws[(draws >= window.start) & (draws <= window.end)]
        samples = np.concatenate([samples, accepted])
    return samples[:n]


@dataclass(frozen=True)
class DueDateSampleSet:
    # shape (component_count, n_samples), rows in flattened (car, component) order
    samples: np.ndarray

    @classmethod
    def generate(
        cls, instance: VfmsoInstance, rng: np.random.Generator, n: int = DUE_DATE_SAMPLES
    ) -> "DueDateSampleSet":
        rows = [sample_due_dates(c, rng, n) for car in instance.cars for c in car.components]
        return cls(np.vstack(rows))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


def penalty_cost(D: float, d: float, c: float, s: float, L: float) -> float:
    """Unused-life penalty of maintaining at D a component repaired at L and due at d."""
    if d <= L:
        raise ContractViolation(f"degenerate component life: due {d} not after previous repair {L}")
    if D <= L:
        return c + s
    if D >= d:
        return 0.0
    return (c + s) * (d - D) / (d - L)


@dataclass
class EvaluationResult:
    total_workload: float
    total_cost: float
    expected_failures: float
    workshop_workload: dict[int, float] = field(default_factory=dict)
    car_cost: dict[int, float] = field(default_factory=dict)
    component_failures: np.ndarray = field(default_factory=lambda: np.empty(0))
    component_penalties: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def objectives(self) -> np.ndarray:
        return np.array([self.total_workload, self.total_cost, self.expected_failures])


def evaluate(chromosome: Chromosome, instance, samples: DueDateSampleSet) -> EvaluationResult:
    fleet = fleet_index(instance)
    schedule = decode(chromosome, fleet)
    if samples.samples.shape[0] != fleet.instance.component_count:
        raise ContractViolation(
            f"sample set covers {samples.samples.shape[0]} components, "
            f"instance has {fleet.instance.component_count}"
        )

    workload = {w.id: 0.0 for w in fleet.instance.workshops}
    car_cost = {car.id: 0.0 for car in fleet.instance.cars}
    full_cost = np.empty(fleet.instance.component_count)
    for op in schedule.operations:
        car = fleet.instance.cars[op.car_index]
        setup_cost = car.setup_cost[op.workshop]
        repair_costs = [car.components[j].maintenance_cost[op.workshop] for j in op.members]
        workload[op.workshop] += op.duration + op.waiting_time
        car_cost[car.id] += setup_cost + sum(repair_costs)
        for j, cost in zip(op.members, repair_costs):
            full_cost[fleet.offsets[op.car_index] + j] = cost + setup_cost

    D = schedule.maintenance_dates[:, None]
    due = samples.samples
    life = due - fleet.previous_repair[:, None]
    if np.any(life <= 0):
        raise ContractViolation("a sampled due date does not follow its previous repair")

    failures = (D > due).mean(axis=1)
    unused = np.clip((due - D) / life, 0.0, 1.0)
    penalties = (full_cost[:, None] * unused).mean(axis=1)

    for i, car in enumerate(fleet.instance.cars):
        start = fleet.offsets[i]
        car_cost[car.id] += float(penalties[start : start + len(car.components)].sum())

    return EvaluationResult(
        total_workload=float(sum(workload.values())),
        total_cost=float(sum(car_cost.values())),
        expected_failures=float(failures.sum()),
        workshop_workload=workload,
        car_cost=car_cost,
        component_failures=failures,
        component_penalties=penalties,
    )
