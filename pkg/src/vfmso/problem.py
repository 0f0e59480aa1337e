# vfmso/problem.py

import numpy as np

from moea_core import Problem
from vfmso.chromosome import Chromosome, crossover, init_chromosome, mutate
from vfmso.evaluation import DueDateSampleSet, evaluate
from vfmso.grouping import FleetIndex
from vfmso.items import VfmsoInstance


class VfmsoProblem(Problem):
    """Fleet maintenance scheduling as a three-objective minimisation problem."""

    n_obj = 3

    def __init__(self, instance: VfmsoInstance, samples: DueDateSampleSet):
        self.name = f"VFMSO[{instance.name}]"
        self.instance = instance
        self.samples = samples
        self.fleet = FleetIndex(instance)

    @classmethod
    def seeded(cls, instance: VfmsoInstance, rng: np.random.Generator) -> "VfmsoProblem":
        return cls(instance, DueDateSampleSet.generate(instance, rng))

    def random_genome(self, rng):
        return init_chromosome(self.fleet, rng)

    def evaluate(self, genome: Chromosome) -> np.ndarray:
        return evaluate(genome, self.fleet, self.samples).objectives

    def crossover(self, a, b, rng):
        return crossover(a, b, rng, self.fleet)

    def mutate(self, genome, rng):
        return mutate(genome, rng, self.fleet)

    def describe_genome(self, genome: Chromosome) -> str:
        grouped = sum(len(g) for partition in genome.groups for g in partition if len(g) > 1)
        return f"operations={genome.group_count} grouped_components={grouped}"
