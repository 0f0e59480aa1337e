# src/benchmark_problems.py

"""
Continuous benchmark problems in their canonical (Deb) formulations.

ZDT1 / ZDT2 (two objectives, all variables in [0, 1]):
    f1 = x1
    g  = 1 + 9 * sum(x2..xn) / (n - 1)
    f2 = g * h,  h = 1 - sqrt(f1 / g)  (ZDT1)   or   h = 1 - (f1 / g)^2  (ZDT2)

DTLZ1 / DTLZ2 (three objectives, k = n - 2 distance variables x3..xn):
    DTLZ1: g = 100 * (k + sum((x - 0.5)^2 - cos(20 * pi * (x - 0.5))))
           f1 = 0.5 x1 x2 (1 + g), f2 = 0.5 x1 (1 - x2) (1 + g), f3 = 0.5 (1 - x1) (1 + g)
    DTLZ2: g = sum((x - 0.5)^2)
           f1 = (1 + g) cos(x1 pi/2) cos(x2 pi/2)
           f2 = (1 + g) cos(x1 pi/2) sin(x2 pi/2)
           f3 = (1 + g) sin(x1 pi/2)
"""

from typing import Callable, Optional

import numpy as np

from moea_core import Problem
from utilities import ContractViolation
from variation import (
    DEFAULT_CROSSOVER_RATE,
    DEFAULT_ETA_C,
    DEFAULT_ETA_M,
    polynomial_mutation,
    sbx_crossover,
)


def _checked(x, n_vars: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n_vars,):
        raise ContractViolation(f"expected {n_vars} variables, got shape {x.shape}")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ContractViolation("decision variables must lie in [0, 1]")
    return x


def evaluate_zdt1(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = _checked(x, x.size)
    f1 = x[0]
    g = 1.0 + 9.0 * x[1:].sum() / (x.size - 1)
    return np.array([f1, g * (1.0 - np.sqrt(f1 / g))])


def evaluate_zdt2(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = _checked(x, x.size)
    f1 = x[0]
    g = 1.0 + 9.0 * x[1:].sum() / (x.size - 1)
    return np.array([f1, g * (1.0 - (f1 / g) ** 2)])


def evaluate_dtlz1(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = _checked(x, x.size)
    tail = x[2:] - 0.5
    g = 100.0 * (tail.size + np.sum(tail**2 - np.cos(20.0 * np.pi * tail)))
    scale = 0.5 * (1.0 + g)
    return np.array(
        [
            scale * x[0] * x[1],
            scale * x[0] * (1.0 - x[1]),
            scale * (1.0 - x[0]),
        ]
    )


def evaluate_dtlz2(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = _checked(x, x.size)
    g = np.sum((x[2:] - 0.5) ** 2)
    a = 0.5 * np.pi * x[0]
    b = 0.5 * np.pi * x[1]
    return (1.0 + g) * np.array([np.cos(a) * np.cos(b), np.cos(a) * np.sin(b), np.sin(a)])


class ContinuousProblem(Problem):
    """Box-bounded real-vector problem varied with SBX and polynomial mutation."""

    def __init__(
        self,
        name: str,
        n_vars: int,
        n_obj: int,
        function: Callable[[np.ndarray], np.ndarray],
        eta_c: float = DEFAULT_ETA_C,
        eta_m: float = DEFAULT_ETA_M,
        crossover_rate: float = DEFAULT_CROSSOVER_RATE,
    ):
        self.name = name
        self.n_vars = n_vars
        self.n_obj = n_obj
        self.function = function
        self.lower = np.zeros(n_vars)
        self.upper = np.ones(n_vars)
        self.eta_c = eta_c
        self.eta_m = eta_m
        self.crossover_rate = crossover_rate

    def random_genome(self, rng):
        return rng.uniform(self.lower, self.upper)

    def evaluate(self, genome) -> np.ndarray:
        return self.function(_checked(genome, self.n_vars))

    def crossover(self, a, b, rng):
        if rng.random() >= self.crossover_rate:
            return np.array(a, dtype=float), np.array(b, dtype=float)
        return sbx_crossover(a, b, rng, self.eta_c, self.lower, self.upper)

    def mutate(self, genome, rng):
        return polynomial_mutation(genome, rng, self.eta_m, None, self.lower, self.upper)

    def describe_genome(self, genome) -> str:
        return " ".join(repr(float(v)) for v in genome)


PROBLEMS = {
    "zdt1": lambda: ContinuousProblem("ZDT1", 30, 2, evaluate_zdt1),
    "zdt2": lambda: ContinuousProblem("ZDT2", 30, 2, evaluate_zdt2),
    "dtlz1": lambda: ContinuousProblem("DTLZ1", 7, 3, evaluate_dtlz1),
    "dtlz2": lambda: ContinuousProblem("DTLZ2", 12, 3, evaluate_dtlz2),
}


def get_problem(name: str) -> ContinuousProblem:
    try:
        return PROBLEMS[name.lower()]()
    except KeyError:
        raise ContractViolation(
            f"unknown benchmark '{name}'; choose from {', '.join(sorted(PROBLEMS))}"
        ) from None


def sample_true_front(
    name: str, count: int, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """
    Points exactly on the analytic Pareto front of a benchmark.

    ZDT fronts always include both end points; without a generator the remaining
    points are evenly spaced. DTLZ fronts are sampled uniformly (seed 0 by default).
    """
    key = name.lower()
    if key not in PROBLEMS:
        raise ContractViolation(f"no analytic front for '{name}'")
    if count < 1:
        return np.empty((0, 3 if key.startswith("dtlz") else 2))

    if key.startswith("zdt"):
        if rng is None or count <= 2:
            t = np.linspace(0.0, 1.0, count) if count > 1 else np.zeros(1)
        else:
            t = np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0.0, 1.0, count - 2)]))
        f2 = 1.0 - np.sqrt(t) if key == "zdt1" else 1.0 - t**2
        return np.column_stack([t, f2])

    rng = rng if rng is not None else np.random.default_rng(0)
    if key == "dtlz1":
        return 0.5 * rng.dirichlet(np.ones(3), size=count)
    directions = np.abs(rng.standard_normal((count, 3)))
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)
