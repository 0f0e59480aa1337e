# src/preference.py

"""
Automatic preference articulation: knee-point detection on a non-dominated set and the
shrinking box-shaped preference region built around it.

The knee is found in four steps:
  1. points beyond the upper-quartile value of any objective are dropped as outliers;
  2. the extreme points (worst value per objective) of the survivors span a hyperplane;
  3. survivors on the ideal side of that plane are "convex", those on the far side
     "concave"; comparing the two counts with a closeness parameter epsilon gives the shape;
  4. for an (almost) linear shape the knee is the survivor with the largest single-point
     hypervolume w.r.t. the worst point; otherwise it is the survivor of the dominant side
     that lies farthest from the plane.
"""

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from utilities import ContractViolation, as_objective_matrix

logger = logging.getLogger(__name__)

REGION_SHRINK = 0.85
DEFAULT_EPSILON_FRACTION = 0.05
MIN_FILTER_SIZE = 4
UPPER_QUARTILE = 0.75
# Relative tolerance for "on the plane"; points this close count on neither side.
PLANE_TOLERANCE = 1e-9


class Shape(str, enum.Enum):
    CONVEX = "Convex"
    CONCAVE = "Concave"
    LINEAR = "Linear"


@dataclass(frozen=True)
class QuartileBounds:
    upper_quartile: np.ndarray  # Q
    worst: np.ndarray  # L


@dataclass(frozen=True)
class Hyperplane:
    extreme_points: np.ndarray
    normal: np.ndarray
    offset: float
    degenerate: bool = False

    def signed_distance(self, points) -> np.ndarray:
        """Distance to the plane; negative on the ideal (convex) side."""
        F = as_objective_matrix(points)
        return F @ self.normal - self.offset


@dataclass(frozen=True)
class ConvexityVerdict:
    num_convex: int
    num_concave: int
    shape: Shape


@dataclass(frozen=True)
class PreferenceRegion:
    knee: np.ndarray
    upper_bound: np.ndarray
    lower_bound: np.ndarray

    def contains(self, points) -> np.ndarray:
        """Membership mask: every objective at or below the upper bound."""
        F = as_objective_matrix(points)
        return np.all(F <= self.upper_bound, axis=1)


@dataclass(frozen=True)
class KneeReport:
    knee: np.ndarray
    bounds: QuartileBounds
    plane: Hyperplane | None
    verdict: ConvexityVerdict
    survivors: np.ndarray = field(repr=False)


def default_epsilon(size: int, fraction: float = DEFAULT_EPSILON_FRACTION) -> int:
    # rounding first keeps 0.05 * 60 from landing a hair above 3
    return math.ceil(round(fraction * size, 9))


def _quartile_mask(F: np.ndarray) -> tuple[np.ndarray, QuartileBounds]:
    worst = F.max(axis=0)
    n = F.shape[0]
    if n < MIN_FILTER_SIZE:
        return np.ones(n, dtype=bool), QuartileBounds(worst.copy(), worst)

    position = math.ceil(UPPER_QUARTILE * n) - 1
    quartile = np.sort(F, axis=0)[position]
    mask = np.all(F <= quartile, axis=1)
    if not mask.any():
        mask = np.ones(n, dtype=bool)
    return mask, QuartileBounds(quartile, worst)


def filter_upper_quartile(front) -> tuple[np.ndarray, QuartileBounds]:
    """
    Drops outliers: any point exceeding the upper-quartile value of some objective.

    Fronts with fewer than four points are returned whole, with Q equal to L.
    """
    F = as_objective_matrix(front)
    if F.shape[0] == 0:
        raise ContractViolation("cannot filter an empty front")
    mask, bounds = _quartile_mask(F)
    return F[mask], bounds


def _extreme_index(F: np.ndarray, objective: int) -> int:
    column = F[:, objective]
    candidates = np.flatnonzero(column == column.max())
    return min(candidates, key=lambda i: (tuple(F[i]), i))


def extreme_points(survivors) -> Hyperplane:
    """Hyperplane through the survivors holding the worst value of each objective."""
    F = as_objective_matrix(survivors)
    if F.shape[0] == 0:
        raise ContractViolation("extreme points need at least one survivor")
    n_obj = F.shape[1]
    extremes = F[[_extreme_index(F, j) for j in range(n_obj)]]

    scale = max(1.0, float(np.abs(extremes).max()))
    differences = extremes[1:] - extremes[0]
    _, singular, vt = np.linalg.svd(differences, full_matrices=True)
    normal = vt[-1]
    rank = int(np.sum(singular > 1e-12 * scale))
    degenerate = rank < n_obj - 1 or len(np.unique(extremes, axis=0)) < n_obj

    offset = float(normal @ extremes[0])
    ideal_side = float(normal @ F.min(axis=0)) - offset
    if ideal_side > 0 or (abs(ideal_side) <= PLANE_TOLERANCE * scale and normal.sum() < 0):
        normal = -normal
        offset = -offset
    return Hyperplane(extremes, normal, offset, degenerate)


def _sides(F: np.ndarray, plane: Hyperplane) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    distances = plane.signed_distance(F)
    tolerance = PLANE_TOLERANCE * max(1.0, float(np.abs(F).max()))
    return distances < -tolerance, distances > tolerance, distances


def _shape(num_convex: int, num_concave: int, epsilon: float) -> Shape:
    if num_convex - num_concave > epsilon:
        return Shape.CONVEX
    if num_concave - num_convex > epsilon:
        return Shape.CONCAVE
    return Shape.LINEAR


def classify_convexity(survivors, plane: Hyperplane, epsilon: float) -> ConvexityVerdict:
    """Counts survivors on each side of the plane and names the rough shape of the set."""
    if plane.degenerate:
        return ConvexityVerdict(0, 0, Shape.LINEAR)
    F = as_objective_matrix(survivors)
    convex, concave, _ = _sides(F, plane)
    num_convex, num_concave = int(convex.sum()), int(concave.sum())
    return ConvexityVerdict(num_convex, num_concave, _shape(num_convex, num_concave, epsilon))


def locate_knee(
    front,
    epsilon: float | None = None,
    epsilon_fraction: float = DEFAULT_EPSILON_FRACTION,
) -> KneeReport:
    """Runs the full knee search and keeps every intermediate product for reporting."""
    F = as_objective_matrix(front)
    if F.shape[0] == 0:
        raise ContractViolation("cannot locate the knee of an empty front")
    if F.shape[0] == 1:
        only = F[0].copy()
        return KneeReport(
            only, QuartileBounds(only, only), None, ConvexityVerdict(0, 0, Shape.LINEAR), F
        )

    survivors, bounds = filter_upper_quartile(F)
    plane = extreme_points(survivors)
    if epsilon is None:
        epsilon = default_epsilon(survivors.shape[0], epsilon_fraction)
    verdict = classify_convexity(survivors, plane, epsilon)

    if verdict.shape is Shape.LINEAR:
        volumes = np.prod(bounds.worst - survivors, axis=1)
        knee = survivors[int(np.argmax(volumes))]
    else:
        convex, concave, distances = _sides(survivors, plane)
        side = convex if verdict.shape is Shape.CONVEX else concave
        candidates = np.flatnonzero(side)
        knee = survivors[candidates[int(np.argmax(np.abs(distances[candidates])))]]

    logger.debug(
        "Knee %s (%s, %d convex / %d concave, epsilon=%s)",
        knee, verdict.shape.value, verdict.num_convex, verdict.num_concave, epsilon,
    )
    return KneeReport(knee.copy(), bounds, plane, verdict, survivors)


def find_knee(front, epsilon: float | None = None) -> np.ndarray:
    return locate_knee(front, epsilon).knee


def compute_preference_region(knee, worst, shrink: float = REGION_SHRINK) -> PreferenceRegion:
    """Box from the origin to knee + (L - knee) * 85% in every objective."""
    knee = np.asarray(knee, dtype=float)
    worst = np.asarray(worst, dtype=float)
    if knee.shape != worst.shape:
        raise ContractViolation("knee and worst point differ in length")
    if np.any(knee > worst):
        raise ContractViolation(f"knee {knee} lies beyond the worst point {worst}")
    upper = knee + (worst - knee) * shrink
    return PreferenceRegion(knee.copy(), upper, np.zeros_like(knee))


def knee_distances(points, region: PreferenceRegion) -> np.ndarray:
    F = as_objective_matrix(points)
    return np.sqrt(((F - region.knee) ** 2).sum(axis=1))


def knee_distance(x, region: PreferenceRegion) -> float:
    """Euclidean distance from x to the region's knee in raw objective space."""
    return float(knee_distances(np.asarray(x, dtype=float).reshape(1, -1), region)[0])


def first_enum_p(config) -> int:
    """Evaluation count at which the first region is built."""
    if config.first_region_at is not None:
        return int(config.first_region_at)
    return math.floor(round(config.learning_fraction * config.total_budget, 6))


def region_step(config) -> int:
    if config.region_interval is not None:
        return int(config.region_interval)
    decision_budget = round(config.total_budget * (1.0 - config.learning_fraction), 6)
    return max(1, math.floor(decision_budget / config.region_updates))


def update_enum_p(current: int, config) -> int:
    """
    Next region-build threshold after `current`.

    The threshold that would first pass total_budget - population_size is pulled
    back onto it, so the last build still leaves a generation to exploit its region.
    """
    if current < first_enum_p(config):
        raise ContractViolation(
            f"threshold {current} precedes the first region build at {first_enum_p(config)}"
        )
    following = current + region_step(config)
    last_build = config.total_budget - config.population_size
    if current < last_build < following:
        following = last_build
    return following
