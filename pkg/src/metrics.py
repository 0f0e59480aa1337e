# src/metrics.py

"""Exact hypervolume and the knee-relation checks used to compare paired runs."""

import enum
from dataclasses import dataclass

import numpy as np

from preference import PreferenceRegion
from ranking_utils import domination_matrix
from utilities import ContractViolation, as_objective_matrix


def _effective_points(points, ref: np.ndarray) -> np.ndarray:
    F = as_objective_matrix(points)
    if F.size == 0:
        return np.empty((0, ref.size))
    if F.shape[1] != ref.size:
        raise ContractViolation(
            f"points have {F.shape[1]} objectives, reference point has {ref.size}"
        )
    return F[np.all(F < ref, axis=1)]


def _hypervolume_2d(F: np.ndarray, ref: np.ndarray) -> float:
    order = np.lexsort((F[:, 1], F[:, 0]))
    volume, floor = 0.0, ref[1]
    for x, y in F[order]:
        if y < floor:
            volume += (ref[0] - x) * (floor - y)
            floor = y
    return volume


def _hypervolume_3d(F: np.ndarray, ref: np.ndarray) -> float:
    # Slabs between consecutive distinct third-objective values, each a 2-D staircase.
    levels = np.unique(F[:, 2])
    tops = np.append(levels[1:], ref[2])
    volume = 0.0
    for level, top in zip(levels, tops):
        volume += _hypervolume_2d(F[F[:, 2] <= level, :2], ref[:2]) * (top - level)
    return volume


def hypervolume(points, ref) -> float:
    """
    Lebesgue measure of the region dominated by `points` and bounded by `ref`.
    Points not strictly better than `ref` in every objective contribute nothing.
    """
    ref = np.asarray(ref, dtype=float).ravel()
    if ref.size > 3:
        raise ContractViolation("hypervolume is only provided for up to three objectives")
    F = _effective_points(points, ref)
    if F.shape[0] == 0:
        return 0.0
    if ref.size == 1:
        return float(ref[0] - F[:, 0].min())
    if ref.size == 2:
        return float(_hypervolume_2d(F, ref))
    return float(_hypervolume_3d(F, ref))


def restrict_to_region(points, region: PreferenceRegion) -> np.ndarray:
    F = as_objective_matrix(points)
    if F.size == 0:
        return np.empty((0, region.upper_bound.size))
    return F[region.contains(F)]


class Relation(str, enum.Enum):
    INCOMPARABLE = "Incomparable"
    DOMINATED = "Dominated"
    DOMINATING = "Dominating"


@dataclass(frozen=True)
class RegionComparison:
    knee_in_region: bool
    relation: Relation
    # how many comparison-set members dominate the knee, and how many it dominates
    dominated_by: int = 0
    dominates: int = 0


def classify_knee_relation(knee, ap_set, region: PreferenceRegion) -> RegionComparison:
    """Where a knee sits relative to a preference region and a non-dominated set."""
    knee = np.asarray(knee, dtype=float).ravel()
    F = as_objective_matrix(ap_set)
    if F.size == 0:
        F = np.empty((0, knee.size))
    if F.shape[1] != knee.size:
        raise ContractViolation(f"knee has {knee.size} objectives, comparison set has {F.shape[1]}")
    if domination_matrix(F).any():
        raise ContractViolation("the comparison set is not mutually non-dominated")

    no_worse = np.all(F <= knee, axis=1) & np.any(F < knee, axis=1)
    no_better = np.all(knee <= F, axis=1) & np.any(knee < F, axis=1)
    dominated_by, dominating = int(no_worse.sum()), int(no_better.sum())
    if dominated_by and dominating:
        raise ContractViolation("the knee is both dominated by and dominating the comparison set")

    if dominated_by:
        relation = Relation.DOMINATED
    elif dominating:
        relation = Relation.DOMINATING
    else:
        relation = Relation.INCOMPARABLE
    return RegionComparison(
        knee_in_region=bool(region.contains(knee)[0]),
        relation=relation,
        dominated_by=dominated_by,
        dominates=dominating,
    )
