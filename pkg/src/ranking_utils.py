# src/ranking_utils.py

import numpy as np

from utilities import ContractViolation, as_objective_matrix

# Nearest-neighbour gaps below this are treated as this, so duplicates stay finite in log space.
GAP_FLOOR = 1e-12


def dominates(a, b) -> bool:
    """True iff a is no worse than b everywhere and strictly better somewhere (minimisation)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ContractViolation(
            f"cannot compare objective vectors of length {a.size} and {b.size}"
        )
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(points) -> np.ndarray:
    """Boolean matrix M with M[i, j] == True when point i dominates point j."""
    F = as_objective_matrix(points)
    no_worse = (F[:, None, :] <= F[None, :, :]).all(axis=-1)
    better = (F[:, None, :] < F[None, :, :]).any(axis=-1)
    return no_worse & better


def fast_nondominated_sort(points) -> list[list[int]]:
    """
    Layers points into dominance fronts.

    Returns a list of fronts, each a list of indices into `points` in ascending
    (input) order. Front 0 is the non-dominated set.
    """
    F = as_objective_matrix(points)
    n = F.shape[0]
    if n == 0:
        return []

    dominated_by = domination_matrix(F)
    counts = dominated_by.sum(axis=0)
    remaining = np.ones(n, dtype=bool)

    fronts = []
    while remaining.any():
        current = np.flatnonzero(remaining & (counts == 0))
        fronts.append(current.tolist())
        remaining[current] = False
        counts = counts - dominated_by[current].sum(axis=0)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """
    NSGA-II crowding distance of every point of a (mutually non-dominated) front.

    Boundary points of each objective get +inf. An objective whose values are all
    equal contributes nothing, boundaries included.
    """
    F = as_objective_matrix(front)
    n = F.shape[0]
    if n <= 2:
        return np.full(n, np.inf)

    distances = np.zeros(n)
    for column in F.T:
        order = np.argsort(column, kind="stable")
        ordered = column[order]
        span = ordered[-1] - ordered[0]
        if span <= 0:
            continue
        distances[order[0]] = np.inf
        distances[order[-1]] = np.inf
        distances[order[1:-1]] += (ordered[2:] - ordered[:-2]) / span
    return distances


def _pairwise_distances(F: np.ndarray) -> np.ndarray:
    diff = F[:, None, :] - F[None, :, :]
    distances = np.sqrt((diff * diff).sum(axis=-1))
    np.fill_diagonal(distances, np.inf)
    return distances


def geometric_mean_gap(points) -> float:
    """
    Geometric mean, over all points, of the Euclidean distance to the nearest other point.

    Larger means a more evenly spread set. Sets with fewer than two points score 0.
    """
    F = as_objective_matrix(points)
    if F.shape[0] < 2:
        return 0.0
    gaps = np.maximum(_pairwise_distances(F).min(axis=1), GAP_FLOOR)
    return float(np.exp(np.log(gaps).mean()))


def diversity_contribution(points) -> np.ndarray:
    """
    Leave-one-out contribution of every point to the geometric mean gap.

    contribution[p] = gap(S) - gap(S without p). A point whose removal would spread
    the set out (a duplicate, a crowded point) gets the lowest value.
    """
    F = as_objective_matrix(points)
    n = F.shape[0]
    if n < 2:
        return np.full(n, np.inf)

    distances = _pairwise_distances(F)
    if n == 2:
        # a single survivor has no neighbour, so its set scores 0
        return np.full(n, max(float(distances[0, 1]), GAP_FLOOR))

    rows = np.arange(n)
    # column 0 holds the nearest neighbour, column 1 the second nearest
    nearest = np.argpartition(distances, 1, axis=1)[:, :2]
    log_first = np.log(np.maximum(distances[rows, nearest[:, 0]], GAP_FLOOR))
    log_second = np.log(np.maximum(distances[rows, nearest[:, 1]], GAP_FLOOR))
    full = np.exp(log_first.mean())

    # removing p moves every q whose nearest neighbour was p onto its second nearest;
    # tied neighbours carry zero weight, so either can stand first
    adjustment = np.bincount(nearest[:, 0], weights=log_second - log_first, minlength=n)
    log_sums = log_first.sum() - log_first + adjustment
    without = np.exp(log_sums / (n - 1))
    return full - without
