# src/variation.py
#
# Real-coded variation for the continuous benchmark problems: bounded simulated
# binary crossover and polynomial mutation in Deb's formulation.

import numpy as np

from utilities import ContractViolation

DEFAULT_ETA_C = 15.0
DEFAULT_ETA_M = 20.0
DEFAULT_CROSSOVER_RATE = 0.9
VARIABLE_SWAP_PROBABILITY = 0.5

# Parent genes closer than this are copied through unchanged.
_GENE_EPSILON = 1e-14


def _bounds(size: int, lower, upper) -> tuple[np.ndarray, np.ndarray]:
    lower = np.broadcast_to(np.asarray(0.0 if lower is None else lower, dtype=float), (size,))
    upper = np.broadcast_to(np.asarray(1.0 if upper is None else upper, dtype=float), (size,))
    if np.any(upper <= lower):
        raise ContractViolation("every upper bound must exceed its lower bound")
    return lower, upper


def _spread_factor(beta: np.ndarray, u: np.ndarray, eta: float) -> np.ndarray:
    alpha = 2.0 - np.power(beta, -(eta + 1.0))
    exponent = 1.0 / (eta + 1.0)
    inside = u <= 1.0 / alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        low = np.power(u * alpha, exponent)
        high = np.power(1.0 / (2.0 - u * alpha), exponent)
    return np.where(inside, low, high)


def sbx_crossover(
    a,
    b,
    rng: np.random.Generator,
    eta_c: float = DEFAULT_ETA_C,
    lower=None,
    upper=None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Simulated binary crossover with bounded spread.

    Each variable is recombined with probability 0.5; results are clamped to
    [lower, upper] (default [0, 1]).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ContractViolation("parents must have the same number of variables")
    lower, upper = _bounds(a.size, lower, upper)

    child1 = a.copy()
    child2 = b.copy()

    active = rng.random(a.size) <= VARIABLE_SWAP_PROBABILITY
    active &= np.abs(a - b) > _GENE_EPSILON
    u = rng.random(a.size)
    swap = rng.random(a.size) < 0.5
    if not active.any():
        return child1, child2

    y1 = np.minimum(a, b)[active]
    y2 = np.maximum(a, b)[active]
    lo = lower[active]
    hi = upper[active]
    ua = u[active]
    gap = y2 - y1

    beta_low = 1.0 + 2.0 * (y1 - lo) / gap
    c1 = 0.5 * ((y1 + y2) - _spread_factor(beta_low, ua, eta_c) * gap)
    beta_high = 1.0 + 2.0 * (hi - y2) / gap
    c2 = 0.5 * ((y1 + y2) + _spread_factor(beta_high, ua, eta_c) * gap)

    c1 = np.clip(c1, lo, hi)
    c2 = np.clip(c2, lo, hi)
    swapped = swap[active]
    child1[active] = np.where(swapped, c2, c1)
    child2[active] = np.where(swapped, c1, c2)
    return child1, child2


def polynomial_mutation(
    x,
    rng: np.random.Generator,
    eta_m: float = DEFAULT_ETA_M,
    p_m: float | None = None,
    lower=None,
    upper=None,
) -> np.ndarray:
    """
    Polynomial mutation; every gene mutates independently with probability p_m
    (default 1 / len(x)). The mutant is clamped to the bounds.
    """
    x = np.asarray(x, dtype=float)
    lower, upper = _bounds(x.size, lower, upper)
    if p_m is None:
        p_m = 1.0 / x.size if x.size else 0.0

    mutant = x.copy()
    mask = rng.random(x.size) < p_m
    r = rng.random(x.size)
    if not mask.any():
        return mutant

    y = x[mask]
    lo = lower[mask]
    hi = upper[mask]
    rm = r[mask]
    span = hi - lo
    delta1 = (y - lo) / span
    delta2 = (hi - y) / span
    power = 1.0 / (eta_m + 1.0)

    downward = rm < 0.5
    xy_low = 1.0 - delta1
    val_low = 2.0 * rm + (1.0 - 2.0 * rm) * np.power(xy_low, eta_m + 1.0)
    xy_high = 1.0 - delta2
    val_high = 2.0 * (1.0 - rm) + 2.0 * (rm - 0.5) * np.power(xy_high, eta_m + 1.0)
    with np.errstate(invalid="ignore"):
        deltaq = np.where(
            downward,
            np.power(val_low, power) - 1.0,
            1.0 - np.power(val_high, power),
        )

    mutant[mask] = np.clip(y + deltaq * span, lo, hi)
    return mutant
