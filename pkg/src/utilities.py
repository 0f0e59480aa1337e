import logging
import os

import numpy as np
from dotenv import load_dotenv
from rich.logging import RichHandler


LOG_LEVEL_VARIABLE = "APDI_LOG_LEVEL"


class ContractViolation(ValueError):
    """Raised when a caller breaks the documented preconditions of an operation."""


class ArtifactError(RuntimeError):
    """Raised when run artifacts on disk are missing, malformed or cannot be paired."""


def configure_logging(level: str | None = None) -> None:
    """
    Installs a rich console handler on the root logger.

    The level comes from the argument, then from APDI_LOG_LEVEL (a .env file is
    honoured), then defaults to INFO. Logging never changes any run result.
    """
    load_dotenv()
    level_name = (level or os.getenv(LOG_LEVEL_VARIABLE, "INFO")).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )


def spawn_streams(seed: int, count: int = 2) -> list[np.random.Generator]:
    """
    Splits one run seed into independent generators.

    Stream 0 drives evolution, stream 1 freezes the Monte Carlo due-date samples.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def as_objective_matrix(points) -> np.ndarray:
    """Coerces a sequence of objective vectors into a 2-D float array (rows are points)."""
    matrix = np.asarray(points, dtype=float)
    if matrix.ndim == 1:
        if matrix.size == 0:
            return matrix.reshape(0, 0)
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise ContractViolation(f"expected a list of objective vectors, got shape {matrix.shape}")
    return matrix
