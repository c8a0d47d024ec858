"""Survival probability of ``X_W``.

The per-type survival probabilities are the maximal solution of
``s_i = 1 - exp(-sum_j w[i][j] mu[j] s_j)``.  Which types survive with positive
probability is decided structurally first: a type survives iff it can reach,
in the support graph, a strongly connected class whose mean-offspring block
has spectral radius above one.  All other types get ``s_i = 0`` exactly and
the fixed-point iteration, started from ``s = 1``, runs on the rest.
"""

import logging
import math
from typing import NamedTuple

import networkx as nx
import numpy as np
from scipy.optimize import brentq

from app.errors import BudgetExceededError, KernelError
from app.services.kernels.step_kernel import StepAkernel

logger = logging.getLogger(__name__)

# Spectral radius must exceed 1 by more than this to count as supercritical.
_CRITICAL_SLACK = 1e-12

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITER = 100_000


class SurvivalResult(NamedTuple):
    gamma: float
    s: tuple[float, ...]
    residual: float
    iterations: int


def surviving_types(means: np.ndarray) -> np.ndarray:
    """Boolean mask of types with positive survival probability."""
    n = means.shape[0]
    support = nx.DiGraph()
    support.add_nodes_from(range(n))
    support.add_edges_from((i, j) for i in range(n) for j in range(n) if means[i, j] > 0)

    alive = np.zeros(n, dtype=bool)
    for block in nx.strongly_connected_components(support):
        members = sorted(block)
        radius = float(np.max(np.abs(np.linalg.eigvals(means[np.ix_(members, members)]))))
        if radius > 1 + _CRITICAL_SLACK:
            for node in members:
                alive[node] = True
                alive[list(nx.ancestors(support, node))] = True
    return alive


def survival(
    kernel: StepAkernel,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SurvivalResult:
    """Return ``gamma = sum_i mu[i] s_i`` and the per-type vector ``s``."""
    if tol <= 0:
        raise KernelError(f"tolerance must be positive, got {tol}")
    means = kernel.offspring_means()
    alive = surviving_types(means)
    s = alive.astype(float)
    residual = 0.0
    for iteration in range(max_iter + 1):
        image = np.where(alive, -np.expm1(-(means @ s)), 0.0)
        residual = float(np.max(np.abs(image - s)))
        if residual <= tol:
            gamma = float(kernel.mu_array() @ s)
            logger.debug("Survival converged", extra={"iterations": iteration, "gamma": gamma})
            return SurvivalResult(gamma, tuple(float(x) for x in s), residual, iteration)
        s = image
    raise BudgetExceededError(
        f"survival iteration did not reach tolerance {tol} in {max_iter} steps",
        details={"residual": residual, "iterations": max_iter},
    )


def poisson_survival_reference(d: float) -> float:
    """Survival probability of a ``Poisson(d)`` Galton-Watson tree by root bracketing."""
    if d <= 1:
        return 0.0
    return float(brentq(lambda s: -math.expm1(-d * s) - s, 1e-12, 1.0, xtol=1e-15))
