"""Rescaled discord versus negativity for qubit-qudit states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError
from .measures import hierarchy_gap, negativity_bound, rescaled_discord_numeric
from .optimize import OptimizerConfig
from .states import DensityMatrix, partial_transpose, state_from_factor, trace_norm

VIOLATION_THRESHOLD = -1e-6
PERTURBATION = 0.05
PATIENCE = 30

VERIFY_CONFIG = OptimizerConfig(tol=1e-12, grid_resolution=96, multistarts=4)


def random_factor(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Complex Ginibre factor with ``rank`` columns (uniform in [1, dim] if omitted)."""
    rank = int(rng.integers(1, dim + 1)) if rank is None else rank
    return rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))


def sample_states(dim_b: int, samples: int, seed: int, dim_a: int = 2):
    """Yield ``samples`` random states with ranks drawn uniformly from [1, dA dB]."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        yield state_from_factor(random_factor(dim_a * dim_b, rng), dim_a, dim_b)


@dataclass(frozen=True)
class Violation:
    rho: DensityMatrix
    gap: float
    verified_gap: float


def verify_gap(rho: DensityMatrix) -> float:
    """Recompute the gap by direct measurement search and the B-side partial transpose."""
    dt = rescaled_discord_numeric(rho, VERIFY_CONFIG).value
    n = (trace_norm(partial_transpose(rho, "B")) - 1) / (rho.dim_a - 1)
    return dt - negativity_bound(max(n, 0.0))


def violation_search(dim_b: int, seed: int = 0, budget: int = 100_000) -> list[Violation]:
    """Hunt for states below the pure-state curve ``D_T >= f(N)``.

    Random restarts (uniform rank) are followed by greedy descent on the
    gap under Gaussian perturbations of the Ginibre factor; a restart ends
    after ``PATIENCE`` rejected moves. ``budget`` counts gap evaluations.
    Candidates with gap below ``-1e-6`` are re-verified independently.
    """
    if dim_b < 1:
        raise InvalidParameterError("dim_b must be positive")
    if budget < 1:
        raise InvalidParameterError("budget must be positive")
    rng = np.random.default_rng(seed)
    dim = 2 * dim_b
    found = []
    used = 0
    while used < budget:
        g = random_factor(dim, rng)
        cur = hierarchy_gap(state_from_factor(g, 2, dim_b)).gap
        used += 1
        fails = 0
        while fails < PATIENCE and used < budget:
            step = PERTURBATION * (rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
            trial = g + step
            val = hierarchy_gap(state_from_factor(trial, 2, dim_b)).gap
            used += 1
            if val < cur:
                g, cur, fails = trial, val, 0
            else:
                fails += 1
        if cur < VIOLATION_THRESHOLD:
            rho = state_from_factor(g, 2, dim_b)
            checked = verify_gap(rho)
            if checked < VIOLATION_THRESHOLD:
                found.append(Violation(rho, float(cur), float(checked)))
    return found
