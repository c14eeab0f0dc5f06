"""Minimisation over rank-1 projective measurements on subsystem A.

Qubit measurements are parametrised by Bloch angles and seeded from a
dense (theta, phi) grid; higher dimensions use ``U = exp(i sum_k x_k G_k)``
over the generalised Gell-Mann matrices with random multistarts. Local
refinement is Nelder-Mead from scipy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .exceptions import InvalidParameterError, OptimizerError
from .states import ProjectiveMeasurement

# elements per batched evaluation chunk
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the measurement search.

    Attributes
    ----------
    multistarts : int
        Random starts for dA > 2; for qubits, the number of best grid
        cells refined (capped at 4).
    tol : float
        Absolute objective tolerance of the simplex refinement.
    max_iters : int
        Iteration cap per simplex run.
    grid_resolution : int
        Points per Bloch angle in the qubit pre-scan.
    seed : int
        Seed for the random starts.
    """

    multistarts: int = 24
    tol: float = 1e-8
    max_iters: int = 2000
    grid_resolution: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.multistarts < 1 or self.max_iters < 1 or self.grid_resolution < 1:
            raise InvalidParameterError("optimizer counts must be positive")
        if not self.tol > 0:
            raise InvalidParameterError("tol must be positive")


@dataclass
class SearchResult:
    value: float
    measurement: ProjectiveMeasurement
    evaluations: int
    converged: int


@lru_cache(maxsize=None)
def gell_mann(d: int) -> np.ndarray:
    """Generalised Gell-Mann matrices, shape ``(d*d - 1, d, d)``."""
    gens = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1
            gens.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k], m[k, j] = -1j, 1j
            gens.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        gens.append(np.diag(diag * np.sqrt(2 / (l * (l + 1)))).astype(complex))
    out = np.array(gens)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _gell_mann_flat(d: int) -> np.ndarray:
    return gell_mann(d).reshape(d * d - 1, d * d)


def unitary_from_params(x: np.ndarray, d: int) -> np.ndarray:
    """``exp(i sum_k x_k G_k)`` computed through the Hermitian eigensystem."""
    h = (np.asarray(x) @ _gell_mann_flat(d)).reshape(d, d)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def bloch_basis(theta, phi) -> np.ndarray:
    """Qubit basis with first vector at Bloch angles (theta, phi).

    Broadcasts over array arguments; output shape ``(..., 2, 2)`` with
    columns as basis vectors.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    e = np.exp(1j * phi)
    u = np.empty(np.broadcast(theta, phi).shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -np.conj(e) * s
    u[..., 1, 1] = c
    return u


def _bloch_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    # cell-centred theta avoids duplicating the poles
    theta = (np.arange(n) + 0.5) * np.pi / n
    phi = np.arange(n) * 2 * np.pi / n
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return t.ravel(), p.ravel()


def minimize_measurement(
    objective: Callable[[np.ndarray], float],
    dim_a: int,
    cfg: OptimizerConfig | None = None,
    batch_objective: Callable[[np.ndarray], np.ndarray] | None = None,
    cost_per_point: int = 1,
) -> SearchResult:
    """Minimise ``objective(U)`` over unitaries whose columns form the basis.

    Parameters
    ----------
    objective : callable
        Maps a ``(dA, dA)`` unitary to a real number.
    dim_a : int
        Dimension of the measured subsystem.
    cfg : OptimizerConfig, optional
    batch_objective : callable, optional
        Vectorised form taking ``(K, dA, dA)`` unitaries; used for the
        qubit grid pre-scan.
    cost_per_point : int
        Rough element count of one evaluation, used to chunk the grid.

    Raises
    ------
    OptimizerError
        If none of the refinement runs converged.
    """
    cfg = cfg or OptimizerConfig()
    if dim_a < 2:
        raise InvalidParameterError("measured subsystem must have dimension >= 2")
    evals = 0
    runs = []

    if dim_a == 2:
        t, p = _bloch_grid(cfg.grid_resolution)
        grid_u = bloch_basis(t, p)
        if batch_objective is not None:
            step = max(1, _CHUNK_ELEMENTS // max(cost_per_point, 1))
            vals = np.concatenate(
                [batch_objective(grid_u[i:i + step]) for i in range(0, len(t), step)]
            )
        else:
            vals = np.array([objective(u) for u in grid_u])
        evals += len(t)
        order = np.argsort(vals, kind="stable")[: min(cfg.multistarts, 4)]
        starts = [np.array([t[i], p[i]]) for i in order]

        def f(x):
            return objective(bloch_basis(x[0], x[1]))

        to_unitary = lambda x: bloch_basis(x[0], x[1])  # noqa: E731
        step_size = np.pi / cfg.grid_resolution
    else:
        rng = np.random.default_rng(cfg.seed)
        n = dim_a * dim_a - 1
        starts = [np.zeros(n)] + [
            rng.uniform(-np.pi, np.pi, n) for _ in range(cfg.multistarts - 1)
        ]

        def f(x):
            return objective(unitary_from_params(x, dim_a))

        to_unitary = lambda x: unitary_from_params(x, dim_a)  # noqa: E731
        step_size = 0.5

    for x0 in starts:
        simplex = np.vstack([x0, x0 + step_size * np.eye(len(x0))])
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-9,
                "fatol": cfg.tol * 1e-2,
                "maxiter": cfg.max_iters,
                "maxfev": cfg.max_iters * (len(x0) + 1),
            },
        )
        evals += res.nfev
        runs.append(res)

    converged = sum(bool(r.success) for r in runs)
    if converged == 0:
        raise OptimizerError(f"no start converged within {cfg.max_iters} iterations")
    best = min(runs, key=lambda r: r.fun)
    return SearchResult(
        value=float(best.fun),
        measurement=ProjectiveMeasurement(to_unitary(best.x)),
        evaluations=evals,
        converged=converged,
    )
