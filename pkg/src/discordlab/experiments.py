"""Sweeps behind the CLI subcommands.

Each driver returns ``(columns, rows, summary)``; rows are tuples in
column order, sorted by parameter index.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import factories as fac
from .gaussian import (
    gaussian_purity,
    gaussian_rescaled_discord,
    random_covariance,
    squeezed_thermal_rescaled_discord,
)
from .hierarchy import sample_states
from .measures import (
    adjusted_discord,
    alpha,
    conditional_entropy,
    entropic_discord,
    geometric_discord_2xd,
    hierarchy_gap,
    hs_objective,
    rescaled_discord,
)
from .optimize import OptimizerConfig
from .states import (
    ProjectiveMeasurement,
    reduced_matrix,
    state_from_factor,
    von_neumann_entropy,
)
from .hierarchy import random_factor

THREADS_ENV = "DISCORDLAB_THREADS"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Ordered map, threaded up to ``DISCORDLAB_THREADS`` workers."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def point_seeds(seed: int, count: int) -> list[int]:
    """Independent per-point seeds derived from ``(seed, index)``."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


# ---------------------------------------------------------------------------


DQC1_COLUMNS = ("mu", "n", "D_entropic_exact", "D_entropic_approx", "D_G", "D_adj", "D_T")


def dqc1(points, unitary="traceless", seed=0, cfg=None, exact=True):
    """DQC1 measures at each ``(mu, n)`` point."""
    points = list(points)
    seeds = point_seeds(seed, len(points))

    def run(job):
        (mu, n), s = job
        rho = fac.dqc1_output_state(fac.DQC1Config(mu, n, unitary, s))
        dg = geometric_discord_2xd(rho).value
        ent = entropic_discord(rho, cfg).value if exact else float("nan")
        approx = fac.dqc1_entropic_approx(mu) if mu > 0 else float("nan")
        return (mu, n, ent, approx, dg, adjusted_discord(rho, dg), rescaled_discord(rho, dg))

    rows = parallel_map(run, zip(points, seeds))
    dts = [r[6] for r in rows]
    summary = {"points": len(rows), "D_T_spread": float(np.ptp(dts)) if rows else 0.0}
    return DQC1_COLUMNS, rows, summary


WERNER_COLUMNS = ("lambda", "d", "D_entropic", "D_G", "D_adj", "D_T")


def werner_measures(lam: float, d: int) -> tuple[float, float]:
    """Entropic and geometric discord of a Werner state.

    ``U (x) U`` invariance makes every local basis on A equivalent (any
    rotation of A is undone by a unitary on B, which leaves both objectives
    unchanged), so the computational basis is optimal.
    """
    rho = fac.werner_state(lam, d)
    basis = ProjectiveMeasurement.computational(d)
    dg = alpha(d) * hs_objective(rho, basis)
    ent = (
        von_neumann_entropy(reduced_matrix(rho, "B"))
        - von_neumann_entropy(rho)
        + conditional_entropy(rho, basis)
    )
    return max(ent, 0.0), max(dg, 0.0)


def werner(lams, dims):
    """Werner measures on the ``lams`` grid for each ``d``.

    The zero-discord point ``(d - 1) / (2d)`` is added whenever it lies
    inside the swept range, so the sweep always resolves it.
    """
    lams = list(lams)
    lo, hi = min(lams), max(lams)
    points = []
    for d in dims:
        grid = set(lams)
        zero = (d - 1) / (2 * d)
        if lo <= zero <= hi and not np.any(np.isclose(lams, zero, rtol=0, atol=1e-12)):
            grid.add(zero)
        points.extend((lam, d) for lam in sorted(grid))

    def run(pt):
        lam, d = pt
        rho = fac.werner_state(lam, d)
        ent, dg = werner_measures(lam, d)
        return (lam, d, ent, dg, adjusted_discord(rho, dg), rescaled_discord(rho, dg))

    rows = parallel_map(run, points)
    return WERNER_COLUMNS, rows, {"points": len(rows)}


HIERARCHY_COLUMNS = ("negativity", "D_T", "bound", "gap")


def hierarchy(dim_b: int, samples: int, seed: int):
    rows = []
    for rho in sample_states(dim_b, samples, seed):
        h = hierarchy_gap(rho)
        rows.append((h.n, h.dT, h.bound, h.gap))
    gaps = [r[3] for r in rows]
    summary = {
        "min_gap": float(min(gaps)),
        "violations": int(sum(g < -1e-9 for g in gaps)),
        "samples": len(rows),
        "dB": dim_b,
    }
    return HIERARCHY_COLUMNS, rows, summary


SCATTER_COLUMNS = ("D_entropic", "D_T")


def scatter2q(samples: int, seed: int, cfg=None):
    """Random two-qubit states (ranks 1..4) scored by entropic and rescaled discord."""
    seeds = point_seeds(seed, samples)

    def run(s):
        rng = np.random.default_rng(s)
        rho = state_from_factor(random_factor(4, rng), 2, 2)
        dg = geometric_discord_2xd(rho).value
        return (entropic_discord(rho, cfg).value, rescaled_discord(rho, dg))

    rows = parallel_map(run, seeds)
    return SCATTER_COLUMNS, rows, {"samples": len(rows)}


GAUSSIAN_COLUMNS = ("a", "b", "c", "d", "purity", "D_T_gaussian")


def gaussian(samples: int, seed: int, cfg=None):
    seeds = point_seeds(seed, samples)

    def run(s):
        cov = random_covariance(s)
        res = gaussian_rescaled_discord(cov, cfg)
        return (cov.a, cov.b, cov.c, cov.d, gaussian_purity(cov), res.value)

    rows = parallel_map(run, seeds)
    return GAUSSIAN_COLUMNS, rows, {"samples": len(rows)}


STS_COLUMNS = ("a", "b", "c", "closed_form", "numeric", "residual")


def gaussian_sts(samples: int, seed: int, cfg=None):
    seeds = point_seeds(seed, samples)

    def run(s):
        cov = random_covariance(s, squeezed_thermal=True)
        cf = squeezed_thermal_rescaled_discord(cov.a, cov.b, cov.c)
        num = gaussian_rescaled_discord(cov, cfg).value
        return (cov.a, cov.b, cov.c, cf, num, num - cf)

    rows = parallel_map(run, seeds)
    res = [abs(r[5]) for r in rows]
    return STS_COLUMNS, rows, {"samples": len(rows), "max_abs_residual": float(max(res, default=0.0))}


QUBITOSC_COLUMNS = ("p", "r", "D_entropic", "D_G", "D_T")


def qubitosc(p_values, r_fractions, beta: complex, nbar: float, cutoff=None, cfg=None):
    """Grid over ``p`` and ``r = f sqrt(p(1-p))`` at fixed displacement and temperature."""
    points = [(p, f * np.sqrt(p * (1 - p))) for p in p_values for f in r_fractions]

    def run(pt):
        p, r = pt
        st = fac.qubit_oscillator_state(fac.QubitOscConfig(p, r, beta, nbar, cutoff))
        dg = geometric_discord_2xd(st.rho).value
        ent = entropic_discord(st.rho, cfg).value
        return (p, r, ent, dg, rescaled_discord(st.rho, dg))

    rows = parallel_map(run, points)
    return QUBITOSC_COLUMNS, rows, {"points": len(rows)}
