"""Self-contained invariant suite behind ``discordlab check``."""
from __future__ import annotations

import numpy as np

from . import factories as fac
from .gaussian import (
    TwoModeCovariance,
    gaussian_rescaled_discord,
    random_covariance,
    squeezed_thermal_rescaled_discord,
)
from .hierarchy import sample_states
from .measures import (
    adjusted_discord,
    beta,
    entropic_discord,
    geometric_discord_2xd,
    geometric_discord_numeric,
    hierarchy_gap,
    hs_objective,
    rescaled_discord,
    rescaled_discord_lower_bound,
    rescaled_discord_numeric,
    rescaled_objective,
)
from .states import (
    DensityMatrix,
    hs_norm,
    partial_trace,
    product_state,
    purity,
    random_state,
    rescaled_distance,
)


def _n(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def check_metric(seed, scale):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(_n(500, scale)):
        da, db = [(2, 2), (2, 3), (3, 3)][i % 3]
        r1, r2, r3 = (random_state(da, db, seed=rng) for _ in range(3))
        d12, d23, d13 = rescaled_distance(r1, r2), rescaled_distance(r2, r3), rescaled_distance(r1, r3)
        if rescaled_distance(r2, r1) != d12 or rescaled_distance(r1, r1) > 1e-12:
            return False, "symmetry or identity failed"
        worst = max(worst, d13 - d12 - d23)
        if hs_norm(r1.mat - r2.mat) > np.sqrt(purity(r1)) + np.sqrt(purity(r2)):
            return False, "purity bound violated"
    return worst <= 1e-12, f"max triangle excess {worst:.3g}"


def check_partial_trace(seed, scale):
    worst = 0.0
    for i in range(_n(50, scale)):
        a = random_state(2, 1, seed=seed + 2 * i).mat
        b = random_state(3, 1, seed=seed + 2 * i + 1).mat
        worst = max(worst, np.max(np.abs(partial_trace(product_state(a, b), "B").mat - a)))
    return worst <= 1e-12, f"max deviation {worst:.3g}"


def check_closed_form(seed, scale):
    worst = 0.0
    for i in range(_n(20, scale)):
        rho = random_state(2, 2 + i % 2, seed=seed + i)
        worst = max(worst, abs(geometric_discord_2xd(rho).value - geometric_discord_numeric(rho).value))
    return worst <= 1e-6, f"max |closed - numeric| {worst:.3g}"


def check_rescaling_identity(seed, scale):
    worst = 0.0
    for i in range(_n(20, scale)):
        rho = random_state(2, 2 + i % 2, seed=seed + 100 + i)
        formula = rescaled_discord(rho, geometric_discord_2xd(rho).value)
        direct = rescaled_discord_numeric(rho)
        worst = max(worst, abs(formula - direct.value))
        hs_best = geometric_discord_numeric(rho).measurement
        cross = beta(2) * rescaled_objective(rho, hs_best) - direct.value
        worst = max(worst, abs(cross))
    return worst <= 1e-7, f"max deviation {worst:.3g}"


def check_bell(seed, scale):
    v = np.zeros(4)
    v[[0, 3]] = 1 / np.sqrt(2)
    rho = DensityMatrix(np.outer(v, v), 2, 2)
    dg = geometric_discord_2xd(rho).value
    dt = rescaled_discord(rho, dg)
    return abs(dg - 1) <= 1e-9 and abs(dt - 1) <= 1e-9, f"D_G={dg!r} D_T={dt!r}"


def check_ancilla(seed, scale):
    worst = 0.0
    for i in range(_n(30, scale)):
        rho = random_state(2, 2, seed=seed + 200 + i)
        tau = random_state(2 + i % 2, 1, seed=seed + 300 + i).mat
        big = DensityMatrix(np.kron(rho.mat, tau), 2, 2 * tau.shape[0])
        dg, dg_big = geometric_discord_2xd(rho).value, geometric_discord_2xd(big).value
        worst = max(worst, abs(adjusted_discord(big, dg_big) - adjusted_discord(rho, dg)))
        worst = max(worst, abs(dg_big - dg * np.vdot(tau, tau).real))
    return worst <= 1e-8, f"max deviation {worst:.3g}"


def check_dqc1(seed, scale):
    rows = []
    for n in range(2, 7):
        rho = fac.dqc1_output_state(fac.DQC1Config(0.5, n, "traceless", seed + n))
        dg = geometric_discord_2xd(rho).value
        rows.append((dg, adjusted_discord(rho, dg), rescaled_discord(rho, dg)))
    ratio = max(abs(rows[k + 1][0] / rows[k][0] - 0.5) for k in range(4))
    spread_t = np.ptp([r[2] for r in rows])
    adj = max(abs(r[1] - 0.2) for r in rows)
    ok = ratio <= 1e-6 and spread_t <= 1e-6 and adj <= 1e-6
    return ok, f"ratio dev {ratio:.3g}, D_T spread {spread_t:.3g}, D_adj dev {adj:.3g}"


def check_werner_zeros(seed, scale):
    worst = 0.0
    for d in (2, 3):
        rho = fac.werner_state((d - 1) / (2 * d), d)
        dg = geometric_discord_numeric(rho).value
        worst = max(worst, dg, rescaled_discord(rho, dg), entropic_discord(rho).value)
    return worst <= 1e-6, f"max measure {worst:.3g}"


def check_classical_quantum(seed, scale):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(_n(5, scale)):
        states = [random_state(3, 1, seed=rng).mat for _ in range(2)]
        p = rng.uniform(0.1, 0.9)
        chi = fac.classical_quantum_state([p, 1 - p], states)
        dg = geometric_discord_numeric(chi).value
        worst = max(worst, dg, entropic_discord(chi).value, rescaled_discord(chi, dg))
    return worst <= 1e-6, f"max measure {worst:.3g}"


def check_hierarchy(seed, scale):
    gaps = [hierarchy_gap(r).gap for r in sample_states(2, _n(1000, scale), seed)]
    return min(gaps) >= -1e-9, f"min gap {min(gaps):.3g}"


def check_lower_bound(seed, scale):
    worst = -np.inf
    for i in range(_n(5, scale)):
        rho = random_state(3, 3, seed=seed + 400 + i)
        worst = max(worst, rescaled_discord_lower_bound(rho) - rescaled_discord_numeric(rho).value)
    return worst <= 1e-8, f"max (lower bound - value) {worst:.3g}"


def check_gaussian(seed, scale):
    worst = 0.0
    for i in range(_n(20, scale)):
        cov = random_covariance(seed + i, squeezed_thermal=True)
        cf = squeezed_thermal_rescaled_discord(cov.a, cov.b, cov.c)
        worst = max(worst, abs(cf - gaussian_rescaled_discord(cov).value))
    c = np.sqrt(8.0)
    tmsv = gaussian_rescaled_discord(TwoModeCovariance(3, 3, c, -c)).value
    ok = worst <= 1e-4 and abs(tmsv - 0.5) <= 1e-6
    return ok, f"max residual {worst:.3g}, squeezed vacuum {tmsv:.9f}"


def check_hs_objective_sign(seed, scale):
    rho = random_state(3, 2, seed=seed)
    val = hs_objective(rho, np.eye(3))
    return val >= -1e-12, f"Q_HS={val:.3g}"


CHECKS = [
    ("metric_axioms", check_metric),
    ("partial_trace_product", check_partial_trace),
    ("closed_form_vs_numeric", check_closed_form),
    ("rescaling_identity", check_rescaling_identity),
    ("bell_normalisation", check_bell),
    ("ancilla_invariance", check_ancilla),
    ("dqc1_dimension_independence", check_dqc1),
    ("werner_zeros", check_werner_zeros),
    ("classical_quantum_zeros", check_classical_quantum),
    ("hierarchy_dB2", check_hierarchy),
    ("lower_bound", check_lower_bound),
    ("gaussian_closed_form", check_gaussian),
    ("hs_objective_nonnegative", check_hs_objective_sign),
]


def run_checks(seed: int = 0, scale: float = 1.0):
    """Run every check; returns ``[(name, passed, detail), ...]``."""
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(seed, scale)
        except Exception as err:  # a crash counts as a failure
            ok, detail = False, f"{type(err).__name__}: {err}"
        out.append((name, bool(ok), detail))
    return out
