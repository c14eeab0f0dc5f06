"""Rescaled discord of two-mode Gaussian states under Gaussian measurements.

Covariance matrices use quadrature ordering (x1, p1, x2, p2) with vacuum
variance 1, so the vacuum covariance is the identity.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .exceptions import InvalidParameterError, OptimizerError, UnphysicalCovarianceError
from .optimize import OptimizerConfig

OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA2 = np.kron(np.eye(2), OMEGA1)

LOG_LAMBDA = (np.log(1e-3), np.log(1e3))
LOG_M = (0.0, np.log(1e3))
GRID_SHAPE = (16, 17, 17)  # theta, log lambda, log m

GAUSSIAN_BETA = 0.5


def is_physical(sigma, tol: float = 1e-10) -> bool:
    """Uncertainty principle ``sigma + i Omega >= 0`` plus positive determinant."""
    sigma = np.asarray(sigma, dtype=float)
    omega = OMEGA1 if sigma.shape == (2, 2) else np.kron(np.eye(sigma.shape[0] // 2), OMEGA1)
    lo = np.linalg.eigvalsh(sigma + 1j * omega)[0]
    return bool(lo >= -tol and np.linalg.det(sigma) > 0)


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Moduli of the eigenvalues of ``i Omega sigma``, one per mode."""
    sigma = np.asarray(sigma, dtype=float)
    omega = np.kron(np.eye(sigma.shape[0] // 2), OMEGA1)
    ev = np.abs(np.linalg.eigvals(1j * omega @ sigma))
    return np.sort(ev)[::2]


@dataclass(frozen=True)
class TwoModeCovariance:
    """Standard-form covariance with blocks ``a I``, ``b I`` and ``diag(c, d)``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a < 1 - 1e-12 or self.b < 1 - 1e-12:
            raise UnphysicalCovarianceError(f"local variances must be >= 1: a={self.a}, b={self.b}")
        if not is_physical(self.matrix):
            raise UnphysicalCovarianceError(
                f"covariance (a={self.a}, b={self.b}, c={self.c}, d={self.d}) is not physical"
            )

    @property
    def matrix(self) -> np.ndarray:
        a, b, c, d = self.a, self.b, self.c, self.d
        return np.array(
            [
                [a, 0, c, 0],
                [0, a, 0, d],
                [c, 0, b, 0],
                [0, d, 0, b],
            ],
            dtype=float,
        )

    @property
    def block_a(self) -> np.ndarray:
        return self.a * np.eye(2)

    @property
    def block_b(self) -> np.ndarray:
        return self.b * np.eye(2)

    @property
    def block_c(self) -> np.ndarray:
        return np.diag([self.c, self.d])

    @property
    def purity(self) -> float:
        return 1 / np.sqrt(np.linalg.det(self.matrix))

    def as_row(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]


@dataclass(frozen=True)
class GaussianPOVMParams:
    """Seed covariance parameters: squeezing ``lam``, thermal factor ``m``, angle ``theta``."""

    lam: float
    m: float
    theta: float

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParameterError(f"lambda must be positive, got {self.lam}")
        if self.m < 1:
            raise InvalidParameterError(f"m must be >= 1, got {self.m}")
        if not 0 <= self.theta < 2 * np.pi:
            raise InvalidParameterError(f"theta must lie in [0, 2pi), got {self.theta}")

    @property
    def seed_covariance(self) -> np.ndarray:
        return seed_covariance(self.lam, self.m, self.theta)


def seed_covariance(lam, m, theta) -> np.ndarray:
    """``R(theta) diag(m lam, m/lam) R(theta)^T``; broadcasts to shape ``(..., 2, 2)``."""
    lam, m, theta = np.broadcast_arrays(
        np.asarray(lam, dtype=float), np.asarray(m, dtype=float), np.asarray(theta, dtype=float)
    )
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty(lam.shape + (2, 2))
    out[..., 0, 0] = m * lam * c**2 + m * s**2 / lam
    out[..., 1, 1] = m * lam * s**2 + m * c**2 / lam
    out[..., 0, 1] = out[..., 1, 0] = -m * (lam**2 - 1) * s * c / lam
    return out


def _as_cov(s) -> np.ndarray:
    return s.matrix if isinstance(s, TwoModeCovariance) else np.asarray(s, dtype=float)


def gaussian_overlap(s1, s2) -> float:
    """``Tr[rho1 rho2] = 1 / sqrt(Det[(s1 + s2) / 2])`` for zero-mean Gaussian states."""
    m1, m2 = _as_cov(s1), _as_cov(s2)
    if m1.shape != m2.shape:
        raise InvalidParameterError(f"mode count mismatch: {m1.shape} vs {m2.shape}")
    det = np.linalg.det((m1 + m2) / 2)
    if det <= 0:
        raise InvalidParameterError("singular covariance sum")
    return float(1 / np.sqrt(det))


def gaussian_purity(sigma) -> float:
    return gaussian_overlap(sigma, sigma)


@dataclass(frozen=True)
class PostMeasurement:
    sigma_a: np.ndarray
    sigma_b: np.ndarray


def post_measurement_covariance(sigma: TwoModeCovariance, povm: GaussianPOVMParams) -> PostMeasurement:
    """Uncorrelated covariance left by a Gaussian measurement with the given seed."""
    sb = povm.seed_covariance
    inner = sigma.block_b + sb
    if abs(np.linalg.det(inner)) < 1e-300:
        raise InvalidParameterError("singular B + sigma_B")
    c = sigma.block_c
    sa = sigma.block_a - c @ np.linalg.solve(inner, c)
    return PostMeasurement(sa, sb)


def _batch_ratio(sigma: TwoModeCovariance, lam, m, theta) -> np.ndarray:
    """``[sqrt(Det sA Det sB) / Det((Sigma + sA + sB)/2)]^{1/2}`` for arrays of parameters."""
    sb = seed_covariance(lam, m, theta)
    a, b = sigma.a, sigma.b
    c = np.array([sigma.c, sigma.d])
    inner = sb.copy()
    inner[..., 0, 0] += b
    inner[..., 1, 1] += b
    det_in = inner[..., 0, 0] * inner[..., 1, 1] - inner[..., 0, 1] ** 2
    inv = np.empty_like(inner)
    inv[..., 0, 0] = inner[..., 1, 1] / det_in
    inv[..., 1, 1] = inner[..., 0, 0] / det_in
    inv[..., 0, 1] = inv[..., 1, 0] = -inner[..., 0, 1] / det_in
    sa = -c[:, None] * inv * c[None, :]
    sa[..., 0, 0] += a
    sa[..., 1, 1] += a
    total = np.zeros(sb.shape[:-2] + (4, 4))
    total[..., :2, :2] = sa
    total[..., 2:, 2:] = sb
    total = (total + sigma.matrix) / 2
    det_a = np.linalg.det(sa)
    det_b = np.linalg.det(sb)
    with np.errstate(invalid="ignore"):
        return np.sqrt(np.sqrt(det_a * det_b) / np.linalg.det(total))


@dataclass(frozen=True)
class GaussianDiscordResult:
    value: float
    best_povm: GaussianPOVMParams
    evaluations: int


def _unpack(x):
    theta = float(np.mod(x[0], 2 * np.pi))
    lam = float(np.exp(np.clip(x[1], *LOG_LAMBDA)))
    m = float(np.exp(np.clip(x[2], *LOG_M)))
    return lam, m, theta


def gaussian_rescaled_discord(
    sigma: TwoModeCovariance, cfg: OptimizerConfig | None = None
) -> GaussianDiscordResult:
    """Rescaled discord restricted to Gaussian measurements on mode A.

    The prefactor is fixed to 1/2, so the result lies in [0, 1].
    The supremum over the seed parameters is located by a log-spaced grid
    and refined by Nelder-Mead from the best ``min(multistarts, 4)`` cells.

    Raises
    ------
    OptimizerError
        If no refinement run converged.
    """
    cfg = cfg or OptimizerConfig()
    nt, nl, nm = GRID_SHAPE
    theta = np.arange(nt) * np.pi / nt  # seed is pi-periodic in theta
    loglam = np.linspace(*LOG_LAMBDA, nl)
    logm = np.linspace(*LOG_M, nm)
    tg, lg, mg = np.meshgrid(theta, loglam, logm, indexing="ij")
    vals = _batch_ratio(sigma, np.exp(lg), np.exp(mg), tg).ravel()
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    evals = vals.size
    order = np.argsort(-vals, kind="stable")[: min(cfg.multistarts, 4)]
    starts = np.stack([tg.ravel(), lg.ravel(), mg.ravel()], axis=1)[order]

    def f(x):
        lam, m, th = _unpack(x)
        r = _batch_ratio(sigma, lam, m, th)
        return -float(r) if np.isfinite(r) else 0.0

    runs = []
    for x0 in starts:
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": cfg.tol * 1e-2,
                "maxiter": cfg.max_iters,
                "maxfev": cfg.max_iters * 4,
            },
        )
        evals += res.nfev
        runs.append(res)
    if not any(r.success for r in runs):
        raise OptimizerError("Gaussian measurement search did not converge")
    best = min(runs, key=lambda r: r.fun)
    best_ratio = max(-best.fun, float(vals[order[0]]))
    if best_ratio == -best.fun:
        lam, m, th = _unpack(best.x)
    else:
        lam, m, th = _unpack(starts[0])
    det = np.linalg.det(sigma.matrix)
    value = 1 - det**0.25 * best_ratio
    return GaussianDiscordResult(
        float(np.clip(value, 0.0, 1.0)), GaussianPOVMParams(lam, m, th), evals
    )


def squeezed_thermal_rescaled_discord(a: float, b: float, c: float) -> float:
    """Closed form for standard-form states with ``d = +-c``."""
    ab = a * b
    det = ab - c * c
    if a < 1 or b < 1 or det <= 0:
        raise UnphysicalCovarianceError(f"unphysical squeezed thermal parameters a={a}, b={b}, c={c}")
    # d = -c: the stricter of the two sign choices
    TwoModeCovariance(a, b, c, -c)
    return float(1 - 2 * np.sqrt(det / (2 * ab + 2 * np.sqrt(ab * det) - c * c)))


def random_covariance(seed=None, squeezed_thermal: bool = False) -> TwoModeCovariance:
    """Rejection-sample a physical standard-form covariance.

    ``a, b`` are uniform on [1, 5]; ``c, d`` uniform on
    ``[-sqrt(ab), sqrt(ab)]`` until physical. With ``squeezed_thermal``
    the sample is constrained to ``d = -c``.
    """
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(1, 5, 2)
    bound = np.sqrt(a * b)
    while True:
        c = rng.uniform(-bound, bound)
        d = -c if squeezed_thermal else rng.uniform(-bound, bound)
        try:
            return TwoModeCovariance(float(a), float(b), float(c), float(d))
        except UnphysicalCovarianceError:
            continue


def covariances_to_csv(covs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "c", "d"])
    for s in covs:
        w.writerow([f"{v:.12g}" for v in s.as_row()])
    return buf.getvalue()


def covariances_from_csv(text: str) -> list[TwoModeCovariance]:
    rows = csv.DictReader(io.StringIO(text))
    return [TwoModeCovariance(*(float(r[k]) for k in "abcd")) for r in rows]
