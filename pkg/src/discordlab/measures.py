"""Quantum-correlation quantifiers with measurements on subsystem A."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, InvalidParameterError
from .optimize import OptimizerConfig, minimize_measurement
from .states import (
    DensityMatrix,
    ProjectiveMeasurement,
    entropy_of_spectrum,
    measurement_blocks,
    partial_transpose,
    purity,
    reduced_matrix,
    trace_norm,
    von_neumann_entropy,
)

log = logging.getLogger(__name__)

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

MAX_OPT_DIM = 4
PROB_FLOOR = 1e-12
NEGATIVE_FLAG = -1e-6


def alpha(dim_a: int) -> float:
    """Geometric-discord normalisation dA / (dA - 1)."""
    return dim_a / (dim_a - 1)


def beta(dim_a: int, dg_max: float = 1.0) -> float:
    """Rescaled-discord normalisation making maximally entangled states score ``dg_max``."""
    return dg_max / (2 - 2 * np.sqrt(1 - dg_max / alpha(dim_a)))


@dataclass(frozen=True)
class NormalizationConstants:
    alpha_a: float
    beta_a: float

    @classmethod
    def for_dim(cls, dim_a: int) -> "NormalizationConstants":
        return cls(alpha(dim_a), beta(dim_a))


@dataclass(frozen=True)
class MeasureResult:
    value: float
    measurement: ProjectiveMeasurement
    evaluations: int = 0


def _check_opt_dim(rho: DensityMatrix):
    if rho.dim_a < 2:
        raise DimensionError("measured subsystem must have dimension >= 2")
    if rho.dim_a > MAX_OPT_DIM:
        raise DimensionError(
            f"measurement optimisation supports dA <= {MAX_OPT_DIM}, got {rho.dim_a}"
        )


def _clamp(value: float, name: str) -> float:
    if value < NEGATIVE_FLAG:
        log.warning("%s came out at %.3g before clamping", name, value)
    return max(float(value), 0.0)


# ---------------------------------------------------------------------------
# objectives for a fixed measurement


def overlap_after_measurement(rho: DensityMatrix, basis) -> float:
    """``Tr{rho Pi[rho]}`` for the measurement with the given basis columns."""
    if isinstance(basis, ProjectiveMeasurement):
        basis = basis.basis
    b = measurement_blocks(rho, np.asarray(basis))
    return float(np.sum(np.abs(b) ** 2))


def hs_objective(rho: DensityMatrix, basis) -> float:
    """Squared Hilbert-Schmidt distance ``||rho - Pi[rho]||^2`` (projective case)."""
    return purity(rho) - overlap_after_measurement(rho, basis)


def rescaled_objective(rho: DensityMatrix, basis) -> float:
    """Squared rescaled distance ``d_T(rho, Pi[rho])^2``."""
    ratio = overlap_after_measurement(rho, basis) / purity(rho)
    return 2 - 2 * np.sqrt(min(max(ratio, 0.0), 1.0))


def conditional_entropy(rho: DensityMatrix, basis) -> float:
    """``sum_j p_j S(rho_B|j)`` after measuring A in the given basis."""
    if isinstance(basis, ProjectiveMeasurement):
        basis = basis.basis
    blocks = measurement_blocks(rho, np.asarray(basis))
    return _conditional_entropy_blocks(blocks[None])[0]


def _conditional_entropy_blocks(blocks: np.ndarray) -> np.ndarray:
    # blocks: (K, dA, dB, dB) unnormalised conditional states
    evals = np.linalg.eigvalsh(blocks)
    probs = np.clip(evals.sum(axis=-1), 0.0, None)
    safe = np.where(probs > PROB_FLOOR, probs, 1.0)
    q = np.clip(evals / safe[..., None], 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    ent = terms.sum(axis=-1)
    ent = np.where(probs > PROB_FLOOR, ent, 0.0)
    return np.sum(probs * ent, axis=-1)


def _batched_overlap(rho: DensityMatrix):
    def f(us):
        b = measurement_blocks(rho, us)
        return np.sum(np.abs(b) ** 2, axis=(-3, -2, -1))

    return f


def _form_overlap(rho: DensityMatrix):
    """Single-basis ``Tr{rho Pi[rho]}`` through the precomputed overlap form."""
    a = overlap_form_matrix(rho)
    d = rho.dim_a

    def f(u):
        w = (u[:, None, :] * u.conj()[None, :, :]).reshape(d * d, d)
        return float(np.real(np.sum(w.conj() * (a @ w))))

    return f


# ---------------------------------------------------------------------------
# entropic discord


def entropic_discord(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> MeasureResult:
    """Entropic discord in bits, minimised over rank-1 projective measurements on A.

    Parameters
    ----------
    rho : DensityMatrix
        State with ``2 <= dA <= 4``.
    cfg : OptimizerConfig, optional

    Returns
    -------
    MeasureResult
        Discord value (clamped at zero) and the minimising basis.
    """
    _check_opt_dim(rho)
    base = von_neumann_entropy(reduced_matrix(rho, "B")) - von_neumann_entropy(rho)
    cost = rho.dim_a * rho.dim_b**2 * 8

    res = minimize_measurement(
        lambda u: float(_conditional_entropy_blocks(measurement_blocks(rho, u)[None])[0]),
        rho.dim_a,
        cfg,
        batch_objective=lambda us: _conditional_entropy_blocks(measurement_blocks(rho, us)),
        cost_per_point=cost,
    )
    return MeasureResult(_clamp(base + res.value, "entropic discord"), res.measurement, res.evaluations)


def mutual_information(rho: DensityMatrix) -> float:
    return (
        von_neumann_entropy(reduced_matrix(rho, "B"))
        + von_neumann_entropy(reduced_matrix(rho, "A"))
        - von_neumann_entropy(rho)
    )


def classical_mutual_information(rho: DensityMatrix, basis) -> float:
    """Mutual information left after measuring A in ``basis``."""
    return von_neumann_entropy(reduced_matrix(rho, "A")) - conditional_entropy(rho, basis)


# ---------------------------------------------------------------------------
# geometric discord


def bloch_components(rho: DensityMatrix) -> np.ndarray:
    """Operators ``v_i = Tr_A{sigma_i rho}`` on B for i = x, y, z."""
    if rho.dim_a != 2:
        raise DimensionError(f"Bloch expansion needs dA = 2, got {rho.dim_a}")
    r = rho.blocks()
    return np.einsum("iac,cbad->ibd", PAULI, r)


def s_matrix(rho: DensityMatrix) -> np.ndarray:
    """Real symmetric 3x3 matrix ``S_ij = Tr_B{v_i v_j}``."""
    v = bloch_components(rho)
    s = np.einsum("ibd,jdb->ij", v, v).real
    return 0.5 * (s + s.T)


@dataclass(frozen=True)
class ClosedFormGeometric:
    value: float
    S: np.ndarray = field(repr=False)


def geometric_discord_2xd(rho: DensityMatrix) -> ClosedFormGeometric:
    """Closed-form geometric discord for a qubit measured subsystem: ``Tr S - lambda_max(S)``."""
    s = s_matrix(rho)
    w = np.linalg.eigvalsh(s)
    value = min(_clamp(np.sum(w) - w[-1], "geometric discord"), 1.0)
    return ClosedFormGeometric(value, s)


def geometric_discord_numeric(
    rho: DensityMatrix, cfg: OptimizerConfig | None = None
) -> MeasureResult:
    """``alpha_A min_Pi ||rho - Pi[rho]||^2`` by direct search over measurements."""
    _check_opt_dim(rho)
    p = purity(rho)
    single = _form_overlap(rho)
    res = minimize_measurement(
        lambda u: p - single(u),
        rho.dim_a,
        cfg,
        batch_objective=lambda us: p - _batched_overlap(rho)(us),
        cost_per_point=rho.dim_a * rho.dim_b**2 * 2,
    )
    value = alpha(rho.dim_a) * res.value
    return MeasureResult(_clamp(value, "geometric discord"), res.measurement, res.evaluations)


def geometric_discord(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> MeasureResult:
    """Closed form for dA = 2, numeric search otherwise."""
    if rho.dim_a == 2:
        cf = geometric_discord_2xd(rho)
        w, v = np.linalg.eigh(cf.S)
        n = v[:, -1]
        theta = np.arccos(np.clip(n[2], -1, 1))
        phi = np.arctan2(n[1], n[0])
        from .optimize import bloch_basis

        return MeasureResult(cf.value, ProjectiveMeasurement(bloch_basis(theta, phi)), 0)
    return geometric_discord_numeric(rho, cfg)


def rescaled_discord(rho: DensityMatrix, dg: float) -> float:
    """Rescaled discord from a geometric-discord value via the purity identity.

    Raises
    ------
    InvalidParameterError
        If ``dg`` exceeds ``alpha_A Tr(rho^2)`` by more than ``1e-9``.
    """
    a = alpha(rho.dim_a)
    radicand = 1 - dg / (a * purity(rho))
    if radicand < -1e-9:
        raise InvalidParameterError(
            f"geometric discord {dg} inconsistent with purity {purity(rho)}"
        )
    value = beta(rho.dim_a) * (2 - 2 * np.sqrt(max(radicand, 0.0)))
    return _clamp(value, "rescaled discord")


def rescaled_discord_numeric(
    rho: DensityMatrix, cfg: OptimizerConfig | None = None
) -> MeasureResult:
    """``beta_A min_Pi d_T(rho, Pi[rho])^2`` by direct search over measurements."""
    _check_opt_dim(rho)
    p = purity(rho)
    overlap = _batched_overlap(rho)
    single = _form_overlap(rho)

    def batch(us):
        return 2 - 2 * np.sqrt(np.clip(overlap(us) / p, 0.0, 1.0))

    res = minimize_measurement(
        lambda u: 2 - 2 * np.sqrt(min(max(single(u) / p, 0.0), 1.0)),
        rho.dim_a,
        cfg,
        batch_objective=batch,
        cost_per_point=rho.dim_a * rho.dim_b**2 * 2,
    )
    value = beta(rho.dim_a) * res.value
    return MeasureResult(_clamp(value, "rescaled discord"), res.measurement, res.evaluations)


def adjusted_discord(rho: DensityMatrix, dg: float) -> float:
    """Geometric discord divided by the purity."""
    return dg / purity(rho)


def overlap_form_matrix(rho: DensityMatrix) -> np.ndarray:
    """Hermitian ``dA^2 x dA^2`` matrix with ``A[(n,q),(m,p)] = Tr_B[rho_nm rho_pq]``.

    For any projective measurement ``Tr{rho Pi[rho]} = sum_j vec(P_j)^dag A vec(P_j)``
    with ``vec`` the row-major flattening of the projector.
    """
    r = rho.blocks()
    d = rho.dim_a
    a = np.einsum("nbmc,pcqb->nqmp", r, r).reshape(d * d, d * d)
    herm = np.max(np.abs(a - a.conj().T))
    assert herm <= 1e-10 * max(1.0, np.max(np.abs(a))), herm
    return 0.5 * (a + a.conj().T)


def rescaled_discord_lower_bound(rho: DensityMatrix) -> float:
    """Lower bound on the rescaled discord from the top-dA eigenvalues of the overlap form."""
    if rho.dim_a < 2:
        raise DimensionError("measured subsystem must have dimension >= 2")
    w = np.linalg.eigvalsh(overlap_form_matrix(rho))
    top = np.sum(w[-rho.dim_a:])
    ratio = max(top / purity(rho), 0.0)
    return max(0.0, float(beta(rho.dim_a) * (2 - 2 * np.sqrt(ratio))))


# ---------------------------------------------------------------------------
# entanglement


def negativity(rho: DensityMatrix) -> float:
    """Negativity normalised to one on maximally entangled states."""
    if rho.dim_a < 2:
        raise DimensionError("measured subsystem must have dimension >= 2")
    n = (trace_norm(partial_transpose(rho, "A")) - 1) / (rho.dim_a - 1)
    return 0.0 if n < 1e-12 else float(n)


def negativity_bound(n: float) -> float:
    """Rescaled discord of a pure two-qubit state with negativity ``n``."""
    return (2 - np.sqrt(max(4 - 2 * n * n, 0.0))) / (2 - np.sqrt(2))


@dataclass(frozen=True)
class HierarchyPoint:
    dT: float
    n: float
    bound: float
    gap: float


def hierarchy_gap(rho: DensityMatrix) -> HierarchyPoint:
    """Distance of ``D_T`` above the pure-state negativity curve; negative means violation."""
    if rho.dim_a != 2:
        raise DimensionError(f"hierarchy is defined for dA = 2, got {rho.dim_a}")
    dt = rescaled_discord(rho, geometric_discord_2xd(rho).value)
    n = negativity(rho)
    bound = negativity_bound(n)
    return HierarchyPoint(dt, n, bound, dt - bound)


# ---------------------------------------------------------------------------
# full report


@dataclass
class QCReport:
    """All measure values for one state plus optimizer diagnostics."""

    entropic: float
    geometric: float
    adjusted: float
    rescaled: float
    rescaled_lower_bound: float
    negativity: float
    purity: float
    optimal_basis: ProjectiveMeasurement | None
    optimizer_evals: int
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "entropic": self.entropic,
            "geometric": self.geometric,
            "adjusted": self.adjusted,
            "rescaled": self.rescaled,
            "rescaled_lower_bound": self.rescaled_lower_bound,
            "negativity": self.negativity,
            "purity": self.purity,
            "optimizer_evals": self.optimizer_evals,
            "flags": list(self.flags),
        }


def analyze(rho: DensityMatrix, cfg: OptimizerConfig | None = None, entropic: bool = True) -> QCReport:
    """Compute every quantifier for ``rho``.

    The entropic discord is skipped (reported as NaN) when ``entropic`` is
    false or dA exceeds the optimisation limit.
    """
    flags = []
    evals = 0
    if entropic and rho.dim_a <= MAX_OPT_DIM:
        ent = entropic_discord(rho, cfg)
        d_ent, evals = ent.value, ent.evaluations
    else:
        d_ent = float("nan")
    geo = geometric_discord(rho, cfg)
    evals += geo.evaluations
    dt = rescaled_discord(rho, geo.value)
    lo = rescaled_discord_lower_bound(rho)
    if lo > dt + 1e-8:
        flags.append("lower-bound-exceeds-value")
    return QCReport(
        entropic=d_ent,
        geometric=geo.value,
        adjusted=adjusted_discord(rho, geo.value),
        rescaled=dt,
        rescaled_lower_bound=lo,
        negativity=negativity(rho),
        purity=purity(rho),
        optimal_basis=geo.measurement,
        optimizer_evals=evals,
        flags=flags,
    )
