"""Constructors for the state families used in the case studies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .exceptions import DimensionError, InvalidParameterError, TruncationError
from .states import DensityMatrix, random_unitary

TRACE_DEFICIT_MAX = 1e-6


def classical_quantum_state(probs, states) -> DensityMatrix:
    """``sum_i p_i |i><i| (x) rho_B^i`` with ``|i>`` the computational basis of A."""
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-10:
        raise InvalidParameterError(f"probabilities must be nonnegative and sum to 1: {probs}")
    mats = [s.mat if isinstance(s, DensityMatrix) else np.asarray(s, dtype=complex) for s in states]
    if len(mats) != len(probs):
        raise DimensionError("need one conditional state per probability")
    db = mats[0].shape[0]
    if any(m.shape != (db, db) for m in mats):
        raise DimensionError("conditional states must share a dimension")
    da = len(probs)
    out = np.zeros((da * db, da * db), dtype=complex)
    for i, (p, m) in enumerate(zip(probs, mats)):
        out[i * db:(i + 1) * db, i * db:(i + 1) * db] = p * m
    return DensityMatrix(out, da, db)


# ---------------------------------------------------------------------------
# DQC1


def laf2_unitary() -> np.ndarray:
    """The three-qubit diagonal unitary diag(a, a, b, 1, a, b, 1, 1)."""
    a = -np.exp(-3j * np.pi / 5) ** 4
    b = np.exp(3j * np.pi / 5) ** 8
    return np.diag([a, a, b, 1, a, b, 1, 1]).astype(complex)


def traceless_unitary(n: int, seed=None) -> np.ndarray:
    """Unitary on n qubits with ``Tr U = Tr U^2 = 0``.

    Eigenphases are the ``2^n``-th roots of unity times a random global
    phase, in a Haar-random eigenbasis.
    """
    dim = 2**n
    if dim < 4:
        raise InvalidParameterError(f"need at least two qubits, got n={n}")
    rng = np.random.default_rng(seed)
    phases = np.exp(1j * (2 * np.pi * np.arange(dim) / dim + rng.uniform(0, 2 * np.pi)))
    v = random_unitary(dim, rng)
    return (v * phases) @ v.conj().T


@dataclass(frozen=True)
class DQC1Config:
    """Ancilla polarisation ``mu``, register size ``n`` and controlled unitary.

    ``unitary`` is ``"laf2"``, ``"traceless"`` (seeded by ``seed``) or an
    explicit ``2^n x 2^n`` matrix.
    """

    mu: float
    n: int
    unitary: object = "traceless"
    seed: int = 0

    def matrix(self) -> np.ndarray:
        if isinstance(self.unitary, str):
            if self.unitary == "laf2":
                if self.n != 3:
                    raise InvalidParameterError("the laf2 unitary acts on three qubits")
                return laf2_unitary()
            if self.unitary == "traceless":
                return traceless_unitary(self.n, self.seed)
            raise InvalidParameterError(f"unknown unitary {self.unitary!r}")
        return np.asarray(self.unitary, dtype=complex)


def dqc1_output_state(cfg: DQC1Config) -> DensityMatrix:
    """Ancilla-register state after the Hadamard and controlled-U."""
    if not 0 <= cfg.mu <= 1:
        raise InvalidParameterError(f"mu must lie in [0, 1], got {cfg.mu}")
    if cfg.n < 1:
        raise InvalidParameterError("register needs at least one qubit")
    u = cfg.matrix()
    dim = 2**cfg.n
    if u.shape != (dim, dim):
        raise DimensionError(f"unitary must be {dim}x{dim}, got {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(dim))) > 1e-10:
        raise InvalidParameterError("controlled operation is not unitary")
    eye = np.eye(dim)
    mat = np.block([[eye, cfg.mu * u.conj().T], [cfg.mu * u, eye]]) / (2 * dim)
    rho = DensityMatrix(mat, 2, dim)
    # reduced ancilla must carry <s1> + i<s2> = mu Tr U / 2^n
    ra = np.einsum("abcb->ac", rho.blocks())
    assert abs(2 * ra[1, 0] - cfg.mu * np.trace(u) / dim) <= 1e-10
    return rho


def dqc1_entropic_approx(mu: float) -> float:
    """Approximate entropic discord of the DQC1 output state for ``0 < mu <= 1``."""
    if not 0 < mu <= 1:
        raise InvalidParameterError(f"approximation requires 0 < mu <= 1, got {mu}")

    def h(x):
        return 0.0 if x <= 0 else x * np.log2(x)

    s = 1 - np.sqrt(1 - mu * mu)
    return float(2 + h((1 - mu) / 2) + h((1 + mu) / 2) - np.log2(s) - s * np.log2(np.e))


# ---------------------------------------------------------------------------
# Werner


def swap_operator(d: int) -> np.ndarray:
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1
    return f


def werner_state(lam: float, d: int) -> DensityMatrix:
    """Mixture of symmetric and antisymmetric projectors; ``lam`` weights the antisymmetric part."""
    if d < 2:
        raise InvalidParameterError(f"d must be >= 2, got {d}")
    if not 0 <= lam <= 1:
        raise InvalidParameterError(f"lambda must lie in [0, 1], got {lam}")
    f = swap_operator(d)
    eye = np.eye(d * d)
    sym = (eye + f) / 2
    anti = (eye - f) / 2
    mat = 2 * (1 - lam) / (d * (d + 1)) * sym + 2 * lam / (d * (d - 1)) * anti
    return DensityMatrix(mat.astype(complex), d, d)


def werner_purity(lam: float, d: int) -> float:
    return 2 * (1 - lam) ** 2 / (d * (d + 1)) + 2 * lam**2 / (d * (d - 1))


# ---------------------------------------------------------------------------
# qubit-oscillator


def annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)


def displacement(beta: complex, n: int) -> np.ndarray:
    """Displacement operator exponentiated on an ``n``-level truncated space."""
    a = annihilation(n)
    return expm(beta * a.conj().T - np.conj(beta) * a)


def thermal_state(nbar: float, n: int) -> np.ndarray:
    """Thermal state truncated to ``n`` levels (not renormalised)."""
    if nbar == 0:
        p = np.zeros(n)
        p[0] = 1
    else:
        q = nbar / (nbar + 1)
        p = q ** np.arange(n) / (nbar + 1)
    return np.diag(p).astype(complex)


def default_cutoff(beta: complex, nbar: float) -> int:
    return int(np.ceil(4 * (abs(beta) ** 2 + nbar) + 20))


@dataclass(frozen=True)
class QubitOscConfig:
    """Parameters of the correlated qubit-oscillator family.

    ``cutoff=None`` starts from ``4(|beta|^2 + nbar) + 20`` levels and
    lets ``qubit_oscillator_state`` grow the space until the trace check
    passes; an explicit cutoff is used as given.
    """

    p: float
    r: complex
    beta: complex
    nbar: float
    cutoff: int | None = None

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p}")
        if abs(self.r) ** 2 > self.p * (1 - self.p) + 1e-12:
            raise InvalidParameterError("|r|^2 must not exceed p(1-p)")
        if self.nbar < 0:
            raise InvalidParameterError("nbar must be nonnegative")

    @property
    def levels(self) -> int:
        return self.cutoff if self.cutoff is not None else default_cutoff(self.beta, self.nbar)


@dataclass(frozen=True)
class QubitOscState:
    rho: DensityMatrix
    trace_deficit: float


def qubit_oscillator_state(cfg: QubitOscConfig, pad: int = 40) -> QubitOscState:
    """Assemble the qubit-oscillator state in a truncated Fock basis.

    Operators are built on ``cutoff + pad`` levels and then cut to
    ``cutoff`` so that truncation error of the exponential stays in the
    discarded levels. With ``cfg.cutoff=None`` the level count starts at
    the heuristic and grows by 10% until the trace check passes.

    Raises
    ------
    TruncationError
        If the diagonal blocks lose more than ``1e-6`` of their trace.
    """
    if cfg.cutoff is not None:
        return _assemble_qubit_osc(cfg, cfg.cutoff, pad)
    n = cfg.levels
    while True:
        try:
            return _assemble_qubit_osc(cfg, n, pad)
        except TruncationError:
            if n > 4096:
                raise
            n = int(np.ceil(n * 1.1))


def _assemble_qubit_osc(cfg: QubitOscConfig, n: int, pad: int) -> QubitOscState:
    big = n + pad
    d = displacement(cfg.beta, big)
    dd = d.conj().T
    rho0 = thermal_state(cfg.nbar, big)
    keep = slice(0, n)
    plus = (d @ rho0 @ dd)[keep, keep]
    minus = (dd @ rho0 @ d)[keep, keep]
    cross = (d @ rho0 @ d)[keep, keep]
    weight = cfg.p * np.trace(plus).real + (1 - cfg.p) * np.trace(minus).real
    deficit = 1 - weight
    if deficit > TRACE_DEFICIT_MAX:
        raise TruncationError(
            f"cutoff {n} loses trace {deficit:.3g}; increase the number of levels"
        )
    mat = np.block(
        [
            [cfg.p * plus, cfg.r * cross],
            [np.conj(cfg.r) * cross.conj().T, (1 - cfg.p) * minus],
        ]
    )
    mat = 0.5 * (mat + mat.conj().T) / weight
    return QubitOscState(DensityMatrix(mat, 2, n), float(deficit))
