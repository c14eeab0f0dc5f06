"""Dense density-matrix calculus for bipartite systems.

Subsystem A is always the slow (leftmost) tensor factor, so a state on
``C^dA (x) C^dB`` reshapes to ``rho[a, b, a', b']``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, InvalidParameterError, InvalidStateError

TOL = 1e-10


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite density matrix with a declared (dA, dB) split.

    Parameters
    ----------
    mat : array_like
        Square complex matrix of size ``dim_a * dim_b``.
    dim_a, dim_b : int
        Dimensions of the measured (A) and unmeasured (B) subsystems.

    Raises
    ------
    DimensionError
        If the matrix size does not match ``dim_a * dim_b``.
    InvalidStateError
        If the matrix is not Hermitian, unit trace and positive
        semidefinite within ``1e-10``.
    """

    mat: np.ndarray
    dim_a: int
    dim_b: int = 1

    def __post_init__(self):
        mat = _as_square(self.mat)
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError("subsystem dimensions must be positive")
        if mat.shape[0] != self.dim_a * self.dim_b:
            raise DimensionError(
                f"matrix of size {mat.shape[0]} does not split as "
                f"{self.dim_a} x {self.dim_b}"
            )
        if not np.all(np.isfinite(mat)):
            raise InvalidStateError("matrix has non-finite entries")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > TOL:
            raise InvalidStateError(f"matrix is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(mat).real
        if abs(tr - 1) > TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        mat = 0.5 * (mat + mat.conj().T)
        lo = np.linalg.eigvalsh(mat)[0]
        if lo < -TOL:
            raise InvalidStateError(f"matrix has negative eigenvalue {lo:.3g}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def blocks(self) -> np.ndarray:
        """View as ``rho[a, b, a', b']``."""
        return self.mat.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def __repr__(self):
        return f"DensityMatrix(dim_a={self.dim_a}, dim_b={self.dim_b})"


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Rank-1 projective measurement on subsystem A.

    ``basis[:, j]`` is the j-th measurement vector, so ``basis`` is a
    unitary matrix.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = _as_square(self.basis).copy()
        gram = basis.conj().T @ basis
        err = np.max(np.abs(gram - np.eye(basis.shape[0])))
        if err > TOL:
            raise InvalidParameterError(f"basis is not orthonormal (deviation {err:.3g})")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, j] for j in range(self.dim)]

    def projectors(self) -> np.ndarray:
        """Stack of projectors, shape ``(d, d, d)``."""
        b = self.basis
        return np.einsum("aj,cj->jac", b, b.conj())

    @classmethod
    def computational(cls, d: int) -> "ProjectiveMeasurement":
        return cls(np.eye(d, dtype=complex))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def product_state(rho_a, rho_b) -> DensityMatrix:
    """``rho_a (x) rho_b`` as a bipartite state."""
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    return DensityMatrix(tensor_product(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


def reduced_matrix(rho: DensityMatrix, which: str = "B") -> np.ndarray:
    """Array of the reduced state after tracing out subsystem ``which``."""
    r = rho.blocks()
    if which == "B":
        return np.einsum("abcb->ac", r)
    if which == "A":
        return np.einsum("abad->bd", r)
    raise InvalidParameterError(f"which must be 'A' or 'B', got {which!r}")


def partial_trace(rho: DensityMatrix, which: str = "B") -> DensityMatrix:
    """Trace out subsystem ``which`` ('A' or 'B').

    The kept party is returned as a single-party state (``dim_b == 1``).
    """
    m = reduced_matrix(rho, which)
    return DensityMatrix(m, m.shape[0], 1)


def partial_transpose(rho: DensityMatrix, which: str = "A") -> np.ndarray:
    """Partial transpose on subsystem ``which``; the result may be non-positive."""
    r = rho.blocks()
    if which == "A":
        t = r.transpose(2, 1, 0, 3)
    elif which == "B":
        t = r.transpose(0, 3, 2, 1)
    else:
        raise InvalidParameterError(f"which must be 'A' or 'B', got {which!r}")
    return t.reshape(rho.dim, rho.dim)


def matrix_norms(m) -> dict:
    """Hilbert-Schmidt and trace norms of a square matrix.

    Returns
    -------
    dict
        ``{"hs": ||m||_2, "trace": sum of singular values}``
    """
    m = _as_square(m)
    sv = np.linalg.svd(m, compute_uv=False)
    return {"hs": float(np.sqrt(np.sum(sv**2))), "trace": float(np.sum(sv))}


def hs_norm(m) -> float:
    m = np.asarray(m)
    return float(np.sqrt(np.vdot(m, m).real))


def trace_norm(m) -> float:
    """Trace norm; uses the eigenvalues when ``m`` is Hermitian."""
    m = _as_square(m)
    if np.allclose(m, m.conj().T, atol=1e-12):
        return float(np.sum(np.abs(np.linalg.eigvalsh(m))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def purity(rho: DensityMatrix) -> float:
    m = rho.mat
    return float(np.vdot(m, m).real)


def entropy_of_spectrum(evals) -> float:
    """Shannon entropy in bits of a spectrum, clamped to [0, 1]."""
    p = np.clip(np.asarray(evals, dtype=float), 0.0, 1.0)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits of a DensityMatrix or a plain matrix."""
    m = rho.mat if isinstance(rho, DensityMatrix) else _as_square(rho)
    return entropy_of_spectrum(np.linalg.eigvalsh(m))


def rescaled_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Distance between states after normalising each by its Hilbert-Schmidt norm."""
    m1 = rho1.mat if isinstance(rho1, DensityMatrix) else _as_square(rho1)
    m2 = rho2.mat if isinstance(rho2, DensityMatrix) else _as_square(rho2)
    if m1.shape != m2.shape:
        raise DimensionError(f"shape mismatch {m1.shape} vs {m2.shape}")
    return hs_norm(m1 / hs_norm(m1) - m2 / hs_norm(m2))


def measurement_blocks(rho: DensityMatrix, basis: np.ndarray) -> np.ndarray:
    """Unnormalised conditional states ``<phi_j| rho |phi_j>`` on B.

    ``basis`` may carry leading batch axes: shape ``(..., dA, dA)``.
    Returns shape ``(..., dA, dB, dB)``; the traces are outcome probabilities.
    """
    return np.einsum("...aj,abcd,...cj->...jbd", basis.conj(), rho.blocks(), basis)


def apply_measurement(rho: DensityMatrix, pi: ProjectiveMeasurement) -> DensityMatrix:
    """Post-measurement state ``sum_j (P_j (x) I) rho (P_j (x) I)``."""
    if pi.dim != rho.dim_a:
        raise DimensionError(f"measurement on C^{pi.dim} applied to dA={rho.dim_a}")
    blocks = measurement_blocks(rho, pi.basis)
    out = sum(tensor_product(p, b) for p, b in zip(pi.projectors(), blocks))
    return DensityMatrix(out, rho.dim_a, rho.dim_b)


def random_state(dim_a: int, dim_b: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Sample from the Hilbert-Schmidt-induced ensemble of given rank.

    Parameters
    ----------
    dim_a, dim_b : int
        Subsystem dimensions.
    rank : int, optional
        Number of Ginibre columns; defaults to full rank.
    seed : int or numpy.random.Generator, optional
        Seed for reproducible sampling.
    """
    d = dim_a * dim_b
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise InvalidParameterError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return state_from_factor(g, dim_a, dim_b)


def state_from_factor(g: np.ndarray, dim_a: int, dim_b: int) -> DensityMatrix:
    """``G G^dagger / Tr(G G^dagger)``."""
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real, dim_a, dim_b)


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionError("entry count does not match rows*cols")
    m = (re + 1j * im).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("matrix has non-finite entries")
    return m
