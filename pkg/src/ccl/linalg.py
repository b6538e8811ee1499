"""Small dense linear algebra with an explicit tolerance policy.

Vectors and matrices are plain float64 numpy arrays.  All rank decisions go
through singular values compared against ``ToleranceConfig.eps_rank``, so
every downstream module shares one numerical policy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularMatrixError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "Subspace",
    "kernel_dimension",
    "orthogonal_projector",
    "solve_linear",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared across the package.

    eps_membership : band half-width for cone membership classification
    eps_rank       : singular values below this count as zero
    eps_root_match : snap distance when matching reflected roots to the list
    generic_margin : relative margin enforced by generic point samplers
    """

    eps_membership: float = 1e-9
    eps_rank: float = 1e-7
    eps_root_match: float = 1e-6
    generic_margin: float = 1e-6

    def __post_init__(self):
        for name in ("eps_membership", "eps_rank", "eps_root_match", "generic_margin"):
            if not getattr(self, name) > 0.0:
                raise InvalidArgumentError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise InvalidArgumentError("matrix has non-finite entries")
    return M


@dataclass(frozen=True)
class Subspace:
    """A linear subspace held as an orthonormal basis (rows) of the ambient space."""

    orthonormal_basis: np.ndarray  # shape (dim, n), rows orthonormal
    dim: int

    @staticmethod
    def from_basis(basis, tol: ToleranceConfig = DEFAULT_TOL) -> "Subspace":
        """Wrap an already-orthonormal row basis; rejects non-orthonormal input."""
        B = np.asarray(basis, dtype=float)
        if B.ndim != 2:
            raise InvalidArgumentError("basis must be a 2-d array of row vectors")
        if B.shape[0] > 0:
            gram = B @ B.T
            if np.abs(gram - np.eye(B.shape[0])).max() > 1e-9:
                raise InvalidArgumentError("basis rows are not orthonormal within 1e-9")
        B = B.copy()
        B.setflags(write=False)
        return Subspace(B, B.shape[0])

    @staticmethod
    def from_spanning(vectors, ambient_dim: int | None = None,
                      tol: ToleranceConfig = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize a spanning set (SVD row basis); rank set by eps_rank."""
        V = np.asarray(vectors, dtype=float)
        if V.size == 0:
            n = ambient_dim if ambient_dim is not None else (V.shape[1] if V.ndim == 2 else 0)
            return Subspace.zero(n)
        if not np.isfinite(V).all():
            raise InvalidArgumentError("spanning vectors have non-finite entries")
        _, s, vh = np.linalg.svd(V, full_matrices=False)
        rank = int(np.sum(s > tol.eps_rank))
        if rank == V.shape[1]:
            # canonical basis for full spans keeps span coordinates ambient
            return Subspace.full(V.shape[1])
        return Subspace.from_basis(vh[:rank])

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace.from_basis(np.zeros((0, ambient_dim)))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace.from_basis(np.eye(ambient_dim))

    @property
    def ambient_dim(self) -> int:
        return self.orthonormal_basis.shape[1]

    def projector(self) -> np.ndarray:
        return orthogonal_projector(self)

    def complement(self) -> "Subspace":
        """Orthogonal complement inside the ambient space."""
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(n)
        if self.dim == n:
            return Subspace.zero(n)
        _, s, vh = np.linalg.svd(self.orthonormal_basis, full_matrices=True)
        return Subspace.from_basis(vh[self.dim:])

    def project(self, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of v onto this subspace."""
        B = self.orthonormal_basis
        return B.T @ (B @ v) if self.dim else np.zeros_like(np.asarray(v, dtype=float))

    def distance(self, v: np.ndarray) -> float:
        """Euclidean distance from v to the subspace."""
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.project(v)))


def kernel_dimension(M, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Dimension of the null space of M, counting singular values below
    eps_rank as zero."""
    M = _as_matrix(M)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s < tol.eps_rank))


def orthogonal_projector(S: Subspace) -> np.ndarray:
    """Projector onto S: P = sum_i b_i b_i^T.  P is symmetric idempotent."""
    B = S.orthonormal_basis
    if B.shape[0] == 0:
        return np.zeros((S.ambient_dim, S.ambient_dim))
    gram = B @ B.T
    if np.abs(gram - np.eye(B.shape[0])).max() > 1e-9:
        raise InvalidArgumentError("subspace basis is not orthonormal within 1e-9")
    return B.T @ B


def solve_linear(M, v, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Solve M x = v for invertible M.

    Raises SingularMatrixError when the smallest singular value of M is at
    or below eps_rank.  The residual is verified to be <= 1e-8 * ||v||.
    """
    M = _as_matrix(M)
    v = np.asarray(v, dtype=float)
    if v.shape != (M.shape[0],):
        raise InvalidArgumentError(f"vector shape {v.shape} does not match matrix {M.shape}")
    if not np.isfinite(v).all():
        raise InvalidArgumentError("vector has non-finite entries")
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= tol.eps_rank:
        raise SingularMatrixError(f"smallest singular value {s[-1]:.3e} <= eps_rank")
    x = np.linalg.solve(M, v)
    vnorm = np.linalg.norm(v)
    if np.linalg.norm(M @ x - v) > 1e-8 * max(vnorm, 1e-300):
        raise SingularMatrixError("solve residual exceeds 1e-8 relative bound")
    return x
