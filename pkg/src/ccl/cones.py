"""Simplicial cone algebra: faces, duals, quotients, direct sums, membership.

A simplicial cone is stored as its generator rows together with the dual
(facet-normal) basis inside its own span, so membership reduces to the
signs of the dual coordinates.  The zero cone (no generators) is a valid
cone of dimension 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateConeError, InvalidArgumentError
from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig
from .roots import RootSystem

__all__ = ["Membership", "SimplicialCone", "chamber", "dual", "face",
           "quotient", "quotient_dual", "membership", "image_cone",
           "map_cone", "direct_sum"]


class Membership(Enum):
    INSIDE = "inside"      # relative interior
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class SimplicialCone:
    """Cone on linearly independent generators (rows), with cached span and
    dual basis satisfying (g_i, d_j) = delta_ij."""

    generators: np.ndarray   # (k, n)
    span: Subspace
    dual_basis: np.ndarray   # (k, n), rows lie in span

    @staticmethod
    def from_generators(gens, ambient_dim: int | None = None,
                        tol: ToleranceConfig = DEFAULT_TOL) -> "SimplicialCone":
        G = np.atleast_2d(np.asarray(gens, dtype=float))
        if G.size == 0:
            if ambient_dim is None:
                raise InvalidArgumentError("zero cone needs an explicit ambient_dim")
            G = np.zeros((0, ambient_dim))
            empty = np.zeros((0, ambient_dim))
            empty.setflags(write=False)
            return SimplicialCone(empty, Subspace.zero(ambient_dim), empty)
        if not np.isfinite(G).all():
            raise InvalidArgumentError("generators have non-finite entries")
        k, n = G.shape
        s = np.linalg.svd(G, compute_uv=False)
        if k > n or s[-1] <= tol.eps_rank:
            raise DegenerateConeError("generators are linearly dependent")
        span = Subspace.from_spanning(G, ambient_dim=n, tol=tol)
        B = span.orthonormal_basis                    # (k, n)
        coords = G @ B.T                              # generator coords in span
        dual_coords = np.linalg.inv(coords).T         # (d_j, g_i) = delta_ij
        D = dual_coords @ B
        G = G.copy()
        G.setflags(write=False)
        D.setflags(write=False)
        return SimplicialCone(G, span, D)

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.generators.shape[1]

    def interior_point(self) -> np.ndarray:
        return self.generators.sum(axis=0)


def chamber(rs: RootSystem) -> SimplicialCone:
    """The fundamental chamber: cone on the fundamental weights.

    Its facet normals (dual basis) are the simple roots.
    """
    return SimplicialCone.from_generators(rs.fundamental_weights, tol=rs.tol)


def dual(c: SimplicialCone, tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Dual cone of a full-dimensional simplicial cone: the cone on its
    facet normals."""
    if c.dim != c.ambient_dim:
        raise InvalidArgumentError(
            "dual() supports full-dimensional cones only")
    return SimplicialCone.from_generators(c.dual_basis, tol=tol)


def _subset(I, n: int) -> list[int]:
    I = sorted(int(i) for i in I)
    if I and (I[0] < 0 or I[-1] >= n or len(set(I)) != len(I)):
        raise InvalidArgumentError(f"I must be a subset of 0..{n - 1}")
    return I


def face(c: SimplicialCone, I, tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Face of a full-dimensional cone spanned by the generators indexed by I.

    Asserts the face-span identity: span(F_I) is the intersection of the
    facet hyperplanes {x : (x, d_j) = 0} for j outside I.
    """
    n = c.ambient_dim
    I = _subset(I, n)
    f = SimplicialCone.from_generators(c.generators[I], ambient_dim=n, tol=tol)
    rest = [j for j in range(n) if j not in I]
    normals = Subspace.from_spanning(c.dual_basis[rest], ambient_dim=n, tol=tol)
    if np.abs(f.span.projector() - normals.complement().projector()).max() > 1e-9:
        raise InvalidArgumentError("face span does not match facet intersection")
    return f


def quotient(c: SimplicialCone, I, tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Orthogonal projection of the cone onto the complement of a face span:
    the cone on the projected remaining generators."""
    n = c.ambient_dim
    I = _subset(I, n)
    rest = [j for j in range(n) if j not in I]
    if not rest:
        return SimplicialCone.from_generators([], ambient_dim=n, tol=tol)
    fspan = Subspace.from_spanning(c.generators[I], ambient_dim=n, tol=tol)
    P = np.eye(n) - fspan.projector()
    return SimplicialCone.from_generators(c.generators[rest] @ P.T, tol=tol)


def quotient_dual(c: SimplicialCone, I,
                  tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """The face of the dual cone orthogonal to F_I: cone on the facet
    normals indexed outside I.

    Asserts that this equals the dual of quotient(c, I) computed inside
    span(F_I)-perp.
    """
    n = c.ambient_dim
    I = _subset(I, n)
    rest = [j for j in range(n) if j not in I]
    qd = SimplicialCone.from_generators(c.dual_basis[rest], ambient_dim=n, tol=tol)
    q = quotient(c, I, tol)
    if q.dim != qd.dim:
        raise InvalidArgumentError("quotient/quotient-dual dimension mismatch")
    if q.dim:
        # dual of the quotient within its span is the cone on q.dual_basis
        if _direction_mismatch(q.dual_basis, qd.generators) > 1e-8:
            raise InvalidArgumentError(
                "quotient dual disagrees with dual-of-quotient within the span")
    return qd


def _direction_mismatch(A: np.ndarray, B: np.ndarray) -> float:
    """Greedy unit-direction matching distance between two generator sets."""
    An = A / np.linalg.norm(A, axis=1, keepdims=True)
    Bn = B / np.linalg.norm(B, axis=1, keepdims=True)
    worst = 0.0
    used: list[int] = []
    for a in An:
        d = np.linalg.norm(Bn - a, axis=1)
        if used:
            d[used] = np.inf
        i = int(np.argmin(d))
        used.append(i)
        worst = max(worst, float(d[i]))
    return worst


def membership(c: SimplicialCone, v, tol: ToleranceConfig = DEFAULT_TOL) -> Membership:
    """Classify v against the cone by the signs of its dual coordinates.

    The zero cone contains only the origin.
    """
    v = np.asarray(v, dtype=float)
    eps = tol.eps_membership
    if c.dim == 0:
        return Membership.INSIDE if np.linalg.norm(v) <= eps else Membership.OUTSIDE
    if c.dim < c.ambient_dim and c.span.distance(v) > eps:
        return Membership.OUTSIDE
    t = c.dual_basis @ v
    if np.any(t < -eps):
        return Membership.OUTSIDE
    if np.all(t > eps):
        return Membership.INSIDE
    return Membership.BOUNDARY


def image_cone(w, c: SimplicialCone, tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Image of the cone under an orthogonal transformation (GroupElement
    or orthogonal matrix)."""
    M = np.asarray(getattr(w, "matrix", w), dtype=float)
    n = c.ambient_dim
    if np.abs(M.T @ M - np.eye(n)).max() > 1e-9:
        raise InvalidArgumentError("image_cone requires an orthogonal map")
    if c.dim == 0:
        return c
    return SimplicialCone.from_generators(c.generators @ M.T, tol=tol)


def map_cone(M, c: SimplicialCone, tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Image of the cone under a general linear map.

    Raises DegenerateConeError when the image generators are dependent
    (e.g. (1 - w) for a non-regular w); callers treat that as "does not
    produce a solid cone".
    """
    M = np.asarray(M, dtype=float)
    if c.dim == 0:
        return c
    return SimplicialCone.from_generators(c.generators @ M.T, tol=tol)


def direct_sum(f: SimplicialCone, g: SimplicialCone,
               tol: ToleranceConfig = DEFAULT_TOL) -> SimplicialCone:
    """Cone on the union of generators of two cones with orthogonal spans."""
    if f.ambient_dim != g.ambient_dim:
        raise InvalidArgumentError("direct_sum requires a common ambient space")
    if f.dim and g.dim:
        cross = np.abs(f.span.orthonormal_basis @ g.span.orthonormal_basis.T).max()
        if cross > 1e-9:
            raise InvalidArgumentError("spans are not orthogonal within 1e-9")
    if f.dim == 0:
        return g
    if g.dim == 0:
        return f
    return SimplicialCone.from_generators(
        np.vstack([f.generators, g.generators]), tol=tol)
