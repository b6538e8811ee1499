"""Root systems for the supported finite reflection groups.

Every family goes through one uniform construction: build the Coxeter
matrix, form the Gram matrix G_ij = -cos(pi / m_ij), take simple roots as
the rows of its Cholesky factor (so the essential representation has
ambient dimension equal to the rank), and close the simple roots under the
simple reflections to obtain the full unit root set.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FeatureDisabledError,
    InvalidArgumentError,
    NonFiniteSystemError,
    UnsupportedGroupError,
)
from .linalg import DEFAULT_TOL, ToleranceConfig

__all__ = ["GroupType", "RootSystem", "build", "generate_roots",
           "fundamental_weights", "SUPPORTED_TYPES"]

_CLOSURE_CAP = 10_000


@dataclass(frozen=True)
class GroupType:
    """Identifier for one irreducible reflection group.

    family is one of A, B, D, I2, H3, F4, H4; ``m`` is the dihedral edge
    label and is only meaningful for I2.
    """

    family: str
    rank: int
    m: int | None = None

    @staticmethod
    def parse(spec: str) -> "GroupType":
        """Parse a spec string like ``A2``, ``B4``, ``I2(7)``, ``h3``."""
        s = spec.strip().upper()
        mobj = re.fullmatch(r"I2\((\d+)\)", s)
        if mobj:
            return GroupType("I2", 2, int(mobj.group(1))).validated()
        mobj = re.fullmatch(r"([A-Z])(\d+)", s)
        if not mobj:
            raise UnsupportedGroupError(f"cannot parse group spec {spec!r}")
        fam, rank = mobj.group(1), int(mobj.group(2))
        if fam == "C":
            raise UnsupportedGroupError(
                f"C{rank} is the same reflection group as B{rank}; use B{rank}")
        if fam in ("H", "F"):
            return GroupType(fam + str(rank), rank).validated()
        return GroupType(fam, rank).validated()

    def validated(self) -> "GroupType":
        f, r = self.family, self.rank
        if f == "A" and 1 <= r <= 5:
            return self
        if f == "B" and 2 <= r <= 4:
            return self
        if f == "D":
            if r in (2, 3):
                raise UnsupportedGroupError(
                    f"D{r} is reducible or an alias of A{r}; not supported")
            if r == 4:
                return self
        if f == "I2":
            if self.m is None or self.m < 3:
                raise UnsupportedGroupError("I2(m) requires m >= 3")
            if self.m > 12:
                raise UnsupportedGroupError("I2(m) supported for 3 <= m <= 12")
            return self
        if f in ("H3", "F4", "H4") and r == int(f[1]):
            return self
        raise UnsupportedGroupError(f"unsupported group type {self}")

    def __str__(self) -> str:
        if self.family == "I2":
            return f"I2({self.m})"
        if self.family in ("H3", "F4", "H4"):
            return self.family
        return f"{self.family}{self.rank}"


def _supported_types() -> tuple[GroupType, ...]:
    types = [GroupType("A", r) for r in range(1, 6)]
    types += [GroupType("B", r) for r in (2, 3, 4)]
    types += [GroupType("D", 4)]
    types += [GroupType("I2", 2, m) for m in range(3, 13)]
    types += [GroupType("H3", 3), GroupType("F4", 4), GroupType("H4", 4)]
    return tuple(types)


SUPPORTED_TYPES = _supported_types()

# Exponents m_1..m_n; the enumeration-time Solomon check validates these.
_EXPONENTS = {
    "A": lambda r, m: tuple(range(1, r + 1)),
    "B": lambda r, m: tuple(range(1, 2 * r, 2)),
    "D": lambda r, m: tuple(list(range(1, 2 * r - 2, 2)) + [r - 1]),
    "I2": lambda r, m: (1, m - 1),
    "H3": lambda r, m: (1, 5, 9),
    "F4": lambda r, m: (1, 5, 7, 11),
    "H4": lambda r, m: (1, 11, 19, 29),
}

_ROOT_COUNT = {
    "A": lambda r, m: r * (r + 1),
    "B": lambda r, m: 2 * r * r,
    "D": lambda r, m: 2 * r * (r - 1),
    "I2": lambda r, m: 2 * m,
    "H3": lambda r, m: 30,
    "F4": lambda r, m: 48,
    "H4": lambda r, m: 120,
}

_ORDER = {
    "A": lambda r, m: math.factorial(r + 1),
    "B": lambda r, m: (2 ** r) * math.factorial(r),
    "D": lambda r, m: (2 ** (r - 1)) * math.factorial(r),
    "I2": lambda r, m: 2 * m,
    "H3": lambda r, m: 120,
    "F4": lambda r, m: 1152,
    "H4": lambda r, m: 14400,
}


def coxeter_matrix(t: GroupType) -> np.ndarray:
    """Coxeter matrix with the fixed node labeling used everywhere in ccl.

    A_n / B_n / H3 / F4 / H4 are paths with edge labels
    (3,...,3), (3,...,3,4), (5,3), (3,4,3), (5,3,3); D4 is the star with
    node 1 central.
    """
    r = t.rank
    M = 2 * np.ones((r, r), dtype=int)
    np.fill_diagonal(M, 1)

    def edge(i, j, label):
        M[i, j] = M[j, i] = label

    if t.family in ("A", "B"):
        for i in range(r - 1):
            edge(i, i + 1, 3)
        if t.family == "B":
            edge(r - 2, r - 1, 4)
    elif t.family == "D":
        edge(0, 1, 3)
        edge(1, 2, 3)
        edge(1, 3, 3)
    elif t.family == "I2":
        edge(0, 1, t.m)
    elif t.family == "H3":
        edge(0, 1, 5)
        edge(1, 2, 3)
    elif t.family == "F4":
        edge(0, 1, 3)
        edge(1, 2, 4)
        edge(2, 3, 3)
    elif t.family == "H4":
        edge(0, 1, 5)
        edge(1, 2, 3)
        edge(2, 3, 3)
    return M


def gram_matrix(t: GroupType) -> np.ndarray:
    M = coxeter_matrix(t)
    G = -np.cos(np.pi / M)
    np.fill_diagonal(G, 1.0)
    return G


@dataclass(frozen=True)
class RootSystem:
    """Simple roots, full unit root set, and fundamental weights of one group.

    All arrays are read-only; rows are vectors.  Weights are normalized so
    that (alpha_j, omega_i) = delta_ij.
    """

    group_type: GroupType
    n: int
    simple_roots: np.ndarray        # (n, n)
    all_roots: np.ndarray           # (N, n), unit rows, deduplicated, sorted
    fundamental_weights: np.ndarray  # (n, n)
    exponents: tuple[int, ...]
    tol: ToleranceConfig = field(default=DEFAULT_TOL, compare=False)

    @property
    def num_roots(self) -> int:
        return self.all_roots.shape[0]

    @property
    def num_positive_roots(self) -> int:
        return self.all_roots.shape[0] // 2

    def expected_order(self) -> int:
        return _ORDER[self.group_type.family](self.group_type.rank, self.group_type.m)

    def match_root(self, v: np.ndarray) -> int:
        """Index of the root nearest to v; error if none within eps_root_match."""
        d = np.linalg.norm(self.all_roots - v, axis=1)
        i = int(np.argmin(d))
        if d[i] > self.tol.eps_root_match:
            raise InvalidArgumentError("vector does not match any root")
        return i

    def reflection_matrix(self, root: np.ndarray) -> np.ndarray:
        a = np.asarray(root, dtype=float)
        return np.eye(self.n) - 2.0 * np.outer(a, a) / (a @ a)


def _reflect(roots: np.ndarray, a: np.ndarray) -> np.ndarray:
    return roots - 2.0 * np.outer(roots @ a, a)


def generate_roots(simple, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Close the simple roots under the simple reflections.

    Returns the full unit root set, deduplicated with eps_root_match and
    sorted lexicographically on coordinates rounded to 9 decimals.
    """
    S = np.asarray(simple, dtype=float)
    norms = np.linalg.norm(S, axis=1)
    if np.abs(norms - 1.0).max() > 1e-9:
        raise InvalidArgumentError("simple roots must be unit length")
    eigs = np.linalg.eigvalsh(S @ S.T)
    if eigs.min() <= tol.eps_rank:
        raise InvalidArgumentError("Gram matrix of simple roots is not positive definite")

    roots: list[np.ndarray] = [S[i].copy() for i in range(S.shape[0])]
    stack = np.array(roots)
    frontier = list(range(len(roots)))
    while frontier:
        new_frontier = []
        for idx in frontier:
            for j in range(S.shape[0]):
                img = roots[idx] - 2.0 * (roots[idx] @ S[j]) * S[j]
                dists = np.linalg.norm(stack - img, axis=1)
                if dists.min() > tol.eps_root_match:
                    roots.append(img)
                    stack = np.vstack([stack, img])
                    new_frontier.append(len(roots) - 1)
                    if len(roots) > _CLOSURE_CAP:
                        raise NonFiniteSystemError(
                            f"root closure exceeded {_CLOSURE_CAP} vectors")
        frontier = new_frontier

    order = sorted(range(len(roots)),
                   key=lambda i: tuple(np.round(roots[i], 9)))
    out = np.array([roots[i] for i in order])
    out.setflags(write=False)
    return out


def fundamental_weights(simple) -> np.ndarray:
    """Weights omega_i with (alpha_j, omega_i) = delta_ij, as rows."""
    A = np.asarray(simple, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError("simple roots must form a square matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= DEFAULT_TOL.eps_rank:
        raise InvalidArgumentError("simple roots are linearly dependent")
    W = np.linalg.inv(A).T
    W.setflags(write=False)
    return W


def build(t: GroupType, tol: ToleranceConfig = DEFAULT_TOL,
          enable_h4: bool = False) -> RootSystem:
    """Construct the root system for a supported group type.

    H4 has 14400 elements and is gated behind ``enable_h4``.
    """
    t = t.validated()
    if t.family == "H4" and not enable_h4:
        raise FeatureDisabledError(
            "H4 is disabled by default (14400 elements); pass enable_h4=True")

    G = gram_matrix(t)
    L = np.linalg.cholesky(G)
    simple = L  # rows are unit simple roots realizing the Gram matrix

    if np.abs(simple @ simple.T - G).max() > 1e-9:
        raise InvalidArgumentError("Cholesky construction failed the Gram check")

    all_roots = generate_roots(simple, tol)
    expected = _ROOT_COUNT[t.family](t.rank, t.m)
    if all_roots.shape[0] != expected:
        raise NonFiniteSystemError(
            f"{t}: generated {all_roots.shape[0]} roots, expected {expected}")

    weights = fundamental_weights(simple)
    # weights must lie in the closed fundamental chamber
    prods = weights @ simple.T  # (i, j) -> (omega_i, alpha_j)
    if prods.min() < -1e-9:
        raise InvalidArgumentError("fundamental weights fell outside the chamber")

    simple = simple.copy()
    simple.setflags(write=False)
    rs = RootSystem(
        group_type=t,
        n=t.rank,
        simple_roots=simple,
        all_roots=all_roots,
        fundamental_weights=weights,
        exponents=_EXPONENTS[t.family](t.rank, t.m),
        tol=tol,
    )
    _check_closure_bijection(rs)
    return rs


def _check_closure_bijection(rs: RootSystem) -> None:
    """Every simple reflection must permute the root list exactly."""
    for j in range(rs.n):
        images = _reflect(rs.all_roots, rs.simple_roots[j])
        perm = np.array([rs.match_root(v) for v in images])
        if len(set(perm.tolist())) != rs.num_roots:
            raise NonFiniteSystemError(
                f"simple reflection {j} does not permute the root set")
