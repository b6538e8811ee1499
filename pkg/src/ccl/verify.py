"""One verifier per identity: each check returns a VerificationReport.

Measure-valued identities compare a floating-point left-hand side against
an exact integer fraction; the pass rule is |lhs - rhs| <= 1e-9 when every
cone involved was measured exactly, and 4 * combined standard error when
Monte Carlo was involved.  Count-valued identities must hit their expected
integer on every generic trial, with no tolerance.

Genericity is enforced by margin-and-resample: a trial point that lands
within the configured relative margin of any reflection hyperplane or any
facet of a cone under test is discarded and redrawn deterministically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .angles import DEFAULT_MC, McConfig, measure
from .cones import SimplicialCone, chamber, dual, face, quotient, quotient_dual
from .errors import GenericityError, InvalidArgumentError
from .groups import (Group, normalizer_of_span, parabolic_subgroup,
                     regular_count, subspace_orbits)
from .linalg import DEFAULT_TOL, Subspace, ToleranceConfig
from .roots import RootSystem

__all__ = ["VerificationReport", "GenericPointSampler", "verify_curious",
           "verify_main", "verify_waldspurger_partition",
           "verify_covering_count", "verify_face_oplus_covering",
           "verify_face_decomposition", "verify_parabolic_quotient",
           "verify_equiv_measure", "verify_class_sum", "run_suite",
           "SUITE_IDENTITIES"]

EXACT_TOL = 1e-9
DEFAULT_TRIALS = 100


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity check."""

    identity_name: str
    group: str
    k: int | None
    lhs: float
    rhs_numerator: int
    rhs_denominator: int
    abs_error: float
    combined_stderr: float
    tolerance_rule: str
    passed: bool
    seed: int
    samples: int
    per_term_breakdown: tuple[tuple[str, float, float], ...] = ()

    def to_dict(self) -> dict:
        d = {
            "identity_name": self.identity_name,
            "group": self.group,
            "k": self.k,
            "lhs": self.lhs,
            "rhs_numerator": self.rhs_numerator,
            "rhs_denominator": self.rhs_denominator,
            "abs_error": self.abs_error,
            "combined_stderr": self.combined_stderr,
            "tolerance_rule": self.tolerance_rule,
            "passed": self.passed,
            "seed": self.seed,
            "samples": self.samples,
            "per_term_breakdown": [list(row) for row in self.per_term_breakdown],
        }
        return d


@dataclass
class GenericPointSampler:
    """Deterministic margin-and-resample point source.

    ``classify_fn`` passed to :meth:`sample` must return None for a point
    that is too close to a hyperplane or facet; the sampler then redraws,
    up to ``resample_limit`` times.
    """

    seed: int = 42
    resample_limit: int = 100
    generic_margin: float = DEFAULT_TOL.generic_margin
    resamples: int = field(default=0, init=False)

    def __post_init__(self):
        self._rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed)))

    def sample(self, draw_fn, classify_fn):
        for _ in range(self.resample_limit + 1):
            v = draw_fn(self._rng)
            out = classify_fn(v)
            if out is not None:
                return out
            self.resamples += 1
        raise GenericityError(
            f"no generic point found within {self.resample_limit} resamples")


def _off_hyperplanes(v: np.ndarray, roots: np.ndarray, margin: float) -> bool:
    return np.abs(roots @ v).min() > margin * np.linalg.norm(v)


def _pass_rule(abs_error: float, stderr: float) -> tuple[bool, str]:
    if stderr == 0.0:
        return abs_error <= EXACT_TOL, f"exact: |lhs - rhs| <= {EXACT_TOL:g}"
    return abs_error <= 4.0 * stderr, "mc: |lhs - rhs| <= 4 * combined_stderr"


def _measure_report(name: str, rs: RootSystem, k: int | None, lhs: float,
                    rhs: tuple[int, int], stderr: float, seed: int, samples: int,
                    breakdown, extra_ok: bool = True,
                    rule_suffix: str = "") -> VerificationReport:
    num, den = rhs  # kept unreduced so reports show the raw counts
    abs_error = abs(lhs - num / den)
    ok, rule = _pass_rule(abs_error, stderr)
    return VerificationReport(
        identity_name=name, group=str(rs.group_type), k=k, lhs=lhs,
        rhs_numerator=num, rhs_denominator=den,
        abs_error=abs_error, combined_stderr=stderr,
        tolerance_rule=rule + rule_suffix, passed=bool(ok and extra_ok),
        seed=seed, samples=samples, per_term_breakdown=tuple(breakdown))


def _count_report(name: str, rs: RootSystem, k: int | None, expected: int,
                  counts: list[int], seed: int, trials: int,
                  breakdown) -> VerificationReport:
    deviation = max((abs(c - expected) for c in counts), default=0)
    return VerificationReport(
        identity_name=name, group=str(rs.group_type), k=k,
        lhs=float(deviation), rhs_numerator=expected, rhs_denominator=1,
        abs_error=float(deviation), combined_stderr=0.0,
        tolerance_rule="exact-count: every trial must equal rhs; "
                       "lhs = max |count - rhs| must be 0",
        passed=deviation == 0, seed=seed, samples=0,
        per_term_breakdown=tuple(breakdown) + (
            ("trials", float(trials), 0.0),
            ("min_count", float(min(counts, default=expected)), 0.0),
            ("max_count", float(max(counts, default=expected)), 0.0),
        ))


def _fmt_subset(I) -> str:
    return "{" + ",".join(str(i) for i in sorted(I)) + "}"


# ---------------------------------------------------------------------------
# measure-valued identities


def verify_curious(rs: RootSystem, g: Group, mc: McConfig = DEFAULT_MC,
                   tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """sigma(C*) = (number of fixed-point-free elements) / |W|."""
    est = measure(dual(chamber(rs), tol), mc, tol)
    rhs = (g.counts_by_fixed_dim[0], g.order)
    return _measure_report(
        "curious", rs, None, est.value, rhs, est.stderr, mc.seed, est.samples,
        [("sigma(dual chamber)", est.value, est.stderr)])


def verify_main(rs: RootSystem, g: Group, k: int, mc: McConfig = DEFAULT_MC,
                tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """sum over k-dim chamber faces F of sigma(F) * sigma((C/F)*) equals
    |W^k| / |W|."""
    n = rs.n
    if not 0 <= k <= n:
        raise InvalidArgumentError(f"k must be in 0..{n}")
    ch = chamber(rs)
    lhs, var, samples = 0.0, 0.0, 0
    breakdown = []
    for I in itertools.combinations(range(n), k):
        a = measure(face(ch, I, tol), mc, tol)
        b = measure(quotient_dual(ch, I, tol), mc, tol)
        term = a.value * b.value
        s = math.sqrt((a.value * b.stderr) ** 2 + (b.value * a.stderr) ** 2)
        lhs += term
        var += s * s
        samples = max(samples, a.samples, b.samples)
        breakdown.append((f"I={_fmt_subset(I)}", term, s))
    rhs = (g.counts_by_fixed_dim[k], g.order)
    return _measure_report("main", rs, k, lhs, rhs, math.sqrt(var),
                           mc.seed, samples, breakdown)


def verify_equiv_measure(rs: RootSystem, g: Group, cls, mc: McConfig = DEFAULT_MC,
                         tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Sum of sigma over one equivalence class of chamber faces equals
    |W_F| / |N_F| for the class representative."""
    cls = sorted(tuple(sorted(int(i) for i in J)) for J in cls)
    ch = chamber(rs)
    lhs, var, samples = 0.0, 0.0, 0
    breakdown = []
    for J in cls:
        est = measure(face(ch, J, tol), mc, tol)
        lhs += est.value
        var += est.stderr ** 2
        samples = max(samples, est.samples)
        breakdown.append((f"sigma(F_{_fmt_subset(J)})", est.value, est.stderr))
    rep = cls[0]
    w_f = parabolic_subgroup(g, rep)
    span = Subspace.from_spanning(rs.fundamental_weights[list(rep)], ambient_dim=rs.n)
    n_f = normalizer_of_span(g, span)
    rhs = (len(w_f), len(n_f))
    return _measure_report("equiv-measure", rs, len(rep), lhs, rhs,
                           math.sqrt(var), mc.seed, samples, breakdown)


def verify_class_sum(rs: RootSystem, g: Group, k: int,
                     seed: int = 0) -> VerificationReport:
    """Exact rational identity: sum over face-equivalence classes of
    |W^reg_F| / |N_F| equals |W^k| / |W|.

    Entirely deterministic; ``seed`` is only echoed into the report.
    """
    n = rs.n
    if not 0 <= k <= n:
        raise InvalidArgumentError(f"k must be in 0..{n}")
    total = Fraction(0)
    breakdown = []
    for cls in subspace_orbits(g, k):
        rep = cls[0]
        sub = parabolic_subgroup(g, rep)
        span = Subspace.from_spanning(rs.fundamental_weights[list(rep)],
                                      ambient_dim=n)
        n_f = normalizer_of_span(g, span)
        term = Fraction(regular_count(sub, n - k), len(n_f))
        total += term
        breakdown.append((f"class rep {_fmt_subset(rep)}", float(term), 0.0))
    rhs = Fraction(g.counts_by_fixed_dim[k], g.order)
    exact = total == rhs
    return VerificationReport(
        identity_name="class-sum", group=str(rs.group_type), k=k,
        lhs=float(total), rhs_numerator=g.counts_by_fixed_dim[k],
        rhs_denominator=g.order,
        abs_error=float(abs(total - rhs)), combined_stderr=0.0,
        tolerance_rule="exact-rational: fractions must be equal",
        passed=exact, seed=seed, samples=0, per_term_breakdown=tuple(breakdown))


# ---------------------------------------------------------------------------
# count-valued identities


def verify_waldspurger_partition(rs: RootSystem, g: Group,
                                 sampler: GenericPointSampler | None = None,
                                 trials: int = DEFAULT_TRIALS,
                                 tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Every generic interior point of C* lies in (1 - w) C-interior for
    exactly one group element w (necessarily fixed-point free)."""
    sampler = sampler or GenericPointSampler(generic_margin=tol.generic_margin)
    n, margin = rs.n, sampler.generic_margin
    alpha = rs.simple_roots
    regular = np.flatnonzero(g.fixed_dims == 0)
    one_minus = np.eye(n) - g.matrix_stack[regular]

    def draw(rng):
        return rng.uniform(0.0, 1.0, size=n)

    def classify(u):
        v = u @ alpha
        if u.min() <= margin or not _off_hyperplanes(v, rs.all_roots, margin):
            return None
        x = np.linalg.solve(one_minus, v)          # (m, n), one row per regular w
        resid = np.abs(np.einsum("mij,mj->mi", one_minus, x) - v).max()
        if resid > 1e-8 * np.linalg.norm(v):
            raise InvalidArgumentError("linear solve residual too large")
        coords = x @ alpha.T
        bands = margin * np.linalg.norm(x, axis=1, keepdims=True)
        if (np.abs(coords) <= bands).any():
            return None
        return int(np.count_nonzero((coords > bands).all(axis=1)))

    counts = [sampler.sample(draw, classify) for _ in range(trials)]
    return _count_report(
        "waldspurger", rs, None, 1, counts, sampler.seed, trials,
        [("regular_elements", float(len(regular)), 0.0),
         ("resamples", float(sampler.resamples), 0.0)])


def verify_covering_count(rs: RootSystem, g: Group,
                          sampler: GenericPointSampler | None = None,
                          trials: int = DEFAULT_TRIALS,
                          tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """A generic point of V is covered by exactly |W^0| of the |W| dual
    chamber copies w C*."""
    sampler = sampler or GenericPointSampler(generic_margin=tol.generic_margin)
    n, margin = rs.n, sampler.generic_margin
    dc = dual(chamber(rs), tol)
    omega_hat = dc.dual_basis / np.linalg.norm(dc.dual_basis, axis=1, keepdims=True)
    stack = g.matrix_stack
    expected = g.counts_by_fixed_dim[0]

    def draw(rng):
        return rng.standard_normal(n)

    def classify(v):
        if not _off_hyperplanes(v, rs.all_roots, margin):
            return None
        x = np.einsum("i,mij->mj", v, stack)       # rows w^{-1} v
        coords = x @ omega_hat.T
        band = margin * np.linalg.norm(v)
        if (np.abs(coords) <= band).any():
            return None
        return int(np.count_nonzero((coords > band).all(axis=1)))

    counts = [sampler.sample(draw, classify) for _ in range(trials)]
    return _count_report(
        "covering", rs, None, expected, counts, sampler.seed, trials,
        [("resamples", float(sampler.resamples), 0.0)])


def _pairs_spanning(rs: RootSystem, g: Group, I,
                    tol: ToleranceConfig) -> tuple[list[tuple[int, tuple[int, ...]]], np.ndarray]:
    """All pairs (element index, subset J) with w . span(F_J) = span(F_I),
    plus the projector of the target span."""
    n = rs.n
    I = tuple(sorted(int(i) for i in I))
    k = len(I)
    W = rs.fundamental_weights
    target = Subspace.from_spanning(W[list(I)], ambient_dim=n).projector()
    stack = g.matrix_stack
    pairs = []
    for J in itertools.combinations(range(n), k):
        P = Subspace.from_spanning(W[list(J)], ambient_dim=n).projector()
        imgs = stack @ P @ np.transpose(stack, (0, 2, 1))
        hits = np.flatnonzero(np.abs(imgs - target).max(axis=(1, 2)) <= 1e-8)
        pairs.extend((int(w), J) for w in hits)
    return pairs, target


def verify_face_oplus_covering(rs: RootSystem, g: Group, I,
                               sampler: GenericPointSampler | None = None,
                               trials: int = DEFAULT_TRIALS,
                               tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """A generic point of V is covered by |W^reg_U| of the full-dimensional
    cones w(F_J + orthogonal dual quotient) whose face part spans U."""
    sampler = sampler or GenericPointSampler(generic_margin=tol.generic_margin)
    n, margin = rs.n, sampler.generic_margin
    I = tuple(sorted(int(i) for i in I))
    k = len(I)
    pairs, _ = _pairs_spanning(rs, g, I, tol)
    ch = chamber(rs)

    # generator matrix of F_J + (C/F_J)* is weights[J] stacked with alpha[not J]
    base: dict[tuple[int, ...], np.ndarray] = {}
    for J in {J for _, J in pairs}:
        rest = [j for j in range(n) if j not in J]
        base[J] = np.vstack([rs.fundamental_weights[list(J)], ch.dual_basis[rest]])
    gens = np.array([base[J] @ g.matrix_stack[w].T for w, J in pairs])
    duals = np.linalg.inv(np.transpose(gens, (0, 2, 1)))  # rows = facet normals
    duals /= np.linalg.norm(duals, axis=2, keepdims=True)

    expected = regular_count(parabolic_subgroup(g, I), n - k)

    def draw(rng):
        return rng.standard_normal(n)

    def classify(v):
        if not _off_hyperplanes(v, rs.all_roots, margin):
            return None
        coords = duals @ v
        band = margin * np.linalg.norm(v)
        if (np.abs(coords) <= band).any():
            return None
        return int(np.count_nonzero((coords > band).all(axis=1)))

    counts = [sampler.sample(draw, classify) for _ in range(trials)]
    return _count_report(
        "oplus", rs, k, expected, counts, sampler.seed, trials,
        [(f"I={_fmt_subset(I)} pairs", float(len(pairs)), 0.0),
         ("resamples", float(sampler.resamples), 0.0)])


# ---------------------------------------------------------------------------
# decomposition / quotient structure


def _collect_faces_in_span(rs: RootSystem, g: Group, I,
                           tol: ToleranceConfig) -> list[np.ndarray]:
    """Distinct cones w . F_J whose span equals span(F_I), as generator
    matrices (deduplicated on rounded unit generators)."""
    pairs, _ = _pairs_spanning(rs, g, I, tol)
    seen: dict[tuple, np.ndarray] = {}
    W = rs.fundamental_weights
    for w, J in pairs:
        gens = W[list(J)] @ g.matrix_stack[w].T
        unit = gens / np.linalg.norm(gens, axis=1, keepdims=True)
        key = tuple(sorted(map(tuple, np.round(unit, 6))))
        seen.setdefault(key, gens)
    return list(seen.values())


def verify_face_decomposition(rs: RootSystem, g: Group, I,
                              mc: McConfig = DEFAULT_MC,
                              sampler: GenericPointSampler | None = None,
                              trials: int = DEFAULT_TRIALS,
                              tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """The distinct chamber faces lying in U = span(F_I) tile U: their
    measures sum to 1 and a generic point of U sits inside exactly one."""
    sampler = sampler or GenericPointSampler(generic_margin=tol.generic_margin)
    n, margin = rs.n, sampler.generic_margin
    I = tuple(sorted(int(i) for i in I))
    k = len(I)

    if k == 0:
        # U = {0}: the single face is the zero cone, measure 1 by convention
        return _measure_report(
            "decomposition", rs, 0, 1.0, (1, 1), 0.0, sampler.seed, 0,
            [("zero cone", 1.0, 0.0)], rule_suffix="; unique containment trivial")

    gen_mats = _collect_faces_in_span(rs, g, I, tol)
    cones = [SimplicialCone.from_generators(gm, tol=tol) for gm in gen_mats]
    lhs, var, samples = 0.0, 0.0, 0
    breakdown = [(f"I={_fmt_subset(I)}", float(len(I)), 0.0)]
    for i, c in enumerate(cones):
        est = measure(c, mc, tol)
        lhs += est.value
        var += est.stderr ** 2
        samples = max(samples, est.samples)
        breakdown.append((f"piece {i}", est.value, est.stderr))

    U = Subspace.from_spanning(rs.fundamental_weights[list(I)], ambient_dim=n)
    B = U.orthonormal_basis
    duals = np.array([c.dual_basis for c in cones])      # (p, k, n)
    duals = duals / np.linalg.norm(duals, axis=2, keepdims=True)

    def draw(rng):
        return rng.standard_normal(k) @ B

    def classify(v):
        coords = duals @ v
        band = margin * np.linalg.norm(v)
        if (np.abs(coords) <= band).any():
            return None
        return int(np.count_nonzero((coords > band).all(axis=1)))

    containments = [sampler.sample(draw, classify) for _ in range(trials)]
    bad = sum(1 for c in containments if c != 1)
    breakdown.append(("containment_failures", float(bad), 0.0))
    breakdown.append(("num_pieces", float(len(cones)), 0.0))
    return _measure_report(
        "decomposition", rs, k, lhs, (1, 1), math.sqrt(var),
        sampler.seed, samples, breakdown, extra_ok=(bad == 0),
        rule_suffix="; and every generic point of U in exactly one piece")


def verify_parabolic_quotient(rs: RootSystem, g: Group, I,
                              mc: McConfig = DEFAULT_MC,
                              sampler: GenericPointSampler | None = None,
                              trials: int = DEFAULT_TRIALS,
                              tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """The projected chamber C/F is a fundamental cone for the face fixator
    acting on span(F)-perp, and sigma((C/F)*) = |W^reg_F| / |W_F|."""
    sampler = sampler or GenericPointSampler(generic_margin=tol.generic_margin)
    n, margin = rs.n, sampler.generic_margin
    I = tuple(sorted(int(i) for i in I))
    d = n - len(I)
    sub = parabolic_subgroup(g, I)
    ch = chamber(rs)
    breakdown = [(f"I={_fmt_subset(I)}", float(len(I)), 0.0)]

    # (a) the |W_F| translates of C/F tile span(F)-perp
    bad = 0
    if d > 0:
        q = quotient(ch, I, tol)
        B = q.span.orthonormal_basis
        mats = sub.matrices()
        # dual bases of the translates: orthogonal maps send duals to duals
        duals = np.einsum("kj,mij->mki", q.dual_basis, mats)
        duals = duals / np.linalg.norm(duals, axis=2, keepdims=True)

        def draw(rng):
            return rng.standard_normal(d) @ B

        def classify(v):
            coords = duals @ v
            band = margin * np.linalg.norm(v)
            if (np.abs(coords) <= band).any():
                return None
            return int(np.count_nonzero((coords > band).all(axis=1)))

        containments = [sampler.sample(draw, classify) for _ in range(trials)]
        bad = sum(1 for c in containments if c != 1)
        breakdown.append(("tiling_trials", float(trials), 0.0))
    breakdown.append(("tiling_failures", float(bad), 0.0))

    # (b) sigma((C/F)*) equals the fixed-point-free fraction of W_F
    est = measure(quotient_dual(ch, I, tol), mc, tol)
    rhs = (regular_count(sub, d), len(sub))
    breakdown.append(("sigma(quotient dual)", est.value, est.stderr))
    return _measure_report(
        "parabolic", rs, len(I), est.value, rhs, est.stderr, mc.seed,
        est.samples, breakdown, extra_ok=(bad == 0),
        rule_suffix="; and the W_F translates of C/F tile span(F)-perp")


# ---------------------------------------------------------------------------
# full suite

SUITE_IDENTITIES = ("curious", "main", "waldspurger", "covering", "oplus",
                    "decomposition", "parabolic", "equiv-measure", "class-sum")


def run_suite(rs: RootSystem, g: Group, identities=SUITE_IDENTITIES,
              k: int | None = None, mc: McConfig = DEFAULT_MC,
              trials: int = DEFAULT_TRIALS, seed: int | None = None,
              tol: ToleranceConfig = DEFAULT_TOL) -> list[VerificationReport]:
    """Run the requested verifiers over their full parameter range.

    ``k`` restricts the k-indexed identities to a single value when given.
    Every sampling verifier gets a fresh sampler with the same seed, so the
    output is independent of which identities run together.
    """
    seed = mc.seed if seed is None else seed
    n = rs.n
    ks = range(n + 1) if k is None else [k]
    subsets = [J for r in ks for J in itertools.combinations(range(n), r)]

    def new_sampler():
        return GenericPointSampler(seed=seed, generic_margin=tol.generic_margin)

    reports: list[VerificationReport] = []
    for name in identities:
        if name == "curious":
            reports.append(verify_curious(rs, g, mc, tol))
        elif name == "main":
            reports.extend(verify_main(rs, g, kk, mc, tol) for kk in ks)
        elif name == "waldspurger":
            reports.append(verify_waldspurger_partition(rs, g, new_sampler(),
                                                        trials, tol))
        elif name == "covering":
            reports.append(verify_covering_count(rs, g, new_sampler(), trials, tol))
        elif name == "oplus":
            reports.extend(
                verify_face_oplus_covering(rs, g, J, new_sampler(), trials, tol)
                for J in subsets)
        elif name == "decomposition":
            reports.extend(
                verify_face_decomposition(rs, g, J, mc, new_sampler(), trials, tol)
                for J in subsets)
        elif name == "parabolic":
            reports.extend(
                verify_parabolic_quotient(rs, g, J, mc, new_sampler(), trials, tol)
                for J in subsets)
        elif name == "equiv-measure":
            for kk in ks:
                reports.extend(verify_equiv_measure(rs, g, cls, mc, tol)
                               for cls in subspace_orbits(g, kk))
        elif name == "class-sum":
            reports.extend(verify_class_sum(rs, g, kk, seed=seed) for kk in ks)
        else:
            raise InvalidArgumentError(f"unknown identity {name!r}")
    return reports
