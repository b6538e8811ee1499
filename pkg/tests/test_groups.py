import itertools
import math

import numpy as np
import pytest

import ccl
from ccl.groups import (enumerate_group, fixed_space_dim,
                        group_from_perm_stack, normalizer_of_span,
                        parabolic_subgroup, regular_count, solomon_check,
                        subspace_orbits)
from ccl.linalg import Subspace

ORDERS = {
    "A1": 2, "A2": 6, "A3": 24, "A4": 120, "A5": 720,
    "B2": 8, "B3": 48, "B4": 384, "D4": 192,
    "I2(5)": 10, "I2(9)": 18, "H3": 120, "F4": 1152,
}


# ---------------------------------------------------------------------------
# independent oracles

def stirling_counts(n):
    """Fixed-dim profile of S_{n+1} on its essential n-dim representation:
    fixed dimension = (#cycles - 1)."""
    counts = [0] * (n + 1)
    for p in itertools.permutations(range(n + 1)):
        seen, ncyc = set(), 0
        for i in range(n + 1):
            if i not in seen:
                ncyc += 1
                j = i
                while j not in seen:
                    seen.add(j)
                    j = p[j]
        counts[ncyc - 1] += 1
    return counts


def signed_perm_counts(n, even_only=False):
    """Fixed-dim profile of signed permutations: fixed dimension equals the
    number of sign-positive cycles."""
    counts = [0] * (n + 1)
    for p in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if even_only and int(np.prod(signs)) != 1:
                continue
            seen, pos = set(), 0
            for i in range(n):
                if i not in seen:
                    j, s = i, 1
                    while j not in seen:
                        seen.add(j)
                        s *= signs[j]
                        j = p[j]
                    if s == 1:
                        pos += 1
            counts[pos] += 1
    return counts


def dihedral_counts(m):
    """Fixed-dim profile of the order-2m dihedral group from explicit
    rotation/reflection matrices."""
    counts = [0, 0, 0]
    for k in range(m):
        t = 2 * math.pi * k / m
        rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        ref = np.array([[math.cos(t), math.sin(t)], [math.sin(t), -math.cos(t)]])
        for M in (rot, ref):
            s = np.linalg.svd(np.eye(2) - M, compute_uv=False)
            counts[int((s < 1e-9).sum())] += 1
    return counts


def solomon_poly(exps):
    coeffs = [1]
    for m in exps:
        coeffs = [a + m * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


# ---------------------------------------------------------------------------
# enumeration

@pytest.mark.parametrize("spec,order", sorted(ORDERS.items()))
def test_orders(spec, order, built):
    _, g = built(spec)
    assert g.order == order


def test_counts_match_cycle_oracle_a_family(built):
    for n in (1, 2, 3, 4):
        _, g = built(f"A{n}")
        assert list(g.counts_by_fixed_dim) == stirling_counts(n)


def test_counts_match_signed_perm_oracle(built):
    assert list(built("B2")[1].counts_by_fixed_dim) == signed_perm_counts(2)
    assert list(built("B3")[1].counts_by_fixed_dim) == signed_perm_counts(3)
    assert list(built("B4")[1].counts_by_fixed_dim) == signed_perm_counts(4)
    assert list(built("D4")[1].counts_by_fixed_dim) == signed_perm_counts(4, True)


def test_counts_match_dihedral_oracle(built):
    for m in (3, 5, 7, 8, 12):
        _, g = built(f"I2({m})")
        assert list(g.counts_by_fixed_dim) == dihedral_counts(m)


def test_h3_counts_from_exponent_expansion(built):
    rs, g = built("H3")
    # (1+t)(1+5t)(1+9t) = 1 + 15t + 59t^2 + 45t^3, coefficient k is |W^{n-k}|
    assert solomon_poly(rs.exponents) == [1, 15, 59, 45]
    assert g.counts_by_fixed_dim == (45, 59, 15, 1)


def test_f4_counts_from_exponent_expansion(built):
    rs, g = built("F4")
    assert solomon_poly(rs.exponents) == [1, 24, 190, 552, 385]
    assert g.counts_by_fixed_dim == (385, 552, 190, 24, 1)


@pytest.mark.parametrize("spec", sorted(ORDERS))
def test_count_invariants(spec, built):
    rs, g = built(spec)
    assert sum(g.counts_by_fixed_dim) == g.order
    assert g.counts_by_fixed_dim[rs.n] == 1
    assert g.counts_by_fixed_dim[rs.n - 1] == rs.num_positive_roots
    assert g.order == rs.expected_order()


def test_element_zero_is_identity(built):
    rs, g = built("B3")
    assert g.elements[0].perm == tuple(range(rs.num_roots))
    assert g.elements[0].word_length == 0
    assert np.allclose(g.elements[0].matrix, np.eye(3), atol=1e-12)


def test_matrix_perm_consistency(built):
    for spec in ("A3", "B3", "I2(7)", "F4"):
        rs, g = built(spec)
        for el in (g.elements[i] for i in
                   np.random.default_rng(5).integers(0, g.order, 25)):
            images = rs.all_roots @ el.matrix.T
            for i, img in enumerate(images):
                assert np.linalg.norm(rs.all_roots[el.perm[i]] - img) \
                    <= rs.tol.eps_root_match


@pytest.mark.parametrize("spec", sorted(ORDERS) + ["I2(6)", "I2(12)"])
def test_group_closure(spec, built):
    # exhaustive when |W| <= 200, 10000 random pairs otherwise
    _, g = built(spec)
    if g.order <= 200:
        for i in range(g.order):
            for j in range(g.order):
                g.compose(i, j)  # raises if the product were missing
    else:
        rng = np.random.default_rng(99)
        for i, j in rng.integers(0, g.order, (10_000, 2)):
            g.compose(int(i), int(j))


def test_bfs_is_deterministic(built):
    rs, _ = built("B3")
    g1 = enumerate_group(rs)
    g2 = enumerate_group(rs)
    assert [e.perm for e in g1.elements] == [e.perm for e in g2.elements]


def test_element_cap():
    rs = ccl.build(ccl.GroupType.parse("A4"))
    with pytest.raises(ccl.GroupTooLargeError):
        enumerate_group(rs, cap=50)


def test_group_from_perm_stack_round_trip(built):
    rs, g = built("B3")
    g2 = group_from_perm_stack(rs, g.perm_stack)
    assert [e.perm for e in g2.elements] == [e.perm for e in g.elements]
    assert [e.word_length for e in g2.elements] == [e.word_length for e in g.elements]
    assert g2.counts_by_fixed_dim == g.counts_by_fixed_dim
    with pytest.raises(ccl.InvalidArgumentError):
        group_from_perm_stack(rs, g.perm_stack[1:])  # identity not first


# ---------------------------------------------------------------------------
# fixed spaces

def test_fixed_space_dim_identity_and_reflections(built):
    rs, g = built("B3")
    assert fixed_space_dim(g.elements[0]) == 3
    for sid in g.simple_reflection_ids:
        assert fixed_space_dim(g.elements[sid]) == 2


def test_fixed_space_dim_coxeter_element_a2(built):
    rs, g = built("A2")
    s1, s2 = g.simple_reflection_ids
    cox = g.compose(s1, s2)
    assert fixed_space_dim(g.elements[cox]) == 0
    # oracle: the product of the two reflections is a 120-degree rotation
    tr = np.trace(g.elements[cox].matrix)
    assert abs(tr - 2 * math.cos(2 * math.pi / 3)) <= 1e-9


# ---------------------------------------------------------------------------
# Solomon formula

def test_solomon_a2(built):
    _, g = built("A2")
    assert solomon_check(g, (1, 2))
    assert not solomon_check(g, (1, 3))


def test_solomon_b2(built):
    _, g = built("B2")
    assert solomon_check(g, (1, 3))


@pytest.mark.parametrize("spec", sorted(ORDERS))
def test_solomon_all(spec, built):
    rs, g = built(spec)
    assert solomon_check(g, rs.exponents)


def test_solomon_rejects_wrong_length(built):
    _, g = built("A2")
    with pytest.raises(ccl.InvalidArgumentError):
        solomon_check(g, (1, 2, 3))


# ---------------------------------------------------------------------------
# parabolics, normalizers, orbits

def test_parabolic_extremes(built):
    rs, g = built("B3")
    assert len(parabolic_subgroup(g, range(rs.n))) == 1
    assert len(parabolic_subgroup(g, ())) == g.order


def test_parabolic_a2_single_index(built):
    rs, g = built("A2")
    sub = parabolic_subgroup(g, (0,))
    assert len(sub) == 2
    # brute-force fixator oracle over all six elements
    w0 = rs.fundamental_weights[0]
    fix = [i for i in range(g.order)
           if np.linalg.norm(g.elements[i].matrix @ w0 - w0) <= 1e-9]
    assert sorted(sub.indices) == fix


def test_regular_count_examples(built):
    rs, g = built("A2")
    trivial = parabolic_subgroup(g, range(rs.n))
    assert regular_count(trivial, 0) == 1
    sub = parabolic_subgroup(g, (0,))
    assert regular_count(sub, 1) == 1
    rs3, g3 = built("H3")
    assert regular_count(parabolic_subgroup(g3, ()), 3) == 45


def test_normalizer_full_space(built):
    rs, g = built("A2")
    assert len(normalizer_of_span(g, Subspace.full(2))) == g.order


def test_normalizer_a2_vs_b2_weight_line(built):
    rs, g = built("A2")
    span = Subspace.from_spanning(rs.fundamental_weights[[0]], ambient_dim=2)
    assert len(normalizer_of_span(g, span)) == 2
    rs, g = built("B2")
    span = Subspace.from_spanning(rs.fundamental_weights[[0]], ambient_dim=2)
    assert len(normalizer_of_span(g, span)) == 4  # contains the half-turn


def test_subspace_orbits_extremes(built):
    rs, g = built("B3")
    assert subspace_orbits(g, rs.n) == [[(0, 1, 2)]]
    assert subspace_orbits(g, 0) == [[()]]


def test_subspace_orbits_a2_vs_b2(built):
    _, g = built("A2")
    assert subspace_orbits(g, 1) == [[(0,), (1,)]]  # one mirror orbit
    _, g = built("B2")
    assert subspace_orbits(g, 1) == [[(0,)], [(1,)]]  # axes vs diagonals


def test_dihedral_mirror_normalizers_parity(built):
    # odd m: all mirrors conjugate, line normalizer = {e, reflection};
    # even m: two mirror classes, normalizer gains the half-turn and the
    # perpendicular reflection
    for m in (5, 7, 9, 11):
        rs, g = built(f"I2({m})")
        assert len(subspace_orbits(g, 1)) == 1
        span = Subspace.from_spanning(rs.fundamental_weights[[0]], ambient_dim=2)
        assert len(normalizer_of_span(g, span)) == 2
    for m in (4, 6, 8, 12):
        rs, g = built(f"I2({m})")
        assert len(subspace_orbits(g, 1)) == 2
        span = Subspace.from_spanning(rs.fundamental_weights[[0]], ambient_dim=2)
        assert len(normalizer_of_span(g, span)) == 4


def test_chambers_through_face_bijection(built):
    # the chambers whose closure contains a face are exactly the translates
    # by the face's pointwise fixator, one chamber per element
    from ccl.cones import Membership, chamber, membership
    for spec in ("A2", "B2", "A3", "B3"):
        rs, g = built(spec)
        ch = chamber(rs)
        rng = np.random.default_rng(11)
        for k in range(1, rs.n + 1):
            for I in itertools.combinations(range(rs.n), k):
                coeffs = rng.uniform(0.2, 1.0, size=len(I))
                p = coeffs @ rs.fundamental_weights[list(I)]
                hits = {i for i in range(g.order)
                        if membership(ch, g.elements[i].matrix.T @ p)
                        is not Membership.OUTSIDE}
                sub = parabolic_subgroup(g, I)
                assert hits == set(sub.indices)


def test_subgroup_is_closed(built):
    _, g = built("B3")
    sub = parabolic_subgroup(g, (1,))
    idx = set(sub.indices)
    for i in sub.indices:
        for j in sub.indices:
            assert g.compose(i, j) in idx


def test_inverse(built):
    _, g = built("B3")
    for i in range(g.order):
        j = g.inverse(i)
        assert g.compose(i, j) == 0
        assert g.compose(j, i) == 0
