import math

import numpy as np
import pytest

import ccl
from ccl.angles import (AngleEstimate, AngleMethod, McConfig, measure,
                        mc_fraction)
from ccl.cones import SimplicialCone, chamber, dual, face, image_cone

MC = McConfig(samples=200_000, seed=42)
MC_BIG = McConfig(samples=1_000_000, seed=42)


def test_zero_cone_measure_is_one():
    z = SimplicialCone.from_generators([], ambient_dim=3)
    est = measure(z)
    assert est.value == 1.0 and est.stderr == 0.0
    assert est.method is AngleMethod.EXACT0


def test_ray_measure_is_half(built):
    rs, _ = built("A2")
    est = measure(face(chamber(rs), (0,)))
    assert est.value == 0.5 and est.method is AngleMethod.EXACT1


def test_a2_dual_cone_measure(built):
    rs, _ = built("A2")
    est = measure(dual(chamber(rs)))
    assert est.method is AngleMethod.EXACT2_ARC
    assert abs(est.value - 1 / 3) <= 1e-12


def test_octant_girard():
    est = measure(SimplicialCone.from_generators(np.eye(3)))
    assert est.method is AngleMethod.EXACT3_GIRARD
    assert abs(est.value - 1 / 8) <= 1e-12


def triangle_solid_angle(a, b, c):
    """Independent oracle: solid angle of the spherical triangle spanned by
    three unit vectors, via the planar-determinant half-angle formula."""
    det = np.linalg.det(np.array([a, b, c]))
    d = 1.0 + a @ b + b @ c + c @ a
    return 2.0 * math.atan2(abs(det), d)


def test_girard_matches_determinant_formula(built):
    rng = np.random.default_rng(17)
    cones = []
    for _ in range(50):
        g = rng.standard_normal((3, 3))
        if abs(np.linalg.det(g)) < 0.1:
            continue
        cones.append(SimplicialCone.from_generators(g))
    rs, _ = built("B3")
    cones.append(dual(chamber(rs)))
    rs, _ = built("H3")
    cones.append(dual(chamber(rs)))
    for c in cones:
        unit = c.generators / np.linalg.norm(c.generators, axis=1, keepdims=True)
        expected = triangle_solid_angle(*unit) / (4.0 * math.pi)
        assert abs(measure(c).value - expected) <= 1e-12


@pytest.mark.parametrize("spec", ["A1", "A2", "A3", "B2", "B3", "I2(5)",
                                  "I2(12)", "H3"])
def test_chamber_measure_is_one_over_order_exact(spec, built):
    rs, g = built(spec)
    est = measure(chamber(rs))
    assert est.stderr == 0.0
    assert abs(est.value - 1 / g.order) <= 1e-9


@pytest.mark.parametrize("spec", ["A4", "B4", "D4", "F4"])
def test_chamber_measure_is_one_over_order_mc(spec, built):
    rs, g = built(spec)
    est = measure(chamber(rs), MC_BIG)
    assert est.method is AngleMethod.MONTE_CARLO
    assert abs(est.value - 1 / g.order) <= 4 * est.stderr + 1e-12


def test_rotation_invariance_exact(built):
    rs, g = built("B3")
    ch = chamber(rs)
    base = measure(ch).value
    for i in np.random.default_rng(2).integers(0, g.order, 10):
        est = measure(image_cone(g.elements[int(i)], ch))
        assert abs(est.value - base) <= 1e-9


def test_rotation_invariance_mc(built):
    rs, g = built("F4")
    d = dual(chamber(rs))
    a = measure(d, McConfig(samples=400_000, seed=7))
    w = g.elements[g.simple_reflection_ids[0]]
    b = measure(image_cone(w, d), McConfig(samples=400_000, seed=8))
    joint = math.hypot(a.stderr, b.stderr)
    assert abs(a.value - b.value) <= 4 * joint


def test_mc_agrees_with_exact_2d(built):
    rs, _ = built("I2(7)")
    d = dual(chamber(rs))
    exact = measure(d).value
    est = measure(d, MC_BIG, force_monte_carlo=True)
    assert est.method is AngleMethod.MONTE_CARLO
    assert abs(est.value - exact) <= 4 * est.stderr


def test_mc_agrees_with_exact_3d(built):
    rs, _ = built("H3")
    d = dual(chamber(rs))
    exact = measure(d).value
    est = measure(d, MC_BIG, force_monte_carlo=True)
    assert abs(est.value - exact) <= 4 * est.stderr


def test_half_space_fraction():
    p, se = mc_fraction(lambda z: z[:, 0] >= 0.0, 4, MC)
    assert abs(p - 0.5) <= 4 * se


def test_f4_chamber_indicator_fraction(built):
    rs, g = built("F4")
    ch = chamber(rs)
    p, se = mc_fraction(lambda z: (z @ ch.dual_basis.T >= -1e-9).all(axis=1),
                        4, MC_BIG)
    assert abs(p - 1 / g.order) <= 4 * se


def test_orthant_4d_fraction():
    p, se = mc_fraction(lambda z: (z >= 0.0).all(axis=1), 4, MC_BIG)
    assert abs(p - 1 / 16) <= 4 * se


def test_mc_deterministic_same_seed():
    c = SimplicialCone.from_generators(np.eye(4))
    a = measure(c, McConfig(samples=100_000, seed=5))
    b = measure(c, McConfig(samples=100_000, seed=5))
    assert a.value == b.value


def test_mc_changes_with_seed():
    c = SimplicialCone.from_generators(np.eye(4))
    a = measure(c, McConfig(samples=100_000, seed=5))
    b = measure(c, McConfig(samples=100_000, seed=6))
    assert a.value != b.value


def test_mc_worker_count_does_not_change_result():
    c = SimplicialCone.from_generators(np.eye(4) + 0.1)
    vals = {measure(c, McConfig(samples=300_000, seed=9, workers=w)).value
            for w in (1, 2, 4, 7)}
    assert len(vals) == 1


def test_mc_partial_final_chunk():
    # samples deliberately not a multiple of chunk_size
    c = SimplicialCone.from_generators(np.eye(4))
    est = measure(c, McConfig(samples=100_001, seed=3, chunk_size=4096))
    assert est.samples == 100_001
    assert abs(est.value - 1 / 16) <= 6 * est.stderr


def test_mc_config_validation():
    with pytest.raises(ccl.InvalidArgumentError):
        McConfig(samples=10)
    with pytest.raises(ccl.InvalidArgumentError):
        McConfig(chunk_size=0)
    with pytest.raises(ccl.InvalidArgumentError):
        McConfig(seed=-1)


def test_angle_estimate_validation():
    with pytest.raises(ccl.InvalidArgumentError):
        AngleEstimate(1.5, 0.0, AngleMethod.EXACT0)
    with pytest.raises(ccl.InvalidArgumentError):
        AngleEstimate(0.5, 0.1, AngleMethod.EXACT1)


def test_measure_rejects_degenerate():
    with pytest.raises(ccl.DegenerateConeError):
        SimplicialCone.from_generators([[1.0, 0.0], [-1.0, 0.0]])
