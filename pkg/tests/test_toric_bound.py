import math
import random
from fractions import Fraction

import pytest

from ricci_lab.polytope import PolytopeError, from_vertices
from ricci_lab.toric_bound import (
    best_facet_bound,
    destabilizing_threshold,
    divergence_weight,
    limit_slope,
    min_face,
    optimize_direction,
    vf_bound,
)

from conftest import random_delzant_polygons

F = Fraction


def test_min_face(m1, m2):
    assert [m1.vertices[i] for i in min_face(m1, (-1, 0))] == [(2, 0), (2, 1)]
    assert [m2.vertices[i] for i in min_face(m2, (-1, -1))] == [(2, 1), (1, 2)]
    assert sorted(m1.vertices[i] for i in min_face(m1, (1, 0))) == [(0, 0), (0, 3)]
    assert len(min_face(m1, (1, 2))) == 1


def test_min_face_zero_direction(m1):
    with pytest.raises(ValueError):
        min_face(m1, (0, 0))


def test_divergence_weight_examples(m1, m2):
    assert divergence_weight(m1, (-1, 0)) == 1
    assert divergence_weight(m2, (-1, -1)) == 1
    assert divergence_weight(m1, (0, -1)) == 2


def test_divergence_weight_requires_delzant():
    P = from_vertices([(0, 0), (2, 0), (0, 1)])
    with pytest.raises(PolytopeError, match="Delzant"):
        divergence_weight(P, (0, -1))


def test_divergence_weight_rejects_non_minimising_vertex(m1):
    with pytest.raises(ValueError):
        divergence_weight(m1, (-1, 0), vertex=0)


def test_limit_slope_coefficients(m1, m2):
    assert vf_bound(m1, (-1, 0)).slope_coefficients == (4, F(-14, 3))
    assert vf_bound(m2, (-1, -1)).slope_coefficients == (F(7, 2), F(-25, 6))
    assert limit_slope(m1, (-1, 0), 0) == 4
    assert limit_slope(m1, (-1, 0), F(1, 2)) == 4 - F(7, 3)


def test_thresholds(m1, m2, square):
    assert destabilizing_threshold(m1, (-1, 0)) == F(6, 7)
    assert destabilizing_threshold(m2, (-1, -1)) == F(21, 25)
    assert destabilizing_threshold(square, (-1, 0)) is None
    assert vf_bound(square, (-1, 0)).pairing == 0


def test_hamiltonian_normalised(m1):
    H = vf_bound(m1, (-1, 0)).hamiltonian
    assert min(H(v) for v in m1.vertices) == 0


def test_threshold_is_root_and_sign_changes(m1, m2):
    for P, a in ((m1, (-1, 0)), (m2, (-1, -1)), (m1, (-3, 1))):
        r = vf_bound(P, a)
        assert r.s_star is not None and 0 < r.s_star < 1
        assert r.slope(r.s_star) == 0
        assert r.slope(r.s_star + F(1, 1000)) < 0
        assert r.slope(r.s_star - F(1, 1000)) > 0


def test_scale_invariance_random():
    rng = random.Random(11)
    polys = random_delzant_polygons(25, seed=3)
    checked = 0
    while checked < 100:
        P = rng.choice(polys)
        a = (rng.randint(-5, 5), rng.randint(-5, 5))
        if a == (0, 0):
            continue
        lam = F(rng.randint(1, 40), rng.randint(1, 40))
        r1, r2 = vf_bound(P, a), vf_bound(P, (lam * a[0], lam * a[1]))
        assert r2.weight == lam * r1.weight
        assert r2.pairing == lam * r1.pairing
        assert r2.s_star == r1.s_star
        checked += 1


def test_root_consistency_random():
    for P in random_delzant_polygons(20, seed=5):
        for a in [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-2, 1)]:
            r = vf_bound(P, a)
            if r.s_star is not None:
                assert r.slope(r.s_star) == 0
                assert r.slope((1 + r.s_star) / 2) < 0
                assert r.slope(r.s_star / 2) > 0


def test_vertex_independence(m1, m2):
    polys = [m1, m2] + random_delzant_polygons(20, seed=9)
    for P in polys:
        for f in P.facets:
            a = (-f.normal[0], -f.normal[1])
            face = min_face(P, a)
            assert len(face) == 2
            weights = {divergence_weight(P, a, vertex=i) for i in face}
            assert len(weights) == 1


def _grid_oracle(P, steps):
    """Exact s* at rational approximations of evenly spaced directions."""
    best = None
    for j in range(steps):
        t = 2 * math.pi * j / steps
        a = (F(round(math.cos(t) * 10**6), 10**6), F(round(math.sin(t) * 10**6), 10**6))
        if a == (0, 0):
            continue
        s = destabilizing_threshold(P, a)
        if s is not None and (best is None or s < best):
            best = s
    return best


def test_optimize_direction_m1(m1):
    for steps in (8, 9, 13, 64, 100):
        res = optimize_direction(m1, steps, 1e-12)
        assert res.threshold == pytest.approx(6 / 7, abs=1e-6)
        assert res.threshold >= 6 / 7 - 1e-9
        assert res.direction[0] == pytest.approx(-1, abs=1e-3)


def test_optimize_direction_m2(m2):
    res = optimize_direction(m2, 64, 1e-12)
    assert res.threshold <= 21 / 25 + 1e-9
    # linear-fractional on each normal cone, so the optimum sits on a facet normal
    assert res.threshold == pytest.approx(float(best_facet_bound(m2).s_star), abs=1e-9)


def test_optimize_direction_square(square):
    res = optimize_direction(square)
    assert res.threshold is None and res.direction is None


def test_optimize_direction_not_worse_than_grid():
    for P in random_delzant_polygons(10, seed=21):
        oracle = _grid_oracle(P, 720)
        res = optimize_direction(P, 32, 1e-12)
        if oracle is None:
            continue
        assert res.threshold is not None
        assert res.threshold <= float(oracle) + 1e-9
        assert res.threshold >= float(best_facet_bound(P).s_star) - 1e-9


def test_optimize_direction_deterministic(m2):
    assert optimize_direction(m2, 40, 1e-9) == optimize_direction(m2, 40, 1e-9)


@pytest.mark.parametrize("steps, tol", [(4, 1e-6), (64, 0.0), (64, -1.0)])
def test_optimize_direction_preconditions(m1, steps, tol):
    with pytest.raises(ValueError):
        optimize_direction(m1, steps, tol)
