import numpy as np
import pytest

from jball import (
    BallUnion,
    HalfSpace,
    PuncturedSpace,
    annulus_bounds,
    exhaustion_radius,
    in_j_ball,
    in_j_ball_many,
    j_distance,
    j_field,
    j_gradient_bound,
)

P = PuncturedSpace([[0.0, 0.0]])


def test_distance_concrete_values():
    assert j_distance(P, [1.0, 0.0], [3.0, 0.0]) == pytest.approx(np.log(3.0), abs=1e-15)
    assert j_distance(P, [1.0, 0.0], [2.0, 0.0]) == pytest.approx(np.log(2.0), abs=1e-15)
    H = HalfSpace([0.0, -1.0], 0.0)
    assert j_distance(H, [0.0, 1.0], [0.0, 3.0]) == pytest.approx(np.log(3.0), abs=1e-15)


def test_distance_symmetry_and_identity():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, y = rng.uniform(-2.0, 2.0, (2, 2))
        if min(np.linalg.norm(x), np.linalg.norm(y)) < 1e-6:
            continue
        assert j_distance(P, x, y) == j_distance(P, y, x)
        assert j_distance(P, x, x) == 0.0


def test_triangle_inequality_random():
    # metric axiom, sampled across three domain variants
    domains = [
        P,
        HalfSpace([0.0, -1.0], 0.0),
        BallUnion([([0.0, 0.0], 2.0)]),
    ]
    rng = np.random.default_rng(2)
    for dom in domains:
        done = 0
        while done < 500:
            x, z, y = rng.uniform(-1.8, 1.8, (3, 2))
            if dom is domains[1]:
                x, z, y = (np.abs(p) for p in (x, z, y))
            if not (dom.contains(x) and dom.contains(z) and dom.contains(y)):
                continue
            lhs = j_distance(dom, x, y)
            rhs = j_distance(dom, x, z) + j_distance(dom, z, y)
            assert lhs <= rhs + 1e-12
            done += 1


def test_field_outside_is_infinite():
    vals = j_field(P, [1.0, 0.0], np.array([[0.0, 0.0], [2.0, 0.0]]))
    assert np.isinf(vals[0])
    assert vals[1] == pytest.approx(np.log(2.0))


def test_ball_membership_is_strict():
    # boundary points are excluded: the ball is open
    M = np.log(2.0)
    assert not in_j_ball(P, [1.0, 0.0], M, [2.0, 0.0])
    assert in_j_ball(P, [1.0, 0.0], M, [1.99, 0.0])
    # (0.5, 0) sits exactly on the sphere: j = log 2, excluded as well
    members = in_j_ball_many(
        P, [1.0, 0.0], M, np.array([[2.0, 0.0], [0.5, 0.0], [0.6, 0.0], [1.5, 0.0]])
    )
    assert members.tolist() == [False, False, True, True]


def test_annulus_bounds_values():
    b = annulus_bounds(2.0, np.log(2.0))
    assert b.inner_radius == pytest.approx(1.0)
    assert b.outer_radius == pytest.approx(2.0)
    assert b.depth_min == pytest.approx(1.0)
    assert b.depth_max == pytest.approx(4.0)
    with pytest.raises(ValueError):
        annulus_bounds(0.0, 1.0)


def test_annulus_bounds_enclose_ball():
    rng = np.random.default_rng(5)
    x = np.array([1.3, -0.2])
    dx = P.boundary_distance(x)
    for M in (0.2, 0.8, 1.5):
        b = annulus_bounds(dx, M)
        pts = x + rng.uniform(-2.0 * b.outer_radius, 2.0 * b.outer_radius, (4000, 2))
        pts = pts[np.linalg.norm(pts, axis=1) > 1e-12]
        member = in_j_ball_many(P, x, M, pts)
        dist = np.linalg.norm(pts - x, axis=1)
        assert not np.any(member & (dist >= b.outer_radius))
        assert np.all(member[dist < b.inner_radius])


def test_gradient_bound():
    assert j_gradient_bound(P, [2.0, 0.0], 1.0) == pytest.approx(np.e / 2.0)


def test_exhaustion_radius_bounded_domain():
    B = BallUnion([([0.0, 0.0], 1.0)])
    x = np.array([0.5, 0.0])
    s = 0.05
    M = exhaustion_radius(B, x, s)
    # every point deeper than s lies in the ball of that radius
    rng = np.random.default_rng(9)
    pts = rng.uniform(-1.0, 1.0, (5000, 2))
    pts = pts[B.contains_many(pts)]
    deep = B.boundary_set_distance_many(pts) > s
    assert np.all(in_j_ball_many(B, x, M + 1e-9, pts[deep]))
    with pytest.raises(ValueError):
        exhaustion_radius(P, [1.0, 0.0], 0.1)
