import numpy as np
import pytest

from jball import (
    BallUnion,
    ConvexPolygon,
    HalfSpace,
    PuncturedSpace,
    SimplePolygon,
    domain_from_json,
    domain_to_json,
)


def test_punctured_distance_and_membership():
    P = PuncturedSpace([[0.0, 0.0], [2.0, 0.0]])
    assert P.boundary_distance([0.5, 0.0]) == pytest.approx(0.5, abs=1e-15)
    assert P.boundary_distance([1.0, 0.0]) == pytest.approx(1.0, abs=1e-15)
    assert P.contains([1.0, 1.0])
    assert not P.contains([2.0, 0.0])


def test_punctured_any_dimension():
    P = PuncturedSpace([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
    assert P.dim == 3
    assert P.boundary_distance([0.0, 0.0, 0.5]) == pytest.approx(0.5)


def test_punctured_nearest_boundary_ties():
    P = PuncturedSpace([[0.0, 0.0], [2.0, 0.0]])
    near = P.nearest_boundary([1.0, 0.0])
    assert len(near.points) == 2
    assert near.distance == pytest.approx(1.0)


def test_boundary_distance_outside_raises():
    H = HalfSpace([0.0, -1.0], 0.0)
    with pytest.raises(ValueError, match="not inside"):
        H.boundary_distance([0.0, -1.0])


def test_half_space_geometry():
    H = HalfSpace([0.0, -1.0], 0.0)  # upper half plane
    assert H.contains([3.0, 0.1])
    assert not H.contains([0.0, 0.0])
    assert H.boundary_distance([5.0, 2.0]) == pytest.approx(2.0)
    u = H.nearest_boundary([5.0, 2.0]).points[0]
    assert np.allclose(u, [5.0, 0.0])


def test_half_space_normal_must_be_unit():
    with pytest.raises(ValueError, match="unit"):
        HalfSpace([0.0, -2.0], 0.0)


def test_convex_polygon_distance():
    sq = ConvexPolygon([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]])
    assert sq.boundary_distance([1.0, 1.0]) == pytest.approx(1.0)
    assert sq.boundary_distance([0.3, 1.0]) == pytest.approx(0.3)
    assert not sq.contains([2.5, 1.0])


def test_convex_polygon_orientation_enforced():
    with pytest.raises(ValueError, match="counterclockwise"):
        ConvexPolygon([[0.0, 0.0], [0.0, 2.0], [2.0, 2.0], [2.0, 0.0]])


def test_simple_polygon_even_odd():
    ell = SimplePolygon(
        [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
    )
    assert ell.contains([0.5, 0.5])
    assert ell.contains([0.5, 1.5])
    assert not ell.contains([1.5, 1.5])
    assert ell.boundary_distance([0.5, 0.5]) == pytest.approx(0.5)


def test_simple_polygon_rejects_self_intersection():
    with pytest.raises(ValueError):
        SimplePolygon([[0.0, 0.0], [2.0, 2.0], [2.0, 0.0], [0.0, 2.0]])


def test_ball_union_arc_clipped_distance():
    # point in the overlap: nearest boundary is on the surviving arcs only
    B = BallUnion([([0.0, 0.0], 1.0), ([1.4, 0.0], 1.0)])
    x = np.array([0.7, 0.0])
    d = B.boundary_distance(x)
    # brute force over dense boundary samples of both circles
    ang = np.linspace(0.0, 2.0 * np.pi, 200001)
    best = np.inf
    for c, r in ((np.zeros(2), 1.0), (np.array([1.4, 0.0]), 1.0)):
        pts = c + r * np.column_stack([np.cos(ang), np.sin(ang)])
        inside_other = B.contains_many(pts)
        keep = pts[~inside_other]
        best = min(best, float(np.linalg.norm(keep - x, axis=1).min()))
    assert d == pytest.approx(best, abs=1e-4)
    assert d > 0.3  # strictly larger than distance to the covered arcs


def test_ball_union_rejects_tangent_disks():
    with pytest.raises(ValueError, match="not connected"):
        BallUnion([([0.0, 0.0], 1.0), ([2.0, 0.0], 1.0)])


def test_ball_union_farthest_distance():
    B = BallUnion([([0.0, 0.0], 1.0)])
    assert B.farthest_boundary_distance([0.2, 0.0]) == pytest.approx(1.2)


def test_domain_json_round_trip():
    domains = [
        PuncturedSpace([[0.0, 0.0], [1.5, 0.3]]),
        HalfSpace([0.0, -1.0], 0.0),
        ConvexPolygon([[0.0, 0.0], [2.0, 0.0], [1.0, 1.5]]),
        SimplePolygon(
            [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
        ),
        BallUnion([([0.0, 0.0], 1.0), ([1.4, 0.0], 0.8)]),
    ]
    rng = np.random.default_rng(3)
    for dom in domains:
        blob = domain_to_json(dom)
        back = domain_from_json(blob)
        assert type(back) is type(dom)
        pts = rng.uniform(-3.0, 3.0, size=(500, 2))
        assert np.array_equal(dom.contains_many(pts), back.contains_many(pts))
        inside = dom.contains_many(pts)
        if np.any(inside):
            np.testing.assert_allclose(
                dom.boundary_set_distance_many(pts[inside]),
                back.boundary_set_distance_many(pts[inside]),
                rtol=0.0,
                atol=1e-14,
            )


def test_domain_json_rejects_unknown_keys():
    with pytest.raises(ValueError):
        domain_from_json({"type": "punctured", "dim": 2, "points": [[0, 0]], "x": 1})
    with pytest.raises(ValueError):
        domain_from_json({"type": "mystery"})


def test_contains_many_matches_contains():
    dom = SimplePolygon(
        [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
    )
    rng = np.random.default_rng(7)
    pts = rng.uniform(-0.5, 2.5, size=(300, 2))
    many = dom.contains_many(pts)
    single = np.array([dom.contains(p) for p in pts])
    assert np.array_equal(many, single)
