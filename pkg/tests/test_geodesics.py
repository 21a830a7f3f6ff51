import numpy as np
import pytest

from jball import (
    HalfSpace,
    PuncturedSpace,
    equality_witnesses,
    geodesic_certificate,
    j_distance,
    no_geodesic_pair,
    radial_pair,
    triangle_defect,
)

P = PuncturedSpace([[0.0, 0.0]])


def test_triangle_defect_radial_zero():
    x = np.array([2.0, 0.0])
    y = np.array([5.0, 0.0])
    z = np.array([3.5, 0.0])
    assert triangle_defect(P, x, z, y) == pytest.approx(0.0, abs=1e-14)
    assert triangle_defect(P, x, np.array([3.0, 0.4]), y) > 0.0


def test_equality_witnesses_radial_segment():
    rep = equality_witnesses(P, [2.0, 0.0], [5.0, 0.0])
    assert rep.max_defect < 1e-12
    assert rep.min_defect > -1e-12
    assert rep.samples == 257


def test_equality_breaks_off_the_ray():
    # rotate the far end by a milliradian: the defect becomes measurable
    c, s = np.cos(1e-3), np.sin(1e-3)
    y = np.array([5.0 * c, 5.0 * s])
    rep = equality_witnesses(P, [2.0, 0.0], y)
    assert rep.max_defect > 1e-8


def test_certificate_radial_pair():
    cert = geodesic_certificate(P, [2.0, 0.0], [5.0, 0.0])
    assert cert.exists
    assert cert.reason == "radial segment"
    assert np.linalg.norm(cert.boundary_point) < 1e-12
    assert np.array_equal(cert.shallow, [2.0, 0.0])


def test_certificate_rejects_transverse_pair():
    cert = geodesic_certificate(P, [2.0, 0.0], [2.0, 1.0])
    assert not cert.exists
    assert cert.reason == "no collinear nearest boundary point"


def test_certificate_half_plane():
    H = HalfSpace([0.0, -1.0], 0.0)
    cert = geodesic_certificate(H, [0.3, 1.0], [0.3, 4.0])
    assert cert.exists
    lateral = geodesic_certificate(H, [0.0, 1.0], [2.0, 1.0])
    assert not lateral.exists


def test_radial_pair_matches_closed_form():
    x, y = radial_pair(P, [2.0, 0.0], 3.0)
    assert j_distance(P, x, y) == pytest.approx(np.log(1.0 + 3.0 / 2.0), abs=1e-14)
    cert = geodesic_certificate(P, x, y)
    assert cert.exists


def test_radial_pair_errors():
    with pytest.raises(ValueError, match="positive"):
        radial_pair(P, [2.0, 0.0], -1.0)
    H = HalfSpace([0.0, -1.0], 0.0)
    x, y = radial_pair(H, [0.0, 1.0], 2.5)
    assert np.allclose(y, [0.0, 3.5])


def test_no_geodesic_pair_gap():
    rep = no_geodesic_pair(P, [0.7, 0.2])
    assert rep.delta > 0.0
    assert rep.samples >= 257 + 256
    jpq = j_distance(P, rep.x, rep.y)
    z = rep.best_candidate
    gap = max(j_distance(P, rep.x, z), j_distance(P, z, rep.y)) - 0.5 * jpq
    assert gap == pytest.approx(rep.delta, abs=1e-14)


def test_no_geodesic_pair_on_half_plane():
    H = HalfSpace([0.0, -1.0], 0.0)
    rep = no_geodesic_pair(H, [0.0, 1.0])
    assert rep.delta > 0.0


def test_no_geodesic_pair_span_validation():
    with pytest.raises(ValueError, match="span"):
        no_geodesic_pair(P, [0.7, 0.2], span=2.5)
