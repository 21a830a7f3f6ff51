import numpy as np
import pytest

from jball import (
    HalfSpace,
    PuncturedSpace,
    comparison_check,
    j_distance,
    qh_distance,
    qh_distances_from,
    qh_punctured_closed_form,
)

P = PuncturedSpace([[0.0, 0.0]])


def test_closed_form_radial_and_circular():
    # radial: |log(r2/r1)|; circular: arc angle
    assert qh_punctured_closed_form([0, 0], [1.0, 0.0], [3.0, 0.0]) == pytest.approx(
        np.log(3.0), abs=1e-15
    )
    assert qh_punctured_closed_form([0, 0], [1.0, 0.0], [0.0, 1.0]) == pytest.approx(
        np.pi / 2.0, abs=1e-15
    )
    # generic: hypot of the two components
    v = qh_punctured_closed_form([0, 0], [1.0, 0.0], [0.0, 2.0])
    assert v == pytest.approx(np.hypot(np.pi / 2.0, np.log(2.0)), abs=1e-15)


def test_grid_matches_closed_form_radial():
    val = qh_distance(P, [1.0, 0.0], [3.0, 0.0])
    assert val == pytest.approx(np.log(3.0), rel=1e-3)


def test_grid_matches_half_plane_oracle():
    # same-height pair in the upper half plane: cosh k = 1 + t^2 / 2
    H = HalfSpace([0.0, -1.0], 0.0)
    for t in (0.5, 1.0, 2.0):
        exact = float(np.arccosh(1.0 + t * t / 2.0))
        val = qh_distance(H, [0.0, 1.0], [t, 1.0])
        assert val == pytest.approx(exact, rel=5e-3)


def test_grid_upper_bounds_j():
    rng = np.random.default_rng(4)
    x = np.array([1.0, 0.4])
    trad = np.exp(rng.uniform(np.log(0.4), np.log(2.5), 25))
    ang = rng.uniform(0.0, 2.0 * np.pi, 25)
    targets = trad[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
    scale = max(float(np.linalg.norm(targets - x, axis=1).max()), 1.0)
    ks = qh_distances_from(P, x, targets, scale / 64.0)
    for t, k in zip(targets, ks):
        assert j_distance(P, x, t) <= k + 1e-6


def test_batch_agrees_with_single():
    # the batch grid hull covers every target, so node placement differs
    # from per-pair grids; agreement is within the discretization error
    x = np.array([0.8, 0.0])
    targets = np.array([[1.5, 0.7], [0.4, -0.6]])
    scale = float(np.linalg.norm(targets - x, axis=1).max())
    batch = qh_distances_from(P, x, targets, scale / 64.0)
    for t, b in zip(targets, batch):
        assert qh_distance(P, x, t, h=scale / 64.0) == pytest.approx(b, rel=5e-3)


def test_accuracy_improves_with_refinement():
    x = np.array([1.0, 0.0])
    y = np.array([-0.8, 0.9])
    exact = qh_punctured_closed_form([0, 0], x, y)
    scale = float(np.linalg.norm(x - y))
    err_h = abs(qh_distance(P, x, y, h=scale / 64.0) - exact)
    err_h2 = abs(qh_distance(P, x, y, h=scale / 128.0) - exact)
    assert err_h < 0.01 * exact
    assert err_h2 < err_h


def test_disconnected_target_raises():
    # a puncture pair blocking every grid path at coarse spacing is not
    # constructible; instead ask for a target outside the domain
    with pytest.raises(ValueError):
        qh_distance(P, [1.0, 0.0], [0.0, 0.0])


def test_comparison_check_report():
    rep = comparison_check(P, [1.0, 0.0], [1.3, 0.1], s=0.5)
    assert rep.passed
    assert rep.to_json()["schema"] == 1
    with pytest.raises(ValueError):
        comparison_check(P, [1.0, 0.0], [1.3, 0.1], s=1.5)
