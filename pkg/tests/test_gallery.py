import numpy as np
import pytest

from jball import (
    finite_puncture_intersection,
    named_scenarios,
    offcenter_starlikeness,
    run_scenario,
    simply_connected_counterexample,
    sphere_vs_closure,
    thresholds,
    two_puncture_sharpness,
)

REGISTRY = named_scenarios()


def test_registry_names():
    assert set(REGISTRY) == {
        "two_puncture_sharpness",
        "two_puncture_threshold",
        "sphere_vs_closure",
        "simply_connected_counterexample",
        "simply_connected_reconnected",
        "qh_nonintersection_demo",
        "offcenter_inner",
        "offcenter_outer_low",
        "offcenter_outer_high",
        "finite_puncture_intersection",
    }


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_scenario_passes_at_half_resolution(name):
    # half resolution keeps this quick; full resolution runs in the
    # acceptance suite
    out = run_scenario(REGISTRY[name](), res_scale=0.5)
    failed = [r for r in out.rows if r["gated"] and not r["pass"]]
    assert out.passed, failed


def test_outcome_json_shape():
    out = run_scenario(REGISTRY["sphere_vs_closure"](), res_scale=0.5)
    blob = out.to_json()
    assert blob["schema"] == 1
    assert blob["name"] == "sphere_vs_closure"
    assert isinstance(blob["passed"], bool)
    for row in blob["expectations"]:
        assert set(row) >= {"predicate", "expected", "actual", "pass", "gated"}


def test_two_puncture_split_vs_threshold():
    t = thresholds()
    comp = None
    for row in two_puncture_sharpness(t.starlikeness + 0.1).expectations:
        if row.predicate == "ball_component_count":
            comp = row
    assert comp is not None and comp.expected == 2
    at_thr = None
    for row in two_puncture_sharpness(t.starlikeness).expectations:
        if row.predicate == "ball_component_count":
            at_thr = row
    assert at_thr is not None and at_thr.expected == 1


def test_two_puncture_rejects_small_radius():
    with pytest.raises(ValueError, match="ray threshold"):
        two_puncture_sharpness(0.5)


def test_simply_connected_h_validation():
    with pytest.raises(ValueError):
        simply_connected_counterexample(0.0)
    with pytest.raises(ValueError):
        simply_connected_counterexample(1.0)


def test_offcenter_validation():
    with pytest.raises(ValueError):
        offcenter_starlikeness(0.9, 1e-3, "sideways")
    with pytest.raises(ValueError):
        offcenter_starlikeness(0.5, 1e-3, "inner")
    with pytest.raises(ValueError):
        offcenter_starlikeness(0.9, 1.5, "inner")


def test_finite_puncture_intersection_report():
    rep = finite_puncture_intersection(
        [[0.0, 0.0], [3.0, 0.0]], [1.0, 0.0], 0.6, n_samples=2000
    )
    assert rep.passed
    assert rep.notes["mismatches"] == 0
    assert rep.to_json()["schema"] == 1


def test_sphere_vs_closure_fixed_radii():
    sc = sphere_vs_closure()
    preds = {e.predicate for e in sc.expectations}
    assert "j_to_neck_center" in preds
    assert "closure_misses_closed_ball" in preds
    assert sc.M == pytest.approx(np.log(3.0), abs=1e-15)
