import json

import numpy as np
import pytest

from jball.cli import main

PUNCTURED = {"type": "punctured", "dim": 2, "points": [[0.0, 0.0]]}


@pytest.fixture
def domain_file(tmp_path):
    f = tmp_path / "domain.json"
    f.write_text(json.dumps(PUNCTURED))
    return str(f)


def run(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as e:
        code = int(e.code)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dist_j_known_value(domain_file, capsys):
    code, out, _ = run(
        capsys,
        ["dist", "--domain", domain_file, "--metric", "j", "--x", "1,0", "--y", "3,0"],
    )
    assert code == 0
    assert out.strip() == "1.09861228867"


def test_dist_k_radial(domain_file, capsys):
    code, out, _ = run(
        capsys,
        ["dist", "--domain", domain_file, "--metric", "k", "--x", "1,0", "--y", "3,0"],
    )
    assert code == 0
    assert float(out) == pytest.approx(np.log(3.0), rel=1e-3)


def test_dist_rejects_outside_point(domain_file, capsys):
    code, _, err = run(
        capsys,
        ["dist", "--domain", domain_file, "--metric", "j", "--x", "0,0", "--y", "1,0"],
    )
    assert code == 2
    assert err.startswith("error:")


def test_dist_rejects_bad_point(domain_file, capsys):
    code, _, err = run(
        capsys,
        ["dist", "--domain", domain_file, "--metric", "j", "--x", "zap", "--y", "1,0"],
    )
    assert code == 2


def test_missing_domain_file(tmp_path, capsys):
    code, _, err = run(
        capsys,
        ["dist", "--domain", str(tmp_path / "nope.json"), "--metric", "j",
         "--x", "1,0", "--y", "2,0"],
    )
    assert code == 2


def test_render_writes_svg(domain_file, tmp_path, capsys):
    out_file = tmp_path / "ball.svg"
    code, out, _ = run(
        capsys,
        ["render", "--domain", domain_file, "--x", "1,0", "--M", "0.5",
         "--out", str(out_file), "--res", "256"],
    )
    assert code == 0
    assert "wrote" in out and "1 boundary loops" in out
    assert out_file.read_text().startswith("<svg")


def test_check_convex_pass_and_fail(domain_file, capsys):
    code, out, _ = run(
        capsys,
        ["check", "convex", "--domain", domain_file, "--x", "1,0", "--M", "0.3"],
    )
    assert code == 0
    blob = json.loads(out)
    assert blob["passed"] is True and blob["schema"] == 1

    code, out, _ = run(
        capsys,
        ["check", "convex", "--domain", domain_file, "--x", "1,0", "--M", "1.0"],
    )
    assert code == 1
    blob = json.loads(out)
    assert blob["passed"] is False
    assert blob["witness"]["kind"] == "chord_escape"


def test_check_topology_annulus(domain_file, capsys):
    code, out, _ = run(
        capsys,
        ["check", "topology", "--domain", domain_file, "--x", "1,0", "--M", "1.2",
         "--trials", "512"],
    )
    assert code == 1
    blob = json.loads(out)
    assert blob["witness"]["holes"] == 1


def test_check_deterministic_output(domain_file, capsys):
    argv = ["check", "starlike", "--domain", domain_file, "--x", "1,0", "--M", "0.8",
            "--seed", "5"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_seed_env_override(domain_file, capsys, monkeypatch):
    monkeypatch.setenv("JBALL_SEED", "not-an-int")
    code, _, err = run(
        capsys,
        ["check", "convex", "--domain", domain_file, "--x", "1,0", "--M", "0.3"],
    )
    assert code == 2


def test_gallery_unknown_name(capsys):
    code, _, err = run(capsys, ["gallery", "no_such_scenario"])
    assert code == 2
    assert "two_puncture_sharpness" in err


def test_gallery_runs_and_writes(tmp_path, capsys):
    out_file = tmp_path / "scenario.json"
    code, out, _ = run(
        capsys,
        ["gallery", "finite_puncture_intersection", "--out", str(out_file),
         "--res-scale", "0.5"],
    )
    assert code == 0
    blob = json.loads(out_file.read_text())
    assert blob["passed"] is True
    assert json.loads(out) == blob


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, ["frobnicate"])
    assert code == 2
