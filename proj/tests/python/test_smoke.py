"""Python smoke tests for the pybind11 module and the CLI."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import roadsurf


def test_class_names():
    names = roadsurf.class_names()
    assert len(names) == 9
    assert names[0] == "dry_asphalt"
    assert names[8] == "snow"


def test_roi_filter_and_regions():
    frame = roadsurf.PointCloudFrame()
    frame.t_ms = 0
    frame.speed = 5.0
    frame.points = [
        roadsurf.Point(5.0, 1.0, 0.0, 40.0),     # LN
        roadsurf.Point(20.0, -1.0, 0.0, 40.0),   # RF
        roadsurf.Point(5.0, 3.0, 0.0, 40.0),     # outside ROI
    ]
    kept = roadsurf.filter_roi(frame)
    assert len(kept.points) == 2
    assert roadsurf.assign_region(kept.points[0]) == roadsurf.Region.LN
    assert roadsurf.assign_region(kept.points[1]) == roadsurf.Region.RF
    count, mean_refl = roadsurf.aggregate_region(frame, roadsurf.Region.LN)
    assert count == 1.0
    assert mean_refl == 40.0


def test_overlap_and_omega():
    assert roadsurf.overlap_length(1, 10.0, 0.1) == pytest.approx(1.0)
    assert roadsurf.overlap_length(5, 30.0, 0.1) == 12.0
    alpha = roadsurf.omega_weights([10.0] * 5)
    assert len(alpha) == 6
    assert sum(alpha) == pytest.approx(1.0, abs=1e-12)
    assert alpha[0] == pytest.approx(12.0 / 27.0)
    zero = roadsurf.omega_weights([0.0] * 5)
    assert zero[0] == 1.0


def test_fuse_and_classify():
    current = [0.0] * 9
    current[2] = 1.0
    past = [[1.0 / 9.0] * 9 for _ in range(5)]
    alpha = roadsurf.omega_weights([5.0] * 5)
    fused = roadsurf.fuse(current, past, alpha)
    assert sum(fused) == pytest.approx(1.0, abs=1e-9)
    assert roadsurf.classify(fused) == 2


def test_stream_generation_deterministic():
    spec = roadsurf.ScenarioSpec()
    spec.duration_s = 2.0
    spec.seed = 11
    a = roadsurf.generate_stream(spec)
    b = roadsurf.generate_stream(spec)
    assert len(a.frames) == 20
    assert a.label_at(0) == (0, 0)
    pa = a.frames[0].points
    pb = b.frames[0].points
    assert len(pa) == len(pb)
    assert all(p.x == q.x and p.reflectivity == q.reflectivity
               for p, q in zip(pa, pb))
    assert roadsurf.default_profiles_separation() >= 0.5


@pytest.fixture(scope="module")
def cli():
    path = os.environ.get("ROADSURF_CLI")
    if not path or not Path(path).exists():
        pytest.skip("ROADSURF_CLI not set")
    return path


def run_cli(cli, *args, cwd):
    return subprocess.run([cli, *args], cwd=cwd, capture_output=True,
                          text=True, timeout=300)


def test_cli_usage_errors(cli, tmp_path):
    r = run_cli(cli, "--definitely-not-a-flag", cwd=tmp_path)
    assert r.returncode == 1
    r = run_cli(cli, "train", "--out", str(tmp_path / "m"),
                "--corpus", str(tmp_path / "no_such_corpus"), cwd=tmp_path)
    assert r.returncode == 2


def test_cli_simulate_is_deterministic(cli, tmp_path):
    spec = {
        "duration_s": 3.0,
        "seed": 5,
        "speed_profile": [[0.0, 4.0], [3.0, 9.0]],
        "left_schedule": [{"t": 0.0, "class": "dry_asphalt"}],
        "right_schedule": [{"t": 0.0, "class": "snow"}],
    }
    spec_path = tmp_path / "scenario.json"
    spec_path.write_text(json.dumps(spec))
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        out.mkdir()
        r = run_cli(cli, "simulate", "--spec", str(spec_path),
                    "--out", str(out), cwd=tmp_path)
        assert r.returncode == 0, r.stderr
    for name in ("stream.jsonl", "stream.labels.jsonl", "dataset.rsds"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    first = json.loads((out_a / "stream.jsonl").read_text().splitlines()[0])
    assert set(first) == {"t_ms", "v_mps", "pts"}
    assert all(len(p) == 4 for p in first["pts"])
