import json
import math
import os
from pathlib import Path

import pytest

import updraft

DATA = Path(os.environ.get("UPDRAFT_DATA", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def two_blocks():
    return (
        updraft.load_scene(str(DATA / "two_blocks" / "scene_t1.json")),
        updraft.load_scene(str(DATA / "two_blocks" / "scene_t2.json")),
    )


def test_scene_loading(two_blocks):
    t1, _ = two_blocks
    assert t1.bounds == (0.0, 0.0, 150.0, 100.0)
    assert t1.prism_count > 0
    again = updraft.parse_scene(t1.to_json())
    assert again.to_json() == t1.to_json()


def test_bad_scene_raises():
    with pytest.raises(updraft.UpdraftError):
        updraft.parse_scene('{"bounds": [[0, 0], [10, 10]], "prisms": [{"footprint": [[0, 0], [5, 5], [9, 9]], "top": 3, "label": "Water"}]}')


def test_mission_and_report(two_blocks):
    t1, t2 = two_blocks
    results = updraft.run_mission(t1, t2, seed=3)
    assert len(results["targets"]) == 2
    assert results == updraft.run_mission(t1, t2, seed=3)
    report = updraft.evaluate(results, t1, t2)
    assert report["false_positives"] == 0
    rd = updraft.baseline_rd(t1, t2, 0.5)
    assert len(rd["views"]) == 16
    assert "<svg" in updraft.render_svg(json.dumps(results), t1, t2)


def test_identity_follows_prior_route(two_blocks):
    t1, _ = two_blocks
    plan = updraft.plan_prior(t1)
    results = updraft.run_mission(t1, t1)
    assert results["targets"] == []
    assert results["trajectory"]["views"] == plan["tour"]["views"]


def test_config_overrides(two_blocks):
    t1, t2 = two_blocks
    cfg = updraft.default_config()
    cfg["gain_samples"] = "target"
    results = updraft.run_mission(t1, t2, config=cfg)
    assert results["config"]["gain_samples"] == "target"
    with pytest.raises(updraft.UpdraftError):
        updraft.run_mission(t1, t2, config={"no_such_field": 1})


def test_geometry_helpers():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert updraft.iou_prism(square, 0, 1, square, 0, 1) == pytest.approx(1.0)
    assert len(updraft.convex_hull_2d(square + [(0.5, 0.5)])) == 4
    assert updraft.padding(120, math.radians(25), math.radians(30), 15) == pytest.approx(120 * math.tan(math.radians(5)) + 15)
    pts = updraft.poisson_disk([(0, 0), (50, 0), (50, 50), (0, 50)], 10, 1)
    assert all(math.dist(a, b) >= 10 for i, a in enumerate(pts) for b in pts[i + 1 :])
    assert updraft.error_percentile([(1, 0, 0)], [(0, 0, 0)], 90) == pytest.approx(1.0)
    assert updraft.completeness([(0, 0, 0)], [(0, 0, 0), (5, 0, 0)], 1) == pytest.approx(50.0)
