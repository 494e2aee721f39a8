import json

import numpy as np
import pytest

import semba


def test_pixel_cost_and_layers():
    pixels, percent = semba.pixel_cost(semba.FoveaConfig(4, 160, 1050, 1680))
    assert pixels == 102400
    assert percent == pytest.approx(5.805, abs=1e-3)
    assert semba.layer_side(4, 160) == 1280
    frames = semba.layer_frames((840, 525), semba.FoveaConfig(4, 160, 1050, 1680))
    assert [f["side"] for f in frames] == [160, 320, 640, 1280]
    assert frames[1]["top_left"] == (680, 365)


def test_pyramid_l1_is_a_crop():
    rng = np.random.default_rng(0)
    image = rng.integers(0, 256, size=(600, 900, 3), dtype=np.uint8)
    layers = semba.build_pyramid(image, (450, 300), semba.FoveaConfig(3, 64, 600, 900))
    assert len(layers) == 3
    frame, l1 = layers[0]
    assert frame["n"] == 1
    assert l1.shape == (64, 64, 3)
    np.testing.assert_array_equal(l1, image[268:332, 418:482])


def test_focal_outside_raises():
    with pytest.raises(semba.OutOfBoundsError):
        semba.layer_frames((-1, 0), semba.FoveaConfig(2, 64, 200, 320))


def test_remap_example():
    box, clipped = semba.remap_bbox((10, 20, 50, 60), (840, 525), 2, 160, 1050, 1680)
    assert box == (700, 405, 780, 485)
    assert not clipped


def test_kaplan_and_gaze():
    assert semba.kaplan_update([1, 1], [1, 0]) == [2, 1]
    grid = semba.BeliefGrid(20, 32, 80)
    geom = semba.GridGeometry()
    scores = [0.0] * 80
    scores[39] = 1.0
    scores[0] = 0.1
    cx, cy = geom.cell_center((5, 7))
    assert grid.deposit((cx - 5, cy - 5, cx + 5, cy + 5), scores, geom) == 1
    assert grid.select_gaze(39) == (5, 7)
    grid.apply_ior((5, 7))
    assert grid.inhibited((4, 6))
    assert grid.select_gaze(39) == (0, 0)
    snap = json.loads(grid.snapshot())
    assert snap["Y"] == 20 and snap["X"] == 32 and snap["K"] == 80


def test_episode_and_metrics():
    scenes = [semba.generate_scene(1, i) for i in range(20)]
    paths = [semba.run_episode(s, "4x160", seed=3) for s in scenes]
    assert paths == [semba.run_episode(s, "4x160", seed=3) for s in scenes]
    for s, p in zip(scenes, paths):
        assert p["scene_id"] == s["scene_id"]
        assert p["fixations"][0]["px"] == [840, 525]
        assert len(p["fixations"]) <= 7
    ratios = semba.cumulative_performance(paths)
    assert len(ratios) == 7
    assert ratios == sorted(ratios)
    same = semba.compare_scanpaths(paths[0], paths[0])
    assert same["SS"] == 1.0 and same["FED"] == 0.0


def test_sequence_metrics():
    assert semba.edit_distance(list("kitten"), list("sitting")) == 3
    assert semba.sequence_score(list("abcd"), list("axcy")) == pytest.approx(0.5)
    assert semba.sequence_score([], []) == 1.0
