"""Python bindings for the semba visual-search engine."""

import json

from ._core import (  # noqa: F401
    BeliefGrid,
    FormatError,
    FoveaConfig,
    GridGeometry,
    OutOfBoundsError,
    SearchExhausted,
    build_pyramid,
    coco_classes,
    edit_distance,
    kaplan_update,
    layer_frames,
    layer_side,
    pixel_cost,
    remap_bbox,
    sequence_score,
)
from . import _core

PRESETS = {"5x64": (5, 64), "4x128": (4, 128), "4x160": (4, 160), "3x256": (3, 256)}


def generate_scene(seed, index):
    """Synthetic target-present scene as a dict."""
    return json.loads(_core.generate_scene(seed, index))


def run_episode(scene, preset="4x160", grid=(20, 32), max_fixations=6, threshold=0.01, seed=0):
    """Runs one simulated search episode and returns the scanpath dict."""
    levels, base = PRESETS[preset] if isinstance(preset, str) else preset
    doc = _core.run_episode(json.dumps(scene), levels, base, grid[0], grid[1],
                            max_fixations, threshold, seed)
    return json.loads(doc)


def cumulative_performance(scanpaths, max_budget=6):
    return _core.cumulative_performance([json.dumps(p) for p in scanpaths], max_budget)


def compare_scanpaths(a, b, geom=None):
    return _core.compare_scanpaths(json.dumps(a), json.dumps(b), geom or GridGeometry())
