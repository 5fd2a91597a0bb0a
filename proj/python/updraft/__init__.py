"""Change-aware drone path planning on 2.5D prism scenes.

The heavy lifting lives in the compiled ``_core`` module; this package adds
dict-returning wrappers around its JSON interfaces.
"""

import json

from ._core import (
    Scene,
    UpdraftError,
    completeness,
    convex_hull_2d,
    default_config_json,
    error_percentile,
    iou_prism,
    load_scene,
    padding,
    parse_scene,
    poisson_disk,
    render_svg,
)
from . import _core

__all__ = [
    "Scene",
    "UpdraftError",
    "baseline_rd",
    "completeness",
    "convex_hull_2d",
    "default_config",
    "error_percentile",
    "evaluate",
    "iou_prism",
    "load_scene",
    "padding",
    "parse_scene",
    "plan_prior",
    "poisson_disk",
    "render_svg",
    "run_mission",
]


def _config_text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return json.dumps(config)


def default_config():
    return json.loads(default_config_json())


def plan_prior(scene, config=None, seed=0):
    return json.loads(_core.plan_prior_json(scene, _config_text(config), seed))


def run_mission(t1, t2, config=None, dropout=0.0, jitter=0.0, noise_seed=0, seed=0, timing=False):
    return json.loads(
        _core.run_mission_json(t1, t2, _config_text(config), dropout, jitter, noise_seed, seed, timing)
    )


def baseline_rd(t1, t2, grid_frac=1.0 / 3.0, config=None, dropout=0.0, jitter=0.0, noise_seed=0, seed=0):
    return json.loads(
        _core.baseline_rd_json(t1, t2, grid_frac, _config_text(config), dropout, jitter, noise_seed, seed)
    )


def evaluate(results, t1, t2):
    """Quality report for a results dict (or its JSON text)."""
    text = results if isinstance(results, str) else json.dumps(results)
    return json.loads(_core.evaluate_json(text, t1, t2))
