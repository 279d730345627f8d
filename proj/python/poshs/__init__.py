"""Python front end to the C++ core.

Experiment configs and reports are plain dicts with the same keys as the
JSON files the ``poshs`` CLI reads and writes.
"""

import json
from pathlib import Path

from ._core import (
    BeliefError,
    ConfigError,
    FormatError,
    belief_update,
    gaussian_pdf,
    jensen_shannon,
    paired_t_test,
    pmv,
    posterior_closed_form,
    score,
)
from . import _core

__all__ = [
    "BeliefError",
    "ConfigError",
    "FormatError",
    "belief_update",
    "default_config",
    "gaussian_pdf",
    "jensen_shannon",
    "load_episode_logs",
    "paired_t_test",
    "pmv",
    "posterior_closed_form",
    "run_experiment",
    "score",
]


def default_config(**overrides):
    """Full experiment config with defaults filled in."""
    return json.loads(_core._config_json(json.dumps(overrides) if overrides else ""))


def run_experiment(config=None, unassisted=False):
    """Pretrain, train and evaluate for every seed in ``config``; returns the report."""
    cfg = default_config() if config is None else config
    return json.loads(_core._run_json(json.dumps(cfg), unassisted))


def load_episode_logs(path):
    """Read an episode-log JSONL file into a list of episodes, each with its steps."""
    episodes = []
    with Path(path).open() as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec["type"] == "episode":
                rec["step_records"] = []
                episodes.append(rec)
            elif rec["type"] == "step":
                if not episodes:
                    raise FormatError("step line before any episode line")
                episodes[-1]["step_records"].append(rec)
    return episodes
