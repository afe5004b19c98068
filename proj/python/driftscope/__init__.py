"""Kernel-weighted regression sweeps for spotting nonstationarity in effort data."""

import csv
import io
import json

from . import _core
from ._core import (
    ComputationError,
    ValidationError,
    decay_horizon,
    kernel_weight,
    min_bandwidth,
    relative_error,
    shapiro_wilk,
    wls,
)

__version__ = _core.__version__

__all__ = [
    "ComputationError",
    "ValidationError",
    "decay_horizon",
    "describe",
    "kernel_weight",
    "min_bandwidth",
    "relative_error",
    "shapiro_wilk",
    "sweep",
    "synth",
    "wls",
]


def describe(descriptor):
    """Descriptor as a dict; accepts a builtin name or a JSON path."""
    return json.loads(_core.describe_json(descriptor))


def _row(r):
    out = {"dataset": r["dataset"], "split": int(r["split"]), "kernel": r["kernel"]}
    for k in ("bandwidth", "re_train_nu", "re_test_nu", "re_train_u", "re_test_u"):
        out[k] = float(r[k]) if r[k] != "" else None
    return out


def sweep(descriptor, csv_text, **config):
    """Run a sweep over CSV text.

    descriptor is a builtin name, a JSON path, or a dict. Keyword options:
    epsilon, theta, grid=(lo, hi, step), kernels=[...], overrides=[...],
    all_data_target="last"|"next". Returns (curve rows, verdicts dict).
    """
    if isinstance(descriptor, dict):
        descriptor = json.dumps(descriptor)
    if "grid" in config:
        config["grid"] = list(config["grid"])
    curves, verdicts = _core.sweep(descriptor, csv_text, json.dumps(config) if config else "")
    rows = [_row(r) for r in csv.DictReader(io.StringIO(curves))]
    return rows, json.loads(verdicts)


def synth(seed=None, **config):
    """Synthetic dataset: returns (csv_text, descriptor dict)."""
    text, desc = _core.synth(json.dumps(config) if config else "", seed)
    return text, json.loads(desc)
