"""Experiment manifests: JSON documents validated against a bundled schema."""

import json
import os
from importlib import resources

import jsonschema

from .exceptions import ValidationError
from .gt import GtConfig, rasterize_shape
from .losses import LossWeights
from .model import TrainConfig
from .pgm import read_pgm
from .validation import is_binary

OUTPUT_DIR_ENV = "RAILEDGE_OUTPUT_DIR"


class ManifestError(ValidationError):
    """The manifest is not valid JSON or violates the schema."""


def manifest_schema():
    return json.loads(resources.files("railedge.data").joinpath("manifest.schema.json")
                      .read_text())


def default_manifest():
    """The bundled ablation manifest (8 rail trapezoids, k=8, 2000 steps)."""
    return json.loads(resources.files("railedge.data").joinpath("default_manifest.json")
                      .read_text())


def validate_manifest(doc):
    try:
        jsonschema.validate(doc, manifest_schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ManifestError(f"manifest invalid at {path}: {exc.message}") from None
    return doc


def load_manifest(path):
    """Read and validate a manifest file. ``OSError`` propagates for unreadable paths."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from None
    return validate_manifest(doc)


def gt_config(doc, smoothing_enabled=True):
    return GtConfig(smoothing_enabled=smoothing_enabled, **doc.get("gt", {}))


def train_config(doc, use_edge_loss=True, smoothing_enabled=True):
    train = dict(doc.get("train", {}))
    weights = LossWeights(**train.pop("weights", {}))
    return TrainConfig(use_edge_loss=use_edge_loss, weights=weights,
                       gt=gt_config(doc, smoothing_enabled), **train)


def output_dir(doc):
    return os.environ.get(OUTPUT_DIR_ENV) or doc["output_dir"]


def load_dataset(doc, base_dir="."):
    """Full-resolution binary masks for every dataset entry.

    Mask file paths are resolved relative to ``base_dir``.
    """
    cfg = gt_config(doc)
    masks = []
    for i, entry in enumerate(doc["dataset"]):
        if "trapezoid" in entry:
            mask = rasterize_shape(entry["trapezoid"], cfg.source_size)
        else:
            mask = read_pgm(os.path.join(base_dir, entry["mask"]))
            if not is_binary(mask):
                raise ManifestError(f"dataset[{i}]: mask file is not binary")
        if mask.shape != cfg.source_size:
            raise ManifestError(
                f"dataset[{i}]: mask shape {mask.shape} != source size {cfg.source_size}"
            )
        masks.append(mask)
    return masks
