"""Three-arm ablation runner with deterministic CSV/JSON/PGM reports.

Arms:

* ``a_baseline``     smoothing off, edge loss off (mask loss only)
* ``b_edge``         smoothing off, edge loss on
* ``c_smooth_edge``  smoothing on, edge loss on

Every arm starts from the same seeded initialization. Output layout::

    output_dir/
      summary.json
      <arm>/loss.csv        step,cls,bbox,mask,edge_raw,edge_coupled,total
      <arm>/metrics.json    {"instances": [{iou, boundary_f1, jaggedness}, ...],
                             "mean": {iou, boundary_f1, jaggedness}}
      <arm>/pred_000.pgm    final predicted soft masks, one per instance
"""

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import TrainingError
from .gt import prepare_gt
from .losses import LossBreakdown
from .manifest import load_dataset, output_dir, train_config
from .model import PrototypeModel, train
from .pgm import write_pgm

logger = logging.getLogger(__name__)

METRIC_KEYS = ("iou", "boundary_f1", "jaggedness")


@dataclass(frozen=True)
class Arm:
    name: str
    smoothing: bool
    edge_loss: bool


ARMS = (
    Arm("a_baseline", smoothing=False, edge_loss=False),
    Arm("b_edge", smoothing=False, edge_loss=True),
    Arm("c_smooth_edge", smoothing=True, edge_loss=True),
)


def run_arm(arm, doc, masks):
    """Train one arm; returns ``(TrainResult, TrainConfig)``."""
    cfg = train_config(doc, use_edge_loss=arm.edge_loss, smoothing_enabled=arm.smoothing)
    labels = [prepare_gt(m, cfg.gt, cfg.operator) for m in masks]
    model = PrototypeModel.initialize(cfg.k, len(labels), cfg.gt.target_size,
                                      cfg.init_scale, rng=cfg.seed)
    try:
        result = train(model, labels, cfg)
    except TrainingError as exc:
        exc.arm = arm.name
        raise
    return result, cfg


def mean_metrics(reports):
    return {key: float(np.mean([getattr(r, key) for r in reports])) for key in METRIC_KEYS}


def write_loss_csv(path, history):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("step",) + LossBreakdown.JSON_KEYS)
        for step, loss in enumerate(history):
            writer.writerow([step] + [repr(v) for v in loss.to_dict().values()])


def read_loss_csv(path):
    with open(path, newline="") as fh:
        return [LossBreakdown.from_dict(row) for row in csv.DictReader(fh)]


def write_arm(arm_dir, result):
    os.makedirs(arm_dir, exist_ok=True)
    write_loss_csv(os.path.join(arm_dir, "loss.csv"), result.history)
    metrics = {
        "instances": [{k: float(v) for k, v in r.metrics().items()} for r in result.reports],
        "mean": mean_metrics(result.reports),
    }
    with open(os.path.join(arm_dir, "metrics.json"), "w") as fh:
        json.dump(metrics, fh, indent=2)
        fh.write("\n")
    for i, mask in enumerate(result.masks):
        write_pgm(os.path.join(arm_dir, f"pred_{i:03d}.pgm"), mask)
    return metrics


def _run_and_write(arm, doc, masks, out_dir):
    result, _ = run_arm(arm, doc, masks)
    logger.info("arm %s finished: %s", arm.name, mean_metrics(result.reports))
    return write_arm(os.path.join(out_dir, arm.name), result)


def run_experiment(doc, base_dir=".", out_dir=None, parallel=False, arms=ARMS):
    """Run every arm of a validated manifest and write its reports.

    Returns ``{arm name: metrics dict}``. With ``parallel=True`` the arms run
    in separate processes; results are identical either way.
    """
    out_dir = out_dir or output_dir(doc)
    masks = load_dataset(doc, base_dir)
    os.makedirs(out_dir, exist_ok=True)
    if parallel:
        with ProcessPoolExecutor(max_workers=len(arms)) as pool:
            futures = [pool.submit(_run_and_write, arm, doc, masks, out_dir) for arm in arms]
            results = {arm.name: f.result() for arm, f in zip(arms, futures)}
    else:
        results = {arm.name: _run_and_write(arm, doc, masks, out_dir) for arm in arms}
    summary = {name: metrics["mean"] for name, metrics in results.items()}
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return results
