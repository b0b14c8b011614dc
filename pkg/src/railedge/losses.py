"""Mask BCE, edge-map BCE, the exponential edge/mask coupling, and analytic gradients."""

import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.special import expit

from .edges import EdgeOperator, edge_forward, extract_edges
from .exceptions import ValidationError
from .grid import PaddingMode
from .validation import check_grid, check_same_shape

EPS = 1e-7


@dataclass(frozen=True)
class LossWeights:
    w_cls: float = 1.0
    w_bbox: float = 1.0
    w_mask: float = 1.125
    edge_temperature: float = 4.0

    def __post_init__(self):
        for name in ("w_cls", "w_bbox", "w_mask"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be a finite non-negative number")
        if not math.isfinite(self.edge_temperature) or self.edge_temperature <= 0:
            raise ValidationError("edge_temperature must be positive")


@dataclass(frozen=True)
class LossBreakdown:
    """The four weighted loss terms plus the coupled edge term and the total.

    ``l_cls`` and ``l_bbox`` are carried as zero: there is no classifier or
    box head in this package, only their weights.
    """

    l_cls: float
    l_bbox: float
    l_mask: float
    l_edge_raw: float
    l_edge_coupled: float
    total: float

    JSON_KEYS = ("cls", "bbox", "mask", "edge_raw", "edge_coupled", "total")

    def to_dict(self):
        return dict(zip(self.JSON_KEYS, (float(v) for v in asdict(self).values())))

    @classmethod
    def from_dict(cls, data):
        return cls(*(float(data[k]) for k in cls.JSON_KEYS))

    @classmethod
    def sum(cls, items):
        """Field-wise sum in iteration order (deterministic)."""
        totals = [0.0] * len(fields(cls))
        for item in items:
            for i, f in enumerate(fields(cls)):
                totals[i] += getattr(item, f.name)
        return cls(*totals)


def sigmoid(z):
    return expit(z)


def _bce_terms(prediction, target):
    p = np.clip(prediction, EPS, 1.0 - EPS)
    log_p = np.log(p)
    log_q = np.log(1.0 - p)
    # t*log(p) + (1-t)*log(1-p), in place
    log_p -= log_q
    log_p *= target
    log_p += log_q
    return np.negative(log_p, out=log_p)


def bce(prediction, target):
    """Mean binary cross-entropy; predictions are clamped to [1e-7, 1 - 1e-7]."""
    prediction = check_grid(prediction, "prediction", batched=True)
    target = check_grid(target, "target", batched=True)
    check_same_shape(prediction, target)
    return float(_bce_terms(prediction, target).mean())


def edge_loss_raw(pred_mask, gt_mask, operator=EdgeOperator.LAPLACIAN,
                  padding=PaddingMode.REPLICATE):
    """BCE between the edge map of the prediction and that of the ground truth."""
    pred_mask = check_grid(pred_mask, "pred_mask", min_size=3)
    gt_mask = check_grid(gt_mask, "gt_mask", min_size=3)
    check_same_shape(pred_mask, gt_mask, ("pred_mask", "gt_mask"))
    return bce(extract_edges(pred_mask, operator, padding),
               extract_edges(gt_mask, operator, padding))


def coupled_loss(l_mask, l_edge_raw, weights=LossWeights()):
    """Combine the mask and raw edge losses into a :class:`LossBreakdown`.

    The coupled edge term is ``l_mask * exp(l_edge_raw / edge_temperature)``.
    """
    if not (l_mask >= 0 and l_edge_raw >= 0):
        raise ValidationError("loss terms must be non-negative")
    coupled = l_mask * math.exp(l_edge_raw / weights.edge_temperature)
    return _breakdown(l_mask, l_edge_raw, coupled, weights)


def _breakdown(l_mask, l_edge_raw, coupled, weights):
    l_cls = l_bbox = 0.0
    total = weights.w_cls * l_cls + weights.w_bbox * l_bbox + weights.w_mask * l_mask + coupled
    return LossBreakdown(l_cls, l_bbox, float(l_mask), float(l_edge_raw), float(coupled),
                         float(total))


def loss_and_grad_batch(logits, mask_target, edge_target, operator, weights, padding,
                        use_edge_loss=True):
    """Per-instance losses and d(total_i)/d(logits_i) for a stack of shape (n, H, W).

    Returns a list of :class:`LossBreakdown` (one per instance) and the gradient
    array. With ``use_edge_loss=False`` the total is ``w_mask * l_mask`` and the
    edge terms are reported as zero.
    """
    n_pix = logits.shape[-1] * logits.shape[-2]
    p = sigmoid(logits)
    l_mask = _bce_terms(p, mask_target).mean(axis=(-2, -1))
    # The clamp has zero derivative outside [EPS, 1 - EPS].
    d_mask = p - mask_target
    d_mask[(p <= EPS) | (p >= 1.0 - EPS)] = 0.0
    d_mask /= n_pix

    if not use_edge_loss:
        losses = [_breakdown(lm, 0.0, 0.0, weights) for lm in np.atleast_1d(l_mask)]
        return losses, weights.w_mask * d_mask

    edges, edge_backward = edge_forward(p, operator, padding)
    q = np.clip(edges, EPS, 1.0 - EPS)
    l_edge = _bce_terms(q, edge_target).mean(axis=(-2, -1))
    d_q = q - edge_target
    d_q /= q * (1.0 - q) * n_pix
    d_q[(edges <= EPS) | (edges >= 1.0 - EPS)] = 0.0
    d_edge = edge_backward(d_q)
    d_edge *= p * (1.0 - p)

    factor = np.exp(l_edge / weights.edge_temperature)
    coupled = l_mask * factor
    losses = [_breakdown(lm, le, c, weights) for lm, le, c in zip(
        np.atleast_1d(l_mask), np.atleast_1d(l_edge), np.atleast_1d(coupled))]
    a = np.asarray(weights.w_mask + factor)[..., None, None]
    b = np.asarray(l_mask / weights.edge_temperature * factor)[..., None, None]
    return losses, a * d_mask + b * d_edge


def total_loss_and_grad(pred_logits, gt_mask, operator=EdgeOperator.LAPLACIAN,
                        weights=LossWeights(), padding=PaddingMode.REPLICATE,
                        edge_target=None, use_edge_loss=True):
    """Total loss of one instance and its exact gradient with respect to the logits.

    ``gt_mask`` is the (already smoothed) mask target. The edge target defaults
    to the edge map of ``gt_mask``; pass ``edge_target`` to use another one.
    """
    logits = check_grid(pred_logits, "pred_logits", min_size=3)
    gt_mask = check_grid(gt_mask, "gt_mask", min_size=3)
    check_same_shape(logits, gt_mask, ("pred_logits", "gt_mask"))
    if edge_target is None:
        edge_target = extract_edges(gt_mask, operator, padding)
    else:
        edge_target = check_grid(edge_target, "edge_target", min_size=3)
        check_same_shape(logits, edge_target, ("pred_logits", "edge_target"))
    losses, grad = loss_and_grad_batch(logits[None], gt_mask[None], edge_target[None],
                                       operator, weights, padding, use_edge_loss)
    return losses[0], grad[0]
