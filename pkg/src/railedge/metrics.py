"""Boundary-quality metrics for soft and binary masks."""

import numpy as np
from scipy import ndimage

from .edges import LAPLACIAN
from .grid import PaddingMode, _correlate
from .validation import check_grid, check_same_shape


def binarize(mask, threshold=0.5):
    return np.asarray(mask) >= threshold


def boundary_band(labels):
    """Pixels with a 4-neighbor of a different class (both sides of the contour).

    Pixels outside the grid count as the same class as their nearest pixel.
    """
    b = np.pad(labels, 1, mode="edge")
    center = b[1:-1, 1:-1]
    return ((b[:-2, 1:-1] != center) | (b[2:, 1:-1] != center)
            | (b[1:-1, :-2] != center) | (b[1:-1, 2:] != center))


def iou(pred_mask, gt_mask):
    pred = binarize(check_grid(pred_mask, "pred_mask"))
    gt = binarize(check_grid(gt_mask, "gt_mask"))
    check_same_shape(pred, gt)
    union = np.count_nonzero(pred | gt)
    if union == 0:
        return 1.0
    return np.count_nonzero(pred & gt) / union


def boundary_f1(pred_mask, gt_mask, tolerance=2):
    """F1 of boundary pixels matched within Chebyshev distance ``tolerance``."""
    pred = boundary_band(binarize(check_grid(pred_mask, "pred_mask")))
    gt = boundary_band(binarize(check_grid(gt_mask, "gt_mask")))
    check_same_shape(pred, gt)
    n_pred, n_gt = np.count_nonzero(pred), np.count_nonzero(gt)
    if n_pred == 0 and n_gt == 0:
        return 1.0
    if n_pred == 0 or n_gt == 0:
        return 0.0
    square = np.ones((2 * tolerance + 1,) * 2, dtype=bool)
    precision = np.count_nonzero(pred & ndimage.binary_dilation(gt, square)) / n_pred
    recall = np.count_nonzero(gt & ndimage.binary_dilation(pred, square)) / n_gt
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def jaggedness(mask):
    """Mean absolute Laplacian response of a soft mask over its boundary band."""
    mask = check_grid(mask, "mask", min_size=3)
    # Three-way split around 0.5 keeps the band unchanged under mask complement.
    band = boundary_band(np.sign(mask - 0.5))
    if not band.any():
        return 0.0
    response = np.abs(_correlate(mask, LAPLACIAN, PaddingMode.REPLICATE))
    return float(response[band].mean())
