"""Fixed-kernel edge extraction (Sobel magnitude or absolute Laplacian).

Edge maps are normalized into [0, 1] so they can serve directly as
binary cross-entropy predictions and targets.
"""

import enum
import math

import numpy as np

from .exceptions import ValidationError
from .grid import Kernel, PaddingMode, _correlate, correlate_adjoint
from .validation import check_grid

SOBEL_X = Kernel([[1.0, 0.0, -1.0], [2.0, 0.0, -2.0], [1.0, 0.0, -1.0]])
SOBEL_Y = Kernel([[1.0, 2.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -2.0, -1.0]])
LAPLACIAN = Kernel([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])

# Largest response each operator can produce on a [0, 1]-valued grid.
SOBEL_NORM = 4.0 * math.sqrt(2.0)
LAPLACIAN_NORM = 4.0

# Smoothing of the Sobel magnitude square root on the prediction side.
SOBEL_DELTA = 1e-8


class EdgeOperator(str, enum.Enum):
    SOBEL = "sobel"
    LAPLACIAN = "laplacian"


def as_operator(operator):
    try:
        return EdgeOperator(operator)
    except ValueError:
        raise ValidationError(f"unknown edge operator {operator!r}") from None


def sobel_kernels():
    """Return the horizontal and vertical Sobel kernels ``(S_x, S_y)``."""
    return SOBEL_X, SOBEL_Y


def laplacian_kernel():
    return LAPLACIAN


def extract_edges(mask, operator=EdgeOperator.LAPLACIAN, padding=PaddingMode.REPLICATE):
    """Normalized edge-strength map of ``mask``, same shape, values in [0, 1].

    Accepts a single (H, W) grid or a stack (n, H, W).
    """
    mask = check_grid(mask, "mask", min_size=3, batched=True)
    edges, _ = edge_forward(mask, operator, padding, delta=0.0)
    return edges


def edge_response(mask, operator, padding):
    """Pre-clamp normalized edge response; bounded by 1 for [0, 1]-valued masks."""
    operator = as_operator(operator)
    if operator is EdgeOperator.LAPLACIAN:
        return np.abs(_correlate(mask, LAPLACIAN, padding)) / LAPLACIAN_NORM
    gx = _correlate(mask, SOBEL_X, padding)
    gy = _correlate(mask, SOBEL_Y, padding)
    return np.sqrt(gx * gx + gy * gy) / SOBEL_NORM


def edge_forward(mask, operator, padding, delta=SOBEL_DELTA):
    """Compute the edge map and a closure returning its vector-Jacobian product.

    ``delta`` smooths the Sobel magnitude as ``sqrt(gx^2 + gy^2 + delta^2) - delta``
    so the gradient is defined where both directional responses vanish.
    """
    operator = as_operator(operator)
    if operator is EdgeOperator.LAPLACIAN:
        lap = _correlate(mask, LAPLACIAN, padding)
        response = np.abs(lap) / LAPLACIAN_NORM
        edges = np.minimum(response, 1.0)

        def backward(g):
            g = g * np.sign(lap)
            g[response >= 1.0] = 0.0
            g /= LAPLACIAN_NORM
            return correlate_adjoint(g, LAPLACIAN, padding)

        return edges, backward

    gx = _correlate(mask, SOBEL_X, padding)
    gy = _correlate(mask, SOBEL_Y, padding)
    radius = np.sqrt(gx * gx + gy * gy + delta * delta)
    response = (radius - delta) / SOBEL_NORM
    edges = np.minimum(response, 1.0)

    def backward(g):
        scale = g / (radius * SOBEL_NORM)
        scale[(response >= 1.0) | (radius == 0.0)] = 0.0
        return (correlate_adjoint(scale * gx, SOBEL_X, padding)
                + correlate_adjoint(scale * gy, SOBEL_Y, padding))

    return edges, backward
