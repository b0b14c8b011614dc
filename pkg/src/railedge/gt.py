"""Ground-truth preparation: downscale, box-filter smoothing, edge targets.

Also rasterizes the synthetic trapezoid (rail silhouette) masks used in place
of a real dataset.
"""

from dataclasses import dataclass, field

import numpy as np

from .edges import EdgeOperator, as_operator, extract_edges
from .exceptions import DimensionError, ValidationError
from .grid import PaddingMode, as_padding, box_filter, resize_bilinear
from .validation import check_grid, check_odd, is_binary


@dataclass(frozen=True)
class GtConfig:
    source_size: tuple = (800, 800)
    target_size: tuple = (200, 200)
    box_size: int = 3
    smoothing_enabled: bool = True
    padding: PaddingMode = PaddingMode.REPLICATE
    # Extract the edge target from the smoothed mask (True) or the raw one.
    edge_from_smoothed: bool = True

    def __post_init__(self):
        src = tuple(int(v) for v in self.source_size)
        dst = tuple(int(v) for v in self.target_size)
        if len(src) != 2 or len(dst) != 2 or min(src + dst) < 1:
            raise ValidationError("sizes must be pairs of positive integers")
        if dst[0] > src[0] or dst[1] > src[1]:
            raise ValidationError(f"target size {dst} exceeds source size {src}")
        check_odd(self.box_size, "box_size")
        object.__setattr__(self, "source_size", src)
        object.__setattr__(self, "target_size", dst)
        object.__setattr__(self, "padding", as_padding(self.padding))


@dataclass(frozen=True)
class GtLabel:
    mask_smoothed: np.ndarray
    mask_raw: np.ndarray
    edge_target: np.ndarray
    operator: EdgeOperator = field(default=EdgeOperator.LAPLACIAN)


def prepare_gt(full_mask, cfg=GtConfig(), operator=EdgeOperator.LAPLACIAN):
    """Turn a full-resolution binary mask into training targets.

    The mask is resized bilinearly to ``cfg.target_size`` and, when smoothing
    is enabled, box-filtered with an ``cfg.box_size`` square window.
    """
    full_mask = check_grid(full_mask, "full_mask")
    if not is_binary(full_mask):
        raise ValidationError("full_mask must be binary (values 0.0 or 1.0)")
    if full_mask.shape != cfg.source_size:
        raise DimensionError(
            f"full_mask shape {full_mask.shape} != source size {cfg.source_size}"
        )
    operator = as_operator(operator)
    raw = resize_bilinear(full_mask, *cfg.target_size)
    if cfg.smoothing_enabled:
        smoothed = box_filter(raw, cfg.box_size, cfg.padding)
    else:
        smoothed = raw.copy()
    edge_source = smoothed if cfg.edge_from_smoothed else raw
    edges = extract_edges(edge_source, operator, cfg.padding)
    return GtLabel(smoothed, raw, edges, operator)


def rasterize_trapezoid(top_edge, r_top, bottom_edge, r_bottom, size):
    """Binary mask of a trapezoid with horizontal top and bottom edges.

    ``top_edge`` and ``bottom_edge`` are ``(x_left, x_right)`` in continuous
    pixel coordinates at rows ``r_top`` and ``r_bottom``. A pixel is set when
    its center lies inside the trapezoid (boundary inclusive).
    """
    h, w = (int(v) for v in size)
    (tl, tr), (bl, br) = top_edge, bottom_edge
    if h < 1 or w < 1:
        raise ValidationError("size must be positive")
    if not r_top < r_bottom:
        raise ValidationError("r_top must be above r_bottom")
    if not (tl < tr and bl < br):
        raise ValidationError("left edge must be left of right edge")
    if not (0 <= r_top and r_bottom <= h and min(tl, bl) >= 0 and max(tr, br) <= w):
        raise ValidationError("trapezoid lies outside the grid")

    y = np.arange(h) + 0.5
    x = np.arange(w) + 0.5
    t = (y - r_top) / (r_bottom - r_top)
    left = tl + t * (bl - tl)
    right = tr + t * (br - tr)
    rows = (y >= r_top) & (y <= r_bottom)
    inside = (x[None, :] >= left[:, None]) & (x[None, :] <= right[:, None]) & rows[:, None]
    return inside.astype(np.float64)


def trapezoid_area(top_edge, r_top, bottom_edge, r_bottom):
    return 0.5 * ((top_edge[1] - top_edge[0]) + (bottom_edge[1] - bottom_edge[0])) \
        * (r_bottom - r_top)


def random_rail_trapezoids(n, size=(800, 800), rng=None):
    """Random rail-like trapezoid geometries: narrow far end, wide near end.

    Returns a list of dicts with keys ``top``, ``r_top``, ``bottom``, ``r_bottom``.
    """
    rng = np.random.default_rng(rng)
    h, w = size
    shapes = []
    for _ in range(n):
        r_top = float(rng.uniform(0.15, 0.45) * h)
        r_bottom = float(rng.uniform(0.85, 1.0) * h)
        top_c = float(rng.uniform(0.35, 0.65) * w)
        top_half = float(rng.uniform(0.03, 0.08) * w)
        bottom_c = float(rng.uniform(0.4, 0.6) * w)
        bottom_half = float(rng.uniform(0.2, 0.35) * w)
        shapes.append({
            "top": [round(top_c - top_half, 3), round(top_c + top_half, 3)],
            "r_top": round(r_top, 3),
            "bottom": [round(bottom_c - bottom_half, 3), round(bottom_c + bottom_half, 3)],
            "r_bottom": round(r_bottom, 3),
        })
    return shapes


def rasterize_shape(shape, size):
    return rasterize_trapezoid(shape["top"], shape["r_top"], shape["bottom"],
                               shape["r_bottom"], size)
