"""Dense 2-D grid primitives: fixed-kernel correlation, bilinear resize, box filter.

Grids are plain float64 numpy arrays. Every function operates on the last two
axes, so a stack of instance masks of shape (n, H, W) is processed in one call.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, ValidationError
from .validation import check_grid, check_odd


class PaddingMode(str, enum.Enum):
    ZERO = "zero"
    REPLICATE = "replicate"


def as_padding(padding):
    try:
        return PaddingMode(padding)
    except ValueError:
        raise ValidationError(f"unknown padding mode {padding!r}") from None


@dataclass(frozen=True, eq=False)
class Kernel:
    """Square, odd-sized correlation kernel."""

    coefficients: np.ndarray

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=np.float64)
        if coef.ndim != 2 or coef.shape[0] != coef.shape[1]:
            raise DimensionError(f"kernel must be square, got shape {coef.shape}")
        check_odd(coef.shape[0], "kernel size")
        if not np.all(np.isfinite(coef)):
            raise ValidationError("kernel coefficients must be finite")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    @property
    def size(self):
        return self.coefficients.shape[0]

    @property
    def radius(self):
        return self.size // 2

    def rotated(self):
        """The kernel rotated by 180 degrees."""
        return Kernel(self.coefficients[::-1, ::-1])

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def __hash__(self):
        return hash(self.coefficients.tobytes())


def box_kernel(m):
    m = check_odd(m)
    return Kernel(np.full((m, m), 1.0 / (m * m)))


def pad(x, radius, padding):
    """Pad the last two axes of ``x`` by ``radius`` pixels."""
    if radius == 0:
        return x
    width = [(0, 0)] * (x.ndim - 2) + [(radius, radius)] * 2
    if as_padding(padding) is PaddingMode.ZERO:
        return np.pad(x, width, mode="constant")
    return np.pad(x, width, mode="edge")


def pad_adjoint(g, radius, padding):
    """Transpose of :func:`pad`: fold a padded-grid gradient back onto the grid."""
    if radius == 0:
        return g
    r = radius
    if as_padding(padding) is PaddingMode.ZERO:
        return g[..., r:-r, r:-r].copy()
    rows = g[..., r:-r, :].copy()
    rows[..., 0, :] += g[..., :r, :].sum(axis=-2)
    rows[..., -1, :] += g[..., -r:, :].sum(axis=-2)
    out = rows[..., :, r:-r].copy()
    out[..., :, 0] += rows[..., :, :r].sum(axis=-1)
    out[..., :, -1] += rows[..., :, -r:].sum(axis=-1)
    return out


def _check_fits(x, kernel):
    if kernel.size > min(x.shape[-2:]):
        raise DimensionError(
            f"kernel size {kernel.size} exceeds grid shape {x.shape[-2:]}"
        )


def correlate(x, kernel, padding=PaddingMode.REPLICATE):
    """Same-size cross-correlation of ``x`` with ``kernel`` (no kernel flip)."""
    x = check_grid(x, "input", batched=True)
    _check_fits(x, kernel)
    return _correlate(x, kernel, padding)


def _correlate(x, kernel, padding):
    h, w = x.shape[-2:]
    xp = pad(x, kernel.radius, padding)
    out = np.zeros_like(x)
    # Zero-sum kernels accumulate differences to the center pixel, which is
    # mathematically identical and gives exact zeros on constant regions.
    center = x if kernel.coefficients.sum() == 0.0 else None
    for (i, j), k in np.ndenumerate(kernel.coefficients):
        if k == 0.0:
            continue
        window = xp[..., i:i + h, j:j + w]
        if center is None:
            out += k * window
        elif (i, j) != (kernel.radius, kernel.radius):
            out += k * (window - center)
    return out


def correlate_adjoint(g, kernel, padding=PaddingMode.REPLICATE):
    """Vector-Jacobian product of :func:`correlate` with respect to its input.

    Equivalent to correlating with the 180-degree rotated kernel over a
    zero-extended gradient, followed by the padding transpose.
    """
    h, w = g.shape[-2:]
    r = kernel.radius
    gp = np.zeros(g.shape[:-2] + (h + 2 * r, w + 2 * r))
    for (i, j), k in np.ndenumerate(kernel.coefficients):
        if k != 0.0:
            gp[..., i:i + h, j:j + w] += k * g
    return pad_adjoint(gp, r, padding)


def box_filter(x, m=3, padding=PaddingMode.REPLICATE):
    """Mean over each m x m window.

    Windows whose values are all equal reproduce that value exactly, and no
    output leaves the [min, max] range of its own window.
    """
    m = check_odd(m)
    x = check_grid(x, "input", batched=True)
    kernel = box_kernel(m)
    _check_fits(x, kernel)
    h, w = x.shape[-2:]
    xp = pad(x, kernel.radius, padding)
    total = np.zeros_like(x)
    lo = np.full_like(x, np.inf)
    hi = np.full_like(x, -np.inf)
    for i in range(m):
        for j in range(m):
            window = xp[..., i:i + h, j:j + w]
            total += window
            np.minimum(lo, window, out=lo)
            np.maximum(hi, window, out=hi)
    return np.clip(total / (m * m), lo, hi)


def _axis_samples(n_in, n_out):
    scale = n_in / n_out
    src = (np.arange(n_out) + 0.5) * scale - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    i0 = np.floor(src).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    return i0, i1, src - i0


def resize_bilinear(x, out_height, out_width):
    """Bilinear resize with half-pixel-center alignment."""
    for n in (out_height, out_width):
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ValidationError(f"output dimensions must be positive integers, got {n!r}")
    x = check_grid(x, "input", batched=True)
    h, w = x.shape[-2:]
    r0, r1, fy = _axis_samples(h, int(out_height))
    c0, c1, fx = _axis_samples(w, int(out_width))
    top = x[..., r0, :]
    bottom = x[..., r1, :]
    rows = top + fy[:, None] * (bottom - top)
    left = rows[..., c0]
    right = rows[..., c1]
    out = left + fx * (right - left)
    lo = x.min(axis=(-2, -1), keepdims=True)
    hi = x.max(axis=(-2, -1), keepdims=True)
    return np.clip(out, lo, hi)
