"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

from .exceptions import DimensionError, ValidationError


def check_grid(values, name="grid", min_size=1, batched=False):
    """Return ``values`` as a finite float64 array of shape (H, W).

    With ``batched=True`` any number of leading axes is accepted, so a stack
    of instance masks of shape (n, H, W) passes through unchanged.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim < 2 or (arr.ndim != 2 and not batched):
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if min(arr.shape[-2:]) < min_size:
        raise DimensionError(
            f"{name} must be at least {min_size}x{min_size}, got {arr.shape[-2:]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def check_same_shape(a, b, names=("prediction", "target")):
    if a.shape != b.shape:
        raise DimensionError(f"{names[0]} shape {a.shape} != {names[1]} shape {b.shape}")


def check_odd(m, name="m"):
    if isinstance(m, bool) or int(m) != m or m < 1 or m % 2 == 0:
        raise ValidationError(f"{name} must be an odd positive integer, got {m!r}")
    return int(m)


def check_unit_range(arr, name="grid"):
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValidationError(f"{name} values must lie in [0, 1]")


def is_binary(values):
    """True when every value is exactly 0.0 or 1.0."""
    arr = np.asarray(values)
    return bool(np.all((arr == 0.0) | (arr == 1.0)))
