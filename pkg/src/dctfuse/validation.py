"""Input validation helpers shared across the public API."""

from __future__ import annotations

import numpy as np


def as_gray_image(x, name: str = "image") -> np.ndarray:
    """Validate and return an 8-bit grayscale image as a 2D uint8 array.

    Accepts uint8 arrays directly and integer/float arrays whose values
    are integral and within [0, 255].
    """
    arr = np.asarray(x)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {arr.shape}")
    if arr.dtype == np.uint8:
        return arr
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError(f"{name} samples must lie in [0, 255]")
    if np.issubdtype(arr.dtype, np.floating) and arr.size and np.any(arr != np.round(arr)):
        raise ValueError(f"{name} has non-integral samples; round or quantize it first")
    return arr.astype(np.uint8)


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"images must have identical dimensions, got {a.shape} vs {b.shape}")


def as_block(x, name: str = "block") -> np.ndarray:
    """Return an 8x8 float64 block."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (8, 8):
        raise ValueError(f"{name} must be 8x8, got shape {arr.shape}")
    return arr


def check_decision_labels(labels) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 2:
        raise ValueError(f"decision map must be 2-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isin(arr, (-1, 1))):
        raise ValueError("decision map labels must be +1 or -1")
    return arr.astype(np.int8)
