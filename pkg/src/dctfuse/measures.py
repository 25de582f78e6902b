"""Block-level focus measures.

``amp_max`` is the low-complexity measure this package is built around:
the sum of absolute AC coefficients of an 8x8 DCT block, computable with
nothing but additions.  The three baselines it is compared against are
``variance`` (DCT-domain block variance), ``spatial_frequency_measure``
(row/column first-difference energy, computed in the pixel domain) and
``ac_max`` (count of large AC coefficients).

Every measure takes an :class:`~dctfuse.opcount.OpCounter` and charges it
with the per-block operation budget of the corresponding hardware, so a
whole-image run reports exact totals.  ``*_scores`` variants operate on a
stack of blocks at once and charge the same budget per block.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .opcount import OpCounter
from .validation import as_block

MEASURES = ("ampmax", "variance", "sf", "acmax")

#: "nonzero after quantization" equivalent: count AC with |d| > 0.5
DEFAULT_AC_THRESHOLD = 0.5



@dataclass(frozen=True)
class FocusScore:
    value: float
    measure_id: str

    def __post_init__(self):
        if self.measure_id not in MEASURES:
            raise ValueError(f"unknown measure {self.measure_id!r}")
        if self.value < 0:
            raise ValueError("focus scores are non-negative")


def amp_max(coeffs, counter: OpCounter | None = None) -> FocusScore:
    """Sum of absolute AC coefficients; 63 additions, nothing else."""
    d = as_block(coeffs, "coeffs")
    return FocusScore(float(amp_max_scores(d[None], counter)[0]), "ampmax")


def variance(coeffs, counter: OpCounter | None = None) -> FocusScore:
    """Block variance from DCT coefficients.

    By Parseval this equals the pixel-domain variance:
    sum(d^2)/64 - (d(0,0)/8)^2.  Costs one squaring per coefficient.
    """
    d = as_block(coeffs, "coeffs")
    return FocusScore(float(variance_scores(d[None], counter)[0]), "variance")


def spatial_frequency_measure(block, counter: OpCounter | None = None) -> FocusScore:
    """Row+column frequency energy RF^2 + CF^2 of a pixel block."""
    x = as_block(block)
    return FocusScore(float(sf_scores(x[None], counter)[0]), "sf")


def ac_max(coeffs, threshold: float = DEFAULT_AC_THRESHOLD,
           counter: OpCounter | None = None) -> FocusScore:
    """Count of AC coefficients with magnitude above ``threshold``."""
    d = as_block(coeffs, "coeffs")
    return FocusScore(float(ac_max_scores(d[None], threshold, counter)[0]), "acmax")


# ---------------------------------------------------------------------------
# batch scorers used by the fusion pipeline (same math, one call per image)

def amp_max_scores(coeffs: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.float64)
    scores = np.abs(c).sum(axis=(-1, -2)) - np.abs(c[..., 0, 0])
    if counter is not None:
        counter.add(additions=63 * scores.size)
    return scores


def variance_scores(coeffs: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.float64)
    scores = (c * c).sum(axis=(-1, -2)) / 64.0 - (c[..., 0, 0] / 8.0) ** 2
    if np.any(scores < -1e-6):
        warnings.warn("variance came out significantly negative; clamping to 0",
                      RuntimeWarning)
    np.clip(scores, 0.0, None, out=scores)  # exact zeros can round negative
    if counter is not None:
        counter.add(multiplications=64 * scores.size, additions=63 * scores.size)
    return scores


def sf_scores(blocks: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    x = np.asarray(blocks, dtype=np.float64)
    dr = np.diff(x, axis=-1)
    dc = np.diff(x, axis=-2)
    scores = ((dr * dr).sum(axis=(-1, -2)) + (dc * dc).sum(axis=(-1, -2))) / 64.0
    if counter is not None:
        counter.add(multiplications=112 * scores.size, additions=224 * scores.size)
    return scores


def ac_max_scores(coeffs: np.ndarray, threshold: float = DEFAULT_AC_THRESHOLD,
                  counter: OpCounter | None = None) -> np.ndarray:
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    c = np.asarray(coeffs, dtype=np.float64)
    over = np.abs(c) > threshold
    scores = over.sum(axis=(-1, -2)).astype(np.float64) - over[..., 0, 0]
    if counter is not None:
        counter.add(conditional_increments=63 * scores.size)
    return scores
