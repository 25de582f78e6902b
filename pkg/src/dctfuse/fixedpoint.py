"""Q(1,10,24) fixed-point arithmetic.

All hardware-path words are 35-bit signed fixed point: 1 sign bit, 10
integer bits, 24 fractional bits.  Raw values are plain Python ints (or
int64 arrays in the vectorized transform paths); the scale factor is
2**24.  Rounding is round-to-nearest with ties away from zero, overflow
saturates to the range limit and emits a :class:`SaturationWarning`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

FRAC_BITS = 24
INT_BITS = 10
SCALE = 1 << FRAC_BITS            # 2**24
RAW_MAX = (1 << (INT_BITS + FRAC_BITS)) - 1   # 1024 - 2**-24, as a raw int
RAW_MIN = -(1 << (INT_BITS + FRAC_BITS))      # -1024


class SaturationWarning(UserWarning):
    """A fixed-point value exceeded the Q(1,10,24) range and was clamped."""


@dataclass(frozen=True)
class Fixed35:
    """A Q(1,10,24) scalar; ``raw`` is the underlying signed integer."""

    raw: int

    def to_float(self) -> float:
        return self.raw / SCALE

    def __add__(self, other: "Fixed35") -> "Fixed35":
        return Fixed35(_saturate(self.raw + other.raw))

    def __mul__(self, other: "Fixed35") -> "Fixed35":
        # full-precision product, one rounding back to Q24
        return Fixed35(_saturate(round_shift(self.raw * other.raw, FRAC_BITS)))

    def __neg__(self) -> "Fixed35":
        return Fixed35(_saturate(-self.raw))


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero."""
    if x >= 0:
        return int(np.floor(x + 0.5))
    return -int(np.floor(-x + 0.5))


def round_shift(v: int, shift: int) -> int:
    """Arithmetic right shift by ``shift`` with round-half-away-from-zero."""
    if shift <= 0:
        return v << -shift
    half = 1 << (shift - 1)
    if v >= 0:
        return (v + half) >> shift
    return -((-v + half) >> shift)


def _saturate(raw: int) -> int:
    if raw > RAW_MAX:
        warnings.warn("Q(1,10,24) overflow, value clamped", SaturationWarning, stacklevel=3)
        return RAW_MAX
    if raw < RAW_MIN:
        warnings.warn("Q(1,10,24) underflow, value clamped", SaturationWarning, stacklevel=3)
        return RAW_MIN
    return raw


def to_fixed(x: float) -> Fixed35:
    """Quantize a real value to the nearest Q(1,10,24) point.

    Out-of-range inputs saturate to the range limit (with a warning);
    in-range inputs land within 2**-25 of ``x``.
    """
    return Fixed35(_saturate(round_half_away(x * SCALE)))


def from_fixed(f: Fixed35) -> float:
    """Exact real value of a Q(1,10,24) scalar."""
    return f.raw / SCALE


def round_shift_array(v: np.ndarray, shift: int) -> np.ndarray:
    """Vectorized :func:`round_shift` on int64 arrays."""
    half = np.int64(1) << np.int64(shift - 1)
    av = np.abs(v)
    return np.sign(v) * ((av + half) >> np.int64(shift))


def saturate_array(raw: np.ndarray) -> np.ndarray:
    """Clamp an int64 raw array to Q(1,10,24), warning if anything clipped."""
    clipped = np.clip(raw, RAW_MIN, RAW_MAX)
    if np.any(clipped != raw):
        warnings.warn("Q(1,10,24) overflow, values clamped", SaturationWarning, stacklevel=3)
    return clipped
