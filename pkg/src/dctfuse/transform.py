"""8x8 2D DCT-II / IDCT, floating point and Q(1,10,24) fixed point.

Both flavors are realized as two 1D passes with a transpose in between.
The float flavor uses the orthonormal basis directly, so Parseval holds
and pixel-domain variance equals coefficient-domain variance.

The fixed flavor mirrors a 35-bit datapath: every stored word is
Q(1,10,24); the eight products of a 1D output accumulate at full
precision inside the MAC and are rounded once at the output (wide
accumulator, single quantizer).  Two scaling choices keep all stored
words inside the +-1024 range and the result within 2**-16 of the float
path:

* input pixels are pre-scaled by 2**-PIXEL_PRESCALE_BITS (an exact shift
  for integer pixels), and results are rescaled on the way out;
* the basis constants are stored pre-scaled by 2**ROM_PRESCALE_BITS and
  the extra factor is folded into the post-multiply shift, which raises
  the effective constant precision without widening the data words.

Because each quantized basis row of nonzero frequency sums to exactly
zero (its entries cancel in sign-symmetric pairs), a constant pixel
offset leaves every AC coefficient outside DCT column 0 bit-identical;
the single output rounding per pass keeps that exact.
"""

from __future__ import annotations

import numpy as np

from .fixedpoint import FRAC_BITS, saturate_array

#: input pixels are divided by 2**2 before entering the fixed datapath
PIXEL_PRESCALE_BITS = 2
#: basis constants are stored times 2**6; the product shift absorbs it
ROM_PRESCALE_BITS = 6

_PIXEL_TO_RAW_SHIFT = FRAC_BITS - PIXEL_PRESCALE_BITS   # pixel -> Q24 of pixel/4
_PRODUCT_SHIFT = FRAC_BITS + ROM_PRESCALE_BITS
#: one unit of the de-scaled fixed coefficient, 2**-22
FIXED_COEFF_ULP = 2.0 ** -(FRAC_BITS - PIXEL_PRESCALE_BITS)


def dct_matrix() -> np.ndarray:
    """Orthonormal 8-point DCT-II basis, c(i,j) = a(i) cos((2j+1) i pi / 16)."""
    i = np.arange(8).reshape(8, 1).astype(np.float64)
    j = np.arange(8).reshape(1, 8).astype(np.float64)
    m = np.cos((2 * j + 1) * i * np.pi / 16)
    m[0, :] *= np.sqrt(1.0 / 8.0)
    m[1:, :] *= np.sqrt(2.0 / 8.0)
    return m


_M = dct_matrix()
_MT = _M.T.copy()


def _quantize_rom(m: np.ndarray) -> np.ndarray:
    scaled = m * float(1 << _PRODUCT_SHIFT)
    return (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)


_ROM_FWD = _quantize_rom(_M)    # forward pass constants
_ROM_INV = _quantize_rom(_MT)   # inverse pass constants ("same architecture, other ROM")


def fdct2_batch(blocks: np.ndarray) -> np.ndarray:
    """Forward DCT of a stack of blocks, shape (..., 8, 8)."""
    return _M @ np.asarray(blocks, dtype=np.float64) @ _MT


def idct2_batch(coeffs: np.ndarray) -> np.ndarray:
    """Inverse DCT of a stack of coefficient blocks, shape (..., 8, 8)."""
    return _MT @ np.asarray(coeffs, dtype=np.float64) @ _M


def fdct2(block: np.ndarray) -> np.ndarray:
    """Forward 2D DCT of an 8x8 block (float reference path)."""
    return fdct2_batch(block)


def idct2(coeffs: np.ndarray) -> np.ndarray:
    """Inverse 2D DCT of an 8x8 coefficient block (float reference path)."""
    return idct2_batch(coeffs)


_SPLIT_BITS = 20
_SPLIT_MASK = np.int64((1 << _SPLIT_BITS) - 1)
_CARRY_BITS = _PRODUCT_SHIFT - _SPLIT_BITS            # 10
_CARRY_MASK = np.int64((1 << _CARRY_BITS) - 1)
_REM_MASK = np.int64((1 << _PRODUCT_SHIFT) - 1)
_HALF = np.int64(1 << (_PRODUCT_SHIFT - 1))


def _pass_1d_raw(rows: np.ndarray, rom: np.ndarray) -> np.ndarray:
    """One 1D pass over the trailing axis of a raw int64 stack.

    Wide-MAC semantics: the 8 products accumulate exactly and the output
    is rounded once (half away from zero).  Data words are split into
    high and low halves so no partial value can overflow int64 even for
    range-limit inputs; the recombination below is an exact identity for
    sum = s_hi * 2**20 + s_lo.
    """
    x_hi = rows >> _SPLIT_BITS                         # floor shift
    x_lo = rows & _SPLIT_MASK                          # in [0, 2**20)
    romt = np.ascontiguousarray(rom.T)
    s_hi = x_hi @ romt
    s_lo = x_lo @ romt
    carry = s_hi >> _CARRY_BITS
    inner = ((s_hi & _CARRY_MASK) << _SPLIT_BITS) + s_lo
    floor = carry + (inner >> _PRODUCT_SHIFT)
    rem = inner & _REM_MASK
    round_up = np.where(floor >= 0, rem >= _HALF, rem > _HALF)
    return floor + round_up


def _transform_raw(data: np.ndarray, rom: np.ndarray) -> np.ndarray:
    t = _pass_1d_raw(data, rom)
    t = saturate_array(t)
    t = np.swapaxes(t, -1, -2)
    d = _pass_1d_raw(t, rom)
    return saturate_array(np.swapaxes(d, -1, -2))


def fdct2_fixed_raw(blocks: np.ndarray) -> np.ndarray:
    """Fixed-path forward DCT; returns raw Q24 ints of coeff/2**2.

    ``blocks`` holds pixel values in [0, 255]; shape (..., 8, 8).  Integer
    pixels convert exactly (a pure shift); real-valued samples are
    quantized round-to-nearest onto the input grid first.
    """
    arr = np.asarray(blocks)
    if np.issubdtype(arr.dtype, np.integer):
        x = arr.astype(np.int64) << _PIXEL_TO_RAW_SHIFT
    else:
        scaled = arr.astype(np.float64) * float(1 << _PIXEL_TO_RAW_SHIFT)
        scaled = np.clip(scaled, -2.0 ** 62, 2.0 ** 62)
        x = (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)
    return _transform_raw(saturate_array(x), _ROM_FWD)


def idct2_fixed_raw(coeffs_raw: np.ndarray) -> np.ndarray:
    """Fixed-path inverse DCT on raw Q24 coefficient ints."""
    raw = saturate_array(np.asarray(coeffs_raw, dtype=np.int64))
    return _transform_raw(raw, _ROM_INV)


def fixed_raw_to_coeffs(raw: np.ndarray) -> np.ndarray:
    """De-scale raw fixed coefficients to coefficient units (exact in float64)."""
    return np.asarray(raw, dtype=np.float64) * FIXED_COEFF_ULP


def coeffs_to_fixed_raw(coeffs: np.ndarray) -> np.ndarray:
    """Quantize coefficient-unit values onto the fixed grid (lossless for
    values that came out of the fixed path)."""
    scaled = np.asarray(coeffs, dtype=np.float64) / FIXED_COEFF_ULP
    raw = (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)
    return saturate_array(raw)


def fdct2_fixed(block: np.ndarray) -> np.ndarray:
    """Forward DCT through the fixed-point datapath, in coefficient units.

    Output values are exact multiples of 2**-22 and agree with
    :func:`fdct2` to within 2**-16 per coefficient.
    """
    return fixed_raw_to_coeffs(fdct2_fixed_raw(np.asarray(block)))


def idct2_fixed(coeffs: np.ndarray) -> np.ndarray:
    """Inverse DCT through the fixed-point datapath.

    For coefficients produced by :func:`fdct2_fixed` from an 8-bit block,
    the reconstruction error is below half a gray level, so rounding
    recovers the original block exactly.
    """
    raw = coeffs_to_fixed_raw(coeffs)
    out = idct2_fixed_raw(raw)
    return fixed_raw_to_coeffs(out)
