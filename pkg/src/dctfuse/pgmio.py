"""Binary PGM (P5) reading and writing.

PGM keeps the pipeline bit-exact end to end: no codec, no color
management, one byte per pixel.  Only 8-bit images (maxval <= 255) are
supported.
"""

from __future__ import annotations

import os
import re

import numpy as np

from .validation import as_gray_image

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*([0-9]+|P5)")


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    """Read a binary PGM file into a 2D uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    pos = 2
    fields = []
    while len(fields) < 3:
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ValueError(f"{path}: truncated PGM header")
        fields.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ValueError(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos: pos + width * height]
    if len(raster) != width * height:
        raise ValueError(f"{path}: raster truncated "
                         f"({len(raster)} of {width * height} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)


def write_pgm(path: str | os.PathLike, img) -> None:
    """Write a 2D uint8 array as binary PGM."""
    arr = as_gray_image(img)
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(arr.tobytes())
