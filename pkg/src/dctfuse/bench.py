"""Benchmark protocol: complementary-blur pair generation and scoring.

Ground-truth references are split into a region and its complement; each
half of a pair gets one region box-blurred.  Fusing the pair should
recover (nearly) the reference, which the reference-based metrics then
quantify.  Everything is seeded and integer-exact so runs are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import metrics
from .fusion import FusionOptions, fuse
from .validation import as_gray_image

SPLITS = ("vertical", "horizontal", "quadrant")


@dataclass(frozen=True)
class BenchSpec:
    references: tuple = field(default_factory=tuple)   # file paths or arrays
    blur_kernel: int = 3
    pairs: int = 50
    split: str = "vertical"
    seed: int = 0

    def __post_init__(self):
        if self.blur_kernel < 3 or self.blur_kernel % 2 == 0:
            raise ValueError("blur_kernel must be odd and >= 3")
        if self.pairs < 1:
            raise ValueError("pairs must be >= 1")
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}")


def box_blur(img, kernel: int = 3) -> np.ndarray:
    """k x k box filter with edge replication, exact integer rounding.

    Sums are integer, the divide rounds half away from zero, so the
    result is bit-reproducible everywhere.
    """
    arr = as_gray_image(img)
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError("kernel must be odd and >= 1")
    ones = np.ones((kernel, kernel), dtype=np.int64)
    sums = ndimage.convolve(arr.astype(np.int64), ones, mode="nearest")
    k2 = kernel * kernel
    return ((2 * sums + k2) // (2 * k2)).astype(np.uint8)


def _split_mask(shape, split: str, rng: np.random.Generator) -> np.ndarray:
    """Boolean mask of the region blurred in image A.

    The boundary is jittered around the image center (on 8-pixel
    multiples, so blocks stay cleanly on one side) to vary the pairs.
    """
    h, w = shape

    def boundary(extent):
        center = extent // 2
        lo, hi = extent // 4, 3 * extent // 4
        pos = center + 8 * int(rng.integers(-extent // 32, extent // 32 + 1))
        return int(np.clip(pos, max(lo, 8), min(hi, extent - 8)))

    mask = np.zeros(shape, dtype=bool)
    if split == "vertical":
        mask[:, : boundary(w)] = True
    elif split == "horizontal":
        mask[: boundary(h), :] = True
    else:  # quadrant: opposite corners
        cy, cx = boundary(h), boundary(w)
        mask[:cy, :cx] = True
        mask[cy:, cx:] = True
    return mask


def generate_pair(reference, spec: BenchSpec, pair_index: int = 0):
    """One complementary-blur pair (A, B) from a ground-truth image."""
    ref = as_gray_image(reference, "reference")
    if ref.shape[0] < 16 or ref.shape[1] < 16:
        raise ValueError("reference must be at least 16x16")
    rng = np.random.default_rng([spec.seed, pair_index])
    mask = _split_mask(ref.shape, spec.split, rng)
    blurred = box_blur(ref, spec.blur_kernel)
    a = np.where(mask, blurred, ref)
    b = np.where(mask, ref, blurred)
    return a, b


def synthetic_reference(seed: int, size: int = 256) -> np.ndarray:
    """A procedural natural-content test image.

    Smooth background + sharp geometric shapes + fine texture, so every
    block carries some detail for a blur to destroy.
    """
    rng = np.random.default_rng(seed)
    coarse = ndimage.gaussian_filter(rng.normal(size=(size, size)), 6.0)
    coarse = (coarse - coarse.min()) / (np.ptp(coarse) + 1e-12)
    img = 40.0 + 150.0 * coarse

    yy, xx = np.mgrid[0:size, 0:size]
    for _ in range(10):
        kind = rng.integers(0, 2)
        level = float(rng.uniform(0, 255))
        cy, cx = rng.uniform(0, size, 2)
        ry, rx = rng.uniform(size / 16, size / 4, 2)
        if kind == 0:
            inside = (np.abs(yy - cy) < ry) & (np.abs(xx - cx) < rx)
        else:
            inside = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 < 1.0
        img = np.where(inside, 0.55 * img + 0.45 * level, img)

    texture = ndimage.gaussian_filter(rng.normal(size=(size, size)), 0.7)
    img += 18.0 * texture
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def _load_reference(ref):
    if isinstance(ref, np.ndarray):
        return as_gray_image(ref)
    from .pgmio import read_pgm
    return read_pgm(ref)


def run_bench(spec: BenchSpec, methods=("ampmax",), cv: bool = False) -> list[dict]:
    """Fuse every generated pair with every method and score it.

    Returns one row per (pair, method) plus one mean row per method.
    Rows are ordered by pair index then method, independent of any
    parallelism in the caller.
    """
    refs = [_load_reference(r) for r in spec.references]
    if not refs:
        raise ValueError("need at least one reference image")
    for m in methods:
        FusionOptions(measure=m)  # validate names up front

    rows = []
    sums = {m: np.zeros(5) for m in methods}
    for i in range(spec.pairs):
        ref = refs[i % len(refs)]
        a, b = generate_pair(ref, spec, pair_index=i)
        for m in methods:
            opts = FusionOptions(measure=m, consistency_verification=cv)
            fused, _, _ = fuse(a, b, opts)
            vals = (metrics.ssim(fused, ref),
                    min(metrics.psnr(fused, ref), metrics.PSNR_CAP_DB),
                    metrics.mse(fused, ref),
                    metrics.mutual_information(fused, ref),
                    metrics.uiqi(fused, ref))
            sums[m] += vals
            rows.append({"pair": i, "method": m,
                         "ssim": vals[0], "psnr": vals[1], "mse": vals[2],
                         "mi": vals[3], "uiqi": vals[4]})
    for m in methods:
        mean = sums[m] / spec.pairs
        rows.append({"pair": "mean", "method": m,
                     "ssim": mean[0], "psnr": mean[1], "mse": mean[2],
                     "mi": mean[3], "uiqi": mean[4]})
    return rows


def bench_rows_to_csv(rows) -> str:
    """Fixed-format CSV so identical runs produce identical bytes."""
    lines = ["pair,method,ssim,psnr,mse,mi,uiqi"]
    for r in rows:
        lines.append(f"{r['pair']},{r['method']},{r['ssim']:.6f},{r['psnr']:.6f},"
                     f"{r['mse']:.6f},{r['mi']:.6f},{r['uiqi']:.6f}")
    return "\n".join(lines) + "\n"
