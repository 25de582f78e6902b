"""Fusion quality metrics.

Reference-based: mse, psnr, ssim, uiqi, mutual_information (fused vs a
ground-truth image).  Non-reference: qabf and fmi (how much source edge /
feature information survived into the fused image) and the whole-image
spatial frequency.

The literature fixes none of the estimator parameters, so they are pinned
here once and for all: 8x8 sliding windows for ssim/uiqi with the usual
(0.01*255)^2 / (0.03*255)^2 stabilizers, 256-bin joint histograms and
base-2 logs for mutual information, 3x3 Sobel gradients for qabf and fmi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .validation import as_gray_image, check_same_shape

#: value written to CSV when mse == 0 makes psnr unbounded
PSNR_CAP_DB = 99.99

_WIN = 8
_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2

# Petrovic model constants (edge-strength and orientation sigmoids),
# normalized so that perfect preservation scores exactly 1.
_QABF_GAMMA_G, _QABF_KAPPA_G, _QABF_SIGMA_G = 0.9994, -15.0, 0.5
_QABF_GAMMA_A, _QABF_KAPPA_A, _QABF_SIGMA_A = 0.9879, -22.0, 0.8


@dataclass
class MetricReport:
    """One row of the evaluation table; reference metrics may be absent."""

    ssim: Optional[float] = None
    psnr_db: Optional[float] = None
    mse: Optional[float] = None
    mi_bits: Optional[float] = None
    uiqi: Optional[float] = None
    qabf: Optional[float] = None
    sf: Optional[float] = None
    fmi: Optional[float] = None

    CSV_COLUMNS = ("ssim", "psnr", "mse", "mi", "uiqi", "qabf", "sf", "fmi")

    def csv_values(self) -> list[str]:
        def fmt(v, cap=False):
            if v is None:
                return ""
            if cap and not np.isfinite(v):
                return f"{PSNR_CAP_DB:.6f}"
            return f"{v:.6f}"
        return [fmt(self.ssim), fmt(self.psnr_db, cap=True), fmt(self.mse),
                fmt(self.mi_bits), fmt(self.uiqi), fmt(self.qabf),
                fmt(self.sf), fmt(self.fmi)]


def mse(x, y) -> float:
    """Mean squared pixel difference."""
    x = as_gray_image(x, "x")
    y = as_gray_image(y, "y")
    check_same_shape(x, y)
    d = x.astype(np.float64) - y.astype(np.float64)
    return float(np.mean(d * d))


def psnr(x, y) -> float:
    """Peak SNR in dB for 8-bit data; +inf when the images are identical."""
    e = mse(x, y)
    if e == 0.0:
        return float("inf")
    return float(10.0 * np.log10(255.0 ** 2 / e))


def _window_means(v: np.ndarray) -> np.ndarray:
    """Mean of every 8x8 sliding window via an integral image.

    Sums of 8-bit products stay far below 2**53, so the means are exact.
    """
    s = np.zeros((v.shape[0] + 1, v.shape[1] + 1), dtype=np.float64)
    np.cumsum(np.cumsum(v, axis=0), axis=1, out=s[1:, 1:])
    w = _WIN
    sums = s[w:, w:] - s[:-w, w:] - s[w:, :-w] + s[:-w, :-w]
    return sums / (w * w)


def _window_stats(x: np.ndarray, y: np.ndarray):
    """Means, variances and covariance over all 8x8 sliding windows."""
    mx, my = _window_means(x), _window_means(y)
    vx = _window_means(x * x) - mx * mx
    vy = _window_means(y * y) - my * my
    cxy = _window_means(x * y) - mx * my
    return mx, my, vx, vy, cxy


def ssim(x, y) -> float:
    """Mean structural similarity over 8x8 sliding windows."""
    x = as_gray_image(x, "x").astype(np.float64)
    y = as_gray_image(y, "y").astype(np.float64)
    check_same_shape(x, y)
    if min(x.shape) < _WIN:
        raise ValueError(f"images must be at least {_WIN}x{_WIN}")
    mx, my, vx, vy, cxy = _window_stats(x, y)
    num = (2 * mx * my + _C1) * (2 * cxy + _C2)
    den = (mx * mx + my * my + _C1) * (vx + vy + _C2)
    return float(np.mean(num / den))


def uiqi(x, y) -> float:
    """Universal image quality index: ssim without stabilizers.

    Windows with a zero denominator carry no usable signal and are
    skipped; if every window is degenerate the result is 1.0 for
    bit-identical inputs and 0.0 otherwise.
    """
    x = as_gray_image(x, "x").astype(np.float64)
    y = as_gray_image(y, "y").astype(np.float64)
    check_same_shape(x, y)
    if min(x.shape) < _WIN:
        raise ValueError(f"images must be at least {_WIN}x{_WIN}")
    mx, my, vx, vy, cxy = _window_stats(x, y)
    num = 4 * cxy * mx * my
    den = (vx + vy) * (mx * mx + my * my)
    valid = den != 0.0  # window stats are exact for 8-bit input
    if not np.any(valid):
        return 1.0 if np.array_equal(x, y) else 0.0
    return float(np.mean(num[valid] / den[valid]))


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def mutual_information(x, y) -> float:
    """Mutual information in bits from the 256x256 joint histogram."""
    x = as_gray_image(x, "x")
    y = as_gray_image(y, "y")
    check_same_shape(x, y)
    joint, _, _ = np.histogram2d(x.ravel(), y.ravel(), bins=256,
                                 range=[[0, 256], [0, 256]])
    pxy = joint / joint.sum()
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    return _entropy_bits(px) + _entropy_bits(py) - _entropy_bits(pxy.ravel())


def shannon_entropy(x) -> float:
    """Histogram entropy of an 8-bit image, in bits."""
    x = as_gray_image(x, "x")
    counts = np.bincount(x.ravel(), minlength=256).astype(np.float64)
    return _entropy_bits(counts / counts.sum())


def _sobel_gradients(img: np.ndarray):
    gx = ndimage.sobel(img, axis=1, mode="nearest")
    gy = ndimage.sobel(img, axis=0, mode="nearest")
    return np.hypot(gx, gy), np.arctan2(gy, gx)


def _preservation(g_src, a_src, g_fused, a_fused):
    """Per-pixel edge preservation of one source in the fused image."""
    gmax = np.maximum(g_src, g_fused)
    gmin = np.minimum(g_src, g_fused)
    with np.errstate(invalid="ignore", divide="ignore"):
        g_rel = np.where(gmax > 0, gmin / gmax, 1.0)   # both zero: nothing lost
    delta = np.abs(a_src - a_fused)
    delta = np.minimum(delta, 2 * np.pi - delta)       # wrap
    delta = np.minimum(delta, np.pi - delta)           # orientation, not direction
    a_rel = 1.0 - 2.0 * delta / np.pi

    def sigmoid(rel, gamma, kappa, sigma):
        q = gamma / (1.0 + np.exp(kappa * (rel - sigma)))
        q_perfect = gamma / (1.0 + np.exp(kappa * (1.0 - sigma)))
        return q / q_perfect

    qg = sigmoid(g_rel, _QABF_GAMMA_G, _QABF_KAPPA_G, _QABF_SIGMA_G)
    qa = sigmoid(a_rel, _QABF_GAMMA_A, _QABF_KAPPA_A, _QABF_SIGMA_A)
    return qg * qa


def qabf(a, b, fused) -> float:
    """Petrovic-style edge preservation of both sources in the fused image.

    Per-pixel preservation factors are weighted by source edge strength.
    1.0 means every source edge arrived intact; images with no edges at
    all preserve everything vacuously and also score 1.0.
    """
    a = as_gray_image(a, "a").astype(np.float64)
    b = as_gray_image(b, "b").astype(np.float64)
    f = as_gray_image(fused, "fused").astype(np.float64)
    check_same_shape(a, f)
    check_same_shape(b, f)
    ga, aa = _sobel_gradients(a)
    gb, ab = _sobel_gradients(b)
    gf, af = _sobel_gradients(f)
    qaf = _preservation(ga, aa, gf, af)
    qbf = _preservation(gb, ab, gf, af)
    wa, wb = ga, gb
    wsum = (wa + wb).sum()
    if wsum == 0.0:
        return 1.0
    return float((qaf * wa + qbf * wb).sum() / wsum)


def _gradient_feature(img: np.ndarray) -> np.ndarray:
    """Gradient magnitude quantized to 8 bits for histogram estimation."""
    g, _ = _sobel_gradients(img.astype(np.float64))
    peak = g.max()
    if peak == 0.0:
        return np.zeros(img.shape, dtype=np.uint8)
    return np.floor(g / peak * 255.0 + 0.5).astype(np.uint8)


def _normalized_mi(x: np.ndarray, y: np.ndarray) -> float:
    joint, _, _ = np.histogram2d(x.ravel(), y.ravel(), bins=256,
                                 range=[[0, 256], [0, 256]])
    pxy = joint / joint.sum()
    hx = _entropy_bits(pxy.sum(axis=1))
    hy = _entropy_bits(pxy.sum(axis=0))
    hxy = _entropy_bits(pxy.ravel())
    if hxy == 0.0:
        return 1.0 if np.array_equal(x, y) else 0.0
    return (hx + hy - hxy) / hxy


def fmi(a, b, fused) -> float:
    """Feature mutual information between the sources and the fusion.

    Mutual information of Sobel gradient-magnitude features, normalized by
    the joint entropy into [0, 1] and averaged over the two sources.
    """
    a = as_gray_image(a, "a")
    b = as_gray_image(b, "b")
    f = as_gray_image(fused, "fused")
    check_same_shape(a, f)
    check_same_shape(b, f)
    fa, fb, ff = _gradient_feature(a), _gradient_feature(b), _gradient_feature(f)
    return 0.5 * (_normalized_mi(fa, ff) + _normalized_mi(fb, ff))


def spatial_frequency_metric(img) -> float:
    """Whole-image spatial frequency sqrt(RF^2 + CF^2)."""
    x = as_gray_image(img, "img").astype(np.float64)
    n = x.size
    dr = np.diff(x, axis=1)
    dc = np.diff(x, axis=0)
    return float(np.sqrt((dr * dr).sum() / n + (dc * dc).sum() / n))


def evaluate(fused, a, b, reference=None) -> MetricReport:
    """Score a fused image against its sources and optional ground truth."""
    report = MetricReport(
        qabf=qabf(a, b, fused),
        sf=spatial_frequency_metric(fused),
        fmi=fmi(a, b, fused),
    )
    if reference is not None:
        report.mse = mse(fused, reference)
        report.psnr_db = psnr(fused, reference)
        report.ssim = ssim(fused, reference)
        report.uiqi = uiqi(fused, reference)
        report.mi_bits = mutual_information(fused, reference)
    return report
