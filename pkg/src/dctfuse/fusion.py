"""The end-to-end fusion pipeline: tile, transform, score, decide,
consistency-verify, select, reconstruct.

Fusion is pure block selection: every 8x8 output coefficient block is
bit-identical to one source's coefficient block, never a blend.  The
decision map records the winner per block (+1 = first source, -1 =
second); consistency verification majority-filters that map so isolated
misdecisions adopt their neighborhood's choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import measures, transform
from .opcount import OpCounter
from .validation import as_gray_image, check_decision_labels, check_same_shape

ARITHMETICS = ("float", "fixed")


@dataclass(frozen=True)
class FusionOptions:
    measure: str = "ampmax"
    consistency_verification: bool = False
    majority_radius: int = 1
    arithmetic: str = "float"
    ac_threshold: float = measures.DEFAULT_AC_THRESHOLD

    def __post_init__(self):
        if self.measure not in measures.MEASURES:
            raise ValueError(f"measure must be one of {measures.MEASURES}, got {self.measure!r}")
        if self.arithmetic not in ARITHMETICS:
            raise ValueError(f"arithmetic must be one of {ARITHMETICS}, got {self.arithmetic!r}")
        if self.majority_radius < 1:
            raise ValueError("majority_radius must be >= 1")


@dataclass
class FusionReport:
    """What a fusion run did: geometry, configuration and exact op counts."""

    blocks_x: int
    blocks_y: int
    n_sources: int
    measure: str
    arithmetic: str
    consistency_verification: bool
    ops: OpCounter = field(default_factory=OpCounter)

    @property
    def n_blocks(self) -> int:
        return self.blocks_x * self.blocks_y

    def counts_dict(self) -> dict:
        """Totals plus per-block normalizations, as written to counts.json."""
        n = self.n_blocks
        ops = self.ops
        return {
            **ops.as_dict(),
            "blocks": n,
            "source_images": self.n_sources,
            "per_block": {
                "additions_per_image": ops.additions / (n * self.n_sources),
                "multiplications_per_image": ops.multiplications / (n * self.n_sources),
                "comparisons_per_block_pair": ops.comparisons / n,
                "conditional_increments_per_image": ops.conditional_increments / (n * self.n_sources),
            },
        }


@dataclass
class TiledImage:
    """An image cut into 8x8 blocks, edge-replicated to full blocks."""

    blocks: np.ndarray          # (blocks_y, blocks_x, 8, 8) float64
    width: int
    height: int
    pad_right: int
    pad_bottom: int

    @property
    def blocks_x(self) -> int:
        return self.blocks.shape[1]

    @property
    def blocks_y(self) -> int:
        return self.blocks.shape[0]


def tile(img) -> TiledImage:
    """Split an image into 8x8 blocks, replicating edges to pad."""
    arr = as_gray_image(img)
    h, w = arr.shape
    pad_bottom = (-h) % 8
    pad_right = (-w) % 8
    padded = np.pad(arr, ((0, pad_bottom), (0, pad_right)), mode="edge")
    by, bx = padded.shape[0] // 8, padded.shape[1] // 8
    blocks = (padded.reshape(by, 8, bx, 8).swapaxes(1, 2)
                    .astype(np.float64))
    return TiledImage(blocks=blocks, width=w, height=h,
                      pad_right=pad_right, pad_bottom=pad_bottom)


def untile(tiled: TiledImage) -> np.ndarray:
    """Reassemble a tiled image, dropping the padding; exact round trip."""
    by, bx = tiled.blocks_y, tiled.blocks_x
    full = tiled.blocks.swapaxes(1, 2).reshape(by * 8, bx * 8)
    full = full[: tiled.height, : tiled.width]
    return np.clip(np.sign(full) * np.floor(np.abs(full) + 0.5), 0, 255).astype(np.uint8)


def _score_stack(pixel_blocks, coeff_blocks, opts: FusionOptions,
                 counter: OpCounter) -> np.ndarray:
    """Focus score of every block in a (by, bx, 8, 8) stack."""
    if opts.measure == "ampmax":
        return measures.amp_max_scores(coeff_blocks, counter)
    if opts.measure == "variance":
        return measures.variance_scores(coeff_blocks, counter)
    if opts.measure == "sf":
        return measures.sf_scores(pixel_blocks, counter)
    return measures.ac_max_scores(coeff_blocks, opts.ac_threshold, counter)


def _forward_blocks(tiled: TiledImage, opts: FusionOptions):
    """DCT every block; returns (coeff array for scoring, selectable blocks).

    In fixed mode the selectable payload is the raw Q24 integer blocks so
    selection stays bit-exact; scoring uses their de-scaled float values
    (float64 carries them losslessly).
    """
    if opts.arithmetic == "fixed":
        raw = transform.fdct2_fixed_raw(tiled.blocks.astype(np.int64))
        return transform.fixed_raw_to_coeffs(raw), raw
    coeffs = transform.fdct2_batch(tiled.blocks)
    return coeffs, coeffs


def _reconstruct(selected, tiled_like: TiledImage, opts: FusionOptions) -> np.ndarray:
    if opts.arithmetic == "fixed":
        pix = transform.fixed_raw_to_coeffs(transform.idct2_fixed_raw(selected))
    else:
        pix = transform.idct2_batch(selected)
    out = TiledImage(blocks=pix, width=tiled_like.width, height=tiled_like.height,
                     pad_right=tiled_like.pad_right, pad_bottom=tiled_like.pad_bottom)
    return untile(out)


def build_decision_map(a, b, opts: FusionOptions = FusionOptions(),
                       counter: OpCounter | None = None) -> np.ndarray:
    """Per-block winner map: +1 where the first source scores strictly
    higher, -1 otherwise (ties go to the second source)."""
    a = as_gray_image(a, "a")
    b = as_gray_image(b, "b")
    check_same_shape(a, b)
    counter = counter if counter is not None else OpCounter()
    ta, tb = tile(a), tile(b)
    ca, _ = _forward_blocks(ta, opts)
    cb, _ = _forward_blocks(tb, opts)
    sa = _score_stack(ta.blocks, ca, opts, counter)
    sb = _score_stack(tb.blocks, cb, opts, counter)
    labels = np.where(sa > sb, 1, -1).astype(np.int8)
    counter.add(comparisons=labels.size)
    return labels


def majority_filter(labels, radius: int = 1) -> np.ndarray:
    """Majority vote over the (2r+1)^2 neighborhood of each block.

    Labels are +-1 so the window sum encodes the vote directly; cells
    outside the map contribute 0.  A non-positive sum selects -1,
    mirroring the tie rule of the raw decision.
    """
    lab = check_decision_labels(labels)
    if radius < 1:
        raise ValueError("radius must be >= 1")
    size = 2 * radius + 1
    sums = ndimage.convolve(lab.astype(np.int32), np.ones((size, size), dtype=np.int32),
                            mode="constant", cval=0)
    return np.where(sums > 0, 1, -1).astype(np.int8)


def _select_pair(a, b, opts: FusionOptions):
    a = as_gray_image(a, "a")
    b = as_gray_image(b, "b")
    check_same_shape(a, b)

    counter = OpCounter()
    ta, tb = tile(a), tile(b)
    ca, pa = _forward_blocks(ta, opts)
    cb, pb = _forward_blocks(tb, opts)
    sa = _score_stack(ta.blocks, ca, opts, counter)
    sb = _score_stack(tb.blocks, cb, opts, counter)
    labels = np.where(sa > sb, 1, -1).astype(np.int8)
    counter.add(comparisons=labels.size)

    if opts.consistency_verification:
        labels = majority_filter(labels, opts.majority_radius)

    take_a = labels[..., None, None] > 0
    selected = np.where(take_a, pa, pb)
    report = FusionReport(blocks_x=ta.blocks_x, blocks_y=ta.blocks_y, n_sources=2,
                          measure=opts.measure, arithmetic=opts.arithmetic,
                          consistency_verification=opts.consistency_verification,
                          ops=counter)
    return selected, labels, report, ta


def fuse(a, b, opts: FusionOptions = FusionOptions()):
    """Fuse two registered grayscale images.

    Returns ``(fused, decision_map, report)``.  The decision map is the
    one actually used for selection (majority-refined when consistency
    verification is on).
    """
    selected, labels, report, ta = _select_pair(a, b, opts)
    fused = _reconstruct(selected, ta, opts)
    return fused, labels, report


def fuse_coefficients(a, b, opts: FusionOptions = FusionOptions()):
    """Fused DCT coefficient stream, not reconstructed.

    Returns ``(coeffs, decision_map, report)`` with ``coeffs`` shaped
    (blocks_y, blocks_x, 8, 8) in coefficient units; this is the payload
    a downstream transform coder would quantize and entropy-code.  In
    fixed mode the values are exact multiples of the fixed grid, so the
    stream is lossless.
    """
    selected, labels, report, _ = _select_pair(a, b, opts)
    if opts.arithmetic == "fixed":
        return transform.fixed_raw_to_coeffs(selected), labels, report
    return selected, labels, report


def fuse_multi(images, opts: FusionOptions = FusionOptions()):
    """Fuse two or more registered sources by per-block score argmax.

    Ties pick the lowest source index.  With consistency verification,
    each source's one-hot winner map is majority-summed with the same
    window rule and the block goes to the source with the largest
    neighborhood vote.  Returns ``(fused, report)``.
    """
    imgs = [as_gray_image(im, f"images[{i}]") for i, im in enumerate(images)]
    if len(imgs) < 2:
        raise ValueError("need at least 2 images to fuse")
    for im in imgs[1:]:
        check_same_shape(imgs[0], im)

    counter = OpCounter()
    tiles = [tile(im) for im in imgs]
    scored = []
    payloads = []
    for t in tiles:
        coeffs, payload = _forward_blocks(t, opts)
        scored.append(_score_stack(t.blocks, coeffs, opts, counter))
        payloads.append(payload)
    scores = np.stack(scored)                      # (n_src, by, bx)
    winner = np.argmax(scores, axis=0)             # lowest index wins ties
    counter.add(comparisons=(len(imgs) - 1) * winner.size)

    if opts.consistency_verification:
        size = 2 * opts.majority_radius + 1
        kernel = np.ones((size, size), dtype=np.int32)
        votes = np.stack([
            ndimage.convolve(np.where(winner == s, 1, -1).astype(np.int32),
                             kernel, mode="constant", cval=0)
            for s in range(len(imgs))
        ])
        winner = np.argmax(votes, axis=0)

    stacked = np.stack(payloads)                   # (n_src, by, bx, 8, 8)
    iy, ix = np.indices(winner.shape)
    selected = stacked[winner, iy, ix]
    fused = _reconstruct(selected, tiles[0], opts)

    report = FusionReport(blocks_x=tiles[0].blocks_x, blocks_y=tiles[0].blocks_y,
                          n_sources=len(imgs), measure=opts.measure,
                          arithmetic=opts.arithmetic,
                          consistency_verification=opts.consistency_verification,
                          ops=counter)
    return fused, report
