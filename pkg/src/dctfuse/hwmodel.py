"""Behavioral model of the fusion datapath.

Stage-level and bit-accurate: the arithmetic is the exact Q(1,10,24)
fixed-point math of the transform module, recomputed here block-row by
block-row the way the hardware streams it (banked memory feed, row-serial
1D DCT, SRAM transpose, second pass, absolute-AC decision, FIFO, data
select).  Timing is modeled per stage with a fixed schedule:

    cycle offset within a block pair (initiation interval 16):
      enqueue A rows   +0 .. +7     (8 pixels per clock)
      enqueue B rows   +8 .. +15
      dct1             +8  (A), +16 (B)
      transpose        +16 (A), +24 (B)
      dct2             +24 (A), +32 (B)
      decide           +40          (both |AC| sums compared)
      select           latency-16
      emit             latency      (default 70, fused coefficients out)

The split of the 70-cycle total across stages is a modeling assumption;
only the total is a hardware figure.  With consistency verification the
refined decision for a block needs the raw decision of its south-east
neighbor, so selection waits one block row (a line buffer in hardware):
emit then happens ``latency`` cycles after that neighbor's enqueue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transform
from .fixedpoint import round_shift
from .fusion import FusionOptions, TiledImage, tile, untile
from .transform import (_PRODUCT_SHIFT, _ROM_FWD, FIXED_COEFF_ULP,
                        _PIXEL_TO_RAW_SHIFT)
from .validation import as_gray_image, check_same_shape

_II = 16              # cycles per block pair in steady state
_DECIDE_OFF = 40
_FIFO_ENTER_A = 32    # A coefficients fully in the FIFO
_FIFO_ENTER_B = 40
_EMIT_BEATS = 8       # 64 coefficients leave at 8 per clock

_ACTION_OFFSETS = (("enqueue", "memory", 0),
                   ("dct1", "dct_pass1", 8),
                   ("transpose", "transpose_ram", 16),
                   ("dct2", "dct_pass2", 24),
                   ("decide", "decision", _DECIDE_OFF))


class FifoOverflowError(RuntimeError):
    """The coefficient FIFO would overflow; fifo_depth is too small."""


@dataclass(frozen=True)
class DatapathConfig:
    clock_hz: float = 200e6
    pixels_per_clock: int = 8
    latency_cycles: int = 70
    fifo_depth: int = 4

    def __post_init__(self):
        if self.pixels_per_clock != 8:
            raise ValueError("the datapath is built around 8 pixels per clock")
        if self.latency_cycles < _DECIDE_OFF + 18:
            raise ValueError(f"latency_cycles must be >= {_DECIDE_OFF + 18}")
        if self.clock_hz <= 0:
            raise ValueError("clock_hz must be positive")


@dataclass
class CycleStats:
    total_cycles: int
    blocks_processed: int
    stall_cycles: int
    pixels_processed: int
    clock_hz: float
    max_fifo_blocks: int

    @property
    def achieved_pixels_per_second(self) -> float:
        return self.pixels_processed * self.clock_hz / self.total_cycles

    def as_dict(self) -> dict:
        return {
            "total_cycles": self.total_cycles,
            "blocks_processed": self.blocks_processed,
            "stall_cycles": self.stall_cycles,
            "pixels_processed": self.pixels_processed,
            "clock_hz": self.clock_hz,
            "max_fifo_blocks": self.max_fifo_blocks,
            "achieved_pixels_per_second": self.achieved_pixels_per_second,
        }


def _row_dct_pass(block_raw: np.ndarray) -> np.ndarray:
    """Row-serial 1D DCT pass: each row hits the MAC array once.

    Plain Python integers keep the full product width exactly, with one
    rounding per output word, mirroring the wide accumulator.
    """
    out = np.empty((8, 8), dtype=np.int64)
    for r in range(8):
        row = [int(v) for v in block_raw[r]]
        for k in range(8):
            acc = sum(row[j] * int(_ROM_FWD[k, j]) for j in range(8))
            out[r, k] = round_shift(acc, _PRODUCT_SHIFT)
    return out


def _block_dct_fixed(block_pixels: np.ndarray) -> np.ndarray:
    """Two passes with an explicit transpose buffer between them."""
    raw = block_pixels.astype(np.int64) << _PIXEL_TO_RAW_SHIFT
    first = _row_dct_pass(raw)
    return _row_dct_pass(first.T).T


def _abs_ac_sum(coeff_raw: np.ndarray) -> int:
    """Decision-block accumulator: 63 absolute-value additions."""
    total = 0
    for i in range(8):
        for j in range(8):
            if i == 0 and j == 0:
                continue
            total += abs(int(coeff_raw[i, j]))
    return total


def _majority_line_buffered(raw_labels: np.ndarray, radius: int) -> np.ndarray:
    """Majority filter as the streaming line buffer computes it."""
    by, bx = raw_labels.shape
    out = np.empty_like(raw_labels)
    for y in range(by):
        for x in range(bx):
            acc = 0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < by and 0 <= nx < bx:
                        acc += int(raw_labels[ny, nx])
            out[y, x] = 1 if acc > 0 else -1
    return out


def _max_fifo_occupancy(enter_cycles: np.ndarray, exit_cycles: np.ndarray) -> int:
    """Peak number of resident blocks, residency = [enter, exit)."""
    entries = np.sort(enter_cycles)
    exits = np.sort(exit_cycles)
    present = (np.searchsorted(entries, entries, side="right")
               - np.searchsorted(exits, entries, side="right"))
    return int(present.max())


def simulate_pair(a, b, opts: FusionOptions = FusionOptions(),
                  cfg: DatapathConfig = DatapathConfig(),
                  trace_path=None):
    """Run a block-pair stream through the datapath model.

    Returns ``(fused_coeffs, decision_map, stats)`` where ``fused_coeffs``
    is the selected coefficient stream in coefficient units, bit-identical
    to the software fixed path, ordered block-raster.
    """
    a = as_gray_image(a, "a")
    b = as_gray_image(b, "b")
    check_same_shape(a, b)
    if opts.measure != "ampmax":
        raise ValueError("the hardware implements only the ampmax measure")

    ta, tb = tile(a), tile(b)
    by, bx = ta.blocks_y, ta.blocks_x
    n = by * bx

    # datapath arithmetic, block by block in raster order
    coeffs_a = np.empty((by, bx, 8, 8), dtype=np.int64)
    coeffs_b = np.empty((by, bx, 8, 8), dtype=np.int64)
    raw_labels = np.empty((by, bx), dtype=np.int8)
    for y in range(by):
        for x in range(bx):
            da = _block_dct_fixed(ta.blocks[y, x])
            db = _block_dct_fixed(tb.blocks[y, x])
            coeffs_a[y, x] = da
            coeffs_b[y, x] = db
            raw_labels[y, x] = 1 if _abs_ac_sum(da) > _abs_ac_sum(db) else -1

    if opts.consistency_verification:
        labels = _majority_line_buffered(raw_labels, opts.majority_radius)
    else:
        labels = raw_labels

    take_a = labels[..., None, None] > 0
    selected = np.where(take_a, coeffs_a, coeffs_b)

    # timing: block pair k starts at 16k; selection waits for the last
    # raw decision its refined label depends on
    idx = np.arange(n).reshape(by, bx)
    ys, xs = np.mgrid[0:by, 0:bx]
    if opts.consistency_verification:
        r = opts.majority_radius
        need = idx[np.minimum(ys + r, by - 1), np.minimum(xs + r, bx - 1)]
    else:
        need = idx
    start = _II * idx
    decide_needed = _II * need + _DECIDE_OFF
    select_cycle = decide_needed + (cfg.latency_cycles - _II - _DECIDE_OFF)
    emit_cycle = select_cycle + _II

    # FIFO holds both coefficient sets from the end of their second pass
    # until selection; consistency verification adds a line buffer
    enter = np.concatenate([(start + _FIFO_ENTER_A).ravel(),
                            (start + _FIFO_ENTER_B).ravel()])
    exits = np.concatenate([select_cycle.ravel(), select_cycle.ravel()])
    max_fifo = _max_fifo_occupancy(enter, exits)
    capacity = cfg.fifo_depth
    if opts.consistency_verification:
        capacity += 2 * (bx + 2)   # one block row of pairs, line buffered
    if max_fifo > capacity:
        raise FifoOverflowError(
            f"needs {max_fifo} buffered blocks but capacity is {capacity}; "
            f"increase fifo_depth")

    total_cycles = int(emit_cycle.max()) + _EMIT_BEATS
    ideal = _II * n
    stats = CycleStats(total_cycles=total_cycles,
                       blocks_processed=n,
                       stall_cycles=total_cycles - ideal,
                       pixels_processed=2 * a.shape[0] * a.shape[1],
                       clock_hz=cfg.clock_hz,
                       max_fifo_blocks=max_fifo)

    if trace_path is not None:
        _write_trace(trace_path, start, select_cycle, emit_cycle, by, bx)

    fused_coeffs = selected.astype(np.float64) * FIXED_COEFF_ULP
    return fused_coeffs, labels, stats


def _write_trace(path, start, select_cycle, emit_cycle, by, bx):
    events = []
    for y in range(by):
        for x in range(bx):
            t = int(start[y, x])
            for action, stage, off in _ACTION_OFFSETS:
                events.append((t + off, stage, x, y, action))
            events.append((int(select_cycle[y, x]), "data_select", x, y, "select"))
            events.append((int(emit_cycle[y, x]), "output", x, y, "emit"))
    events.sort(key=lambda e: (e[0], e[3], e[2]))
    with open(path, "w", encoding="ascii") as fh:
        for cycle, stage, x, y, action in events:
            fh.write(f"cycle={cycle} stage={stage} block=({x},{y}) action={action}\n")


def reconstruct_stream(fused_coeffs: np.ndarray, width: int, height: int) -> np.ndarray:
    """Fixed-point IDCT of a fused coefficient stream back to an image.

    Matches the software fixed path byte for byte.
    """
    raw = transform.coeffs_to_fixed_raw(fused_coeffs)
    pix = transform.fixed_raw_to_coeffs(transform.idct2_fixed_raw(raw))
    by, bx = fused_coeffs.shape[:2]
    tiled = TiledImage(blocks=pix, width=width, height=height,
                       pad_right=bx * 8 - width, pad_bottom=by * 8 - height)
    return untile(tiled)


@dataclass(frozen=True)
class ThroughputReport:
    width: int
    height: int
    fps: float
    streams: int
    clock_hz: float
    pixels_per_clock: int
    required_pixels_per_second: float
    capacity_pixels_per_second: float

    @property
    def feasible(self) -> bool:
        return self.required_pixels_per_second <= self.capacity_pixels_per_second

    @property
    def margin(self) -> float:
        return self.capacity_pixels_per_second / self.required_pixels_per_second

    @property
    def min_clock_hz(self) -> float:
        """Clock at which capacity exactly meets the requirement."""
        return self.required_pixels_per_second / self.pixels_per_clock

    def as_dict(self) -> dict:
        return {
            "width": self.width, "height": self.height, "fps": self.fps,
            "streams": self.streams, "clock_hz": self.clock_hz,
            "pixels_per_clock": self.pixels_per_clock,
            "required_pixels_per_second": self.required_pixels_per_second,
            "capacity_pixels_per_second": self.capacity_pixels_per_second,
            "feasible": self.feasible,
            "margin": self.margin,
            "min_clock_hz": self.min_clock_hz,
        }


def throughput_report(cfg: DatapathConfig, width: int, height: int,
                      fps: float, streams: int = 2) -> ThroughputReport:
    """Compare the pixel rate a format demands against datapath capacity."""
    if width < 1 or height < 1 or fps <= 0 or streams < 1:
        raise ValueError("dimensions, fps and streams must be positive")
    required = float(width) * height * fps * streams
    capacity = cfg.clock_hz * cfg.pixels_per_clock
    return ThroughputReport(width=width, height=height, fps=fps, streams=streams,
                            clock_hz=cfg.clock_hz,
                            pixels_per_clock=cfg.pixels_per_clock,
                            required_pixels_per_second=required,
                            capacity_pixels_per_second=capacity)
