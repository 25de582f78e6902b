"""Multi-focus image fusion in the 8x8 DCT domain.

Per-block focus comparison on DCT coefficients (sum of absolute AC
values and the usual baselines), selection-only fusion with optional
majority-filter consistency verification, a bit-accurate Q(1,10,24)
fixed-point datapath model with cycle accounting, and a fusion quality
metric suite.
"""

from .bench import BenchSpec, box_blur, generate_pair, run_bench, synthetic_reference
from .estimator import DctFusion
from .fixedpoint import Fixed35, SaturationWarning, from_fixed, to_fixed
from .fusion import (FusionOptions, FusionReport, TiledImage,
                     build_decision_map, fuse, fuse_coefficients, fuse_multi,
                     majority_filter, tile, untile)
from .hwmodel import (CycleStats, DatapathConfig, FifoOverflowError,
                      ThroughputReport, simulate_pair, throughput_report)
from .measures import FocusScore, ac_max, amp_max, spatial_frequency_measure, variance
from .metrics import (MetricReport, evaluate, fmi, mse, mutual_information,
                      psnr, qabf, spatial_frequency_metric, ssim, uiqi)
from .opcount import OpCounter
from .pgmio import read_pgm, write_pgm
from .transform import dct_matrix, fdct2, fdct2_fixed, idct2, idct2_fixed

__version__ = "0.1.0"

__all__ = [
    "BenchSpec", "box_blur", "generate_pair", "run_bench", "synthetic_reference",
    "DctFusion",
    "Fixed35", "SaturationWarning", "from_fixed", "to_fixed",
    "FusionOptions", "FusionReport", "TiledImage", "build_decision_map",
    "fuse", "fuse_coefficients", "fuse_multi", "majority_filter",
    "tile", "untile",
    "CycleStats", "DatapathConfig", "FifoOverflowError", "ThroughputReport",
    "simulate_pair", "throughput_report",
    "FocusScore", "ac_max", "amp_max", "spatial_frequency_measure", "variance",
    "MetricReport", "evaluate", "fmi", "mse", "mutual_information", "psnr",
    "qabf", "spatial_frequency_metric", "ssim", "uiqi",
    "OpCounter",
    "read_pgm", "write_pgm",
    "dct_matrix", "fdct2", "fdct2_fixed", "idct2", "idct2_fixed",
]
