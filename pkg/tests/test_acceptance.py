"""Acceptance suite.

One test per shipped claim, each printing a PASS line when it holds at
its stated tolerance (run with ``pytest -s`` to see the lines).  The
expected values come from independent oracles computed here, never from
the implementation under test.
"""

import json
import math
import re
import time

import numpy as np
import pytest

import dctfuse as df
from dctfuse import transform as tr
from dctfuse.cli import main
from dctfuse.pgmio import read_pgm, write_pgm

SEED = 20260809


def report(num, ok, text):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {num}] {status}: {text}")
    assert ok, f"criterion {num}: {text}"


# ---------------------------------------------------------------------------
# shared bench protocol run (criteria 5 and 6)

@pytest.fixture(scope="module")
def bench_run():
    refs = [df.synthetic_reference(s, 256) for s in range(5)]
    spec = df.BenchSpec(references=tuple(refs), blur_kernel=3, pairs=50,
                        split="vertical", seed=SEED)
    cap = df.metrics.PSNR_CAP_DB
    out = {"psnr_a": [], "psnr_b": [], "psnr_fused": [],
           "ssim_amp": [], "ssim_sf": [], "agreement": []}
    for i in range(spec.pairs):
        ref = refs[i % len(refs)]
        a, b = df.generate_pair(ref, spec, pair_index=i)
        out["psnr_a"].append(min(df.psnr(a, ref), cap))
        out["psnr_b"].append(min(df.psnr(b, ref), cap))
        fused_amp, map_amp, _ = df.fuse(a, b, df.FusionOptions(measure="ampmax"))
        fused_sf, map_sf, _ = df.fuse(a, b, df.FusionOptions(measure="sf"))
        out["psnr_fused"].append(min(df.psnr(fused_amp, ref), cap))
        out["ssim_amp"].append(df.ssim(fused_amp, ref))
        out["ssim_sf"].append(df.ssim(fused_sf, ref))
        out["agreement"].append(float((map_amp == map_sf).mean()))
    return {k: np.asarray(v) for k, v in out.items()}


def test_criterion_1_complexity_counts_and_runtime(tmp_path):
    """Table-level complexity contract: 63 adds/block/image, 0 mults,
    1 comparison/block pair, under a second at 512x512."""
    ref = df.synthetic_reference(1, 512)
    blurred = df.box_blur(ref, 3)
    write_pgm(tmp_path / "a.pgm", ref)
    write_pgm(tmp_path / "b.pgm", blurred)
    counts_path = tmp_path / "counts.json"
    start = time.perf_counter()
    rc = main(["fuse", str(tmp_path / "a.pgm"), str(tmp_path / "b.pgm"),
               "-o", str(tmp_path / "out.pgm"), "--measure", "ampmax",
               "--counts", str(counts_path)])
    elapsed = time.perf_counter() - start
    counts = json.loads(counts_path.read_text())
    blocks = 512 * 512 // 64
    ok = (rc == 0
          and counts["blocks"] == blocks
          and counts["additions"] == 63 * blocks * 2
          and counts["per_block"]["additions_per_image"] == 63.0
          and counts["multiplications"] == 0
          and counts["comparisons"] == blocks
          and counts["per_block"]["comparisons_per_block_pair"] == 1.0
          and counts["conditional_increments"] == 0
          and elapsed < 1.0)
    report(1, ok, f"ampmax uses exactly 63 adds/block/image, 0 muls, "
                  f"1 cmp/pair on 512x512 in {elapsed:.3f}s")


def test_criterion_2_throughput_4k60():
    rep = df.throughput_report(df.DatapathConfig(clock_hz=200e6),
                               3840, 2160, 60, streams=2)
    ok = (rep.required_pixels_per_second == 995_328_000
          and rep.capacity_pixels_per_second == 1_600_000_000
          and rep.feasible
          and rep.margin >= 1.6)
    report(2, ok, f"4K60 x 2 streams at 200 MHz feasible, margin {rep.margin:.4f}x "
                  f"(995.328M vs 1.6G px/s)")


def test_criterion_3_latency_70_cycles(tmp_path):
    a = df.synthetic_reference(2, 64)[:16, :24]
    b = df.box_blur(a, 3)
    write_pgm(tmp_path / "a.pgm", a)
    write_pgm(tmp_path / "b.pgm", b)
    trace_path = tmp_path / "trace.txt"
    rc = main(["hwsim", str(tmp_path / "a.pgm"), str(tmp_path / "b.pgm"),
               "-o", str(tmp_path / "out.pgm"), "--trace", str(trace_path)])
    pattern = re.compile(r"^cycle=(\d+) stage=\w+ block=\((\d+),(\d+)\) "
                         r"action=(\w+)$")
    first_enqueue, first_emit = {}, {}
    for line in trace_path.read_text().splitlines():
        m = pattern.match(line)
        cycle, bx, by, action = int(m.group(1)), m.group(2), m.group(3), m.group(4)
        key = (bx, by)
        if action == "enqueue":
            first_enqueue.setdefault(key, cycle)
        elif action == "emit":
            first_emit.setdefault(key, cycle)
    deltas = {k: first_emit[k] - first_enqueue[k] for k in first_emit}
    ok = (rc == 0 and len(deltas) == 6
          and all(d == 70 for d in deltas.values()))
    report(3, ok, "every block's first emit is exactly 70 cycles after "
                  "its first enqueue")


def test_criterion_4_hw_sw_equivalence():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    all_equal = True
    max_coeff_err = 0.0
    for k in range(20):
        h = int(rng.integers(16, 49))
        w = int(rng.integers(16, 65))
        base = df.synthetic_reference(100 + k, 64)[:h, :w]
        blurred = df.box_blur(base, 3)
        cut = 8 * int(rng.integers(1, max(2, w // 8)))
        a, b = base.copy(), blurred.copy()
        a[:, :cut] = blurred[:, :cut]
        b[:, :cut] = base[:, :cut]

        opts = df.FusionOptions(measure="ampmax", arithmetic="fixed")
        coeffs, _, _ = df.simulate_pair(a, b, opts)
        hw_img = df.hwmodel.reconstruct_stream(coeffs, w, h)
        sw_img, _, _ = df.fuse(a, b, opts)
        all_equal &= hw_img.tobytes() == sw_img.tobytes()

        tiled = df.tile(a)
        flat = tiled.blocks.reshape(-1, 8, 8)
        fixed = tr.fixed_raw_to_coeffs(tr.fdct2_fixed_raw(flat.astype(np.int64)))
        ref = tr.fdct2_batch(flat)
        max_coeff_err = max(max_coeff_err, float(np.abs(fixed - ref).max()))
    elapsed = time.perf_counter() - start
    ok = all_equal and max_coeff_err <= 2.0 ** -16 and elapsed < 30.0
    report(4, ok, f"20 randomized pairs byte-identical hw vs sw-fixed; "
                  f"max fixed-float coeff error {max_coeff_err:.2e} <= 2^-16; "
                  f"{elapsed:.1f}s")


def test_criterion_5_fusion_efficacy(bench_run):
    mean_fused = bench_run["psnr_fused"].mean()
    mean_a = bench_run["psnr_a"].mean()
    mean_b = bench_run["psnr_b"].mean()
    mean_ssim = bench_run["ssim_amp"].mean()
    ok = (mean_fused >= mean_a + 3.0 and mean_fused >= mean_b + 3.0
          and mean_ssim >= 0.97)
    report(5, ok, f"50-pair bench: fused PSNR {mean_fused:.2f} dB vs inputs "
                  f"{mean_a:.2f}/{mean_b:.2f} dB (>=3 dB gain), "
                  f"SSIM {mean_ssim:.4f} >= 0.97")


def test_criterion_6_ampmax_tracks_sf(bench_run):
    agreement = bench_run["agreement"].mean()
    ssim_gap = abs(bench_run["ssim_amp"].mean() - bench_run["ssim_sf"].mean())
    ok = agreement >= 0.90 and ssim_gap <= 0.005
    report(6, ok, f"ampmax vs sf: per-block agreement {agreement:.4f} >= 0.90, "
                  f"mean SSIM gap {ssim_gap:.5f} <= 0.005")


def test_criterion_7_oracle_suites():
    rng = np.random.default_rng(SEED)
    n = 1000

    # direct-definition DCT tensor: d(i,j) = a_i a_j sum_xy s(x,y) cos cos
    i = np.arange(8)
    alpha = np.where(i == 0, math.sqrt(1 / 8), math.sqrt(2 / 8))
    cos = np.cos((2 * np.arange(8)[None, :] + 1) * i[:, None] * math.pi / 16)
    basis = np.einsum("i,j,ix,jy->ijxy", alpha, alpha, cos, cos)

    blocks = rng.integers(0, 256, (n, 8, 8)).astype(np.float64)
    naive = np.einsum("ijxy,nxy->nij", basis, blocks)
    dct_err = float(np.abs(tr.fdct2_batch(blocks) - naive).max())

    coeffs = rng.uniform(-500, 500, (n, 8, 8))
    naive_inv = np.einsum("ijxy,nij->nxy", basis, coeffs)
    idct_err = float(np.abs(tr.idct2_batch(coeffs) - naive_inv).max())

    d = tr.fdct2_batch(blocks)
    parseval_rel = float(np.abs((d * d).sum(axis=(1, 2))
                                - (blocks * blocks).sum(axis=(1, 2))).max()
                         / (blocks * blocks).sum(axis=(1, 2)).max())

    pix_var = blocks.var(axis=(1, 2))
    dct_var = df.measures.variance_scores(d)
    var_rel = float(np.abs(dct_var - pix_var).max() / pix_var.max())

    majority_ok = True
    for _ in range(n):
        by, bx = rng.integers(1, 9, 2)
        labels = (rng.integers(0, 2, (by, bx)).astype(np.int8) * 2 - 1)
        got = df.majority_filter(labels)
        want = np.empty_like(labels)
        for y in range(by):
            for x in range(bx):
                acc = 0
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        if 0 <= y + dy < by and 0 <= x + dx < bx:
                            acc += int(labels[y + dy, x + dx])
                want[y, x] = 1 if acc > 0 else -1
        majority_ok &= bool(np.array_equal(got, want))

    tile_ok = True
    for _ in range(n):
        h, w = rng.integers(1, 41, 2)
        img = rng.integers(0, 256, (h, w)).astype(np.uint8)
        tile_ok &= bool(np.array_equal(df.untile(df.tile(img)), img))

    int_blocks = rng.integers(0, 256, (n, 8, 8)).astype(np.int64)
    produced = tr.fixed_raw_to_coeffs(
        tr.idct2_fixed_raw(tr.fdct2_fixed_raw(int_blocks)))
    rounded = np.sign(produced) * np.floor(np.abs(produced) + 0.5)
    fixed_rt_ok = bool(np.array_equal(rounded.astype(np.int64), int_blocks))
    float_rt_err = float(np.abs(
        tr.idct2_batch(tr.fdct2_batch(blocks)) - blocks).max())

    ok = (dct_err <= 1e-9 and idct_err <= 1e-9 and parseval_rel <= 1e-6
          and var_rel <= 1e-6 and majority_ok and tile_ok and fixed_rt_ok
          and float_rt_err <= 1e-9)
    report(7, ok, f"{n}-case oracle suites: dct err {dct_err:.1e}, idct err "
                  f"{idct_err:.1e}, parseval rel {parseval_rel:.1e}, variance rel "
                  f"{var_rel:.1e}, majority exact {majority_ok}, tile exact "
                  f"{tile_ok}, fixed round-trip exact {fixed_rt_ok}")


def test_criterion_8_metric_sanity():
    x = df.synthetic_reference(8, 128)
    entropy = df.metrics.shannon_entropy(x)
    checks = {
        "ssim(x,x)=1": df.ssim(x, x) == pytest.approx(1.0, abs=1e-12),
        "uiqi(x,x)=1": df.uiqi(x, x) == pytest.approx(1.0, abs=1e-12),
        "mse(x,x)=0": df.mse(x, x) == 0.0,
        "mi(x,x)=H(x)": abs(df.mutual_information(x, x) - entropy) <= 1e-9,
        "qabf(a,a,a)=1": abs(df.qabf(x, x, x) - 1.0) <= 1e-6,
        "fmi(a,a,a)=1": abs(df.fmi(x, x, x) - 1.0) <= 1e-6,
    }
    ok = all(checks.values())
    report(8, ok, "; ".join(f"{name} {'ok' if good else 'BAD'}"
                            for name, good in checks.items()))
