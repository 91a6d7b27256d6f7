"""Acceptance criteria, one test per criterion.

Every test reports a single ``CRITERION <n> PASS|FAIL`` line with the measured
values; the lines are printed together in an "acceptance criteria" section at
the end of any pytest run that includes this file.
"""

import io
import itertools
import math
import sys
import time
from contextlib import redirect_stdout

import pytest

from lutcode.cli import cli_main
from lutcode.experiments import (
    ExperimentConfig,
    gen_random_lut,
    load_code_result,
    run_fig2,
    run_fig3_fig4,
    run_fig5,
    run_oracle_check,
)
from lutcode.hamming import Outcome, baseline_code, correct
from lutcode.lut import BinaryLut, flip_bits, parse_truth_table
from lutcode.reliability import chi, simulate_yield
from lutcode.rng import derive_seed
from lutcode.search import (
    OracleLimits,
    brute_force_feasible,
    find_min_code,
    verify_code,
)

from .conftest import SEC4_HT, SEC4_TEXT, SEC5_TEXT

C3_SEED = 31
C3_SAMPLES = 200
C6_SEED = 2024
C6_SAMPLES = 500
C10_SEED = 10
C10_TRIALS = 10**5
CHI_2_3 = 0.98443236  # chi(2, 3, 0.01) ** 16, exact_binomial

_cache: dict = {}
_codes: list = []
# collected here and printed as a section at the end of the pytest run
RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n:>2} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _run_cli(argv, tmp_path, text):
    src = tmp_path / "in.txt"
    src.write_text(text)
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main([*argv, str(src)])
    return code, buf.getvalue()


def _c3(jobs):
    key = ("c3", jobs)
    if key not in _cache:
        t0 = time.perf_counter()
        table = run_oracle_check(C3_SAMPLES, C3_SEED, max_rows=8, max_outputs=3,
                                 max_dc=0.5, jobs=jobs)
        _cache[key] = (table, time.perf_counter() - t0)
    return _cache[key]


def _c6(jobs):
    key = ("c6", jobs)
    if key not in _cache:
        t0 = time.perf_counter()
        cfg = ExperimentConfig("fig2", samples=C6_SAMPLES, shapes=((16, 4),),
                               dc_fraction=0.5, seed=C6_SEED, jobs=jobs)
        _cache[key] = (run_fig2(cfg), time.perf_counter() - t0)
    return _cache[key]


def _c10_block():
    lut = gen_random_lut(16, 2, 0.5, 0.0, derive_seed(C10_SEED, 1))
    return baseline_code(BinaryLut(lut.entries))


def _c10(jobs):
    key = ("c10", jobs)
    if key not in _cache:
        t0 = time.perf_counter()
        est, _ = simulate_yield([_c10_block()], 0.01, C10_TRIALS, C10_SEED, jobs=jobs)
        _cache[key] = (est, time.perf_counter() - t0)
    return _cache[key]


def test_criterion_01_baseline_worked_example(tmp_path):
    t0 = time.perf_counter()
    code, out = _run_cli(["encode", "--baseline"], tmp_path, SEC4_TEXT)
    elapsed = time.perf_counter() - t0
    result = load_code_result(out)
    _codes.append(result)
    rows = result.coded.to_strings()
    cols = ["".join(str(b) for b in result.H.column(j)) for j in range(result.H.c)]
    ok = (code == 0 and rows == ["001011", "110011", "111000", "111000"]
          and result.H.t == 3 and cols == SEC4_HT and elapsed < 1.0)
    report(1, ok, f"rows={rows} H columns={cols} time={elapsed:.3f}s (< 1 s)")


def test_criterion_02_dc_worked_example(tmp_path):
    t0 = time.perf_counter()
    code, out = _run_cli(["encode"], tmp_path, SEC5_TEXT)
    elapsed = time.perf_counter() - t0
    result = load_code_result(out)
    _codes.append(result)
    rows = result.coded.bits
    dists = {sum(a != b for a, b in zip(r1, r2)) for r1, r2 in itertools.combinations(rows, 2)}
    ok = (code == 0 and result.k == 0 and verify_code(result).ok
          and dists <= {0, 3} and elapsed < 5.0)
    report(2, ok, f"k={result.k} rows={result.coded.to_strings()} pairwise distances="
                  f"{sorted(dists)} time={elapsed:.3f}s (< 5 s)")


def test_criterion_03_minimality_vs_oracle():
    table, elapsed = _c3(1)
    rows = table.rows
    agree = sum(r["agree"] for r in rows)
    shapes_ok = all(r["rows"] <= 8 and r["outputs"] <= 3 and r["dc_fraction"] <= 0.5
                    and r["dc_cells"] <= 12 for r in rows)
    ok = len(rows) >= 200 and agree == len(rows) and shapes_ok and elapsed < 600
    report(3, ok, f"agreement {agree}/{len(rows)} (100% required), "
                  f"time={elapsed:.1f}s (< 600 s)")


def test_criterion_04_sec4_minimal_code():
    lut = parse_truth_table(SEC4_TEXT)
    result = find_min_code(lut)
    _codes.append(result)
    limits = OracleLimits(max_free_bits=64, max_columns=7)
    infeasible = all(brute_force_feasible(lut, k, limits) is None for k in (0, 1))
    ok = result.k == 2 and verify_code(result).ok and infeasible
    report(4, ok, f"k={result.k} (expected 2), k in {{0,1}} infeasible by exhaustion: "
                  f"{infeasible}")


def _decode_failures(result):
    single = double = 0
    c = result.coded.width
    for row in result.coded.bits:
        for j in range(c):
            out = correct(flip_bits(row, [j]), result.H)
            if out.tag is not Outcome.CORRECTED or out.corrected_row != row:
                single += 1
        for a, b in itertools.combinations(range(c), 2):
            out = correct(flip_bits(row, [a, b]), result.H)
            if out.corrected_row == row:
                double += 1
    return single, double


def test_criterion_05_exhaustive_decode():
    t0 = time.perf_counter()
    codes = list(_codes)
    if len(codes) < 3:
        codes.append(baseline_code(BinaryLut.from_strings(["001", "110", "111", "111"])))
        codes.append(find_min_code(parse_truth_table(SEC5_TEXT)))
        codes.append(find_min_code(parse_truth_table(SEC4_TEXT)))
    for i in range(100):
        seed = derive_seed(55, i)
        rows = 1 + i % 16
        outputs = 1 + (i // 16) % 4
        lut = gen_random_lut(rows, outputs, 0.5, 0.5 if i % 2 else 0.0, seed)
        codes.append(find_min_code(lut))
    single = double = 0
    for result in codes:
        s, d = _decode_failures(result)
        single += s
        double += d
    elapsed = time.perf_counter() - t0
    ok = single == 0 and double == 0 and elapsed < 120
    report(5, ok, f"{len(codes)} codes, single-flip failures={single}, "
                  f"double-flip miscorrections to original={double}, time={elapsed:.1f}s")


def test_criterion_06_fig2_trend():
    (hist, summary), elapsed = _c6(1)
    frac = {(r["scenario"], r["k"]): r["fraction"] for r in hist.rows}
    area = {r["scenario"]: r["mean_area_reduction"] for r in summary.rows}
    no_dc_k3 = frac[("symmetric", 3)]
    dc_k_le2 = {s: sum(frac[(s, k)] for k in range(3)) for s in ("symmetric-dc", "skewed-dc")}
    dc_area = {s: area[s] for s in ("symmetric-dc", "skewed-dc")}
    clean = all(r["budget_exceeded"] == 0 and r["verify_failed"] == 0 for r in summary.rows)
    ok = (no_dc_k3 >= 0.80 and all(v >= 0.60 for v in dc_k_le2.values())
          and all(0.12 <= v <= 0.40 for v in dc_area.values()) and clean and elapsed < 1800)
    report(6, ok, f"symmetric k=3 fraction={no_dc_k3:.3f} (>= 0.80); with-DC k<=2 "
                  + ", ".join(f"{s}={v:.3f}" for s, v in dc_k_le2.items())
                  + " (>= 0.60); with-DC mean area reduction "
                  + ", ".join(f"{s}={v:.4f}" for s, v in dc_area.items())
                  + f" (in [0.12, 0.40]); time={elapsed:.0f}s")


def test_criterion_07_fig3_analytics():
    t0 = time.perf_counter()
    table = run_fig3_fig4(ExperimentConfig("fig3", q_values=(1e-5, 1.6e-4)))
    elapsed = time.perf_counter() - t0
    lo, hi = table.rows
    ok = (lo["yield_corrected_binomial"] >= 0.99 and lo["yield_uncorrected"] < 1e-9
          and 0.5 <= hi["yield_corrected_binomial"] <= 0.8 and elapsed < 1.0)
    report(7, ok, f"q=1e-5 corrected={lo['yield_corrected_binomial']:.6f} (>= 0.99) "
                  f"uncorrected={lo['yield_uncorrected']:.3e} (< 1e-9); q=1.6e-4 corrected="
                  f"{hi['yield_corrected_binomial']:.6f} (in [0.5, 0.8])")


def test_criterion_08_fig4_analytics():
    qs = tuple(1e-8 + (25e-8 - 1e-8) * i / 9 for i in range(10))
    t0 = time.perf_counter()
    table = run_fig3_fig4(ExperimentConfig("fig4", q_values=qs))
    elapsed = time.perf_counter() - t0
    worst = min(r["yield_corrected_binomial"] for r in table.rows)
    ok = len(table.rows) == 10 and worst >= 0.99 and elapsed < 1.0
    report(8, ok, f"min corrected yield over 10 q in [1e-8, 2.5e-7] = {worst:.6f} (>= 0.99)")


def test_criterion_09_fig5_analytics():
    t0 = time.perf_counter()
    table = run_fig5(ExperimentConfig("fig5", q_values=(0.001, 0.01)))
    elapsed = time.perf_counter() - t0
    by_q = {q: [r for r in table.rows if r["q"] == q] for q in (0.001, 0.01)}
    min_low = min(r["yield_corrected"] for r in by_q[0.001])
    min_impr = min(r["improvement"] for r in by_q[0.01] if r["R"] >= 16)
    mono = all(
        all(a["yield_corrected"] > b["yield_corrected"] for a, b in zip(rs, rs[1:]))
        for rs in by_q.values()
    )
    ok = min_low >= 0.99 and min_impr >= 0.25 and mono and elapsed < 1.0
    report(9, ok, f"q=0.001 min corrected yield over R=2..2048 = {min_low:.5f} (>= 0.99); "
                  f"q=0.01 min improvement for R>=16 = {min_impr:.4f} (>= 0.25); "
                  f"decreasing in R: {mono}")


def test_criterion_10_monte_carlo_vs_analytic():
    block = _c10_block()
    assert block.coded.rows == 16 and block.coded.width == 5
    est, elapsed = _c10(1)
    target = chi(2, 3, 0.01, "exact_binomial") ** 16
    z = abs(est.estimate - target) / est.std_error
    ok = (math.isclose(target, CHI_2_3, abs_tol=1e-8) and z <= 3.0
          and est.trials == C10_TRIALS and elapsed < 60)
    report(10, ok, f"MC={est.estimate:.5f} +- {est.std_error:.5f}, analytic={target:.5f}, "
                   f"|z|={z:.2f} (<= 3), time={elapsed:.1f}s")


def test_criterion_11_chi_modes():
    printed = chi(3, 3, 0.1, "paper_exact")
    binom = chi(3, 3, 0.1, "exact_binomial")
    enum = sum(0.1 ** w * 0.9 ** (6 - w) for w in range(2) for _ in itertools.combinations(
        range(6), w))
    ok = (round(printed, 6) == 0.826686 and round(binom, 6) == 0.885735
          and math.isclose(binom, enum, rel_tol=1e-12))
    report(11, ok, f"paper_exact={printed:.6f} (0.826686), exact_binomial={binom:.6f} "
                   f"(0.885735), enumeration={enum:.6f}")


def test_criterion_12_determinism():
    c3 = _c3(1)[0].csv() == _c3(8)[0].csv()
    (h1, s1), _ = _c6(1)
    (h8, s8), _ = _c6(8)
    c6 = h1.csv() == h8.csv() and s1.csv() == s8.csv()
    c10 = _c10(1)[0] == _c10(8)[0]
    report(12, c3 and c6 and c10, f"jobs 1 vs 8 byte-identical: criterion 3={c3}, "
                                  f"criterion 6={c6}, criterion 10={c10}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
