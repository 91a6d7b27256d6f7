"""Random LUT generation, figure reproductions, and file formats.

CodeResult text format::

    # comments allowed anywhere
    .k <extra columns>
    .h <bits>            one line per row of H, leftmost bit = column 1
    .dc <bits>           DC assignment in row-major DC order (omitted if none)
    .source
    <truth table of the source LUT, ending in .e>
    .coded
    <truth table of the completed and extended LUT, ending in .e>
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .hamming import baseline_code, delta
from .lut import (
    DC,
    BinaryLut,
    CodeResult,
    DecoderMatrix,
    LutFormatError,
    TernaryLut,
    parse_truth_table,
    serialize_truth_table,
)
from .reliability import ReliabilityProfile, chi, chip_yield, psi, simulate_yield
from .rng import derive_seed, hash_u64, uniform
from .search import (
    OracleLimits,
    SearchBudgetExceeded,
    area_reduction,
    brute_force_min_code,
    find_min_code,
    verify_code,
)
from .solver import DEFAULT_BUDGET

FIG2_SCENARIOS = (
    ("symmetric", 0.5, False),
    ("symmetric-dc", 0.5, True),
    ("skewed", 0.2, False),
    ("skewed-dc", 0.2, True),
)
FIG3_Q = tuple(k * 1e-5 for k in range(1, 17))
FIG4_Q = tuple(k * 1e-8 for k in range(1, 26))
FIG5_Q = (0.01, 0.001)
FIG5_SIZES = tuple(2**e for e in range(1, 12))
BLOCKS = 2**16
ROWS_PER_BLOCK = 16


@dataclass
class ExperimentConfig:
    experiment: str = "fig2"
    samples: int = 500
    shapes: tuple[tuple[int, int], ...] = ((8, 3), (16, 4))
    dc_fraction: float = 0.5
    q_values: tuple[float, ...] = ()
    sizes: tuple[int, ...] = FIG5_SIZES
    seed: int = 0
    mode: str = "exact_binomial"
    budget: int = DEFAULT_BUDGET
    mc_trials: int = 0
    mc_blocks: int = 64
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 <= self.dc_fraction <= 1.0:
            raise ValueError("dc_fraction must lie in [0, 1]")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if any(r < 1 or p < 1 for r, p in self.shapes):
            raise ValueError("LUT shapes must be positive")
        if any(not 0.0 <= q <= 1.0 for q in self.q_values):
            raise ValueError("defect probabilities must lie in [0, 1]")


def gen_random_lut(rows: int, outputs: int, p_one: float, dc_fraction: float,
                   seed: int) -> TernaryLut:
    """Cells are 1 with probability p_one; then exactly
    floor(dc_fraction * rows * outputs) distinct cells become DC."""
    if not (0.0 <= p_one <= 1.0 and 0.0 <= dc_fraction <= 1.0):
        raise ValueError("p_one and dc_fraction must lie in [0, 1]")
    size = rows * outputs
    idx = np.arange(size, dtype=np.uint64)
    cells = (uniform(seed, 0, idx) < p_one).astype(np.int64)
    n_dc = math.floor(dc_fraction * size)
    if n_dc:
        order = np.argsort(hash_u64(seed, 1, idx), kind="stable")
        cells[order[:n_dc]] = DC
    return TernaryLut(tuple(tuple(cells[i * outputs:(i + 1) * outputs]) for i in range(rows)))


# -- CodeResult files --------------------------------------------------------

class CodeFormatError(ValueError):
    pass


def dump_code_result(result: CodeResult) -> str:
    lines = ["# lutcode code result", f".k {result.k}"]
    lines += [f".h {row}" for row in result.H.to_strings()]
    if result.dc_assignment:
        lines.append(".dc " + "".join(map(str, result.dc_assignment)))
    lines.append(".source")
    lines.append(serialize_truth_table(result.source).rstrip("\n"))
    lines.append(".coded")
    coded = TernaryLut(result.coded.bits, result.source.input_bits)
    lines.append(serialize_truth_table(coded).rstrip("\n"))
    return "\n".join(lines) + "\n"


def load_code_result(text: str) -> CodeResult:
    """Parse a CodeResult file. An H that breaks DecoderMatrix rules raises
    ValueError (not CodeFormatError) so callers can treat it as a failed check."""
    header: list[str] = []
    sections: dict[str, list[str]] = {}
    current = header
    for raw in text.splitlines():
        key = raw.split("#", 1)[0].strip()
        if key in (".source", ".coded"):
            if key in sections:
                raise CodeFormatError(f"duplicate {key} section")
            current = sections[key] = []
            continue
        current.append(raw)
    if set(sections) != {".source", ".coded"}:
        raise CodeFormatError("need both .source and .coded sections")
    k = None
    h_rows: list[str] = []
    dc = ""
    for raw in header:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == ".k" and len(parts) == 2 and parts[1].isdigit():
            k = int(parts[1])
        elif parts[0] == ".h" and len(parts) == 2 and set(parts[1]) <= {"0", "1"}:
            h_rows.append(parts[1])
        elif parts[0] == ".dc" and len(parts) == 2 and set(parts[1]) <= {"0", "1"}:
            dc = parts[1]
        else:
            raise CodeFormatError(f"bad header line {line!r}")
    if k is None or not h_rows:
        raise CodeFormatError("missing .k or .h lines")
    if len({len(r) for r in h_rows}) != 1:
        raise CodeFormatError(".h rows differ in length")
    try:
        source = parse_truth_table("\n".join(sections[".source"]))
        coded_t = parse_truth_table("\n".join(sections[".coded"]))
    except LutFormatError as exc:
        raise CodeFormatError(str(exc)) from None
    if coded_t.dc_count:
        raise CodeFormatError("coded table must be binary")
    H = DecoderMatrix(tuple(tuple(int(ch) for ch in r) for r in h_rows))
    return CodeResult(source, k, BinaryLut(coded_t.entries), H, tuple(int(ch) for ch in dc))


# -- output helpers ----------------------------------------------------------

def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def to_csv(rows: Sequence[dict], columns: Sequence[str], meta: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    return buf.getvalue()


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


@dataclass
class Table:
    name: str
    columns: tuple[str, ...]
    rows: list[dict]
    meta: dict = field(default_factory=dict)

    def csv(self) -> str:
        return to_csv(self.rows, self.columns, self.meta)

    def as_dict(self) -> dict:
        return {"name": self.name, "meta": self.meta, "columns": list(self.columns),
                "rows": self.rows}


def _map(fn: Callable, items: Iterable, jobs: int) -> list:
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


# -- figure 2 ------------------------------------------------------------------

def _fig2_task(args):
    rows, outputs, p_one, dcf, seed, budget = args
    lut = gen_random_lut(rows, outputs, p_one, dcf, seed)
    try:
        result = find_min_code(lut, budget)
    except SearchBudgetExceeded:
        return None, None, True
    return result.k, area_reduction(result), verify_code(result).ok


def fig2_sample_seed(seed: int, rows: int, outputs: int, scenario: int, sample: int) -> int:
    return derive_seed(seed, rows, outputs, scenario, sample)


def run_fig2(config: ExperimentConfig) -> tuple[Table, Table]:
    """Histogram of minimal k and area-reduction statistics per scenario."""
    hist_rows = []
    summary_rows = []
    for rows, outputs in config.shapes:
        top = delta(outputs)
        for s_idx, (name, p_one, with_dc) in enumerate(FIG2_SCENARIOS):
            dcf = config.dc_fraction if with_dc else 0.0
            tasks = [
                (rows, outputs, p_one, dcf,
                 fig2_sample_seed(config.seed, rows, outputs, s_idx, i), config.budget)
                for i in range(config.samples)
            ]
            results = _map(_fig2_task, tasks, config.jobs)
            done = [(k, a) for k, a, _ in results if k is not None]
            over = sum(1 for k, _, _ in results if k is None)
            failed_verify = sum(1 for k, _, v in results if k is not None and not v)
            for k in range(top + 1):
                count = sum(1 for kk, _ in done if kk == k)
                hist_rows.append({
                    "scenario": name, "rows": rows, "outputs": outputs, "p_one": p_one,
                    "dc_fraction": dcf, "k": k, "count": count,
                    "fraction": count / len(done) if done else 0.0,
                })
            areas = [a for _, a in done]
            summary_rows.append({
                "scenario": name, "rows": rows, "outputs": outputs,
                "mean_area_reduction": sum(areas) / len(areas) if areas else 0.0,
                "min": min(areas) if areas else 0.0,
                "max": max(areas) if areas else 0.0,
                "samples": config.samples, "budget_exceeded": over,
                "verify_failed": failed_verify,
            })
    meta = {"experiment": "fig2", "seed": config.seed, "samples": config.samples,
            "budget": config.budget,
            "area_reduction": "1 - (p+k)/(p+delta(p)), averaged per LUT"}
    hist = Table("fig2", ("scenario", "rows", "outputs", "p_one", "dc_fraction", "k",
                          "count", "fraction"), hist_rows, meta)
    summary = Table("fig2-summary", ("scenario", "rows", "outputs", "mean_area_reduction",
                                     "min", "max", "samples", "budget_exceeded",
                                     "verify_failed"), summary_rows, meta)
    return hist, summary


# -- SAT search vs brute force -------------------------------------------------

ORACLE_CHECK_LIMITS = OracleLimits(max_free_bits=64, max_columns=7)


def _oracle_case(seed: int, max_rows: int, max_outputs: int, max_dc: float):
    h = hash_u64(seed, 2, np.arange(4, dtype=np.uint64))
    rows = 1 + int(h[0] % np.uint64(max_rows))
    outputs = 1 + int(h[1] % np.uint64(max_outputs))
    p_one = (0.2, 0.5, 0.8)[int(h[2] % np.uint64(3))]
    dcf = max_dc * int(h[3] % np.uint64(3)) / 2
    return rows, outputs, p_one, dcf


def _oracle_task(args):
    seed, max_rows, max_outputs, max_dc, budget = args
    rows, outputs, p_one, dcf = _oracle_case(seed, max_rows, max_outputs, max_dc)
    lut = gen_random_lut(rows, outputs, p_one, dcf, seed)
    k_sat = find_min_code(lut, budget).k
    k_oracle = brute_force_min_code(lut, ORACLE_CHECK_LIMITS).k
    return {"rows": rows, "outputs": outputs, "p_one": p_one, "dc_fraction": dcf,
            "dc_cells": lut.dc_count, "k_sat": k_sat, "k_oracle": k_oracle,
            "agree": int(k_sat == k_oracle)}


def run_oracle_check(samples: int, seed: int, max_rows: int = 8, max_outputs: int = 3,
                     max_dc: float = 0.5, budget: int = DEFAULT_BUDGET,
                     jobs: int = 1) -> Table:
    """Minimal k from the SAT search against the exhaustive oracle on random LUTs.

    Each sample draws its shape, 1-density and DC fraction (0, max_dc/2 or
    max_dc) from its own seed.
    """
    tasks = [(derive_seed(seed, 9, i), max_rows, max_outputs, max_dc, budget)
             for i in range(samples)]
    rows = [{"sample": i, **r} for i, r in enumerate(_map(_oracle_task, tasks, jobs))]
    meta = {"experiment": "oracle-check", "seed": seed, "samples": samples,
            "agreement": sum(r["agree"] for r in rows) / samples}
    return Table("oracle-check", ("sample", "rows", "outputs", "p_one", "dc_fraction",
                                  "dc_cells", "k_sat", "k_oracle", "agree"), rows, meta)


# -- figures 3 and 4 -----------------------------------------------------------

def fig34_profile(q: float, blocks: int = BLOCKS, corrected: bool = True) -> ReliabilityProfile:
    """Half the blocks have 3 outputs, half 4; all use s = 3 parity columns."""
    f3 = (blocks // 2) * ROWS_PER_BLOCK
    f4 = (blocks - blocks // 2) * ROWS_PER_BLOCK
    groups = [(3, 3, f3), (4, 3, f4)]
    return ReliabilityProfile(tuple(g for g in groups if g[2] > 0), q)


def _mc_blocks(count: int, seed: int) -> list[CodeResult]:
    blocks = []
    for b in range(count):
        outputs = 3 if b < count // 2 else 4
        lut = gen_random_lut(ROWS_PER_BLOCK, outputs, 0.5, 0.0, derive_seed(seed, 7, b))
        blocks.append(baseline_code(BinaryLut(lut.entries)))
    return blocks


def run_fig3_fig4(config: ExperimentConfig) -> Table:
    """Analytic chip yield over a q grid for 2**16 sixteen-row blocks."""
    default = FIG3_Q if config.experiment == "fig3" else FIG4_Q
    qs = config.q_values or default
    columns = ["q", "yield_corrected_binomial", "yield_corrected_paper_exact",
               "yield_uncorrected"]
    rows = []
    mc_blocks = _mc_blocks(config.mc_blocks, config.seed) if config.mc_trials else []
    for i, q in enumerate(qs):
        prof = fig34_profile(q)
        row = {
            "q": q,
            "yield_corrected_binomial": chip_yield(prof, True, "exact_binomial"),
            "yield_corrected_paper_exact": chip_yield(prof, True, "paper_exact"),
            "yield_uncorrected": chip_yield(prof, False),
        }
        if config.mc_trials:
            est, _ = simulate_yield(mc_blocks, q, config.mc_trials,
                                    derive_seed(config.seed, 8, i), jobs=config.jobs)
            row.update({
                "mc_blocks": config.mc_blocks, "mc_trials": config.mc_trials,
                "yield_mc": est.estimate, "yield_mc_stderr": est.std_error,
                "yield_analytic_scaled": chip_yield(fig34_profile(q, config.mc_blocks), True,
                                                    "exact_binomial"),
            })
        rows.append(row)
    if config.mc_trials:
        columns += ["mc_blocks", "mc_trials", "yield_mc", "yield_mc_stderr",
                    "yield_analytic_scaled"]
    meta = {"experiment": config.experiment, "blocks": BLOCKS, "rows_per_block": ROWS_PER_BLOCK,
            "mix": "50% (n=3,s=3), 50% (n=4,s=3)",
            "uncorrected": "data bits only"}
    if config.mc_trials:
        meta["seed"] = config.seed
    return Table(config.experiment, tuple(columns), rows, meta)


# -- figure 5 ------------------------------------------------------------------

def run_fig5(config: ExperimentConfig) -> Table:
    """Block yield of 2-output LUTs with (width 5) and without (width 2) correction."""
    n = 2
    s = delta(n)
    qs = config.q_values or FIG5_Q
    rows = []
    for q in qs:
        for size in config.sizes:
            corrected = chi(n, s, q, config.mode) ** size
            uncorrected = psi(n, size, q)
            rows.append({"q": q, "R": size, "yield_corrected": corrected,
                         "yield_uncorrected": uncorrected,
                         "improvement": corrected - uncorrected})
    meta = {"experiment": "fig5", "block_size": "R = rows per block", "outputs": n,
            "parity": s, "mode": config.mode}
    return Table("fig5", ("q", "R", "yield_corrected", "yield_uncorrected", "improvement"),
                 rows, meta)


def yield_table(groups: Sequence[tuple[int, int, int]], qs: Sequence[float],
                mode: str) -> Table:
    rows = []
    for q in qs:
        prof = ReliabilityProfile(tuple(groups), q)
        rows.append({"q": q, "yield_corrected": chip_yield(prof, True, mode),
                     "yield_uncorrected": chip_yield(prof, False)})
    meta = {"groups": " ".join(f"{n}:{s}:{f}" for n, s, f in groups), "mode": mode}
    return Table("yield", ("q", "yield_corrected", "yield_uncorrected"), rows, meta)


