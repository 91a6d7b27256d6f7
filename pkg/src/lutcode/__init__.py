"""Compact single-error-correcting codes for lookup tables with don't cares."""

__version__ = "0.1.0"

from .hamming import baseline_code, correct, delta, t_rows
from .lut import (
    DC,
    ONE,
    ZERO,
    BinaryLut,
    CodeResult,
    DecoderMatrix,
    TernaryLut,
    complete,
    flip_bits,
    gf2_row_times_ht,
    parse_truth_table,
    serialize_truth_table,
)
from .search import area_reduction, brute_force_min_code, find_min_code, verify_code

__all__ = [
    "DC", "ONE", "ZERO", "BinaryLut", "CodeResult", "DecoderMatrix", "TernaryLut",
    "area_reduction", "baseline_code", "brute_force_min_code", "complete", "correct",
    "delta", "find_min_code", "flip_bits", "gf2_row_times_ht", "parse_truth_table",
    "serialize_truth_table", "t_rows", "verify_code",
]
