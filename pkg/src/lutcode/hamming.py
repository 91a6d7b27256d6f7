"""Default Hamming parameters, the canonical baseline code and syndrome decoding."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .lut import BinaryLut, Bits, CodeResult, DecoderMatrix, TernaryLut, gf2_row_times_ht


def delta(p: int) -> int:
    """Least s with 2**s >= p + s + 1: parity bits of a Hamming code for p data bits."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s = 1
    while 2**s < p + s + 1:
        s += 1
    return s


def t_rows(c: int) -> int:
    """Least t with 2**t > c, i.e. enough rows for c distinct nonzero columns."""
    if c < 1:
        raise ValueError("c must be >= 1")
    return c.bit_length()


def canonical_columns(p: int) -> list[int]:
    """Column values of the baseline H: non-powers of two, then powers of two."""
    s = delta(p)
    values = range(1, p + s + 1)
    data = [v for v in values if v & (v - 1)]
    parity = [v for v in values if not v & (v - 1)]
    return data + parity


def canonical_matrix(p: int) -> DecoderMatrix:
    return DecoderMatrix.from_column_ints(canonical_columns(p), delta(p))


def baseline_code(
    data: BinaryLut,
    source: TernaryLut | None = None,
    dc_assignment: Sequence[int] = (),
) -> CodeResult:
    """Append delta(p) parity columns so every row is a codeword of the canonical H.

    ``source`` defaults to ``data`` itself; pass the original ternary LUT (and
    the DC assignment that produced ``data``) to keep the provenance.
    """
    p = data.width
    s = delta(p)
    cols = canonical_columns(p)
    coded = []
    for row in data.bits:
        syn = 0
        for b, v in zip(row, cols):
            if b:
                syn ^= v
        # parity column m holds the unit vector 2**m
        coded.append(row + tuple((syn >> m) & 1 for m in range(s)))
    return CodeResult(
        source=source if source is not None else data.as_ternary(),
        k=s,
        coded=BinaryLut(tuple(coded)),
        H=DecoderMatrix.from_column_ints(cols, s),
        dc_assignment=tuple(dc_assignment),
    )


class Outcome(enum.Enum):
    NO_ERROR = "no_error"
    CORRECTED = "corrected"
    UNCORRECTABLE = "uncorrectable"


@dataclass(frozen=True)
class CorrectionOutcome:
    tag: Outcome
    position: int | None = None
    corrected_row: Bits | None = None


def correct(row: Sequence[int], H: DecoderMatrix) -> CorrectionOutcome:
    """Decode one stored row. ``position`` is 0-based."""
    syndrome = gf2_row_times_ht(row, H)
    if not any(syndrome):
        return CorrectionOutcome(Outcome.NO_ERROR, corrected_row=tuple(row))
    for j in range(H.c):
        if H.column(j) == syndrome:
            fixed = list(row)
            fixed[j] ^= 1
            return CorrectionOutcome(Outcome.CORRECTED, j, tuple(fixed))
    return CorrectionOutcome(Outcome.UNCORRECTABLE)
