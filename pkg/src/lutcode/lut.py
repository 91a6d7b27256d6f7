"""Ternary and binary lookup tables, GF(2) row helpers and the truth-table text format.

Indices are 0-based throughout the Python API. Bit 0 of a row is the
leftmost printed character. Text formats and DIMACS comments use 1-based
indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

ZERO = 0
ONE = 1
DC = 2

_SYMBOLS = {"0": ZERO, "1": ONE, "-": DC, "X": DC, "x": DC}
_PRINT = {ZERO: "0", ONE: "1", DC: "-"}

Bits = tuple[int, ...]


class LutFormatError(ValueError):
    """Malformed truth-table text. ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class TernaryLut:
    """An l x p table over {ZERO, ONE, DC}."""

    entries: tuple[tuple[int, ...], ...]
    input_bits: int | None = None

    def __post_init__(self):
        entries = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a LUT needs at least one row")
        width = len(entries[0])
        if width < 1:
            raise ValueError("a LUT needs at least one output")
        for i, row in enumerate(entries):
            if len(row) != width:
                raise ValueError(f"row {i} has width {len(row)}, expected {width}")
            if any(v not in (ZERO, ONE, DC) for v in row):
                raise ValueError(f"row {i} has a symbol outside {{0, 1, DC}}")
        if self.input_bits is not None and len(entries) != 2**self.input_bits:
            raise ValueError(
                f"{len(entries)} rows do not enumerate {self.input_bits} inputs"
            )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def outputs(self) -> int:
        return len(self.entries[0])

    def dc_cells(self) -> list[tuple[int, int]]:
        """DC positions in row-major order; this is the assignment-vector order."""
        return [
            (i, j)
            for i, row in enumerate(self.entries)
            for j, v in enumerate(row)
            if v == DC
        ]

    @property
    def dc_count(self) -> int:
        return sum(row.count(DC) for row in self.entries)

    @classmethod
    def from_strings(cls, rows: Iterable[str], input_bits: int | None = None) -> "TernaryLut":
        return cls(tuple(tuple(_SYMBOLS[ch] for ch in r) for r in rows), input_bits)

    def to_strings(self) -> list[str]:
        return ["".join(_PRINT[v] for v in row) for row in self.entries]


@dataclass(frozen=True)
class BinaryLut:
    """An l x c grid of bits."""

    bits: tuple[Bits, ...]

    def __post_init__(self):
        bits = tuple(tuple(int(b) for b in row) for row in self.bits)
        object.__setattr__(self, "bits", bits)
        if not bits:
            raise ValueError("a LUT needs at least one row")
        width = len(bits[0])
        for i, row in enumerate(bits):
            if len(row) != width:
                raise ValueError(f"row {i} has width {len(row)}, expected {width}")
            if any(b not in (0, 1) for b in row):
                raise ValueError(f"row {i} is not binary")

    @property
    def rows(self) -> int:
        return len(self.bits)

    @property
    def width(self) -> int:
        return len(self.bits[0])

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "BinaryLut":
        return cls(tuple(tuple(int(ch) for ch in r) for r in rows))

    def to_strings(self) -> list[str]:
        return ["".join(str(b) for b in row) for row in self.bits]

    def as_ternary(self, input_bits: int | None = None) -> TernaryLut:
        return TernaryLut(self.bits, input_bits)


@dataclass(frozen=True)
class DecoderMatrix:
    """A t x c parity-check matrix with distinct nonzero columns.

    Row 0 is the most significant bit when a column is read as an integer.
    """

    bits: tuple[Bits, ...]

    def __post_init__(self):
        bits = tuple(tuple(int(b) for b in row) for row in self.bits)
        object.__setattr__(self, "bits", bits)
        if not bits or not bits[0]:
            raise ValueError("decoder matrix must be non-empty")
        c = len(bits[0])
        if any(len(r) != c for r in bits) or any(b not in (0, 1) for r in bits for b in r):
            raise ValueError("decoder matrix must be a rectangular 0/1 grid")
        cols = self.column_ints()
        if 0 in cols:
            raise ValueError(f"column {cols.index(0)} of H is zero")
        if len(set(cols)) != len(cols):
            raise ValueError("columns of H are not pairwise distinct")

    @property
    def t(self) -> int:
        return len(self.bits)

    @property
    def c(self) -> int:
        return len(self.bits[0])

    def column(self, j: int) -> Bits:
        return tuple(row[j] for row in self.bits)

    def column_ints(self) -> list[int]:
        t = len(self.bits)
        return [
            sum(self.bits[r][j] << (t - 1 - r) for r in range(t))
            for j in range(len(self.bits[0]))
        ]

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "DecoderMatrix":
        t = len(columns[0])
        return cls(tuple(tuple(col[r] for col in columns) for r in range(t)))

    @classmethod
    def from_column_ints(cls, values: Sequence[int], t: int) -> "DecoderMatrix":
        return cls(
            tuple(tuple((v >> (t - 1 - r)) & 1 for v in values) for r in range(t))
        )

    def to_strings(self) -> list[str]:
        return ["".join(str(b) for b in row) for row in self.bits]


def complete(lut: TernaryLut, assignment: Sequence[int]) -> BinaryLut:
    """Fill DC cells from ``assignment`` (row-major DC order)."""
    cells = lut.dc_cells()
    if len(assignment) != len(cells):
        raise ValueError(
            f"assignment has {len(assignment)} bits, LUT has {len(cells)} DC cells"
        )
    grid = [list(row) for row in lut.entries]
    for (i, j), bit in zip(cells, assignment):
        if bit not in (0, 1):
            raise ValueError("assignment bits must be 0 or 1")
        grid[i][j] = bit
    return BinaryLut(tuple(tuple(r) for r in grid))


def gf2_row_times_ht(row: Sequence[int], H: DecoderMatrix) -> Bits:
    """Syndrome ``row . H^T`` over GF(2)."""
    if len(row) != H.c:
        raise ValueError(f"row has {len(row)} bits, H has {H.c} columns")
    return tuple(
        sum(b & h for b, h in zip(row, hrow)) & 1 for hrow in H.bits
    )


def flip_bits(row: Sequence[int], positions: Iterable[int]) -> Bits:
    """Invert the listed (0-based) positions of ``row``."""
    out = list(row)
    for j in set(positions):
        if not 0 <= j < len(out):
            raise IndexError(f"position {j} outside row of width {len(out)}")
        out[j] ^= 1
    return tuple(out)


def parse_truth_table(text: str) -> TernaryLut:
    """Parse the line-oriented ``.i/.o`` truth-table format."""
    n_in: int | None = None
    p: int | None = None
    rows: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("."):
            parts = line.split()
            key = parts[0]
            if key == ".e":
                break
            if key not in (".i", ".o"):
                raise LutFormatError(f"unknown directive {key!r}", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise LutFormatError(f"{key} needs one non-negative integer", lineno)
            value = int(parts[1])
            if key == ".i":
                if n_in is not None:
                    raise LutFormatError("duplicate .i header", lineno)
                n_in = value
            else:
                if p is not None:
                    raise LutFormatError("duplicate .o header", lineno)
                if value < 1:
                    raise LutFormatError(".o must be at least 1", lineno)
                p = value
            continue
        if p is None:
            raise LutFormatError("body line before .o header", lineno)
        parts = line.split()
        if len(parts) == 2:
            inputs, outputs = parts
            if any(ch not in "01-" for ch in inputs):
                raise LutFormatError(f"bad input bits {inputs!r}", lineno)
            if n_in is not None and len(inputs) != n_in:
                raise LutFormatError(
                    f"input field has {len(inputs)} bits, .i says {n_in}", lineno
                )
        elif len(parts) == 1:
            if n_in:
                raise LutFormatError("missing input bits (required when .i given)", lineno)
            outputs = parts[0]
        else:
            raise LutFormatError("expected '<inputs> <outputs>'", lineno)
        if len(outputs) != p:
            raise LutFormatError(
                f"output field has {len(outputs)} symbols, .o says {p}", lineno
            )
        bad = [ch for ch in outputs if ch not in _SYMBOLS]
        if bad:
            raise LutFormatError(f"bad output symbol {bad[0]!r}", lineno)
        rows.append(outputs)
    if p is None:
        raise LutFormatError("missing .o header")
    if not rows:
        raise LutFormatError("no rows")
    if n_in is not None and len(rows) != 2**n_in:
        raise LutFormatError(f"{len(rows)} rows but .i {n_in} needs {2**n_in}")
    return TernaryLut.from_strings(rows, n_in)


def serialize_truth_table(lut: TernaryLut) -> str:
    lines = []
    if lut.input_bits is not None:
        lines.append(f".i {lut.input_bits}")
    lines.append(f".o {lut.outputs}")
    for i, out in enumerate(lut.to_strings()):
        if lut.input_bits:
            lines.append(f"{i:0{lut.input_bits}b} {out}")
        else:
            lines.append(out)
    lines.append(".e")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CodeResult:
    """A completed, column-extended LUT with its decoder matrix.

    Invariants are deliberately not enforced here so that damaged results can
    still be loaded and reported on by ``verify_code``.
    """

    source: TernaryLut
    k: int
    coded: BinaryLut
    H: DecoderMatrix
    dc_assignment: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dc_assignment", tuple(int(b) for b in self.dc_assignment))

    @property
    def width(self) -> int:
        return self.source.outputs + self.k

    def extra_columns(self) -> tuple[Bits, ...]:
        p = self.source.outputs
        return tuple(row[p:] for row in self.coded.bits)
