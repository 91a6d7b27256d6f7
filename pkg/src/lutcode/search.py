"""Minimum-redundancy code search, a brute-force oracle, and code verification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cnf import build_feasibility_cnf, extract_witness, solve
from .hamming import Outcome, correct, delta, t_rows
from .lut import (
    DC,
    BinaryLut,
    CodeResult,
    DecoderMatrix,
    TernaryLut,
    complete,
    flip_bits,
    gf2_row_times_ht,
)
from .solver import DEFAULT_BUDGET, BudgetExceeded

__all__ = [
    "CodeResult",
    "SearchBudgetExceeded",
    "NoCodeFound",
    "OracleLimits",
    "OracleCapExceeded",
    "find_min_code",
    "code_at",
    "brute_force_feasible",
    "brute_force_min_code",
    "verify_code",
    "VerificationReport",
    "area_reduction",
]


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, k: int, budget: int):
        self.k = k
        self.budget = budget
        super().__init__(f"solver budget of {budget} steps exceeded at k={k}")


class NoCodeFound(RuntimeError):
    """No feasible k within the caller's ``max_extra`` cap."""


def code_at(lut: TernaryLut, k: int, budget: int = DEFAULT_BUDGET,
            external: str | None = None) -> CodeResult | None:
    """The SAT-chosen code with exactly k extra columns, or None if infeasible."""
    cnf = build_feasibility_cnf(lut, k)
    try:
        outcome = solve(cnf, budget, external)
    except BudgetExceeded:
        raise SearchBudgetExceeded(k, budget) from None
    if not outcome.satisfiable:
        return None
    H, dcs, extra = extract_witness(cnf, outcome, lut, k)
    data = complete(lut, dcs)
    coded = BinaryLut(tuple(row + x for row, x in zip(data.bits, extra)))
    return CodeResult(lut, k, coded, H, dcs)


def find_min_code(
    lut: TernaryLut,
    budget: int = DEFAULT_BUDGET,
    max_extra: int | None = None,
    external: str | None = None,
) -> CodeResult:
    """Try k = 0, 1, ... delta(p) and return the first feasible code.

    k = delta(p) is always feasible, so the loop terminates; it is still solved
    by SAT so the DC cells get a useful assignment.
    """
    top = delta(lut.outputs)
    if max_extra is not None:
        top = min(top, max_extra)
    for k in range(top + 1):
        result = code_at(lut, k, budget, external)
        if result is not None:
            return result
    raise NoCodeFound(f"no code with at most {top} extra columns")


@dataclass(frozen=True)
class OracleLimits:
    max_free_bits: int = 20
    max_columns: int = 7


class OracleCapExceeded(RuntimeError):
    pass


def _row_options(row, p: int, k: int, cols: tuple[int, ...]):
    """First completion (DC bits, extra bits) of ``row`` with zero syndrome, or None.

    Completions are tried in binary counting order over the row's DC cells
    followed by its extra cells.
    """
    fixed = 0
    free = []
    for j in range(p):
        if row[j] == DC:
            free.append(j)
        elif row[j]:
            fixed ^= cols[j]
    free.extend(range(p, p + k))
    m = len(free)
    for mask in range(1 << m):
        s = fixed
        for b in range(m):
            if (mask >> (m - 1 - b)) & 1:
                s ^= cols[free[b]]
        if s == 0:
            return tuple((mask >> (m - 1 - b)) & 1 for b in range(m))
    return None


def brute_force_feasible(lut: TernaryLut, k: int,
                         limits: OracleLimits = OracleLimits()) -> CodeResult | None:
    """Exhaustive search over ordered column selections for H and all free bits.

    Given H the parity condition splits by row, so each row's DC and extra bits
    are enumerated on their own; this is still a complete enumeration.
    """
    p = lut.outputs
    c = p + k
    t = t_rows(c)
    free_bits = lut.dc_count + lut.rows * k
    if c > limits.max_columns or free_bits > limits.max_free_bits:
        raise OracleCapExceeded(
            f"oracle caps exceeded at k={k}: c={c}, free bits={free_bits}"
        )
    for cols in itertools.permutations(range(1, 1 << t), c):
        picks = []
        for row in lut.entries:
            opt = _row_options(row, p, k, cols)
            if opt is None:
                break
            picks.append(opt)
        else:
            dcs = []
            coded = []
            for row, opt in zip(lut.entries, picks):
                n_dc = row.count(DC)
                dcs.extend(opt[:n_dc])
                it = iter(opt[:n_dc])
                data = tuple(next(it) if v == DC else v for v in row)
                coded.append(data + opt[n_dc:])
            H = DecoderMatrix.from_column_ints(cols, t)
            return CodeResult(lut, k, BinaryLut(tuple(coded)), H, tuple(dcs))
    return None


def brute_force_min_code(lut: TernaryLut, limits: OracleLimits = OracleLimits()) -> CodeResult:
    for k in range(delta(lut.outputs) + 1):
        result = brute_force_feasible(lut, k, limits)
        if result is not None:
            return result
    raise AssertionError("k = delta(p) must always be feasible")


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if passed else 'FAIL'} {name}" + (f": {detail}" if detail else "")
            for name, passed, detail in self.checks
        ]


def verify_code(result: CodeResult) -> VerificationReport:
    checks: list[tuple[str, bool, str]] = []
    src = result.source
    p = src.outputs
    c = p + result.k
    coded = result.coded
    H = result.H

    shape_ok = coded.rows == src.rows and coded.width == c and H.c == c
    checks.append(("shape", shape_ok,
                   "" if shape_ok else f"coded {coded.rows}x{coded.width}, H has {H.c} columns, "
                   f"expected {src.rows}x{c}"))
    if not shape_ok:
        return VerificationReport(tuple(checks))

    ok = 0 <= result.k <= delta(p)
    checks.append(("k within [0, delta(p)]", ok, "" if ok else f"k={result.k}"))

    ok = H.t == t_rows(c)
    checks.append(("H rows = t_rows(p+k)", ok, "" if ok else f"H has {H.t} rows"))

    bad = [i for i, row in enumerate(coded.bits) if any(gf2_row_times_ht(row, H))]
    checks.append(("zero syndrome on every row", not bad,
                   "" if not bad else f"nonzero syndrome in rows {bad}"))

    mismatched = [
        (i, j)
        for i, row in enumerate(src.entries)
        for j, v in enumerate(row)
        if v != DC and coded.bits[i][j] != v
    ]
    checks.append(("fixed cells preserved", not mismatched,
                   "" if not mismatched else f"cells {mismatched[:5]} differ"))

    cells = src.dc_cells()
    dc_ok = len(result.dc_assignment) == len(cells) and all(
        coded.bits[i][j] == b for (i, j), b in zip(cells, result.dc_assignment)
    )
    checks.append(("dc assignment consistent", dc_ok, ""))
    if dc_ok:
        data = complete(src, result.dc_assignment)
        ok = all(row[:p] == d for row, d in zip(coded.bits, data.bits))
        checks.append(("data columns = complete(source, dc)", ok, ""))

    failures = []
    for i, row in enumerate(coded.bits):
        for j in range(c):
            out = correct(flip_bits(row, [j]), H)
            if out.tag is not Outcome.CORRECTED or out.position != j or out.corrected_row != row:
                failures.append((i, j))
    checks.append(("single-bit flips recovered", not failures,
                   "" if not failures else f"{len(failures)} (row, bit) pairs fail"))
    return VerificationReport(tuple(checks))


def area_reduction(result: CodeResult) -> float:
    """Stored-bit saving relative to the default Hamming code."""
    p = result.source.outputs
    return 1.0 - (p + result.k) / (p + delta(p))
