"""CNF encoding of "is there a decoder matrix for this LUT with k extra columns?".

For every row i and syndrome bit r the parity constraint
``XOR_j (d_ij AND h_rj) = 0`` is Tseitin-encoded. Fixed cells are folded in
before encoding: a 0 cell drops its term, a 1 cell contributes ``h_rj`` itself,
and only DC and extra-column cells get an AND gate. Each XOR is a left-to-right
chain with one auxiliary variable per accumulation step; the last step is an
equivalence between the accumulator and the final term.

Column constraints: one "column is nonzero" clause per column, and for every
column pair a set of XOR-difference variables plus one clause requiring that
at least one of them holds.

Variables are numbered H entries first (column by column), then DC cells
(row-major), then extra cells (row-major), then auxiliaries in creation order.
Because the solver branches on the lowest free index, it effectively picks H
first and lets propagation fill in the data.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from math import comb
from typing import Union

from .hamming import t_rows
from .lut import DC, ONE, ZERO, DecoderMatrix, TernaryLut, gf2_row_times_ht
from .solver import DEFAULT_BUDGET, SatOutcome, parse_model, solve_clauses


@dataclass(frozen=True)
class HEntry:
    row: int
    col: int


@dataclass(frozen=True)
class DcEntry:
    row: int
    col: int


@dataclass(frozen=True)
class ExtraEntry:
    row: int
    col: int


@dataclass(frozen=True)
class Auxiliary:
    gate: str


Role = Union[HEntry, DcEntry, ExtraEntry, Auxiliary]


@dataclass(frozen=True)
class CnfInstance:
    var_count: int
    clauses: tuple[tuple[int, ...], ...]
    var_map: dict[int, Role]
    t: int = 0
    c: int = 0

    def __post_init__(self):
        for cl in self.clauses:
            if not cl:
                raise ValueError("empty clause")
            for x in cl:
                if not 1 <= abs(x) <= self.var_count:
                    raise ValueError(f"literal {x} outside 1..{self.var_count}")

    def role_index(self) -> dict[Role, int]:
        return {role: v for v, role in self.var_map.items()}


class _Builder:
    def __init__(self):
        self.var_map: dict[int, Role] = {}
        self.clauses: list[tuple[int, ...]] = []

    def new(self, role: Role) -> int:
        v = len(self.var_map) + 1
        self.var_map[v] = role
        return v

    def add(self, *lits: int) -> None:
        self.clauses.append(lits)

    def and_gate(self, a: int, b: int, name: str) -> int:
        g = self.new(Auxiliary(name))
        self.add(-g, a)
        self.add(-g, b)
        self.add(g, -a, -b)
        return g

    def xor_gate(self, a: int, b: int, name: str) -> int:
        y = self.new(Auxiliary(name))
        self.add(-y, a, b)
        self.add(-y, -a, -b)
        self.add(y, -a, b)
        self.add(y, a, -b)
        return y

    def xor_is_zero(self, terms: list[int], name: str) -> None:
        if not terms:
            return
        if len(terms) == 1:
            self.add(-terms[0])
            return
        acc = terms[0]
        for step, term in enumerate(terms[1:-1], start=1):
            acc = self.xor_gate(acc, term, f"{name}:xor{step}")
        last = terms[-1]
        self.add(-acc, last)
        self.add(acc, -last)


def build_feasibility_cnf(lut: TernaryLut, k: int) -> CnfInstance:
    """CNF satisfiable iff some t x (p+k) H, DC assignment and extra columns make
    every extended row a codeword, with t = t_rows(p + k)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    p = lut.outputs
    c = p + k
    t = t_rows(c)
    b = _Builder()
    h = [[0] * c for _ in range(t)]
    for j in range(c):
        for r in range(t):
            h[r][j] = b.new(HEntry(r, j))
    cell_var: dict[tuple[int, int], int] = {}
    for i, j in lut.dc_cells():
        cell_var[i, j] = b.new(DcEntry(i, j))
    for i in range(lut.rows):
        for e in range(k):
            cell_var[i, p + e] = b.new(ExtraEntry(i, e))

    for i, row in enumerate(lut.entries):
        for r in range(t):
            terms = []
            for j in range(c):
                cell = row[j] if j < p else DC
                if cell == ZERO:
                    continue
                if cell == ONE:
                    terms.append(h[r][j])
                else:
                    terms.append(b.and_gate(cell_var[i, j], h[r][j], f"and:{i},{j},{r}"))
            b.xor_is_zero(terms, f"par:{i},{r}")

    for j in range(c):
        b.add(*(h[r][j] for r in range(t)))
    for j1 in range(c):
        for j2 in range(j1 + 1, c):
            diffs = [b.xor_gate(h[r][j1], h[r][j2], f"diff:{j1},{j2},{r}") for r in range(t)]
            b.add(*diffs)

    return CnfInstance(len(b.var_map), tuple(b.clauses), b.var_map, t, c)


def solve(
    cnf: CnfInstance,
    budget: int = DEFAULT_BUDGET,
    external: str | None = None,
) -> SatOutcome:
    """Decide ``cnf`` with the built-in solver, or with an external DIMACS solver.

    ``external`` is a command line (e.g. the value of ``LUTCODE_SOLVER``); the
    DIMACS file path is appended. Its models may differ from the built-in ones.
    """
    if external is None:
        return solve_clauses(cnf.var_count, cnf.clauses, budget)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "instance.cnf")
        with open(path, "w") as fh:
            fh.write(to_dimacs(cnf))
        proc = subprocess.run(
            shlex.split(external) + [path], capture_output=True, text=True, check=False
        )
    outcome = parse_model(proc.stdout)
    if outcome.satisfiable:
        model = {v: outcome.assignment.get(v, 0) for v in range(1, cnf.var_count + 1)}
        outcome = SatOutcome(True, model)
    return outcome


class WitnessError(RuntimeError):
    pass


def extract_witness(
    cnf: CnfInstance, outcome: SatOutcome, lut: TernaryLut, k: int
) -> tuple[DecoderMatrix, tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Read (H, DC assignment, l x k extra grid) out of a satisfying assignment."""
    if not outcome.satisfiable:
        raise ValueError("outcome is not satisfiable")
    p = lut.outputs
    c = p + k
    t = t_rows(c)
    index = cnf.role_index()
    model = outcome.assignment

    def value(role: Role) -> int:
        try:
            return model[index[role]]
        except KeyError:
            raise WitnessError(f"role {role} missing from the variable map") from None

    H = DecoderMatrix(tuple(tuple(value(HEntry(r, j)) for j in range(c)) for r in range(t)))
    dcs = tuple(value(DcEntry(i, j)) for i, j in lut.dc_cells())
    extra = tuple(tuple(value(ExtraEntry(i, e)) for e in range(k)) for i in range(lut.rows))

    grid = [list(row) for row in lut.entries]
    for (i, j), bit in zip(lut.dc_cells(), dcs):
        grid[i][j] = bit
    for i, row in enumerate(grid):
        if any(gf2_row_times_ht(tuple(row) + extra[i], H)):
            raise WitnessError(f"row {i} of the witness is not a codeword")
    return H, dcs, extra


def _role_comment(v: int, role: Role) -> str:
    if isinstance(role, HEntry):
        return f"c var {v} h {role.row + 1} {role.col + 1}"
    if isinstance(role, DcEntry):
        return f"c var {v} dc {role.row + 1} {role.col + 1}"
    if isinstance(role, ExtraEntry):
        return f"c var {v} extra {role.row + 1} {role.col + 1}"
    return f"c var {v} aux {role.gate}"


def to_dimacs(cnf: CnfInstance) -> str:
    lines = [_role_comment(v, role) for v, role in sorted(cnf.var_map.items())]
    lines.append(f"p cnf {cnf.var_count} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, cl)) + " 0" for cl in cnf.clauses)
    return "\n".join(lines) + "\n"


def paper_size_estimate(l: int, p: int, t: int) -> tuple[int, int]:
    """Published variable/clause count polynomials, for reporting only."""
    if min(l, p, t) < 1:
        raise ValueError("l, p and t must be >= 1")
    pairs = comb(p, 2)
    variables = (4 * p - 2) * l * t + p + pairs * (4 * t + 1)
    clauses = t * p + (p - 1) * l * t + pairs * t
    return variables, clauses
