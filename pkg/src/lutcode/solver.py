"""A small deterministic CDCL SAT solver and DIMACS helpers.

Search policy, fixed so that satisfying assignments are reproducible:

* branch on the lowest-index unassigned variable, trying False first;
* two-watched-literal unit propagation;
* first-UIP clause learning with non-chronological backjumping;
* Luby restarts (unit 128 conflicts); learned clauses are kept across restarts
  and the longest half is dropped whenever the learned set outgrows its limit.

Run as ``python -m lutcode.solver FILE.cnf`` to solve a DIMACS file and print
SAT-competition style ``s``/``v`` lines.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The step budget (decisions + conflicts) ran out before an answer."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"solver budget of {budget} steps exceeded")


@dataclass(frozen=True)
class SatOutcome:
    satisfiable: bool
    assignment: dict[int, int] | None = None
    stats: dict[str, int] = field(default_factory=dict, compare=False)


def _luby(i: int) -> int:
    # i >= 1
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


def solve_clauses(
    var_count: int,
    clauses: Iterable[Sequence[int]],
    budget: int = DEFAULT_BUDGET,
) -> SatOutcome:
    """Decide a CNF given as signed-integer clauses over variables 1..var_count."""
    n = var_count
    # literal encoding: 2v is v, 2v+1 is not v
    val = [0] * (2 * n + 2)
    level = [0] * (n + 1)
    reason: list[list[int] | None] = [None] * (n + 1)
    watches: list[list[list[int]]] = [[] for _ in range(2 * n + 2)]
    trail: list[int] = []
    trail_lim: list[int] = []
    originals: list[list[int]] = []
    learnts: list[list[int]] = []
    stats = {"decisions": 0, "conflicts": 0, "propagations": 0, "restarts": 0}

    units = []
    for cl in clauses:
        lits = []
        seen_lits = set()
        taut = False
        for x in cl:
            v = abs(x)
            if x == 0 or v > n:
                raise ValueError(f"literal {x} out of range for {n} variables")
            lit = 2 * v + (x < 0)
            if lit ^ 1 in seen_lits:
                taut = True
                break
            if lit not in seen_lits:
                seen_lits.add(lit)
                lits.append(lit)
        if taut:
            continue
        if not lits:
            return SatOutcome(False, stats=stats)
        if len(lits) == 1:
            units.append(lits[0])
        else:
            originals.append(lits)
            watches[lits[0]].append(lits)
            watches[lits[1]].append(lits)

    def enqueue(lit: int, why: list[int] | None) -> None:
        val[lit] = 1
        val[lit ^ 1] = -1
        v = lit >> 1
        level[v] = len(trail_lim)
        reason[v] = why
        trail.append(lit)

    for lit in units:
        if val[lit] == -1:
            return SatOutcome(False, stats=stats)
        if val[lit] == 0:
            enqueue(lit, None)

    qhead = 0

    def propagate() -> list[int] | None:
        nonlocal qhead
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return c
                    val[first] = 1
                    val[first ^ 1] = -1
                    v = first >> 1
                    level[v] = len(trail_lim)
                    reason[v] = c
                    trail.append(first)
            del ws[j:]
        return None

    seen = [False] * (n + 1)
    next_var = 1

    def cancel_until(lvl: int) -> None:
        nonlocal qhead, next_var
        if len(trail_lim) <= lvl:
            return
        start = trail_lim[lvl]
        lowest = next_var
        for lit in trail[start:]:
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            reason[v] = None
            if v < lowest:
                lowest = v
        del trail[start:]
        del trail_lim[lvl:]
        qhead = len(trail)
        next_var = lowest

    def analyze(confl: list[int]) -> tuple[list[int], int]:
        dl = len(trail_lim)
        learnt = [0]
        counter = 0
        p = -1
        idx = len(trail) - 1
        clause = confl
        while True:
            for q in clause[0 if p < 0 else 1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    if level[v] >= dl:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = False
            counter -= 1
            if counter == 0:
                break
            clause = reason[v]
        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = False
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        best_level = level[learnt[1] >> 1]
        for i in range(2, len(learnt)):
            lv = level[learnt[i] >> 1]
            if lv > best_level:
                best, best_level = i, lv
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, best_level

    def reduce_db() -> None:
        locked = {id(reason[lit >> 1]) for lit in trail if reason[lit >> 1] is not None}
        order = sorted(range(len(learnts)), key=lambda i: (-len(learnts[i]), i))
        drop = set()
        for i in order[: len(learnts) // 2]:
            c = learnts[i]
            if len(c) > 2 and id(c) not in locked:
                drop.add(i)
        kept = [c for i, c in enumerate(learnts) if i not in drop]
        learnts[:] = kept
        for ws in watches:
            ws.clear()
        for c in originals:
            watches[c[0]].append(c)
            watches[c[1]].append(c)
        for c in kept:
            watches[c[0]].append(c)
            watches[c[1]].append(c)

    max_learnts = max(2000, len(originals) // 2)
    restart_count = 1
    conflicts_until_restart = 128 * _luby(restart_count)
    steps = 0

    while True:
        confl = propagate()
        if confl is not None:
            stats["conflicts"] += 1
            steps += 1
            if steps > budget:
                raise BudgetExceeded(budget)
            if not trail_lim:
                stats["propagations"] = len(trail)
                return SatOutcome(False, stats=stats)
            learnt, bt = analyze(confl)
            cancel_until(bt)
            if len(learnt) == 1:
                enqueue(learnt[0], None)
            else:
                learnts.append(learnt)
                watches[learnt[0]].append(learnt)
                watches[learnt[1]].append(learnt)
                enqueue(learnt[0], learnt)
            conflicts_until_restart -= 1
            continue
        if conflicts_until_restart <= 0:
            stats["restarts"] += 1
            restart_count += 1
            conflicts_until_restart = 128 * _luby(restart_count)
            cancel_until(0)
            continue
        if len(learnts) - len(trail) > max_learnts:
            reduce_db()
            max_learnts += max_learnts // 10
        while next_var <= n and val[2 * next_var] != 0:
            next_var += 1
        if next_var > n:
            model = {v: int(val[2 * v] == 1) for v in range(1, n + 1)}
            return SatOutcome(True, model, stats)
        stats["decisions"] += 1
        steps += 1
        if steps > budget:
            raise BudgetExceeded(budget)
        trail_lim.append(len(trail))
        enqueue(2 * next_var + 1, None)


def check_assignment(clauses: Iterable[Sequence[int]], assignment: dict[int, int]) -> bool:
    """True iff every clause has a literal made true by ``assignment``."""
    for cl in clauses:
        if not any(assignment.get(abs(x), 0) == (x > 0) for x in cl):
            return False
    return True


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    var_count = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            var_count = int(parts[2])
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(current)
                current = []
            else:
                current.append(x)
    if current:
        clauses.append(current)
    if var_count is None:
        raise ValueError("missing 'p cnf' line")
    return var_count, clauses


def format_model(outcome: SatOutcome) -> str:
    if not outcome.satisfiable:
        return "s UNSATISFIABLE\n"
    lits = [v if b else -v for v, b in sorted(outcome.assignment.items())]
    return "s SATISFIABLE\nv " + " ".join(map(str, lits + [0])) + "\n"


def parse_model(text: str) -> SatOutcome:
    """Read ``s``/``v`` lines as printed by competition-style solvers."""
    status = None
    model: dict[int, int] = {}
    for line in text.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for tok in line[2:].split():
                x = int(tok)
                if x:
                    model[abs(x)] = int(x > 0)
    if status == "SATISFIABLE":
        return SatOutcome(True, model)
    if status == "UNSATISFIABLE":
        return SatOutcome(False)
    raise ValueError(f"solver reported no verdict (status {status!r})")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m lutcode.solver FILE.cnf", file=sys.stderr)
        return 1
    with open(argv[0]) as fh:
        nvars, clauses = parse_dimacs(fh.read())
    outcome = solve_clauses(nvars, clauses)
    sys.stdout.write(format_model(outcome))
    return 10 if outcome.satisfiable else 20


if __name__ == "__main__":
    sys.exit(main())
