"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 solver budget or
search limit exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .cnf import build_feasibility_cnf, to_dimacs
from .experiments import (
    CodeFormatError,
    ExperimentConfig,
    Table,
    dump_code_result,
    load_code_result,
    run_fig2,
    run_fig3_fig4,
    run_fig5,
    run_oracle_check,
    to_json,
    yield_table,
)
from .hamming import baseline_code
from .lut import LutFormatError, complete, parse_truth_table
from .reliability import MODES, simulate_yield
from .search import (
    NoCodeFound,
    OracleCapExceeded,
    OracleLimits,
    SearchBudgetExceeded,
    brute_force_min_code,
    find_min_code,
    verify_code,
)
from .solver import DEFAULT_BUDGET

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shape(text: str) -> tuple[int, int]:
    try:
        r, p = text.lower().split("x")
        return int(r), int(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWSxOUTPUTS, got {text!r}") from None


def _q_range(text: str) -> tuple[float, ...]:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError("expected START:STOP:COUNT") from None
    if n == 1:
        return (a,)
    return tuple(a + (b - a) * i / (n - 1) for i in range(n))


def _group(text: str) -> tuple[int, int, int]:
    try:
        n, s, f = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected N:S:F") from None
    return n, s, f


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=MODES, default="exact_binomial")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--jobs", type=int, default=1)

    parser = _Parser(prog="lutcode", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", parents=[common], help="minimal code for a truth table")
    p.add_argument("input")
    p.add_argument("--max-extra", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--baseline", action="store_true",
                   help="default Hamming code (DC cells set to 0)")
    p.add_argument("--external-solver", action="store_true",
                   help="solve through the DIMACS command in $LUTCODE_SOLVER")

    p = sub.add_parser("oracle", parents=[common], help="brute-force minimal code")
    p.add_argument("input")
    p.add_argument("--max-free-bits", type=int, default=OracleLimits.max_free_bits)
    p.add_argument("--max-columns", type=int, default=OracleLimits.max_columns)

    p = sub.add_parser("verify", parents=[common], help="check a CodeResult file")
    p.add_argument("input")

    p = sub.add_parser("yield", parents=[common], help="analytic chip yield")
    p.add_argument("--group", type=_group, action="append", required=True,
                   help="N:S:F data width, parity width, row count (repeatable)")
    p.add_argument("--q", type=float, action="append", required=True)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo yield of code files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--trials", type=int, default=10**5)

    p = sub.add_parser("export-cnf", parents=[common], help="DIMACS feasibility instance")
    p.add_argument("input")
    p.add_argument("--extra", type=int, default=0)

    p = sub.add_parser("oracle-check", parents=[common],
                       help="compare SAT search with the brute-force oracle")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-rows", type=int, default=8)
    p.add_argument("--max-outputs", type=int, default=3)
    p.add_argument("--max-dc", type=float, default=0.5)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("fig2", parents=[common], help="redundancy reduction study")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--shapes", type=_shape, nargs="+", default=[(8, 3), (16, 4)])
    p.add_argument("--dc-fraction", type=float, default=0.5)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    for name in ("fig3", "fig4"):
        p = sub.add_parser(name, parents=[common], help="chip yield vs defect probability")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--q", type=float, action="append")
        g.add_argument("--q-range", type=_q_range)
        p.add_argument("--mc", type=int, default=0, metavar="TRIALS")
        p.add_argument("--mc-blocks", type=int, default=64)

    p = sub.add_parser("fig5", parents=[common], help="block yield vs block size")
    p.add_argument("--q", type=float, action="append")
    p.add_argument("--sizes", type=int, nargs="+")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_tables(args, tables: list[Table]) -> None:
    if args.format == "json":
        payload = {t.name: t.as_dict() for t in tables}
        _emit(args, to_json(payload))
        return
    if args.out and len(tables) > 1:
        out = Path(args.out)
        out.write_text(tables[0].csv(), encoding="utf-8")
        for t in tables[1:]:
            suffix = t.name.split("-", 1)[-1]
            out.with_name(f"{out.stem}-{suffix}{out.suffix}").write_text(t.csv(), encoding="utf-8")
        return
    _emit(args, "\n".join(t.csv() for t in tables))


def _cmd_encode(args) -> int:
    lut = parse_truth_table(_read(args.input))
    if args.baseline:
        zeros = [0] * lut.dc_count
        result = baseline_code(complete(lut, zeros), lut, zeros)
    else:
        external = None
        if args.external_solver:
            external = os.environ.get("LUTCODE_SOLVER")
            if not external:
                raise UsageError("--external-solver needs LUTCODE_SOLVER to be set")
        result = find_min_code(lut, args.budget, args.max_extra, external)
    report = verify_code(result)
    if not report.ok:
        print("\n".join(report.lines()), file=sys.stderr)
        return EXIT_VERIFY
    _emit(args, dump_code_result(result))
    print(f"k = {result.k}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    lut = parse_truth_table(_read(args.input))
    result = brute_force_min_code(lut, OracleLimits(args.max_free_bits, args.max_columns))
    _emit(args, dump_code_result(result))
    print(f"k = {result.k}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    text = _read(args.input)
    try:
        result = load_code_result(text)
    except CodeFormatError:
        raise
    except ValueError as exc:
        print(f"FAIL decoder matrix: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    report = verify_code(result)
    print("\n".join(report.lines()), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_simulate(args) -> int:
    blocks = []
    for path in args.inputs:
        try:
            blocks.append(load_code_result(_read(path)))
        except CodeFormatError:
            raise
        except ValueError as exc:
            raise CodeFormatError(f"{path}: {exc}") from None
    chip, per_block = simulate_yield(blocks, args.q, args.trials, args.seed, args.jobs)
    rows = [{"block": "chip", "estimate": chip.estimate, "successes": chip.successes,
             "trials": chip.trials, "std_error": chip.std_error}]
    for path, est in zip(args.inputs, per_block):
        rows.append({"block": path, "estimate": est.estimate, "successes": est.successes,
                     "trials": est.trials, "std_error": est.std_error})
    table = Table("simulate", ("block", "estimate", "successes", "trials", "std_error"), rows,
                  {"q": args.q, "trials": args.trials, "seed": args.seed})
    _emit_tables(args, [table])
    return EXIT_OK


def _cmd_export_cnf(args) -> int:
    lut = parse_truth_table(_read(args.input))
    if args.extra < 0:
        raise UsageError("--extra must be >= 0")
    _emit(args, to_dimacs(build_feasibility_cnf(lut, args.extra)))
    return EXIT_OK


def _cmd_figure(args) -> int:
    cmd = args.command
    if cmd == "fig2":
        cfg = ExperimentConfig("fig2", samples=args.samples, shapes=tuple(args.shapes),
                               dc_fraction=args.dc_fraction, seed=args.seed,
                               mode=args.mode, budget=args.budget, jobs=args.jobs)
        _emit_tables(args, list(run_fig2(cfg)))
    elif cmd in ("fig3", "fig4"):
        qs = tuple(args.q or args.q_range or ())
        cfg = ExperimentConfig(cmd, q_values=qs, seed=args.seed, mode=args.mode,
                               mc_trials=args.mc, mc_blocks=args.mc_blocks, jobs=args.jobs)
        _emit_tables(args, [run_fig3_fig4(cfg)])
    else:
        cfg = ExperimentConfig("fig5", q_values=tuple(args.q or ()), mode=args.mode,
                               seed=args.seed, jobs=args.jobs)
        if args.sizes:
            cfg.sizes = tuple(args.sizes)
        _emit_tables(args, [run_fig5(cfg)])
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    if args.samples < 1 or args.max_rows < 1 or args.max_outputs < 1:
        raise UsageError("--samples, --max-rows and --max-outputs must be >= 1")
    if not 0.0 <= args.max_dc <= 1.0:
        raise UsageError("--max-dc must lie in [0, 1]")
    table = run_oracle_check(args.samples, args.seed, args.max_rows, args.max_outputs,
                             args.max_dc, args.budget, args.jobs)
    _emit_tables(args, [table])
    agreement = table.meta["agreement"]
    print(f"agreement = {agreement:.4f}", file=sys.stderr)
    return EXIT_OK if agreement == 1.0 else EXIT_VERIFY


def _cmd_yield(args) -> int:
    _emit_tables(args, [yield_table(args.group, args.q, args.mode)])
    return EXIT_OK


COMMANDS = {
    "encode": _cmd_encode,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
    "yield": _cmd_yield,
    "simulate": _cmd_simulate,
    "export-cnf": _cmd_export_cnf,
    "oracle-check": _cmd_oracle_check,
    "fig2": _cmd_figure,
    "fig3": _cmd_figure,
    "fig4": _cmd_figure,
    "fig5": _cmd_figure,
}


def cli_main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lutcode: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LutFormatError, CodeFormatError, UnicodeDecodeError) as exc:
        print(f"lutcode: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"lutcode: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SearchBudgetExceeded, NoCodeFound) as exc:
        print(f"lutcode: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OracleCapExceeded as exc:
        print(f"lutcode: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"lutcode: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())
