"""Command-line driver: run, translate, check-leq and prop."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .. import cg, fg
from ..harness import MUTANTS, GenConfig, SUITES, run_suite
from ..harness.report import outcome_json
from ..lattice import LatticeError, lattice_load
from ..security import Bijection, NotInjective, find_bijection
from ..security.equiv import CGInitial, FGInitial, leq_cg_initial, leq_fg_initial
from ..state import SecurityAbort, Stuck, Timeout
from ..translate import (
    cg2fg_env, cg2fg_expr, cg2fg_heap, cg2fg_store, cg2fg_type, fg2cg_expr, fg2cg_heap,
    fg2cg_store, fg2cg_type, fg2cg_value,
)
from ..types import LIO
from ..typing_errors import TypeCheckError
from .syntax import ParseError, SourceProgram, parse_program, print_program

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_ABORT = 3
EXIT_TIMEOUT = 4


class UsageError(Exception):
    pass


def _calculus(path: str, flag: str | None) -> str:
    if flag:
        return flag
    suffix = Path(path).suffix.lstrip(".")
    if suffix in ("fg", "cg"):
        return suffix
    raise UsageError(f"{path}: cannot tell the calculus from the extension; pass --calculus")


def load_program(path: str, args: argparse.Namespace, lattice=None) -> SourceProgram:
    calculus = _calculus(path, args.calculus)
    if lattice is None and args.lattice:
        lattice = lattice_load(args.lattice)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    prog = parse_program(text, calculus, lattice)
    if args.lattice:
        prog.lattice_ref = args.lattice
    if args.pc:
        if args.pc not in prog.lattice:
            raise UsageError(f"--pc {args.pc} is not a point of the lattice")
        prog.pc = prog.lattice[args.pc]
    return prog


def typecheck(prog: SourceProgram):
    check = fg.typecheck_fg if prog.calculus == "fg" else cg.typecheck_cg
    return check(prog.ctx, prog.main)


def run_program(prog: SourceProgram, fuel: int, mutant: str | None = None):
    t = typecheck(prog)
    if prog.calculus == "fg":
        return fg.eval_fg(prog.store, prog.heap, prog.main, prog.env, prog.pc, fuel, mutant=mutant)
    if isinstance(t, LIO):
        return cg.eval_force(prog.store, prog.heap, prog.pc, prog.main, prog.env, fuel, mutant=mutant)
    # pure terms leave the state and pc alone
    o = cg.eval_pure(prog.main, prog.env, fuel)
    if isinstance(o, cg.PureFinal):
        return cg.CGFinal(prog.store, prog.heap, prog.pc, o.value, o.fuel_used)
    return o


def run_result(prog: SourceProgram, outcome) -> dict[str, Any]:
    return {"calculus": prog.calculus, "lattice": prog.lattice_ref, "initial_pc": prog.pc.name,
            **outcome_json(prog.calculus, outcome)}


def _exit_for(outcome) -> int:
    match outcome:
        case SecurityAbort():
            return EXIT_ABORT
        case Timeout():
            return EXIT_TIMEOUT
        case Stuck():
            return EXIT_FAIL
    return EXIT_OK


def _emit(data: dict[str, Any]) -> None:
    print(json.dumps(data, indent=2, ensure_ascii=False))


def _describe(result: dict[str, Any]) -> str:
    match result["outcome"]:
        case "final":
            pc = f"  (pc {result['pc']})" if result.get("pc") else ""
            return f"value {result['value_sugar']}{pc}"
        case "abort":
            return f"security abort in {result['rule']}: {result['check']}"
        case "stuck":
            return f"stuck: {result['reason']}"
    return "timeout"


def cmd_run(args: argparse.Namespace) -> int:
    prog = load_program(args.program, args)
    if args.mutant and MUTANTS[args.mutant][0] != prog.calculus:
        raise UsageError(f"mutant {args.mutant} targets the other calculus")
    outcome = run_program(prog, args.fuel, args.mutant)
    result = run_result(prog, outcome)
    if args.json:
        _emit(result)
    else:
        print(_describe(result))
        if result["outcome"] == "final":
            for lab, cells in result["store"].items():
                print(f"  store {lab}: {', '.join(cells)}")
            for i, cell in enumerate(result["heap"]):
                print(f"  heap {i}: {cell}")
    return _exit_for(outcome)


def translate_program(prog: SourceProgram, direction: str) -> SourceProgram:
    if direction == "fg2cg":
        if prog.calculus != "fg":
            raise UsageError("fg2cg expects an FG program")
        inputs = [(n, fg2cg_type(t), fg2cg_value(v)) for n, t, v in prog.inputs]
        return SourceProgram("cg", prog.lattice, prog.lattice_ref, prog.pc, inputs,
                             fg2cg_store(prog.store), fg2cg_heap(prog.heap), fg2cg_expr(prog.main))
    if prog.calculus != "cg":
        raise UsageError("cg2fg expects a CG program")
    env = cg2fg_env([v for _, _, v in prog.inputs], prog.pc)
    inputs = [(n, cg2fg_type(t), v) for (n, t, _), v in zip(prog.inputs, env)]
    main = cg2fg_expr(prog.main)
    if isinstance(typecheck(prog), LIO):
        main = fg.App(main, fg.Unit())  # force the suspension so running the output runs the source
    return SourceProgram("fg", prog.lattice, prog.lattice_ref, prog.pc, inputs,
                         cg2fg_store(prog.store), cg2fg_heap(prog.heap), main)


def cmd_translate(args: argparse.Namespace) -> int:
    prog = load_program(args.program, args)
    typecheck(prog)
    out = translate_program(prog, args.dir)
    text = print_program(out)
    if args.json:
        _emit({"direction": args.dir, "program": text})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_beta(text: str | None) -> Bijection:
    if not text:
        return Bijection.of(())
    try:
        pairs = [tuple(int(x) for x in item.split(":")) for item in text.split(",") if item.strip()]
        return Bijection.of(pairs)
    except (ValueError, NotInjective) as exc:
        raise UsageError(f"--beta expects pairs like 0:1,2:0 ({exc})") from exc


def cmd_check_leq(args: argparse.Namespace) -> int:
    first = load_program(args.programs[0], args)
    # one lattice object for both sides so their labels compare
    progs = [first, load_program(args.programs[1], args, first.lattice)]
    if progs[0].calculus != progs[1].calculus:
        raise UsageError("both programs must belong to the same calculus")
    if progs[0].lattice_ref != progs[1].lattice_ref:
        raise UsageError("both programs must use the same lattice")
    lattice = first.lattice
    attacker = args.attacker or ("L" if "L" in lattice else lattice.points[0].name)
    if attacker not in lattice:
        raise UsageError(f"--attacker {attacker} is not a point of the lattice")
    A = lattice[attacker]
    beta = _parse_beta(args.beta)
    outcomes = [run_program(p, args.fuel) for p in progs]
    if progs[0].calculus == "fg":
        initial = leq_fg_initial(A, beta, *(FGInitial(p.store, p.heap, p.main, p.env) for p in progs))
    else:
        initial = leq_cg_initial(A, beta, *(CGInitial(p.store, p.heap, p.pc, p.main, p.env) for p in progs))
    report: dict[str, Any] = {
        "attacker": A.name, "beta": repr(beta), "initial_equivalent": initial,
        "runs": [run_result(p, o) for p, o in zip(progs, outcomes)],
    }
    finals = all(isinstance(o, (fg.FGFinal, cg.CGFinal)) for o in outcomes)
    found = find_bijection(A, beta, *outcomes) if finals else None
    report["bijection"] = None if found is None else repr(found)
    report["equivalent"] = found is not None if finals else None
    if args.json:
        _emit(report)
    elif not finals:
        print("no verdict: " + "; ".join(_describe(r) for r in report["runs"]))
    elif found is None:
        print("not equivalent")
    else:
        print(f"equivalent under {found!r}")
    if not finals:
        return max(_exit_for(o) for o in outcomes)
    return EXIT_OK if found is not None else EXIT_FAIL


def cmd_prop(args: argparse.Namespace) -> int:
    suite = args.suite
    if suite is None:
        if not args.mutant:
            raise UsageError("prop needs --suite (or --mutant, which picks its designated suite)")
        suite = MUTANTS[args.mutant][1]
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(sorted(SUITES))}")
    cfg = GenConfig(seed=args.seed, trials=args.trials, max_size=args.size, fuel=args.fuel,
                    lattice=args.lattice or "two-point", attacker=args.attacker or "L",
                    mutant=args.mutant)
    try:
        cfg.A
    except LatticeError as exc:
        raise UsageError(str(exc)) from exc
    try:
        report = run_suite(suite, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(report.to_json())
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", help="builtin lattice name (two-point, powerset:k) or JSON file")
    common.add_argument("--pc", help="initial program counter label")
    common.add_argument("--fuel", type=int, default=10_000, help="evaluation step budget")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--calculus", choices=("fg", "cg"), help="override the file extension")

    parser = argparse.ArgumentParser(prog="ifcbridge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="evaluate a program")
    p.add_argument("program")
    p.add_argument("--mutant", choices=sorted(MUTANTS))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("translate", parents=[common], help="translate a program to the other calculus")
    p.add_argument("program")
    p.add_argument("--dir", choices=("fg2cg", "cg2fg"), required=True)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("check-leq", parents=[common], help="run two programs and compare the results")
    p.add_argument("programs", nargs=2)
    p.add_argument("--attacker", help="attacker level (default L)")
    p.add_argument("--beta", help="initial bijection as pairs a:b separated by commas")
    p.set_defaults(func=cmd_check_leq)

    p = sub.add_parser("prop", parents=[common], help="run a property suite")
    p.add_argument("--suite", help=f"one of {', '.join(sorted(SUITES))}")
    p.add_argument("--attacker", help="attacker level (default L)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1_000)
    p.add_argument("--size", type=int, default=20, help="maximum generated term size")
    p.add_argument("--mutant", choices=sorted(MUTANTS))
    p.set_defaults(func=cmd_prop, fuel=5_000)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"{getattr(args, 'program', '')}: parse error: {exc}", file=sys.stderr)
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
    except (UsageError, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
