import json
from pathlib import Path

import jsonschema
import pytest

from ifcbridge.cli.main import main
from ifcbridge.cli.syntax import ParseError, parse_expr, parse_program, print_expr, print_program
from ifcbridge.harness import GenConfig
from ifcbridge.harness.report import input_names
from ifcbridge.harness.suites import gen_cg_program, gen_fg_program

from conftest import PROGRAMS

DOCS = Path(__file__).resolve().parent.parent / "docs"


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = cli(capsys, "run", "--json", *argv)
    return code, json.loads(out)


GOLDEN = [
    ("var.fg", [], 0, "()^H"),
    ("app.fg", [], 0, "()^L"),
    ("pair.fg", [], 0, "((()^L, ()^L))^L"),
    ("fs_upgrade.fg", [], 0, "false^H"),
    ("nsu_false.fg", [], 0, "true^L"),
    ("nsu_true.fg", ["--mutant", "drop-nsu"], 0, "true^H"),
    ("taint.cg", [], 0, "true"),
]


@pytest.mark.parametrize("name,extra,code,value", GOLDEN)
def test_golden_values(capsys, name, extra, code, value):
    got, result = run_json(capsys, PROGRAMS / name, *extra)
    assert got == code
    assert result["outcome"] == "final"
    assert result["value_sugar"] == value


def test_fs_upgrade_heap(capsys):
    _, result = run_json(capsys, PROGRAMS / "fs_upgrade.fg")
    assert result["heap"] == ["(inr ()^L)^H"]


@pytest.mark.parametrize("name,rule,check", [
    ("fi_upgrade.fg", "Write", "value-label <= memory-label"),
    ("nsu_true.fg", "Write-FS", "NSU"),
])
def test_golden_aborts(capsys, name, rule, check):
    code, result = run_json(capsys, PROGRAMS / name)
    assert code == 3
    assert (result["outcome"], result["rule"], result["check"]) == ("abort", rule, check)


def test_taint_pc(capsys):
    _, result = run_json(capsys, PROGRAMS / "taint.cg")
    assert result["pc"] == "H"


def test_translate_round_trips(capsys, tmp_path):
    code, out, _ = cli(capsys, "translate", "--dir", "cg2fg", PROGRAMS / "taint.cg")
    assert code == 0
    path = tmp_path / "taint.fg"
    path.write_text(out)
    _, result = run_json(capsys, path)
    assert result["value"] == "(inl ()^L)^H"
    assert result["value_sugar"] == "true^H"

    code, out, _ = cli(capsys, "translate", "--dir", "fg2cg", PROGRAMS / "pair.fg")
    path = tmp_path / "pair.cg"
    path.write_text(out)
    _, result = run_json(capsys, path)
    assert (result["pc"], result["value"]) == ("L", "Labeled L (Labeled L (), Labeled L ())")


def test_human_output(capsys):
    code, out, _ = cli(capsys, "run", PROGRAMS / "fs_upgrade.fg")
    assert code == 0
    assert out.splitlines()[0] == "value false^H"


def test_usage_errors(capsys, tmp_path):
    assert cli(capsys, "run")[0] == 2
    assert cli(capsys, "frobnicate")[0] == 2
    assert cli(capsys, "run", tmp_path / "missing.fg")[0] == 2
    assert cli(capsys, "run", "--pc", "M", PROGRAMS / "var.fg")[0] == 2
    assert cli(capsys, "run", "--mutant", "drop-new-pc", PROGRAMS / "var.fg")[0] == 2
    bad = tmp_path / "bad.fg"
    bad.write_text("(main (case unit x x x x))")
    assert cli(capsys, "run", bad)[0] == 2
    broken = tmp_path / "broken.fg"
    broken.write_text("(main (pair unit")
    assert cli(capsys, "run", broken)[0] == 2


def test_timeout_exit_code(capsys):
    assert cli(capsys, "run", "--fuel", "1", PROGRAMS / "fs_upgrade.fg")[0] == 4


def test_case_on_unit_is_rejected():
    from ifcbridge.fg import typecheck_fg
    from ifcbridge.typing_errors import TypeCheckError

    with pytest.raises((ParseError, TypeCheckError)):
        typecheck_fg((), parse_expr("(case unit x x x x)", "fg"))


def test_check_leq(capsys, tmp_path):
    code, out, _ = cli(capsys, "check-leq", "--json", PROGRAMS / "nsu_false.fg", PROGRAMS / "nsu_false.fg")
    report = json.loads(out)
    assert code == 0 and report["initial_equivalent"] and report["equivalent"]
    # both runs at the same secret input only differ in a secret
    other = tmp_path / "public_true.fg"
    other.write_text((PROGRAMS / "nsu_false.fg").read_text().replace("(^ true L)", "(^ false L)"))
    code, out, _ = cli(capsys, "check-leq", "--json", PROGRAMS / "nsu_false.fg", other)
    report = json.loads(out)
    assert code == 1 and not report["initial_equivalent"] and report["equivalent"] is False
    code, _, _ = cli(capsys, "check-leq", PROGRAMS / "nsu_false.fg", PROGRAMS / "nsu_true.fg")
    assert code == 3


def test_prop(capsys):
    code, out, err = cli(capsys, "prop", "--suite", "tini-fg", "--trials", "20", "--seed", "7")
    report = json.loads(out)
    assert code == 0 and report["passed"] and "tini-fg" in err
    code, out, _ = cli(capsys, "prop", "--mutant", "drop-nsu", "--trials", "5")
    report = json.loads(out)
    assert code == 1
    assert "corpus/branch-write-S" in report["failure_seeds"]
    assert report["failures"][0]["program"]
    assert cli(capsys, "prop", "--suite", "nope")[0] == 2
    assert cli(capsys, "prop")[0] == 2


def test_schemas(capsys):
    run_schema = json.loads((DOCS / "run_result.schema.json").read_text())
    suite_schema = json.loads((DOCS / "suite_report.schema.json").read_text())
    for name in ("var.fg", "fi_upgrade.fg", "taint.cg"):
        _, result = run_json(capsys, PROGRAMS / name)
        jsonschema.validate(result, run_schema)
    _, result = run_json(capsys, "--fuel", "1", PROGRAMS / "var.fg")
    jsonschema.validate(result, run_schema)
    _, out, _ = cli(capsys, "prop", "--mutant", "drop-nsu", "--trials", "5")
    jsonschema.validate(json.loads(out), suite_schema)


def test_json_is_deterministic(capsys):
    outs = [json.loads(cli(capsys, "prop", "--suite", "tini-cg", "--trials", "15")[1]) for _ in range(2)]
    for o in outs:
        o.pop("duration")
    assert outs[0] == outs[1]
    runs = [cli(capsys, "run", "--json", PROGRAMS / "taint.cg")[1] for _ in range(2)]
    assert runs[0] == runs[1]


@pytest.mark.parametrize("path", sorted(PROGRAMS.iterdir()), ids=lambda p: p.name)
def test_program_round_trip(path):
    calc = path.suffix[1:]
    prog = parse_program(path.read_text(), calc)
    again = parse_program(print_program(prog), calc, prog.lattice)
    assert again.main == prog.main and again.inputs == prog.inputs and again.pc == prog.pc


@pytest.mark.parametrize("calculus", ["fg", "cg"])
def test_term_round_trip(calculus):
    cfg = GenConfig(seed=8, max_size=20)
    gen = gen_fg_program if calculus == "fg" else gen_cg_program
    for i in range(150):
        ctx, _, e = gen(cfg, cfg.trial_rng(i))
        names = input_names(len(ctx))
        text = print_expr(calculus, e, names, cfg.lat)
        assert parse_expr(text, calculus, cfg.lat, names) == e
