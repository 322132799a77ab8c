import json
from importlib.resources import files

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfq.cli import syntax as S
from pfq.cli.main import main
from pfq.cli.runner import exit_code, run, strip_timing
from pfq.cli.syntax import ScriptSyntaxError, parse, print_script
from pfq.oracles import SearchBudget

SCENARIOS = sorted(p for p in files("pfq").joinpath("scenarios").iterdir() if p.name.endswith(".pfq"))


def test_parse_examples():
    s = parse("field K = laurent(Q, x, y)")
    (decl,) = s.statements
    assert isinstance(decl, S.FieldDecl) and decl.name == "K"
    s = parse("field K = laurent(Q, x, y)\nlet p1 = pf[2, 3] over K")
    assert isinstance(s.statements[1], S.Let)
    s = parse("isotropic diag(1,1,-1) over Q expect yes")
    (cmd,) = s.statements
    assert isinstance(cmd, S.Command) and cmd.verb == "isotropic"
    assert [e.kind for e in cmd.expects] == ["yes"]


def test_syntax_errors_carry_position():
    with pytest.raises(ScriptSyntaxError) as err:
        parse("field K = Q\nisotropic diag(1, 1 -1 expect yes")
    assert err.value.line == 2 and err.value.col > 1 and err.value.expected
    with pytest.raises(ScriptSyntaxError):
        parse("frobnicate 3")


def test_unknown_names_are_parse_errors():
    with pytest.raises(ScriptSyntaxError):
        parse("isotropic diag(1, z) expect yes")
    with pytest.raises(ScriptSyntaxError):
        parse("witt expand(q)")
    with pytest.raises(ScriptSyntaxError):
        parse("isotropic diag(1) over K")


def test_scope_follows_current_field():
    s = parse("field K = F2(x, y)\nlet p = pf[x; y] | 1\nlinked-insep 1 p p expect yes")
    assert len(s.statements) == 3


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.name)
def test_print_parse_round_trip(path):
    ast = parse(path.read_text())
    printed = print_script(ast)
    assert parse(printed) == ast
    assert print_script(parse(printed)) == printed


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.name)
def test_shipped_scenarios_pass(path):
    report = run(parse(path.read_text()))
    bad = [s for s in report["statements"] if s["status"] in ("fail", "error")]
    assert not bad, bad
    assert exit_code(report) == 0


def test_reals_counterexample_report():
    path = next(p for p in SCENARIOS if p.name == "reals_counterexample.pfq")
    report = run(parse(path.read_text()))
    inv = next(s for s in report["statements"] if s["statement"].startswith("invariant"))
    assert inv["result"]["value"] == "pf[-1, -1, -1] | 1"
    assert inv["result"]["verdict"] == "no"


def test_empty_script_passes():
    report = run(parse(""))
    assert report["schema"] == 1 and report["statements"] == []
    assert exit_code(report) == 0


def test_wrong_expectation_fails():
    report = run(parse("isotropic diag(1, 1, -1) over Q expect no"))
    assert report["summary"]["failed"] == 1
    assert exit_code(report) == 1


def test_runtime_errors_are_captured():
    report = run(parse("invariant 1 pf[2, 3] | 1 pf[2, 5] | 1\nisotropic diag(1, -1) expect yes"))
    first, second = report["statements"]
    assert first["status"] == "error" and "SharedSlotMismatch" in first["error"]
    assert second["status"] == "pass"
    assert exit_code(report) == 2
    report = run(parse("invariant 1 pf[2, 3] | 1 pf[2, 5] | 1 expect error"))
    assert exit_code(report) == 0


def test_unknown_expectation_is_first_class():
    text = "field K = F2(x, y)\nhyperbolic pf[x; y] expect unknown"
    report = run(parse(text), budget=SearchBudget(1, 10, 2000))
    assert exit_code(report) == 0


def test_certificates_serialize_as_strings():
    report = run(parse("isotropic diag(1, 1, -1) over Q"))
    cert = report["statements"][0]["result"]["certificate"]
    assert cert == ["1", "0", "1"]
    json.dumps(report)


@given(seed=st.integers(0, 1000))
def test_reports_are_deterministic(seed):
    text = "field K = laurent(Fp(5), x, y)\nverify thm51 --count 2 --seed 1\nverify invariance --count 2 --seed 4"
    a = strip_timing(run(parse(text), seed=seed))
    b = strip_timing(run(parse(text), seed=seed))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "timing_ms" not in json.dumps(a)


def test_main_run_and_json(tmp_path, capsys):
    script = tmp_path / "s.pfq"
    script.write_text("isotropic diag(1, 1, -1) expect yes\n")
    out = tmp_path / "r.json"
    assert main(["run", str(script), "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema"] == 1 and data["summary"]["passed"] == 1
    capsys.readouterr()
    assert main(["run", str(script), "--json", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["schema"] == 1


def test_main_exit_codes(tmp_path):
    bad = tmp_path / "bad.pfq"
    bad.write_text("isotropic diag(1, 1, -1) expect no\n")
    assert main(["run", str(bad)]) == 1
    broken = tmp_path / "broken.pfq"
    broken.write_text("isotropic diag(1,\n")
    assert main(["run", str(broken)]) == 2
    assert main(["run", str(tmp_path / "missing.pfq")]) == 2


def test_main_fmt(tmp_path, capsys):
    script = tmp_path / "s.pfq"
    script.write_text("isotropic   diag(1,1,  -1)   expect yes\n")
    assert main(["fmt", str(script)]) == 0
    assert capsys.readouterr().out == "isotropic diag(1, 1, -1) expect yes\n"


def test_repl(monkeypatch, capsys):
    lines = iter(["field K = Q", "dim pf[2, 3]", "isotropic diag(1, z)", "quit"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    assert main(["repl"]) == 0
    out = capsys.readouterr().out
    assert '"value": "4"' in out and "error:" in out
