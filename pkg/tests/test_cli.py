import json

import jsonschema
import pytest

from adrdbc import dsl
from adrdbc.cli import main
from adrdbc.logic import equivalent

from conftest import ALPHABET, FIXTURES

EX1 = str(FIXTURES / "example1.adr")
STYLE = str(FIXTURES / "style.adr")
GOLDEN_TEXT = "no C & (forall B(x,y). forall C(z). no C) & (forall B(x,y). forall C(z). y = z)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def extra(tmp_path):
    text = (FIXTURES / "example1.adr").read_text() + """
formula open_post = forall B(x,y). y = w;
formula uses_no = forall B(x,y). no C;
formula refl = forall B(x,y). x = x;
formula trivial = true;
"""
    path = tmp_path / "extra.adr"
    path.write_text(text)
    return str(path)


def test_wp_golden(capsys):
    code, out, _ = run(capsys, "wp", EX1, "p", "phi")
    assert code == 0 and out.strip() == GOLDEN_TEXT


def test_wp_json_validates(capsys):
    code, out, _ = run(capsys, "wp", EX1, "p", "phi", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, dsl.json_schema())
    assert data["text"] == GOLDEN_TEXT


def test_wp_free_variable_is_input_error(capsys, extra):
    code, _, err = run(capsys, "wp", extra, "p", "open_post")
    assert code == 1 and "post-condition must be closed" in err


def test_wp_fragment_error(capsys, extra):
    code, _, err = run(capsys, "wp", extra, "p", "uses_no")
    assert code == 2 and "error:" in err


def test_wp_feasible_mode_equivalent(capsys):
    _, literal, _ = run(capsys, "wp", EX1, "p", "phi")
    _, feasible, _ = run(capsys, "wp", EX1, "p", "phi", "--mode", "feasible")
    types = {t.name: t for t in ALPHABET}
    f1 = dsl.parse_formula(literal.strip(), types)
    f2 = dsl.parse_formula(feasible.strip(), types)
    assert equivalent(f1, f2, ALPHABET, 3, 3)


def test_unknown_names_and_files(capsys, tmp_path):
    assert run(capsys, "wp", EX1, "nope", "phi")[0] == 1
    assert run(capsys, "wp", str(tmp_path / "missing.adr"), "p", "phi")[0] == 1
    bad = tmp_path / "bad.adr"
    bad.write_text("type B/2;\ngraph g { node n1; edge e: B(n1); }\n")
    code, _, err = run(capsys, "wp", str(bad), "p", "phi")
    assert code == 1 and "2:" in err and "arity" in err


def test_check_soundness_holds(capsys):
    code, out, _ = run(capsys, "check", EX1, "ex1")
    assert code == 0 and "status: holds" in out and "graphs_checked: 1002" in out


def test_check_validity_reports_counterexample(capsys):
    code, out, _ = run(capsys, "check", STYLE, "bottom", "--theorem", "validity")
    assert code == 3 and "status: fails" in out
    assert "graph counterexample" in out and "# match: refine at edge" in out


def test_check_weakest(capsys):
    code, out, _ = run(capsys, "check", EX1, "ex1", "--theorem", "weakest")
    # pre true does not make the triple valid, so the check does not apply
    assert code == 3 and "status: not-applicable" in out


def test_check_zero_bounds(capsys):
    code, out, _ = run(capsys, "check", STYLE, "bottom", "--theorem", "validity",
                       "--max-nodes", "0", "--max-edges", "0")
    assert code == 0 and "graphs_checked: 1" in out
    assert run(capsys, "check", EX1, "ex1", "--max-nodes", "-1")[0] == 1


def test_apply_is_deterministic(capsys, monkeypatch):
    argv = ("apply", EX1, "single", "p", "--at", "e")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "edge b_1: B(n, u_1);" in first
    monkeypatch.setenv("ADR_SEED", "5")
    _, seeded, _ = run(capsys, *argv)
    assert "u_5" in seeded
    assert "u_7" in run(capsys, *argv, "--seed", "7")[1]


def test_apply_unknown_edge(capsys):
    code, _, err = run(capsys, "apply", EX1, "single", "p", "--at", "zz")
    assert code == 1 and "not a match" in err


def test_recover(capsys):
    code, out, _ = run(capsys, "recover", STYLE, "conformant", "refined")
    assert code == 0 and "steps: 0" in out
    code, out, _ = run(capsys, "recover", STYLE, "pending", "refined")
    assert code == 0 and "steps: 1" in out and "refine_ok (refine) at edge e" in out
    code, out, _ = run(capsys, "recover", STYLE, "pending", "refined", "--max-depth", "0")
    assert code == 4 and "no plan" in out


def test_equiv(capsys, extra):
    code, out, _ = run(capsys, "equiv", extra, "refl", "trivial")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "equiv", extra, "phi", "trivial")
    assert code == 3 and out.startswith("false") and "graph witness" in out
    assert run(capsys, "equiv", extra, "open_post", "trivial")[0] == 1


def test_enumerate(capsys, tmp_path):
    path = tmp_path / "c.adr"
    path.write_text("type C/1;\n")
    code, out, _ = run(capsys, "enumerate", str(path), "--max-nodes", "1", "--max-edges", "1")
    assert code == 0 and out.strip().endswith("count 3")
    assert out.count("graph g") == 3
