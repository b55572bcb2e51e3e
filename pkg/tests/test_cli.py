import json
import subprocess
import sys
from importlib.resources import files

import jsonschema
import pytest

from secondbest.cli import main, parse_literal
from secondbest.cf import CFExpansion
from secondbest.exactnum import QuadSurd

SCHEMA = json.loads(files("secondbest").joinpath("schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_kconst_text(capsys):
    code, out, _ = run(capsys, "kconst", "2;(1,1,3,1,1,1,1,3)")
    assert code == 0
    first = out.splitlines()[0]
    assert "164/(13√173)" in first and "0.959129" in first


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", "(1+sqrt(17))/2")
    assert code == 0 and out.strip() == "2;(1,1,3)"


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0 and out.strip().endswith("overall: PASS")
    code, doc = run_json(capsys, "verify-paper")
    assert code == 0 and doc["status"] == "ok" and doc["result"]["passed"]


@pytest.mark.parametrize(
    "argv",
    [
        ("expand", "(39+13*sqrt(173))/82"),
        ("value", "0;1,1,(3,1)"),
        ("value", "(1+sqrt(5))/2"),
        ("convergents", "(1+sqrt(17))/2", "--n-max", "4"),
        ("psi", "(1+sqrt(5))/2", "--t-max", "100"),
        ("psi2", "2;(1,1,3)", "--t-max", "500"),
        ("psi", "1.41421356237", "--t-max", "50"),
        ("liminf", "(1+sqrt(5))/2", "--t-max", "1000", "--kind", "lagrange"),
        ("liminf", "2;(1,1,3)", "--t-max", "2000"),
        ("kconst", "2;(1,1,3,1,1,1,1,3)"),
        ("kconst", "1;(1)"),
        ("classify", "2;(1,1,3,1,1,1,1,3,1,1,1,1,3)"),
        ("classify", "sqrt(2)"),
        ("audit", "--max-len", "4"),
    ],
)
def test_json_validates(capsys, argv):
    code, doc = run_json(capsys, *argv)
    assert code == 0
    assert doc["command"] == argv[0] and doc["status"] == "ok"


def test_value_of_expand_roundtrip(capsys):
    for text in ["(1+sqrt(17))/2", "(39+13*sqrt(173))/82", "(-3+sqrt(21))/6", "sqrt(2)"]:
        _, expanded, _ = run(capsys, "expand", text)
        _, out, _ = run(capsys, "value", expanded.strip())
        assert out.splitlines()[0] == text


def test_json_contents(capsys):
    _, doc = run_json(capsys, "value", "0;1,1,(3,1)")
    v = doc["result"]["value"]
    assert v["exact"] == "(1+sqrt(21))/10" and v["json"] == {"p": 1, "q": 1, "d": 21, "r": 10}
    _, doc = run_json(capsys, "convergents", "1;(1)", "--n-max", "4")
    assert [(c["p"], c["q"]) for c in doc["result"]["convergents"]] == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]
    _, doc = run_json(capsys, "psi2", "1;(1)", "--t-max", "2")
    assert doc["result"]["sample"]["q"] == 2 and doc["result"]["sample"]["p"] == 4
    _, doc = run_json(capsys, "classify", "3;(3,3)")
    assert doc["result"]["classification"]["verdict"] == "4.1"


def test_csv_output(capsys, tmp_path):
    path = tmp_path / "bp.csv"
    code, _, _ = run(capsys, "psi", "1;(1)", "--t-max", "20", "--csv", str(path))
    assert code == 0
    assert path.read_text().splitlines()[1].startswith("1,")


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "value", "sqrt(2)", "--precision", "5")
    assert out.splitlines()[1] == "1.41421"


@pytest.mark.parametrize(
    "argv",
    [
        ("value", "1+"),
        ("value", "2;(1,,3)"),
        ("expand", "2;(1,1,3)"),
        ("kconst", "0.5"),
    ],
)
def test_parse_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "parse error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("bogus",),
        ("value",),
        ("liminf", "1;(1)", "--t-max", "50"),
        ("audit", "--max-len", "17"),
        ("value", "1;(1)", "--precision", "0"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == 2


def test_downstream_error_exit_1(capsys):
    code, _, err = run(capsys, "kconst", "7/3")
    assert code == 1 and "kconst" in err
    code, _, err = run(capsys, "psi", "1;(1)", "--t-max", "100000", "--precision", "5")
    assert code == 1 and "PrecisionInsufficient" in err


def test_parse_literal_kinds():
    assert isinstance(parse_literal("2;(1,1,3)"), CFExpansion)
    assert isinstance(parse_literal("[0;1,1,(3,1)]"), CFExpansion)
    assert isinstance(parse_literal("(1+sqrt(5))/2"), QuadSurd)
    assert parse_literal("0.25") == "0.25"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "secondbest", "expand", "sqrt(2)"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "1;(2)"


def test_package_doctest():
    import doctest

    import secondbest

    assert doctest.testmod(secondbest).failed == 0
