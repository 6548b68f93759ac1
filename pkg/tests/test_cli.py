import json
import subprocess
import sys

import pytest

from freealg.cli import main, parse_expression, run
from freealg.errors import BadGenerator
from conftest import Q


def cli(*argv):
    doc, code, _ = run(["--json", *argv])
    assert doc["v"] == 1
    assert code == (0 if doc["ok"] else 1)
    return doc


def test_parse_expression():
    f = parse_expression("2*x1*x2^2 + 3", 2, Q)
    assert len(f.terms) == 2
    assert not parse_expression("x1*x2 - x2*x1", 2, Q).is_zero()
    with pytest.raises(BadGenerator):
        parse_expression("x3", 2, Q)


def test_poly_verbs():
    assert cli("poly", "mul", "x1+1", "x1-1")["result"] == "x1^2 - 1"
    assert cli("--rank", "1", "poly", "mul", "x1+1", "x1-1")["result"] == "x1^2 - 1"
    # operands that start with a minus sign go after --
    assert cli("poly", "add", "--", "x1*x2", "-x1*x2")["result"] == "0"
    assert cli("--field", "fp:3", "poly", "pow", "x1+1", "3")["result"] == "x1^3 + 1"


def test_error_documents():
    doc = cli("poly", "norm", "x3")
    assert doc["ok"] is False and doc["error"]["code"] == "BadGenerator"
    doc = cli("poly", "norm", "x1 +")
    assert doc["error"]["code"] == "SyntaxError"


def test_flags_after_the_verb():
    doc, code, as_json = run(["poly", "mul", "x1", "x2", "--json", "--rank", "3"])
    assert as_json and code == 0 and doc["result"] == "x1*x2"


def test_encode_decode_verbs():
    doc = cli("encode", "2*x1*x2 + 3")
    assert doc["text"] == "((3, 2), (ε, (1,2)))"
    back = cli("decode", json.dumps(doc["pair"]))
    assert back["result"] == "2*x1*x2 + 3"
    code = cli("encode", "--tuple", "4,9")["code"]
    assert cli("decode", "--code", str(code))["tuple"] == [4, 9]


def test_bigpowers_verbs():
    assert cli("bigpowers", "marker", "2")["word"] == [1, 2, 1, 2, 2]
    enc = cli("bigpowers", "encode", "x1; x2+1; x1-x2")
    dec = cli("bigpowers", "decode", enc["result"], "--marker", str(enc["marker"]))
    assert dec["factors"] == ["x1", "x2 + 1", "-x2 + x1"]
    tampered = "x1*(x1*x2)^3*(x2+1)*(x1*x2)^5*(x1-x2)"
    doc = cli("bigpowers", "decode", tampered, "--marker", "1")
    assert doc["error"]["code"] == "InconsistentExponents"


def test_centralizer_and_basis_verbs():
    doc = cli("centralizer", "x1^2", "--cap", "3")
    assert doc["generator"] == "x1" and doc["dimension"] == 4
    assert cli("centralizer", "x1", "--map", "x2", "3*x1^2+x1+5")["result"] == "3*x2^2 + x2 + 5"
    doc = cli("basis", "check", "--cap", "8", "x1+x2^2, x2")
    assert doc["verdict"] == "Yes" and doc["inverse"] == ["-x2^2 + x1", "x2"] and doc["rechecked"]
    doc = cli("basis", "check", "x1*x2, x2*x1")
    assert doc["verdict"] == "No" and doc["rechecked"]
    assert cli("basis", "witness", "x1, x2")["phi4"]["status"] == "Pass"


def test_formula_and_interp_verbs():
    assert "Irr" in cli("formula", "list")["names"]
    doc = cli("--field", "fp:2", "--rank", "1", "formula", "eval", "Irr", "--slice", "4", "--set", "x=t^2+t+1")
    assert doc["value"] == "True"
    assert cli("interp", "quotient", "z2_in_z4", "--mod", "4")["size"] == 2
    assert cli("interp", "verify", "z2_in_z4", "(exists (x) (= (* x x) x))", "--mod", "4")["agree"]


def test_selftest_quick_subset():
    doc = cli("selftest", "--quick", "--only", "1,5")
    assert doc["failed"] == 0 and doc["passed"] == 2


def test_main_exit_codes(capsys):
    assert main(["poly", "norm", "x1 + x1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "result: 2*x1"
    assert main(["poly", "norm", "x3"]) == 1
    assert "BadGenerator" in capsys.readouterr().err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "freealg", "--json", "poly", "mul", "x1+1", "x1-1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"] == "x1^2 - 1"
    bad = subprocess.run([sys.executable, "-m", "freealg", "poly", "norm", "x3"], capture_output=True, text=True)
    assert bad.returncode == 1
