import json

import pytest

from src.cli.commands import main
from src.cli.parsing import parse_factor_group, parse_prefactor, parse_product, parse_range
from src.core.products import PochhammerFactor
from src.utils.config import ORDER_ENV_VAR
from src.utils.data_loader import load_jsonl
from src.utils.errors import SpecSyntaxError
from tests.test_partitions import EVEN_149, ODD_149


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- mini-syntax ----------------------------------------------------------------

def test_factor_group():
    assert parse_factor_group("3,5:8", "--num") == [PochhammerFactor(3, 8), PochhammerFactor(5, 8)]
    assert parse_factor_group("-4,-5:9", "--den") == [PochhammerFactor(4, 9, -1), PochhammerFactor(5, 9, -1)]
    assert parse_factor_group("", "--num") == []


@pytest.mark.parametrize("text", ["3,5", "3,x:8", "3:0", ":8", "0:4"])
def test_factor_group_errors_name_the_flag(text):
    with pytest.raises(SpecSyntaxError, match="--num"):
        parse_factor_group(text, "--num")


def test_prefactor():
    assert parse_prefactor("-1:-2") == (-1, -2)
    with pytest.raises(SpecSyntaxError, match="--pre"):
        parse_prefactor("2:3")
    with pytest.raises(SpecSyntaxError):
        parse_prefactor("-1")


def test_product():
    spec = parse_product(["3,5:8"], ["1,7:8"], "-1:-2")
    assert str(spec) == "-q^-2*(q^3,q^5;q^8)/(q,q^7;q^8)"


def test_range():
    assert list(parse_range("2..6", "--k-range")) == [2, 3, 4, 5, 6]
    assert list(parse_range("5", "--k-range")) == [5]
    assert list(parse_range("6..2", "--k-range")) == []
    with pytest.raises(SpecSyntaxError, match="--m-range"):
        parse_range("2-6", "--m-range")


# --- expand -----------------------------------------------------------------------

def test_expand_text(capsys):
    code, out, _ = _run(capsys, "expand", "--num=3,5:8", "--den=1,7:8", "--order", "12")
    assert code == 0
    coeffs = dict(tuple(map(int, line.split())) for line in out.splitlines())
    assert sorted(coeffs) == list(range(12))
    assert coeffs[3] == coeffs[7] == coeffs[11] == 0
    assert coeffs[0] == 1


def test_expand_trivial_quotient(capsys):
    code, out, _ = _run(capsys, "expand", "--num=1:2", "--den=1:2", "--order", "10", "--compact")
    assert code == 0
    assert out.strip() == "1 + O(q^10)"
    _, out, _ = _run(capsys, "expand", "--num=1:2", "--den=1:2", "--order", "10", "--nonzero")
    assert out.strip() == "0 1"


def test_expand_json(capsys):
    code, out, _ = _run(capsys, "expand", "--den=2:4", "--order", "20", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["product"] == "1/(q^2;q^4)"
    assert data["valuation"] == 0 and data["order"] == 20
    assert all(int(c) >= 0 for _, c in data["coefficients"])


def test_expand_csv_with_prefactor(capsys):
    code, out, _ = _run(capsys, "expand", "--num=1:1", "--pre=-1:-2", "--order", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["exponent,coefficient", "-2,-1", "-1,1", "0,1", "1,0", "2,0"]


def test_expand_parse_error(capsys):
    code, _, err = _run(capsys, "expand", "--num=3,x:8")
    assert code == 2
    assert "error: --num" in err


# --- verify -----------------------------------------------------------------------

def test_verify_mclaughlin(capsys):
    code, out, _ = _run(capsys, "verify", "--family", "mcl", "-m", "2", "-k", "15", "-s", "0", "-t", "1",
                        "--order", "1000")
    assert code == 0
    assert "class 15n+14" in out
    assert "Alladi-Gordon counterpart" in out
    assert "Andrews-Bressoud counterpart: k=15 r=14" in out


def test_verify_andrews_bressoud_json(capsys):
    code, out, _ = _run(capsys, "verify", "--family", "ab", "-k", "6", "-r", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["zero_class"] == {"mod": 6, "res": 3}
    assert data["order"] == 1000
    assert data["verified"] is True


def test_verify_invalid_params(capsys):
    code, _, err = _run(capsys, "verify", "--family", "mcl", "-m", "2", "-k", "3", "-s", "1", "-t", "1")
    assert code == 2
    assert "gcd(r,k) != 1" in err


def test_verify_missing_params(capsys):
    code, _, err = _run(capsys, "verify", "--family", "ab", "-k", "6")
    assert code == 2
    assert "-r" in err


def test_json_is_deterministic(capsys):
    argv = ("verify", "--family", "ag", "-m", "2", "-k", "5", "-s", "7", "--order", "300", "--format", "json")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second


def test_usage_error(capsys):
    code, _, _ = _run(capsys, "verify", "--family", "nope")
    assert code == 2
    code, _, _ = _run(capsys)
    assert code == 2


# --- scan ---------------------------------------------------------------------------

def test_scan(capsys, tmp_path):
    output = tmp_path / "reports.jsonl"
    code, out, err = _run(capsys, "scan", "--family", "plus", "--m-range", "2..4", "--k-range", "2..4",
                          "--order", "300", "--output", str(output))
    assert code == 0
    summary = out.strip().splitlines()[-1]
    assert summary.endswith("0 violated (family plus, order 300)")
    checked = int(summary.split()[0])
    assert len(load_jsonl(str(output))) == checked
    assert "Skipped" in err


def test_recheck_scan_output(capsys, tmp_path):
    output = tmp_path / "reports.jsonl"
    _run(capsys, "scan", "--family", "minus", "--m-range", "2..3", "--k-range", "3..5", "--order", "200",
         "--output", str(output))
    rows = load_jsonl(str(output))
    code, out, _ = _run(capsys, "recheck", str(output), "--order", "400", "--verbose")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == f"{len(rows)} reports rechecked, 0 violated (order 400)"
    assert len(lines) == len(rows) + 1


def test_recheck_json_keeps_families(capsys, tmp_path):
    output = tmp_path / "ag.jsonl"
    _run(capsys, "scan", "--family", "ag", "--sign", "minus", "--m-range", "2", "--k-range", "5", "--order", "200",
         "--output", str(output))
    code, out, _ = _run(capsys, "recheck", str(output), "--format", "json", "--order", "300")
    assert code == 0
    data = json.loads(out)
    assert data["checked"] == len(load_jsonl(str(output))) > 0
    assert {r["family"] for r in data["reports"]} == {"ag"}
    assert all(r["params"]["sign"] == "minus" and r["order"] == 300 for r in data["reports"])


@pytest.mark.parametrize("content", ["", "{\"family\": \"plus\"}\n", "{\"family\": \"xyz\", \"params\": {}}\n"])
def test_recheck_rejects_bad_files(capsys, tmp_path, content):
    path = tmp_path / "bad.jsonl"
    path.write_text(content, encoding="utf-8")
    code, _, err = _run(capsys, "recheck", str(path))
    assert code == 2
    assert "error" in err.lower()


def test_recheck_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "recheck", str(tmp_path / "absent.jsonl"))
    assert code == 2
    assert "cannot read" in err


def test_scan_ag_json(capsys):
    code, out, _ = _run(capsys, "scan", "--family", "ag", "--m-range", "2..4", "--k-range", "5..7",
                        "--order", "500", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["violated"] == 0
    assert data["checked"] == len(data["reports"]) > 0


def test_scan_empty_range(capsys):
    code, out, _ = _run(capsys, "scan", "--family", "plus", "--m-range", "2..3", "--k-range", "6..2")
    assert code == 0
    assert out.startswith("0 tuples checked")


def test_scan_needs_m_range(capsys):
    code, _, err = _run(capsys, "scan", "--family", "plus", "--k-range", "2..3")
    assert code == 2
    assert "--m-range" in err


# --- partitions -----------------------------------------------------------------------

def test_partitions_count(capsys):
    code, out, _ = _run(capsys, "partitions", "count", "--modulus", "30", "--rep", "0,1,29", "-n", "0")
    assert code == 0 and out.strip() == "1"
    _, out, _ = _run(capsys, "partitions", "count", "--modulus", "30", "--rep", "0,1,29", "-n", "70")
    assert out.strip() == "13"


def test_partitions_signed_sum_table(capsys):
    code, out, _ = _run(capsys, "partitions", "signed-sum", "-m", "2", "-k", "15", "-s", "0", "-t", "1",
                        "-n", "20", "--show-terms")
    assert code == 0
    lines = out.strip().splitlines()
    rows = [tuple(map(int, line.split())) for line in lines[1:-1]]
    assert rows[0] == (-5, 70, -13)
    assert rows[4] == (-1, 314, -5773)
    assert len(rows) == 9
    assert lines[-1] == "sum = 0"


def test_partitions_parity_enumerate(capsys):
    code, out, _ = _run(capsys, "partitions", "parity", "-m", "2", "-k", "15", "-s", "8", "-t", "1",
                        "-n", "149", "--enumerate")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p^e(149) = 6, p^o(149) = 6"
    assert lines[1] == "odd (6):"
    assert lines[2:8] == ODD_149
    assert lines[8] == "even (6):"
    assert lines[9:15] == EVEN_149


def test_partitions_parity_identity(capsys):
    code, out, _ = _run(capsys, "partitions", "parity", "-m", "3", "-k", "3", "-s", "1", "-t", "1",
                        "--n-max", "60")
    assert code == 0
    assert "verified" in out


def test_partitions_enumerate_json(capsys):
    code, out, _ = _run(capsys, "partitions", "enumerate", "--modulus", "30", "--rep", "13,17", "--dist", "2,28",
                        "-n", "149", "--parity", "odd", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 6
    assert [[13, 1], [17, 8]] in data["partitions"]


def test_partitions_enumerate_cap(capsys):
    code, _, err = _run(capsys, "partitions", "enumerate", "--modulus", "1", "--rep", "0", "-n", "30",
                        "--cap", "10")
    assert code == 2
    assert "enumeration cap" in err


# --- identity and catalog ---------------------------------------------------------------

def test_identity_onepsi1(capsys):
    code, out, _ = _run(capsys, "identity", "1psi1", "-m", "2", "-k", "15", "-t", "1", "-r", "1", "--order", "300")
    assert code == 0
    assert out.strip() == "1psi1: pass (order 300)"


def test_identity_jtp(capsys):
    code, _, _ = _run(capsys, "identity", "jtp", "-M", "9", "-a", "4", "--order", "200")
    assert code == 0


def test_identity_cancellation_negative_control(capsys):
    code, out, _ = _run(capsys, "identity", "lambert-cancel", "-m", "2", "-k", "15", "-s", "0", "-t", "1",
                        "-r", "3", "--order", "200")
    assert code == 1
    assert "FAIL at q^15: left=-1, right=0" in out


def test_catalog_command(capsys):
    code, out, _ = _run(capsys, "catalog", "--order", "300")
    assert code == 0
    assert out.strip().splitlines()[-1] == "15/15 catalog entries passed at order 300"


# --- configuration ------------------------------------------------------------------------

def test_order_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(ORDER_ENV_VAR, "7")
    _, out, _ = _run(capsys, "expand", "--num=1:1")
    assert len(out.splitlines()) == 7
    _, out, _ = _run(capsys, "expand", "--num=1:1", "--order", "4")
    assert len(out.splitlines()) == 4


def test_bad_environment_order(capsys, monkeypatch):
    monkeypatch.setenv(ORDER_ENV_VAR, "many")
    code, _, err = _run(capsys, "expand", "--num=1:1")
    assert code == 2
    assert ORDER_ENV_VAR in err


def test_config_file(capsys, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("run_params:\n  order: 5\n  format: json\n", encoding="utf-8")
    code, out, _ = _run(capsys, "expand", "--num=1:1", "--config", str(path))
    assert code == 0
    assert json.loads(out)["order"] == 5


def test_invalid_order_flag(capsys):
    code, _, err = _run(capsys, "expand", "--num=1:1", "--order", "0")
    assert code == 2
    assert "order must be an integer >= 1" in err
