import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from twistor_moduli import schemas
from twistor_moduli.cli import run

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def call_json(*argv, schema):
    code, text = call(*argv, "--json")
    doc = json.loads(text)
    jsonschema.validate(doc, schema)
    return code, doc


def test_dim_text_and_json_agree():
    code, text = call("dim", "--n", "0", "--rank", "2", "--k", "3")
    assert code == 0
    assert "dimension: 12" in text and "chi: -12" in text and "real_dimension: 24" in text
    code, doc = call_json("dim", "--n", "0", "--rank", "2", "--k", "3", schema=schemas.DIMENSION)
    assert code == 0
    assert (doc["dim"], doc["chi"], doc["real_dim"]) == (12, -12, 24)
    assert doc["space"]["n"] == 0


def test_dim_formal_data_exits_one(capsys):
    code, _ = call("dim", "--n", "1", "--rank", "1")
    assert code == 1
    assert "formal-data" in capsys.readouterr().err


def test_chi_json():
    code, doc = call_json("chi", "--n", "2", "--a", "1,0", "--rank", "2", "--c1", "1,-1",
                          "--k", "2", schema=schemas.CHI)
    assert code == 0
    by = {(v["route"], v["divisor"]): v["chi"] for v in doc["values"]}
    assert by[("standard", "S")] == by[("standard", "Sbar")]
    assert by[("paper", "S")] == by[("paper", "Sbar")]
    code, text = call("chi", "--n", "2", "--a", "1,0", "--rank", "2", "--c1", "1,-1", "--k", "2")
    for (route, div), chi in by.items():
        assert f"chi(End(V)(-{div})) [{route}]: {chi}" in text


def test_verify_lemma_standard_sweep():
    code, text = call("verify", "--lemma", "2.5", "--n-max", "3", "--k-max", "3")
    assert code == 0 and "pass" in text
    code, doc = call_json("verify", "--lemma", "2.5", "--n-max", "2", "--k-max", "2",
                          schema=schemas.REPORT)
    assert code == 0 and doc["pass"] and not doc["counterexamples"]
    assert all("space" in case for case in doc["cases"])


def test_verify_corrupted_ring_exits_one():
    code, text = call("verify", "--identity", "intersections", "--n-max", "3",
                      "--omega2-eta", "2")
    assert code == 1 and "FAIL" in text
    code, doc = call_json("verify", "--identity", "all", "--n-max", "3", "--omega2-eta", "2",
                          schema=schemas.REPORT)
    assert code == 1 and doc["counterexamples"]


def test_verify_identities_pass():
    code, doc = call_json("verify", "--identity", "all", "--n-max", "4", schema=schemas.REPORT)
    assert code == 0 and doc["pass"]
    assert all("space" in case for case in doc["cases"])


def test_sweep_report_lists_cases():
    code, text = call("sweep", "--n-max", "1", "--r-max", "2", "--k-max", "1")
    lines = text.strip().splitlines()
    assert code == 0 and ": pass (" in lines[0]
    cases = [json.loads(line) for line in lines[1:]]
    assert cases and all(c["ok"] for c in cases)


def test_sweep_parallel_matches_serial():
    _, serial = call_json("sweep", "--n-max", "2", "--k-max", "2", schema=schemas.REPORT)
    _, parallel = call_json("sweep", "--n-max", "2", "--k-max", "2", "--jobs", "2",
                            schema=schemas.REPORT)
    assert serial == parallel


def test_table_vary_k():
    code, doc = call_json("table", "--n", "0", "--rank", "2", "--vary", "k", "--from", "0",
                          "--to", "5", schema=schemas.TABLE)
    assert code == 0
    assert [row["dim"] for row in doc["rows"]] == [0, 4, 8, 12, 16, 20]
    code, text = call("table", "--n", "0", "--rank", "2", "--vary", "k", "--from", "0",
                      "--to", "5")
    rows = text.strip().splitlines()
    assert rows[0].startswith("n,a,c2_mode,r,b,k,dim")
    assert [int(r.split(",")[6]) for r in rows[1:]] == [0, 4, 8, 12, 16, 20]


def test_table_vary_r():
    code, doc = call_json("table", "--n", "0", "--k", "1", "--vary", "r", "--from", "1",
                          "--to", "4", schema=schemas.TABLE)
    assert [row["dim"] for row in doc["rows"]] == [2, 4, 6, 8]


def test_table_vary_n_chi_structure_sheaf():
    _, doc = call_json("table", "--vary", "n", "--from", "0", "--to", "5", schema=schemas.TABLE)
    assert [row["chi_OP"] for row in doc["rows"]] == [1, 2, 3, 4, 5, 6]
    assert [row["space"]["n"] for row in doc["rows"]] == list(range(6))
    _, doc = call_json("table", "--vary", "n", "--from", "0", "--to", "5",
                       "--c2-mode", "normalized", schema=schemas.TABLE)
    assert all(row["chi_OP"] == 1 for row in doc["rows"])


@pytest.mark.parametrize("argv, flag", [
    (["table", "--vary", "k", "--vary", "r", "--from", "0", "--to", "1"], "--vary"),
    (["dim", "--n", "2", "--c1", "1"], "--c1"),
    (["dim", "--n", "2", "--c1", "x,y"], "--c1"),
    (["dim", "--n", "2", "--a", "1,2"], "--a"),
    (["dim", "--rank", "0"], "--rank"),
    (["table", "--vary", "k", "--from", "3", "--to", "1"], "--from"),
])
def test_usage_errors_name_the_flag(argv, flag, capsys):
    code, _ = call(*argv)
    assert code == 2
    assert flag in capsys.readouterr().err


def test_argparse_errors_exit_two():
    assert call("dim", "--n", "zero")[0] == 2
    assert call("bogus")[0] == 2


def test_eval_exit_codes(capsys):
    code, text = call("eval", str(HERE / "scripts" / "01_cp3_classics.tws"))
    assert code == 0 and text
    assert call("eval", str(FIXTURES / "failing_assert.tws"))[0] == 1
    assert call("eval", str(FIXTURES / "syntax_error.tws"))[0] == 2
    assert call("eval", str(FIXTURES / "unbound_generator.tws"))[0] == 2
    assert call("eval", str(FIXTURES / "missing.tws"))[0] == 2


def test_eval_json_keeps_partial_outputs():
    code, doc = call_json("eval", str(FIXTURES / "unbound_generator.tws"), schema=schemas.EVAL)
    assert code == 2 and doc["pass"] is False
    assert doc["error"]["code"] == "unbound"
    code, doc = call_json("eval", str(FIXTURES / "failing_assert.tws"), schema=schemas.EVAL)
    assert code == 1 and doc["error"]["code"] == "assert"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistor_moduli.cli", "dim", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "dimension: 4" in proc.stdout
