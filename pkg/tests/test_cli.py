import json
import subprocess
import sys

import jsonschema
import pytest

from knotband.cli import (
    EXIT_CONTRADICTION,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VERIFY,
    SCHEMA_PATH,
    main,
    parse_range,
    render_text,
    run,
)

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def check(argv, code=EXIT_OK) -> dict:
    report, got = run(argv)
    assert got == code, report
    jsonschema.validate(report, SCHEMA)
    # the text form is a pure function of the JSON form
    assert render_text(json.loads(json.dumps(report))) == render_text(report)
    return report


def test_invariants_trefoil():
    r = check(["invariants", "3_1"])
    inv = r["invariants"]
    assert (inv["sigma"], inv["arf"], inv["v_omega"]) == (2, 1, "-i*sqrt3")
    assert all(v is not False for v in r["checks"].values())
    text = render_text(r)
    assert "sigma: 2" in text and '"-i*sqrt3"' in text


def test_invariants_unknot_and_family():
    u = check(["invariants", "U"])["invariants"]
    assert (u["sigma"], u["det"], u["v_omega"], u["h1_factors"]) == (0, 1, "1", [])
    assert check(["invariants", "K[2]"])["invariants"]["v_omega"] == "-1"
    assert check(["invariants", "9_49"])["invariants"]["lambda"] == "-sqrt5^2"


@pytest.mark.parametrize(
    "argv, bu, u2",
    [
        (["bounds", "9_49", "--mode", "asserted"], [3, 3], [3, 3]),
        (["bounds", "8_18", "--mode", "asserted"], [2, 2], [3, 3]),
        (["bounds", "U"], [0, 0], [0, 0]),
    ],
)
def test_bounds_single(argv, bu, u2):
    r = check(argv)
    assert r["result"] == {"bu": bu, "u2": u2}
    assert f"bu: [{bu[0]},{bu[1]}], u2: [{u2[0]},{u2[1]}]" in render_text(r)


def test_bounds_pair_and_gordian():
    r = check(["bounds", "5_1!", "vs", "3_1#3_1", "--mode", "asserted"])
    assert r["result"]["bd"] == [3, 3]
    r = check(["bounds", "5_1", "vs", "3_1#3_1", "--gordian", "2"])
    assert r["result"]["bd"][1] <= 2
    assert r["gordian"] == [2, 2]
    assert all(e["asserted"] is False for e in r["trace"])


def test_bounds_trace_entries():
    r = check(["bounds", "6_2#9_35", "--mode", "asserted"])
    rules = [e["rule"] for e in r["trace"]]
    assert rules[-1] == "signature_gap"
    assert r["slice"] == "Inconclusive"


def test_input_errors():
    assert run(["invariants", "3_1#"])[1] == EXIT_INPUT
    assert run(["invariants", "12_1"])[1] == EXIT_INPUT
    assert run(["bounds", "3_1", "vs"])[1] == EXIT_INPUT
    assert run(["bounds", "3_1", "--gordian", "1"])[1] == EXIT_INPUT
    r = check(["invariants", "PD[X(1,4,2,5),X(1,4,2,5)]"], EXIT_INPUT)
    assert r["error"] == "ParseError"


def test_corrupted_data_file(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"name": "3_1", "pd": [[1, 2, 3, 4]], "components": 1, "u": [1, 1]}\n')
    r = check(["--data", str(bad), "table"], EXIT_INPUT)
    assert r["error"] == "TableError"
    assert run(["--data", str(tmp_path / "missing.jsonl"), "table"])[1] == EXIT_INPUT


def test_contradiction_exit_code(tmp_path):
    # a certificate claiming the trefoil is already unknotted contradicts the invariants
    data = tmp_path / "t.jsonl"
    data.write_text(json.dumps({"name": "3_1", "pd": [[4, 1, 5, 2], [6, 3, 1, 4], [2, 5, 3, 6]],
                                "components": 1, "u": [1, 1], "u2": 0, "bu": 0, "note": "published table"}) + "\n")
    r = check(["--data", str(data), "bounds", "3_1", "--mode", "asserted"], EXIT_CONTRADICTION)
    assert r["error"] == "contradiction"
    assert r["trace"]
    assert "contradiction" in render_text(r)
    r = check(["--data", str(data), "table", "--check"], EXIT_VERIFY)
    assert r["mismatches"] == 1


def test_table_subset():
    r = check(["table", "--max-crossings", "7", "--check"])
    assert r["processed"] == len(r["rows"]) > 0
    assert all(row["crossings"] <= 7 for row in r["rows"])
    assert r["mismatches"] == 0


def test_table_parallel_matches_serial():
    serial = check(["table", "--max-crossings", "6"])
    parallel = check(["table", "--max-crossings", "6", "--jobs", "2"])
    assert serial == parallel
    names = [row["name"] for row in serial["rows"]]
    assert len(names) == len(set(names))


def test_verify_suite_selection():
    r = check(["verify-paper", "--suite", "km-recurrence"])
    assert [s["suite"] for s in r["suites"]] == ["km-recurrence"]
    assert r["suites"][0]["total"] == 21
    r = check(["verify-paper", "--suite", "jl-family", "--range", "-3..3"])
    assert r["range"] == [-3, 3]
    assert r["suites"][0]["total"] == 14


def test_verify_failure_exit_code():
    # the published K[12l+7] column disagrees with the closed-form signature at l = -1
    r = check(["verify-paper", "--suite", "family-table"], EXIT_VERIFY)
    failed = [c["name"] for c in r["suites"][0]["checks"] if not c["passed"]]
    assert failed == ["sigma(K[12l+7] l=-1 (K[-5]))"]
    assert "verification FAILED" in render_text(r)


def test_parse_range():
    assert parse_range("-3..3") == (-3, 3)
    assert parse_range("2") == (2, 2)
    with pytest.raises(Exception):
        parse_range("3..1")


def test_main_json_output(capsys):
    assert main(["bounds", "U", "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == {"bu": [0, 0], "u2": [0, 0]}
    assert main(["invariants", "3_1#"]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "knotband.cli", "bounds", "9_49", "--mode", "asserted"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "bu: [3,3], u2: [3,3]" in proc.stdout
