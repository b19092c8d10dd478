import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from deon.cli import main
from deon.io import DERIVE_SCHEMA, REPORT_SCHEMA, VERDICT_SCHEMA

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_ross_rejected(self, capsys):
        code, out, _ = run(capsys, "check", SYSTEMS / "ross.json", "p | ~q")
        assert code == 1
        assert "01 ≺ 00" in out and "verdict: reject" in out

    def test_obligation_accepted(self, capsys):
        code, out, _ = run(capsys, "check", SYSTEMS / "ross.json", "p")
        assert code == 0 and "verdict: accept" in out

    def test_bitlist_and_json_list_candidates(self, capsys):
        a = run(capsys, "check", SYSTEMS / "ross.json", "10,11", "--json")
        b = run(capsys, "check", SYSTEMS / "ross.json", '["11", "10"]', "--json")
        assert a[0] == b[0] == 0 and json.loads(a[1]) == json.loads(b[1])

    def test_json_validates_and_agrees_with_text(self, capsys):
        for candidate in ("p", "p | ~q", "q", "~p"):
            code_j, out, _ = run(capsys, "check", SYSTEMS / "ross.json", candidate, "--json")
            data = json.loads(out)
            jsonschema.validate(data, VERDICT_SCHEMA)
            code_t, text, _ = run(capsys, "check", SYSTEMS / "ross.json", candidate)
            assert code_j == code_t
            assert data["accept"] == ("verdict: accept" in text)

    def test_soft_assassin(self, capsys, tmp_path):
        # the bundled file allows one closure pair out of 16; ~o has two violations
        code, out, _ = run(capsys, "check", SYSTEMS / "assassin.json", "~o", "--soft", "--json")
        data = json.loads(out)
        assert code == 1 and data["mode"] == "soft"
        assert data["info"]["downward_closed"] == [["01", "10"], ["11", "10"]]
        wider = json.loads((SYSTEMS / "assassin.json").read_text(encoding="utf-8"))
        wider["size"]["pairs"]["epsilon"] = 0.125
        path = tmp_path / "assassin2.json"
        path.write_text(json.dumps(wider), encoding="utf-8")
        assert run(capsys, "check", path, "~o", "--soft")[0] == 0
        assert run(capsys, "check", path, "~o")[0] == 1

    def test_soft_needs_a_size(self, capsys):
        code, _, err = run(capsys, "check", SYSTEMS / "ross.json", "p", "--soft")
        assert code == 2 and "--epsilon" in err

    def test_explain(self, capsys):
        code, out, _ = run(capsys, "explain", SYSTEMS / "ross.json", "p | ~q")
        assert code == 1 and "closure violations" in out and "01 ≼ 00" in out
        code, out, _ = run(capsys, "explain", SYSTEMS / "ross.json", "p | ~q", "--json")
        assert json.loads(out)["explain"]["closure_violations"] == [["01", "00"]]

    @pytest.mark.parametrize("argv", [
        ("check", "missing.json", "p"),
        ("check", SYSTEMS / "ross.json", "p &"),
        ("check", SYSTEMS / "ross.json", "z"),
        ("check", SYSTEMS / "ross.json", "101"),
        ("check",),
        ("frobnicate",),
    ])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2


class TestDerive:
    def test_independent(self, capsys):
        code, out, _ = run(capsys, "derive", SYSTEMS / "indep-pq.json", "--json")
        data = json.loads(out)
        jsonschema.validate(data, DERIVE_SCHEMA)
        assert code == 0 and data["count"] == 4
        assert [s["models"] for s in data["sets"]] == [["11"], ["01", "11"], ["10", "11"], ["01", "10", "11"]]

    def test_allow_trivial(self, capsys):
        _, out, _ = run(capsys, "derive", SYSTEMS / "indep-pq.json", "--allow-trivial", "--json")
        assert json.loads(out)["count"] == 5

    def test_single_world(self, capsys):
        code, out, _ = run(capsys, "derive", SYSTEMS / "single-world.json")
        assert code == 0 and "0 derived obligations" in out

    def test_limit(self, capsys):
        code, out, _ = run(capsys, "derive", SYSTEMS / "indep-pq.json", "--limit", "2")
        assert code == 0 and "truncated" in out and "2 derived obligations" in out
        assert run(capsys, "derive", SYSTEMS / "indep-pq.json", "--limit", "-1")[0] == 2


class TestLab:
    def test_verify_one_claim(self, capsys):
        code, out, _ = run(capsys, "verify-paper", "--claim", "local-implies-closed", "--random", "20", "--json")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 1
        jsonschema.validate(json.loads(lines[0]), REPORT_SCHEMA)

    def test_verify_unknown_claim(self, capsys):
        assert run(capsys, "verify-paper", "--claim", "nosuchclaim")[0] == 2

    def test_search_finds_dependent_3_shape(self, capsys):
        code, out, _ = run(capsys, "search", "closed+best-implies-neighbourhood", "--vars", "6", "--seed", "7")
        assert code == 0 and "counterexample" in out and "no counterexample" not in out

    def test_search_refutable_first_witness(self, capsys):
        code, out, _ = run(capsys, "search", "ui-implies-contains-best", "--json")
        data = json.loads(out)
        assert code == 0 and data["counterexamples"]

    def test_search_unknown(self, capsys):
        code, _, err = run(capsys, "search", "nosuchclaim")
        assert code == 2 and "unknown claim" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "deon", "check", str(SYSTEMS / "ross.json"), "p | ~q"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "01 ≺ 00" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "deon", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-paper" in proc.stdout
