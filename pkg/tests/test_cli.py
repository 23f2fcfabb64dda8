import json

import pytest

from quadapn.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_check_zero_triple(capsys):
    code, out = _run(capsys, "check", "--m", "4", "--a1", "0", "--a2", "0:0", "--a3", "0:0")
    d = json.loads(out.out)
    assert code == 0
    assert d["apn"] and d["theorem"] and d["differential_uniformity"] == 2 and not d["permutation"]


def test_check_non_apn(capsys):
    code, out = _run(capsys, "check", "--m", "4", "--a1", "1", "--a2", "1", "--a3", "1")
    d = json.loads(out.out)
    assert code == 0 and not d["apn"] and not d["theorem"] and d["witness"]


def test_usage_errors(capsys):
    assert _run(capsys, "check", "--m", "4", "--a1", "zz", "--a2", "0", "--a3", "0")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "enumerate", "--m", "9")[0] == 2
    assert _run(capsys, "oracle", "nope", "--m", "3")[0] == 2
    assert _run(capsys, "spectrum", "--m", "3")[0] == 2
    assert _run(capsys, "--help")[0] == 0


def test_enumerate_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _ = _run(capsys, "enumerate", "--m", "4", "--method", "both", "--shards", "2",
                   "--no-timing", "--out", str(out))
    d = json.loads(out.read_text())
    assert code == 0 and d["apn_count"] == d["apn_count_bruteforce"] == 3794
    assert d["elapsed_seconds"] is None


def test_oracle_exit_codes(capsys):
    code, out = _run(capsys, "oracle", "key_lemma", "--m", "3")
    assert code == 0 and json.loads(out.out)[0]["status"] == "PASS"
    # a known violation at m = 3 (see the decisions ledger)
    code, out = _run(capsys, "oracle", "trace_lemma_3.7", "--m", "3")
    assert code == 1 and json.loads(out.out)[0]["violation_count"] == 6


def test_spectrum_and_crosscheck(capsys):
    code, out = _run(capsys, "spectrum", "--m", "3", "--power", "5")
    assert code == 0 and json.loads(out.out)["parseval_ok"]
    code, out = _run(capsys, "spectrum", "--m", "3", "--a1", "0", "--a2", "0", "--a3", "0")
    assert code == 0
    code, out = _run(capsys, "crosscheck", "--m", "3")
    d = json.loads(out.out)
    # outside the theorem's range: reported with an agreement rate, never a failure
    assert code == 0 and not d["in_theorem_range"] and d["details"]["agreement_rate"] < 1


def test_backend_flag(capsys):
    code, out = _run(capsys, "--backend", "python", "check", "--m", "3", "--a1", "0", "--a2", "0", "--a3", "0")
    assert code == 0 and json.loads(out.out)["apn"]
