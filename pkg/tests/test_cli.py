import json
import subprocess
import sys

import pytest

from weylforge.cli import main


def W(n, *terms):
    return {"n": n, "terms": [{"x": list(x), "y": list(y), "h": h, "coef": c} for x, y, h, c in terms]}


Y1, X1 = W(1, ((0,), (1,), 0, "1")), W(1, ((1,), (0,), 0, "1"))


def call(argv, data, capsys):
    extra = [] if data is None else ["--json", data if isinstance(data, str) else json.dumps(data)]
    status = main(argv + extra)
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_weyl_mul(capsys):
    status, out = call(["weyl-mul"], {"a": Y1, "b": X1}, capsys)
    assert status == 0
    got = {(t["x"][0], t["y"][0], t["h"]): t["coef"] for t in out["terms"]}
    assert got == {(1, 1, 0): "1", (0, 0, 1): "1"}


def test_weyl_bracket(capsys):
    status, out = call(["weyl-bracket"], {"a": Y1, "b": X1}, capsys)
    assert status == 0 and [(t["h"], t["coef"]) for t in out["terms"]] == [(1, "1")]


def test_verify_suite(capsys):
    status, out = call(["verify", "--suite", "hodge-sl2", "--n", "2", "--degree", "4"], None, capsys)
    assert status == 0 and out["pass"]


def test_genus_coefficients(capsys):
    status, out = call(["genus", "--series", "ahat", "--degree", "4"], None, capsys)
    assert status == 0
    assert out["coefficients"] == ["1", "0", "-1/48", "0", "1/2560"]
    status, out = call(["genus", "--series", "todd", "--degree", "2", "--rank", "1"], None, capsys)
    assert out["coefficients"] == ["1", "1/2", "1/12"] and "class" in out


def test_malformed_json_reports_position(capsys):
    status, out = call(["weyl-mul"], '{"a": [1, 2', capsys)
    assert status == 2 and "line 1" in out["position"]


def test_schema_error_reports_path(capsys):
    bad = {"a": Y1, "b": W(1, ((1, 0), (0,), 0, "1"))}
    status, out = call(["weyl-mul"], bad, capsys)
    assert status == 2 and out["position"] == "$.b.terms[0]"


def test_unknown_field_rejected(capsys):
    status, out = call(["weyl-mul"], {"a": Y1, "b": X1, "c": 1}, capsys)
    assert status == 2 and "unknown" in out["message"]


def test_float_coefficient_rejected(capsys):
    status, out = call(["weyl-mul"], {"a": Y1, "b": W(1, ((1,), (0,), 0, 0.5))}, capsys)
    assert status == 2 and out["position"] == "$.b.terms[0].coef"


@pytest.mark.parametrize("flag", ["--trunc", "--degree", "--utrunc"])
def test_non_positive_truncation(flag, capsys):
    status, _ = call(["weyl-mul", flag, "0"], {"a": Y1, "b": X1}, capsys)
    assert status == 2


def test_term_cap(monkeypatch, capsys):
    monkeypatch.setenv("WEYLFORGE_MAX_TERMS", "1")
    status, out = call(["weyl-mul"], {"a": Y1, "b": X1}, capsys)
    assert status == 3 and out["error"] == "internal"


def test_malformed_form_is_input_error(capsys):
    alpha = {"n": 1, "terms": [{"mono": [1, 0], "idx": [0, 1], "coef": "1"}]}
    status, out = call(["darboux"], {"alpha": alpha, "q": 0, "T": 3}, capsys)
    assert status == 2 and out["position"] == "$.alpha.terms[0].idx[0]"


def test_precondition_failure_is_input_error(capsys):
    # x2 dx1 ^ dy2 is not closed
    alpha = {"n": 2, "terms": [
        {"mono": [0, 0, 0, 0], "idx": ["dx1", "dy1"], "coef": "1"},
        {"mono": [0, 0, 0, 0], "idx": ["dx2", "dy2"], "coef": "1"},
        {"mono": [0, 1, 0, 0], "idx": ["dx1", "dy2"], "coef": "1"},
    ]}
    status, out = call(["darboux"], {"alpha": alpha, "q": 0, "T": 3}, capsys)
    assert status == 2 and out["error"] == "input"


def test_out_file_and_stdin(tmp_path):
    dest = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "weylforge.cli", "weyl-mul", "--out", str(dest)],
        input=json.dumps({"a": Y1, "b": X1}),
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == ""
    assert len(json.loads(dest.read_text())["terms"]) == 2


def test_cyclic_b_command(capsys):
    data = {"algebra": {"example": "matrix", "size": 2}, "chain": {"terms": [{"word": [1, 2], "coef": "1"}]}}
    status, out = call(["cyclic-b"], data, capsys)
    assert status == 0
    assert {tuple(t["word"]) for t in out["terms"]} == {(0,), (3,)}
