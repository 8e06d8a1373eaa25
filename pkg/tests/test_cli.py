import json
import subprocess
import sys

import pytest

from lcmodel import cli


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "lcmodel", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return p


def call(capsys, *args):
    code = cli.main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_canon_subprocess(tmp_path):
    f = write(tmp_path, "d.json", {"n": 4, "space": "mzn", "terms": [{"gen": "D", "set": [1, 3], "coef": "1"}]})
    res = run("canon", f)
    assert res.returncode == 0, res.stderr
    rep = json.loads(res.stdout)
    assert rep["schema"] == cli.SCHEMA
    assert rep["canonical"] == [{"set": [1, 2], "coef": "1"}]


def test_pair(tmp_path, capsys):
    f = write(tmp_path, "d.json", {"n": 5, "terms": [{"gen": "D", "set": [4, 5], "coef": "1"}]})
    code, out, _ = call(capsys, "pair", f, "--curve", "1|2|3|4,5")
    assert code == 0 and json.loads(out)["value"] == "-1"
    code, out, _ = call(capsys, "pair", f)
    assert len(json.loads(out)["pairings"]) == 10


def test_analyze(tmp_path, capsys):
    f = write(tmp_path, "w.json", {"n": 5, "weights": ["1"] * 5})
    code, out, _ = call(capsys, "analyze", f, "--check-log-canonical")
    rep = json.loads(out)
    assert code == 0
    assert rep["coincidence_sets"] == [] and rep["fnef"]["is_fnef"] and rep["log_canonical"] is True


@pytest.mark.parametrize("bad", [["1", "1", "1", "1", "1/0"], ["1", "1", "0.5", "1", "1"], ["1", "1", "1"],
                                 ["1", "1", "2", "1", "1"], [1.0, 1, 1, 1, 1]])
def test_bad_weights(tmp_path, capsys, bad):
    f = write(tmp_path, "w.json", {"n": 5, "weights": bad})
    code, out, err = call(capsys, "analyze", f)
    assert code == cli.EXIT_INPUT and out == "" and err


def test_bad_json(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text("{not json", encoding="utf-8")
    assert call(capsys, "analyze", p)[0] == cli.EXIT_INPUT
    assert call(capsys, "analyze", tmp_path / "missing.json")[0] == cli.EXIT_INPUT
    assert call(capsys, "nonsense")[0] == cli.EXIT_INPUT


def test_caps(tmp_path, capsys):
    f = write(tmp_path, "d.json", {"n": 13, "terms": []})
    assert call(capsys, "fnef", f)[0] == cli.EXIT_CAP
    f = write(tmp_path, "d.json", {"n": 17, "terms": []})
    assert call(capsys, "canon", f)[0] == cli.EXIT_CAP
    f = write(tmp_path, "w.json", {"n": 13, "weights": ["1"] * 13})
    assert call(capsys, "analyze", f)[0] == cli.EXIT_CAP


def test_expanded_generators(tmp_path, capsys):
    f = write(tmp_path, "d.json", {"n": 5, "terms": [
        {"gen": "K", "coef": "1"}, {"gen": "Dnod", "coef": "2"},
        {"gen": "psi", "index": 1, "coef": "-1"}, {"gen": "psi", "index": 2, "coef": "-1"},
        {"gen": "psi", "index": 3, "coef": "-1"}, {"gen": "psi", "index": 4, "coef": "-1"},
        {"gen": "psi", "index": 5, "coef": "-1"}]})
    code, out, _ = call(capsys, "canon", f)
    assert code == 0 and json.loads(out)["canonical"] == []


def test_push_pull(tmp_path, capsys):
    w = ["1", "1", "1", "1/4", "1/4"]
    f = write(tmp_path, "d.json", {"n": 5, "weights": w, "terms": [{"gen": "D", "set": [4, 5], "coef": "1"}]})
    code, out, _ = call(capsys, "push", f)
    assert code == 0 and json.loads(out)["class"]["sectional"] == [{"set": [4, 5], "coef": "1"}]
    g = write(tmp_path, "h.json", {"n": 5, "space": "hassett", "weights": w,
                                   "terms": [{"gen": "K", "coef": "1"}]})
    code, out, _ = call(capsys, "pull", g)
    assert code == 0 and json.loads(out)["class"]
    h = write(tmp_path, "h2.json", {"n": 5, "space": "hassett", "weights": ["1", "1", "1/4", "1/4", "1/4"],
                                    "terms": [{"gen": "D", "set": [3, 4, 5], "coef": "1"}]})
    assert call(capsys, "pull", h)[0] == cli.EXIT_INPUT


def test_chamber(capsys):
    code, out, _ = call(capsys, "chamber", "--n", 6, "--beta", "3/5")
    ch = json.loads(out)["chamber"]
    assert code == 0 and ch["kind"] == "epsilon" and ch["epsilon_interval"] == ["1/3", "1/2"]
    code, out, _ = call(capsys, "chamber", "--n", 6, "--alpha", "1/3")
    assert json.loads(out)["chamber"]["beta"] == "1/2"
    assert call(capsys, "chamber", "--n", 6)[0] == cli.EXIT_INPUT


def test_table(capsys, tmp_path):
    code, out, _ = call(capsys, "chamber", "--n", 6, "--beta", "1/2", "--table")
    assert code == 0 and "chamber.kind" in out and not out.startswith("{")


def test_verify_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        res = run("verify", "--n", 6, "--samples", 50, "--seed", 7, "-o", p)
        assert res.returncode == 0, res.stderr
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["all_passed"] and rep["suite"]["seed"] == 7


def test_no_decimals_in_reports(tmp_path, capsys):
    f = write(tmp_path, "w.json", {"n": 6, "weights": ["1", "1", "1/3", "1/3", "1/3", "5/12"]})
    code, out, _ = call(capsys, "analyze", f)
    assert code == 0
    import re
    assert not re.search(r"\d\.\d", out)


def test_golden_analyze(tmp_path, capsys):
    from pathlib import Path
    golden = Path(__file__).parent / "golden" / "analyze_contracted.json"
    f = write(tmp_path, "w.json", {"n": 5, "weights": ["1", "1", "1/4", "1/4", "1/4"]})
    code, out, _ = call(capsys, "analyze", f, "--check-log-canonical")
    assert code == 0
    assert out == golden.read_text(encoding="utf-8")
