import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hamforms.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, golden", [
    (["volume", "--da", "2", "--route", "both"], "volume_d2.json"),
    (["det", "--matrix", "[[0,-1],[1,0]]"], "det_inversion.json"),
    (["enumerate-reduced", "--da", "2", "--delta", "-1"], "enum_d2_m1.jsonl"),
    (["constant", "--theorem", "main", "--da", "3", "--delta", "1"], "constant_main_d3.json"),
])
def test_golden(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_volume_content(capsys):
    _, out, _ = run(capsys, "volume", "--da", "2", "--route", "both")
    doc = json.loads(out)
    assert doc["eisenstein"] == doc["prasad"] == "7/11520·ζ3"
    assert doc["equal"] is True
    assert doc["float"].startswith("0.000730")


def test_enumeration_content(capsys):
    _, out, _ = run(capsys, "enumerate-reduced", "--da", "2", "--delta", "-1")
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0]["meta"]["count"] == len(lines) - 1
    assert {"a": "1", "b": ["0", "0", "0", "0"], "c": "1", "d_a": 2} in lines[1:]


def test_det_content(capsys):
    _, out, _ = run(capsys, "det", "--matrix", '[[2,0],[0,1]]')
    assert json.loads(out) == {"det_sq": "4", "in_sl2o": False}
    _, out, _ = run(capsys, "det", "--matrix", '[[[0,1,0,0],0],[0,[0,0,1,0]]]')
    assert json.loads(out)["det_sq"] == "1"


def test_act_reduce_zeta(capsys):
    code, out, _ = run(capsys, "act", "--form", '{"a":1,"b":0,"c":1}', "--matrix", "[[1,1],[0,1]]")
    assert code == 0 and json.loads(out)["form"]["c"] == "2"
    code, out, _ = run(capsys, "reduce", "--form", '[5, ["-5/2","-5/2","-5/2","-5/2"], 6]')
    doc = json.loads(out)
    assert code == 0 and doc["delta"] == "-5"
    code, out, _ = run(capsys, "reduce", "--point", '{"z": [0,0,0,0], "rsq": "1/4"}')
    assert code == 0 and json.loads(out)["steps"] >= 1
    code, out, _ = run(capsys, "zeta", "--da", "3", "--s", "2")
    assert code == 0 and json.loads(out)["exact"]["symbolic"]
    code, out, _ = run(capsys, "zeta", "--da", "3", "--s", "5/4")
    assert code == 0 and json.loads(out)["exact"] is None


def test_constant_variants(capsys):
    for theorem in ("main", "general", "cor12", "closed"):
        code, out, _ = run(capsys, "constant", "--theorem", theorem, "--da", "5", "--delta", "1")
        assert code == 0
    _, main_out, _ = run(capsys, "constant", "--theorem", "main", "--da", "5")
    _, closed, _ = run(capsys, "constant", "--theorem", "closed", "--da", "5")
    assert json.loads(main_out)["terms"] == json.loads(closed)["terms"]


def test_oracles(capsys):
    code, out, _ = run(capsys, "oracle", "units", "--da", "7")
    assert code == 0 and json.loads(out) == {"d_a": 7, "unit_count": 4, "expected": 4}
    _, out, _ = run(capsys, "oracle", "shells", "--bound", "2")
    assert json.loads(out)["shells"] == [{"m": 1, "count": 24}, {"m": 2, "count": 24}]
    _, out, _ = run(capsys, "oracle", "relprime", "--u", "2", "--v", "[0,2,0,0]")
    assert json.loads(out) == {"relatively_prime": False}
    _, out, _ = run(capsys, "oracle", "chenevier", "--z", '["1/3", 2, 0, "-5/7"]')
    assert json.loads(out) == {"value": "1"}
    _, out, _ = run(capsys, "oracle", "zeta-partial", "--bound", "200")
    doc = json.loads(out)
    assert abs(doc["partial"] - doc["target"]) <= doc["tail_bound"]
    _, out, _ = run(capsys, "oracle", "witness", "--u", "[1,1,0,0]", "--v", "1")
    assert json.loads(out)["witness"] is not None


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "10", "--seed", "3")
    assert code == 0 and json.loads(out)["ok"] is True


def test_exit_codes(capsys):
    assert run(capsys, "volume", "--da", "4")[0] == 1
    assert run(capsys, "volume", "--da", "6")[0] == 1
    assert run(capsys, "det", "--matrix", "[[1,2]]")[0] == 2
    assert run(capsys, "det", "--matrix", "not json")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "enumerate-reduced", "--da", "2")[0] == 2
    assert run(capsys, "reduce", "--da", "3", "--form", "[1,0,1]")[0] == 1
    code, _, err = run(capsys, "enumerate-reduced", "--delta", "0")
    assert code == 1 and "delta" in err


def test_out_and_config(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('da = 2\ndelta = -2\nbound_scale = "2"\n')
    out = tmp_path / "forms.jsonl"
    code, stdout, _ = run(capsys, "enumerate-reduced", "--config", str(cfg), "--out", str(out))
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    meta = json.loads(lines[0])["meta"]
    assert meta["delta"] == -2 and meta["bound_scale"] == "2" and meta["count"] == len(lines) - 1
    # flags override the config file
    code, stdout, _ = run(capsys, "enumerate-reduced", "--config", str(cfg), "--delta", "-1")
    assert json.loads(stdout.splitlines()[0])["meta"]["delta"] == -1
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    assert run(capsys, "volume", "--config", str(bad))[0] == 2


def test_deterministic(capsys):
    a = run(capsys, "verify", "--samples", "5", "--seed", "11")[1]
    b = run(capsys, "verify", "--samples", "5", "--seed", "11")[1]
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hamforms", "det", "--matrix", "[[1,0],[0,1]]"],
                         capture_output=True, text=True, env=dict(os.environ, HAMFORMS_LOG="debug"))
    assert out.returncode == 0 and json.loads(out.stdout)["det_sq"] == "1"
