import csv
import io
import json
import math
import subprocess
import sys

import pytest

from zising.cli import run

from conftest import square_m12

SQUARE = {"n": 2, "tau": [3, 4, 1, 2], "alpha": [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4]}
HEXAGON = {"n": 3, "tau": [4, 5, 6, 1, 2, 3]}


@pytest.fixture
def write(tmp_path):
    def _write(data, name="region.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return _write


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_validate_ok(write, capsys):
    assert run(["validate", write(HEXAGON)]) == 0
    out = _json(capsys)
    assert out["valid"] and out["n"] == 3


def test_validate_invalid(write, capsys):
    bad = {"n": 2, "tau": [3, 4, 1, 2], "alpha": [0.0, 0.0, 0.0, 0.0]}
    assert run(["validate", write(bad)]) == 2
    assert "invalid" in capsys.readouterr().err


def test_not_an_involution(write):
    assert run(["validate", write({"n": 2, "tau": [2, 3, 4, 1]})]) == 2


def test_malformed_json(write, capsys):
    assert run(["correlate", write('{"n": 2, "tau": [3, 4')]) == 1
    assert "line 1" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert run(["validate", str(tmp_path / "nope.json")]) == 1


@pytest.mark.parametrize("m", [-0.5, 0.0, 0.5])
def test_correlate_square(write, capsys, m):
    assert run(["correlate", write(SQUARE), "--m", str(m)]) == 0
    out = _json(capsys)
    assert out["M"][0][1] == pytest.approx(square_m12(m), abs=1e-12)
    assert out["basis"] == "distinct"


def test_correlate_csv(write, capsys):
    assert run(["correlate", write(HEXAGON), "--m", "0.3", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["b_1", "b_2", "b_3"]
    assert len(rows) == 4 and float(rows[1][0]) == 1.0


def test_bad_parameter(write):
    assert run(["correlate", write(SQUARE), "--m", "1.0"]) == 2
    assert run(["correlate", write(SQUARE), "--m", "nan"]) == 2


def test_oracle_matches_correlate(write, capsys):
    path = write(HEXAGON)
    run(["correlate", path, "--m", "0.4"])
    a = _json(capsys)["M"]
    run(["oracle", path, "--m", "0.4", "--seed", "1"])
    b = _json(capsys)
    assert b["vertices"] == 3 and b["edges"] == 3
    for ra, rb in zip(a, b["M"]):
        assert ra == pytest.approx(rb, abs=1e-10)


def test_check_passes(write, capsys):
    assert run(["check", write(HEXAGON), "--m", "-0.7"]) == 0
    out = _json(capsys)
    assert out["passed"] and out["failed"] == []


def test_check_csv(write, capsys):
    assert run(["check", write(SQUARE), "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["check", "residual", "tolerance", "status"]
    assert all(r[3] == "pass" for r in rows[1:])


def test_expand(write, capsys):
    assert run(["expand", write(HEXAGON), "--t", "0.3"]) == 0
    out = _json(capsys)
    assert out["t"] == 0.3 and len(out["zeroth"]) == len(out["second_order"]) == 6


def test_expand_csv(write, capsys):
    assert run(["expand", write(SQUARE), "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "p,zeroth,second_order"


def test_dualize(write, capsys):
    assert run(["dualize", write(SQUARE), "--m", "0.5"]) == 0
    out = _json(capsys)
    assert out["m_dual"] == pytest.approx(-1.0)
    assert out["M"][0][1] == pytest.approx(square_m12(-1.0), abs=1e-12)


def test_out_file(write, tmp_path, capsys):
    target = tmp_path / "res.json"
    assert run(["correlate", write(SQUARE), "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["M"][0][0] == 1.0


def test_dump_graph(write, capsys):
    assert run(["oracle", write(SQUARE), "--dump-graph"]) == 0
    assert "arrangement" in _json(capsys)
    assert run(["correlate", write(SQUARE), "--dump-graph", "--format", "csv"]) == 0
    err = capsys.readouterr().err
    json.loads(err)


def test_deterministic(write, capsys):
    path = write(HEXAGON)
    outs = []
    for _ in range(2):
        run(["check", path, "--m", "0.2", "--seed", "7"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_strict_escalates_condition_warning(write, capsys, monkeypatch):
    import zising.correlations

    monkeypatch.setattr(zising.correlations, "COND_WARN", 2.0)
    path = write(SQUARE)
    with pytest.warns(zising.correlations.ConditionWarning):
        assert run(["correlate", path, "--m", "0.5"]) == 0
    capsys.readouterr()
    assert run(["correlate", path, "--m", "0.5", "--strict"]) == 3
    assert "condition" in capsys.readouterr().err


def test_oracle_too_large(write, capsys):
    n = 10
    tau = [((j - 1 + n) % (2 * n)) + 1 for j in range(1, 2 * n + 1)]
    assert run(["oracle", write({"n": n, "tau": tau})]) == 3
    assert "enumeration limit" in capsys.readouterr().err


def test_console_script_module():
    res = subprocess.run([sys.executable, "-m", "zising.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout


def test_validate_fixed_point(write, capsys):
    assert run(["validate", write({"n": 2, "tau": [1, 4, 3, 2]})]) == 2
    assert "fixed point" in capsys.readouterr().err
