import csv
import json
from pathlib import Path

import numpy as np
import pytest

from hamrep import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_n():
    assert cli.parse_n("3") == [3]
    assert cli.parse_n("1..4") == [1, 2, 3, 4]
    assert cli.parse_n(2) == [2]
    with pytest.raises(cli.ConfigError):
        cli.parse_n("x")


def test_verify_algebra(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--n", "3")
    assert code == 0
    assert out.startswith("[PASS] algebra") and out.rstrip().endswith("overall: PASS")


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cover", "--suite", "cocycle", "--trials", "10", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == "hamrep/1" and rep["pass"]
    assert [s["suite"] for s in rep["suites"]] == ["cocycle", "cover"]
    for s in rep["suites"]:
        for c in s["checks"]:
            assert {"name", "max_dev", "pass"} <= set(c)


def test_failing_suite_exit_code(capsys):
    # the tabulated counts disagree with the computed ones at n = 2
    code, out, _ = run(capsys, "verify", "--suite", "casimir-count", "--n", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 1 and not rep["pass"]
    assert rep["suites"][0]["notes"]


def test_uir_suite_reports_adjudications(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "uir", "--family", "qha", "--trials", "5", "--seed", "7",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0
    (suite,) = rep["suites"]
    assert len(suite["checks"]) == 2
    assert all(c["max_dev"] <= 1e-9 for c in suite["checks"])
    assert any("half-term" in x for x in suite["notes"])


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suites": ["cocycle"], "trials": 3, "seed": 1, "n": "2",
                               "labels": {"lambda": 2.0}}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--seed", "9", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    c = rep["config"]
    assert c["trials"] == 3 and c["seed"] == 9 and c["n"] == [2] and c["labels"]["lambda"] == 2.0
    assert c["suites"] == ["cocycle"]


@pytest.mark.parametrize("payload", [{"trials": 0}, {"suites": ["nope"]}, {"tolerance": {"hom": -1}},
                                     {"labels": {"j": "1/3"}}, {"families": ["poincare"]}])
def test_config_errors(tmp_path, capsys, payload):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps(payload))
    code, _, err = run(capsys, "verify", "--config", str(cfg))
    assert code == 2 and err.startswith("hamrep:")


def test_unreadable_config(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", "--config", str(bad))[0] == 2
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2


def test_labels_file_and_out(tmp_path, capsys):
    lab = tmp_path / "labels.json"
    lab.write_text(json.dumps({"lambda": 1.0, "kappa": 2.0, "j": "0"}))
    out = tmp_path / "rep.json"
    code, text, _ = run(capsys, "verify", "--suite", "heisenberg", "--labels", str(lab), "--format", "json",
                        "--out", str(out))
    assert code == 0 and text == ""
    rep = json.loads(out.read_text())
    assert rep["config"]["labels"]["kappa"] == 2.0


def test_deterministic_json(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        cli.main(["verify", "--suite", "uir", "--suite", "cocycle", "--suite", "casimir", "--trials", "5",
                  "--format", "json", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def _read(text):
    return list(csv.DictReader(text.splitlines()))


def test_demo_identity(capsys):
    code, out, _ = run(capsys, "demo", "--grid=-2:2:5")
    rows = _read(out)
    assert code == 0 and list(rows[0]) == ["x", "tt", "re", "im", "abs2"]
    for r in rows:
        x = float(r["x"])
        assert np.isclose(float(r["re"]), np.exp(-0.5 * x * x)) and float(r["im"]) == 0


def test_demo_translation(tmp_path, capsys):
    # the b-parameter of H(1) shifts by -lambda b
    tf = tmp_path / "t.json"
    tf.write_text(json.dumps({"family": "h", "labels": {"lambda": 1.0, "j": "0"}, "element": {"n": 1, "p": [0.5]}}))
    code, out, _ = run(capsys, "demo", "--grid=-2:2:9", "--transform", str(tf))
    assert code == 0
    for r in _read(out):
        x = float(r["x"])
        assert np.isclose(float(r["abs2"]), np.exp(-(x - 0.5) ** 2))


def test_demo_boost_golden(capsys):
    code, out, _ = run(capsys, "demo", "--grid=-4:4:33,tt=0.8", "--transform", str(GOLDEN / "qha_boost_n1.json"))
    assert code == 0
    assert out == (GOLDEN / "qha_boost_n1.csv").read_text()


def test_demo_golden_matches_closed_form():
    spec = json.loads((GOLDEN / "qha_boost_n1.json").read_text())
    mu, h = spec["labels"]["mu"], spec["labels"]["hbar"]
    v = spec["element"]["v"][0]
    for r in _read((GOLDEN / "qha_boost_n1.csv").read_text()):
        p, t = float(r["x"]), float(r["tt"])
        want = np.exp(-1j * v * t * p / h - 1j * v * v * mu * t / (2 * h)) * np.exp(-0.5 * (p + mu * v) ** 2 - 0.5 * t * t)
        assert abs(complex(float(r["re"]), float(r["im"])) - want) < 1e-11


@pytest.mark.parametrize("grid", ["1:2", "a:b:3", "2:1:4", "0:1:0", "0:1:3,zz=1"])
def test_demo_bad_grid(capsys, grid):
    code, _, err = run(capsys, "demo", f"--grid={grid}")
    assert code == 2 and "grid" in err
