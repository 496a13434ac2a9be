import csv
import json

import numpy as np
import pytest

from ptmpemba import cli
from ptmpemba.config import Axis, ConfigError, build_config, load_document
from ptmpemba.quantifiers import QuantifierKind


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_defaults():
    cfg = build_config({})
    assert cfg.params.a == 1.2 and cfg.quantifier is QuantifierKind.TRACE
    rho_I, rho_II = cfg.states()
    assert np.allclose(rho_I, np.diag([1, 0])) and np.allclose(rho_II, np.eye(2) / 2)


def test_tensor_power_states():
    cfg = build_config({"params": {"n_qubits": 3}})
    assert cfg.states()[0].shape == (8, 8)
    with pytest.raises(ConfigError):
        build_config({"params": {"n_qubits": 3}, "initial_state_I": [[0, 0, 1], [0, 0, 1]]})


@pytest.mark.parametrize(
    "doc,where",
    [
        ({"params": {"gamma1": 2.0}}, "params"),
        ({"params": {"a": "x"}}, "params"),
        ({"quantifier": "fidelity"}, "quantifier"),
        ({"initial_state_I": [1, 1, 0]}, "initial_state_I[0]"),
        ({"initial_state_I": [1, 0]}, "initial_state_I"),
        ({"crossing": {"samples": 5}}, "crossing"),
        ({"grid": {"a": "1:0:3"}}, "grid.a"),
        ({"grid": {"gamma1": "0.1:1.5:5"}}, "grid"),
    ],
)
def test_config_errors(doc, where):
    with pytest.raises(ConfigError) as info:
        build_config(doc)
    assert info.value.where == where


def test_axis_forms():
    assert Axis.parse("0:1:3", "x") == Axis.parse({"min": 0, "max": 1, "steps": 3}, "x")
    assert np.allclose(Axis(0, 1, 3).values(), [0, 0.5, 1])


def test_json_errors_are_line_anchored(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "params": {"a": 1,}\n}\n')
    with pytest.raises(ConfigError) as info:
        load_document(p)
    assert info.value.where.endswith(":2:21")


def test_round_trip(tmp_path):
    cfg = build_config({"grid": {"a": "0.2:1:5", "gamma1": "0.1:0.5:3"}, "quantifier": "frobenius"})
    again = build_config(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()


def test_cli_spectrum(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    assert cli.main(["spectrum", "--gamma1", "0.5", "--a-grid", "0:2:21", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header[:3] == ["a", "re_mu1", "im_mu1"] and header[-1] == "defective"
    for row in rows:
        assert abs(float(row[3]) + 0.75) < 1e-10
    im_max = [max(abs(float(v)) for v in row[2:-1:2]) for row in rows]
    assert im_max[0] > 1e-8 and im_max[-1] < 1e-8
    assert (tmp_path / "spec.csv.meta.json").exists()


def test_cli_evolve(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    report = tmp_path / "rep.json"
    assert cli.main(["evolve", "--a", "1.2", "--gamma1", "0.6", "--out", str(out), "--report", str(report)]) == 0
    header, rows = read_csv(out)
    assert header == ["t", "D_I", "D_II", "delta"]
    delta = np.array([float(r[3]) for r in rows])
    assert np.count_nonzero(np.diff(np.sign(delta))) == 1
    assert float(rows[0][1]) != float(rows[0][2])
    assert json.loads(report.read_text())["count"] == 1
    assert json.loads(capsys.readouterr().out)["count"] == 1


def test_cli_output_is_deterministic_and_full_precision(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        cli.main(["evolve", "--a", "1.0", "--gamma1", "0.4", "--samples", "300", "--out", str(p)])
    assert a.read_text() == b.read_text()
    _, rows = read_csv(a)
    for r in rows[:20]:
        for v in r:
            assert repr(float(v)) == repr(float(format(float(v), ".17g")))


def test_cli_scan(tmp_path):
    out = tmp_path / "scan.csv"
    args = ["scan", "--a-grid", "0.4:1.6:4", "--gamma1-grid", "0.1:0.7:3", "--samples", "500", "--out", str(out)]
    assert cli.main(args) == 0
    header, rows = read_csv(out)
    assert header == ["a", "gamma1", "count", "first_tau", "status"]
    assert len(rows) == 12 and all(r[4] == "ok" for r in rows)
    bheader, brows = read_csv(tmp_path / "scan_boundary.csv")
    assert bheader == ["a", "gamma1", "abs_x_plus", "abs_x_minus", "eq10_ok", "eq11_plus_ok", "eq11_minus_ok"]
    assert len(brows) == 12


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["evolve", "--gamma1", "1.5"]) == 2
    assert cli.main(["scan", "--out", str(tmp_path / "x.csv")]) == 2
    assert cli.main(["multiqubit", "--out", str(tmp_path / "x.csv")]) == 2
    assert cli.main(["evolve", "--state-I", "0,0,0", "--out", str(tmp_path / "x.csv")]) == 3
    assert cli.main(["evolve", "--config", str(tmp_path / "missing.json")]) == 2
    err = capsys.readouterr().err
    assert "config error" in err and "runtime error" in err


def test_cli_config_file_with_overrides(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"params": {"a": 0.0, "gamma1": 0.6, "gamma2": 1.0}, "outputs": {"out": str(tmp_path / "t.csv")}}))
    rep = tmp_path / "r.json"
    assert cli.main(["evolve", "--config", str(cfg), "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["count"] == 0
    assert cli.main(["evolve", "--config", str(cfg), "--a", "1.2", "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["count"] == 1


def test_cli_multiqubit(tmp_path):
    rep = tmp_path / "r.json"
    args = ["multiqubit", "--n-qubits", "2", "--a", "1.2", "--gamma1", "0.1", "--out", str(tmp_path / "m.csv"), "--report", str(rep)]
    assert cli.main(args) == 0
    assert json.loads(rep.read_text())["count"] >= 1
