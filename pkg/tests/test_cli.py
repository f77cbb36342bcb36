import json
import os

import numpy as np
import pytest

from maslov_iter.cli import main
from maslov_iter.paths import ExpPath, matrix_to_json
from maslov_iter.spaces import canonical_space


def _write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


@pytest.fixture
def index_config(tmp_path):
    space = canonical_space(1)
    path = ExpPath(space, space.J, domain=(0.0, 2 * np.pi))
    return _write(tmp_path, "index.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "path": path.to_dict(),
        "v": {"kind": "circle", "z": [1.0, 0.0]},
    })


def test_cmd_index_canonical(index_config, tmp_path, capsys):
    out = tmp_path / "report.json"
    csv = tmp_path / "traces.csv"
    png = tmp_path / "traces.png"
    code = main(["index", "--config", index_config, "--out", str(out),
                 "--csv-traces", str(csv), "--plot", str(png)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["index"] == 2
    assert payload["oracle_index"] == 2
    assert payload["endpoint_nullities"] == {"start": 2, "end": 2}
    assert [c["nullity"] for c in payload["crossing_table"]] == [2, 2]
    assert csv.exists() and csv.read_text().startswith("t,angle_0")
    assert png.exists() and png.stat().st_size > 1000


def test_cmd_index_constant_path(tmp_path, capsys):
    cfg = _write(tmp_path, "c.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "path": {"type": "constant", "matrix": matrix_to_json(np.eye(2)),
                 "domain": [0.0, 1.0]},
        "v": {"kind": "circle", "z": [0.0, 1.0]},
    })
    assert main(["index", "--config", cfg]) == 0
    assert json.loads(capsys.readouterr().out)["index"] == 0


def test_cmd_index_rejects_nonsymplectic_graph(tmp_path):
    cfg = _write(tmp_path, "g.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "path": {"type": "constant", "matrix": matrix_to_json(np.eye(2)),
                 "domain": [0.0, 1.0]},
        "v": {"kind": "graph", "matrix": matrix_to_json(np.diag([2.0, 3.0]))},
    })
    assert main(["index", "--config", cfg]) == 3


def test_cmd_index_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["index", "--config", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err


def test_cmd_index_missing_fields(tmp_path):
    cfg = _write(tmp_path, "m.json", {"schema_version": 1, "space": {"canonical": 1}})
    assert main(["index", "--config", cfg]) == 2


def test_cmd_index_bad_schema_version(tmp_path):
    cfg = _write(tmp_path, "v.json", {"schema_version": 99})
    assert main(["index", "--config", cfg]) == 2


def test_cmd_verify_small_campaign(tmp_path):
    out = tmp_path / "campaign.json"
    code = main(["verify", "--suite", "chebyshev", "--trials", "3",
                 "--seed", "5", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["aggregate"]["failed"] == 0
    assert payload["aggregate"]["total"] == 3
    assert payload["schema_version"] == 1


def test_cmd_verify_product_v_config(tmp_path):
    cfg = _write(tmp_path, "v.json", {
        "schema_version": 1,
        "suite": "brake2",
        "trials": 2,
        "master_seed": 31,
    })
    assert main(["verify", "--config", cfg]) == 0


def test_cmd_verify_zero_trials(tmp_path):
    assert main(["verify", "--trials", "0"]) == 2


def test_cmd_verify_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("MASLOV_ITER_THREADS", "2")
    assert main(["verify", "--suite", "nullity", "--trials", "2", "--seed", "3"]) == 0


def test_cmd_decompose(tmp_path):
    space = canonical_space(1)
    m = np.array([[np.cosh(1.0), np.sinh(1.0)], [np.sinh(1.0), np.cosh(1.0)]])
    loop = {"type": "exp", "generator": matrix_to_json(np.diag([2j * np.pi, 0.0])),
            "domain": [0.0, 1.0]}
    cfg = _write(tmp_path, "d.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "matrix": matrix_to_json(m),
        "path": loop,
    })
    out = tmp_path / "dec.json"
    assert main(["decompose", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["residual"] < 1e-9
    assert payload["winding_pair"] == [1, 0]
    U = np.array(payload["U"])
    assert np.allclose(U[..., 0] + 1j * U[..., 1], np.eye(2), atol=1e-9)


def test_cmd_decompose_rejects_nonsymplectic(tmp_path):
    cfg = _write(tmp_path, "d2.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "matrix": matrix_to_json(np.diag([2.0, 3.0])),
    })
    assert main(["decompose", "--config", cfg]) == 3


def test_cmd_index_absurd_tolerance_exit_code(tmp_path):
    space = canonical_space(1)
    path = ExpPath(space, space.J, domain=(0.0, 2 * np.pi))
    cfg = _write(tmp_path, "tol.json", {
        "schema_version": 1,
        "space": {"canonical": 1},
        "path": path.to_dict(),
        "v": {"kind": "circle", "z": [1.0, 0.0]},
    })
    code = main(["index", "--config", cfg, "--tol", "0.1"])
    assert code == 3


def test_cmd_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "fixtures pass" in out
    assert "FAIL" not in out
