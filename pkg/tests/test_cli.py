import json

import pytest

from lvfield.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_compute_d_matrix_x2dx(capsys):
    rc, out, _ = run(capsys, "compute", "d-matrix", "--basis", "x2dx", "--window", "2")
    assert rc == 0
    rows = [line.split() for line in out.splitlines() if not line.startswith("#")]
    assert rows == [["-pi", "-8/3*pi"], ["8/3*pi", "-pi"]]


def test_compute_weyl_and_cuntz(capsys):
    rc, out, _ = run(capsys, "compute", "weyl-element", "--op", "D(E12) * D(E21)")
    assert rc == 0 and out.strip() == "x[1] d[1] + x[1] x[2] d[1] d[2]"
    rc, out, _ = run(capsys, "compute", "weyl-element", "--op", "d[1] x[1]")
    assert out.strip() == "1 + x[1] d[1]"
    rc, out, _ = run(capsys, "compute", "cuntz-element", "--op", "del(e1) * delbar(e1)")
    assert rc == 0 and out.strip() == "1"
    rc, out, _ = run(capsys, "compute", "cuntz-element", "--op", "del(e1) * delbar(e2)")
    assert out.strip() == "0"


def test_compute_cocycle_table(capsys):
    rc, out, _ = run(capsys, "compute", "cocycle-table")
    assert rc == 0
    body = [line.split() for line in out.splitlines() if not line.startswith("#")]
    assert body[0] == ["e", "h", "f"]
    assert body[1][3] == "12" and body[3][1] == "-12"


def test_verify_exit_codes_and_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    rc, _, err = run(capsys, "verify", "dynamics", "--instances", "3", "--out", str(out))
    assert rc == 0 and "0 failed" in err
    rep = json.loads(out.read_text())
    assert rep["config"] == {"instances": 3, "seed": 0}
    names = [c["name"] for c in rep["checks"]]
    assert names == sorted(names)
    # a failing check gives exit 1
    rc, _, err = run(capsys, "verify", "sine-examples", "--quadrature-nodes", "100")
    assert rc == 1 and "FAIL" in err


def test_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "verify", "cuntz-identities", "--instances", "5", "--seed", "3", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "dynamics", "--instances", "0")[0] == 2
    assert run(capsys, "compute", "d-matrix", "--basis", "nonsense")[0] == 2
    assert run(capsys, "compute", "weyl-element")[0] == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("bogus-section:\n  x: 1\n")
    assert run(capsys, "--config", str(bad), "list-suites")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing.yaml"), "list-suites")[0] == 2


def test_config_file_and_env(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("common:\n  seed: 7\ndynamics:\n  instances: 2\n")
    out = tmp_path / "r.json"
    assert run(capsys, "--config", str(cfg), "verify", "dynamics", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["config"] == {"instances": 2, "seed": 7}
    # flags override the file, env var supplies the path
    monkeypatch.setenv("LVFIELD_CONFIG", str(cfg))
    assert run(capsys, "verify", "dynamics", "--seed", "1", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["config"] == {"instances": 2, "seed": 1}


def test_list_suites(capsys):
    rc, out, _ = run(capsys, "list-suites")
    assert rc == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert "wavelet" in names and "js-identities" in names and len(names) == 11
