import json
import subprocess
import sys

import numpy as np
import pytest

from slicemono import cli
from slicemono.errors import NumericalFailure
from slicemono.suite import RunConfig, build_tasks, dumps, run_suite

QUICK = ["--structure", "paravector", "--n", "2", "--degree", "48", "--samples", "40", "--axes", "8"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_quick_config_passes(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(["verify", *QUICK, "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    assert code == 0, err
    assert doc["config"] == {"structure": "paravector", "n": 2, "degree": 48, "points": 40, "axes": 8,
                             "seed": 42, "tol": 1e-9, "rmax": 0.95}
    assert all(c["pass"] for c in doc["checks"])
    assert "[PASS]" in err


def test_verify_unattainable_tolerance_fails(tmp_path, capsys):
    code, _, _ = run(["verify", *QUICK, "--tol", "1e-30", "--out", str(tmp_path / "r.json")], capsys)
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["verify", "--structure", "paravector", "--n", "9"],
    ["verify", "--structure", "paravector"],
    ["verify", "--n", "3"],
    ["verify", "--rmax", "1.5"],
    ["verify", "--tol", "0"],
    ["verify", "--bogus"],
])
def test_verify_config_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_verify_numerical_failure_exit_code(monkeypatch, capsys):
    def boom(cfg):
        raise NumericalFailure("winding integral 0.52 is not an integer")

    monkeypatch.setattr(cli, "run_suite", boom)
    code, _, err = run(["verify"], capsys)
    assert code == 3 and "numerical failure" in err


def test_report_ignores_parallelism():
    cfg = RunConfig(structure="paravector", n=2, degree=32, points=20, axes=4)
    a = dumps(run_suite(cfg))
    b = dumps(run_suite(RunConfig(**{**cfg.__dict__, "jobs": 3})))
    assert a == b


def test_task_names_are_unique():
    names = [n for n, _ in build_tasks(RunConfig())]
    assert len(names) == len(set(names))
    assert any(n.startswith("koebe_quarter") for n in names)
    assert not any(n.startswith("koebe_quarter") for n, _ in build_tasks(RunConfig("paravector", 3)))


# --- generate and eval -------------------------------------------------------------

def test_generate_koebe(tmp_path, capsys):
    path = tmp_path / "k.json"
    code, _, _ = run(["generate", "koebe", "--theta", "0", "--axis", "e1", "--degree", "256", "--out", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["degree"] == 256 and doc["structure"] == "quaternion"
    assert np.array_equal(np.array(doc["coefficients"])[:, 0], np.arange(257.0))


def test_generate_moebius_identity(capsys):
    code, out, _ = run(["generate", "moebius", "--a", "0", "--u", "1", "--degree", "4"], capsys)
    c = np.array(json.loads(out)["coefficients"])
    assert code == 0 and c[1, 0] == 1 and np.count_nonzero(c) == 1


def test_generate_ext(tmp_path, capsys):
    F = tmp_path / "F.json"
    F.write_text(json.dumps({"degree": 2, "coefficients": [[0, 0], [1, 0], [0, 1]]}))
    code, out, _ = run(["generate", "ext", "--coeffs", str(F), "--axis", "e2"], capsys)
    c = np.array(json.loads(out)["coefficients"])
    assert code == 0 and np.array_equal(c[2], [0, 0, 1, 0])


def test_generate_catalog(capsys):
    code, out, _ = run(["generate", "catalog", "--name", "halfsquare", "--structure", "paravector", "--n", "3",
                        "--degree", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["n"] == 3 and np.array(doc["coefficients"])[2, 0] == -0.5


@pytest.mark.parametrize("argv", [
    ["generate", "catalog", "--name", "nope"],
    ["generate", "koebe", "--axis", "e3"],
    ["generate", "koebe", "--axis", "2e1"],
    ["generate", "moebius", "--a", "e1"],
    ["generate", "ext"],
])
def test_generate_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


@pytest.fixture
def koebe_file(tmp_path, capsys):
    path = tmp_path / "k.json"
    assert cli.main(["generate", "koebe", "--degree", "256", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def test_eval_koebe_at_half(koebe_file, capsys):
    code, out, err = run(["eval", str(koebe_file), "0.5", "0", "0", "0"], capsys)
    val = json.loads(out)
    assert code == 0 and err == ""
    assert val["n"] == 2 and abs(val["coeffs"][0] - 2.0) <= 1e-12


def test_eval_identity_echoes_point(tmp_path, capsys):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"structure": "paravector", "n": 3, "degree": 1,
                                "coefficients": [[0] * 8, [1] + [0] * 7]}))
    code, out, _ = run(["eval", str(path), "0", "0.3", "0.4", "0"], capsys)
    assert code == 0 and np.allclose(json.loads(out)["coeffs"], [0, 0.3, 0.4, 0, 0, 0, 0, 0])


def test_eval_representation_route(koebe_file, capsys):
    _, direct, _ = run(["eval", str(koebe_file), "0.1", "0.2", "0.3", "0.1"], capsys)
    code, rep, _ = run(["eval", str(koebe_file), "0.1", "0.2", "0.3", "0.1", "--representation", "--axis",
                        "0.6e1+0.8e2"], capsys)
    assert code == 0
    assert np.allclose(json.loads(direct)["coeffs"], json.loads(rep)["coeffs"], atol=1e-12)


def test_eval_warns_outside_rmax(koebe_file, capsys):
    code, out, err = run(["eval", str(koebe_file), "0.97", "0", "0", "0"], capsys)
    assert code == 0 and "warning" in err and json.loads(out)["n"] == 2


@pytest.mark.parametrize("point", [["1", "2"], ["a", "0", "0", "0"]])
def test_eval_invalid_point(koebe_file, point, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(["eval", str(koebe_file), *point]))
    assert exc.value.code == 2


@pytest.mark.parametrize("content", ["not json", "{}", json.dumps({"structure": "quaternion", "n": 2, "degree": 2,
                                                                  "coefficients": [[0, 0, 0, 0]]})])
def test_eval_malformed_file(tmp_path, content, capsys):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert run(["eval", str(path), "0", "0", "0", "0"], capsys)[0] == 2


def test_eval_missing_file(tmp_path, capsys):
    assert run(["eval", str(tmp_path / "absent.json"), "0", "0", "0", "0"], capsys)[0] == 2


def test_module_entry_point(koebe_file):
    proc = subprocess.run([sys.executable, "-m", "slicemono", "eval", str(koebe_file), "0.5", "0", "0", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and abs(json.loads(proc.stdout)["coeffs"][0] - 2.0) < 1e-12
