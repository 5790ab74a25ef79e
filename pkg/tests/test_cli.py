import json
import subprocess
import sys

import numpy as np
import pytest

from pepscanon import tensorfile
from pepscanon.cli import main
from pepscanon.lattice import MpsSpec, apply_mps_gauge
from pepscanon.states import PAULI, planted_local, random_invertible, random_peps
from pepscanon.tensor_core import distance_up_to_scalar


@pytest.fixture
def files(tmp_path):
    out = {}
    for name in ("ghz", "aklt", "toric", "toric_edges", "polarized"):
        path = tmp_path / f"{name}.json"
        assert main(["export", name, str(path)]) == 0
        out[name] = str(path)
    return out


def _run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_inject_ghz_and_aklt(files, capsys):
    code, out, _ = _run(["inject", files["ghz"], "--length", "4"], capsys)
    assert code == 0 and "not injective, rank 2/4" in out
    code, out, _ = _run(["inject", files["aklt"], "--length", "2"], capsys)
    assert code == 0 and "injective, rank 4/4" in out and "not injective" not in out


def test_inject_minimal_length_not_found(files, capsys):
    code, _, err = _run(["inject", files["ghz"]], capsys)
    assert code == 5 and "NotFoundBelowCap" in err


def test_gauge_ghz_pair_exit_5(files, capsys):
    code, _, err = _run(["gauge", files["ghz"], files["ghz"]], capsys)
    assert code == 5 and "NonUniqueGauge (intertwiner dim 2)" in err


def test_gauge_emits_matrices(files, tmp_path, capsys):
    rng = np.random.default_rng(3)
    spec = tensorfile.read_spec(files["aklt"])
    R0 = random_invertible(rng, 2)
    other = tmp_path / "b.json"
    other.write_text(tensorfile.spec_to_text(MpsSpec.uniform(apply_mps_gauge(spec.tensor, R0))))
    code, out, _ = _run(["--json", "gauge", files["aklt"], str(other), "--emit", str(tmp_path / "g")], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["outputs"] and report["residuals"]["tensor"] < 1e-9
    R = tensorfile.read_matrix(report["outputs"][0])
    assert distance_up_to_scalar(R, R0) < 1e-8


def test_symmetry_commands(tmp_path, capsys):
    rng = np.random.default_rng(2)
    Y0 = random_invertible(rng, 2)
    Y0 = Y0 @ np.diag([1.0, -1.0]) @ np.linalg.inv(Y0)
    u = np.kron(PAULI["Z"], np.eye(2))
    spec = planted_local(0, u, Y0, np.eye(2))
    sfile, ufile = tmp_path / "s.json", tmp_path / "u.json"
    sfile.write_text(tensorfile.spec_to_text(spec))
    tensorfile.write(ufile, u, "matrix")
    code, out, _ = _run(["--json", "symmetry", str(sfile), "--u", str(ufile)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["residuals"]["tensor"] < 1e-9
    assert {v["tag"] for v in report["verdicts"]} >= {"local-symmetry"}
    # an unrelated tensor is not symmetric
    other = tmp_path / "o.json"
    other.write_text(tensorfile.spec_to_text(random_peps(5, 4)))
    code, _, err = _run(["symmetry", str(other), "--u", str(ufile)], capsys)
    assert code == 4 and "NotASymmetry" in err


def test_applications_commands(files, capsys):
    code, out, _ = _run(["lsm", files["aklt"], "--spin", "1"], capsys)
    assert code == 0 and "consistent: True" in out
    code, out, _ = _run(["wilson", files["toric"]], capsys)
    assert code == 0 and "non-injectivity implied: True" in out
    code, out, _ = _run(["parent", files["toric"], "--lattice", "2", "2"], capsys)
    assert code == 0 and "ground space dimension: 4" in out
    code, out, _ = _run(["arealaw", files["toric_edges"], "--region", "2", "2", "--lattice", "2", "4"], capsys)
    assert code == 0 and "S0 (bits): 3.0" in out and "boundary bound (bits): 4.0" in out


def test_demo_command(capsys):
    code, out, _ = _run(["--json", "demo", "ghz"], capsys)
    report = json.loads(out)
    assert code == 0 and all(v["value"] == "PASS" for v in report["verdicts"])
    assert report["command"] == ["--json", "demo", "ghz"]
    assert report["tolerances"] == {"relative_rank_cut": 1e-9, "residual_cut": 1e-9}


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": ')
    code, _, err = _run(["inject", str(bad)], capsys)
    assert code == 2 and "line 1" in err
    code, _, _ = _run(["inject", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_scale_exit_3(files, capsys):
    code, _, err = _run(["inject", files["toric"], "--region", "5", "5"], capsys)
    assert code == 3 and "DeskScaleExceeded" in err


def test_bad_tolerance_is_a_usage_error(files):
    with pytest.raises(SystemExit) as info:
        main(["--rel-cut", "2", "inject", files["aklt"]])
    assert info.value.code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pepscanon", "inject", files["aklt"], "--length", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "rank 4/4" in proc.stdout
