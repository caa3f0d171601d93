import csv
import io
import json
import subprocess
import sys

import pytest

from pseudoboson import cli
from pseudoboson.region import eta_window


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def strip_meta(text):
    data = json.loads(text)
    data.pop("metadata", None)
    return data


def test_family_oscillator(capsys):
    code, out, _ = run(["family", "--epsilon", "1", "--eta-re", "0", "--nmax", "10"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["biorthonormality"]["max_deviation"] <= 1e-10
    assert rep["passed"] is True
    assert rep["hermite_case"]["applicable"] is True


def test_family_domain_error(capsys):
    code, out, err = run(["family", "--epsilon", "0.1", "--eta-re", "0.2"], capsys)
    assert code == 2
    assert out == ""
    assert "epsilon^2 > 4|eta|^2" in err


def test_family_inadmissible(capsys):
    code, _, err = run(["family", "--epsilon", "0.9", "--eta-re", "0.3"], capsys)
    assert code == 2
    assert "not square integrable" in err


def test_family_generic_fields(capsys):
    code, out, _ = run(["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "12"], capsys)
    assert code == 0
    rep = json.loads(out)
    for key in ("coefficients", "admissibility", "biorthonormality", "ladder", "eigen",
                "riesz", "hermite_case", "tolerances", "checks", "metadata"):
        assert key in rep
    assert len(rep["riesz"]["d_n"]) == 13
    assert rep["coefficients"]["kAminus"][1] == 0.0
    assert rep["tolerances"]["biorth"] == 1e-8


def test_family_quadrature_flag(capsys):
    code, out, _ = run(["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "8",
                        "--quadrature"], capsys)
    assert code == 0
    assert json.loads(out)["biorthonormality"]["quadrature_max_deviation"] <= 1e-8


def test_tolerance_failure_exit_one(capsys):
    code, out, err = run(["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "6",
                          "--tol-biorth", "1e-30"], capsys)
    assert code == 1
    assert json.loads(out)["checks"]["biorthonormality"] is False
    assert "tolerance" in err


def test_tolerance_scale_env(capsys, monkeypatch):
    monkeypatch.setenv("PSEUDOBOSON_TOL_SCALE", "1e-30")
    code, out, _ = run(["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "6"], capsys)
    assert code == 1
    assert json.loads(out)["tolerances"]["biorth"] == pytest.approx(1e-38)


@pytest.mark.parametrize("value", ["abc", "-1", "0"])
def test_tolerance_scale_env_invalid(capsys, monkeypatch, value):
    monkeypatch.setenv("PSEUDOBOSON_TOL_SCALE", value)
    code, _, err = run(["family", "--epsilon", "1", "--nmax", "2"], capsys)
    assert code == 2
    assert "PSEUDOBOSON_TOL_SCALE" in err


def test_scan_csv(capsys):
    code, out, _ = run(["scan", "--alpha", "3", "--eta-min", "-0.4", "--eta-max", "0.4",
                        "--eta-steps", "81", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == cli.SCAN_COLUMNS
    assert len(rows) == 81
    zero = [r for r in rows if float(r["eta"]) == 0.0]
    assert len(zero) == 1 and zero[0]["classification"] == "excluded"
    adm = [float(r["eta"]) for r in rows if r["admissible"] == "true"]
    inadm = [float(r["eta"]) for r in rows if r["admissible"] == "false"]
    eta0 = eta_window(3.0)
    # window edge within one grid step of +-eta0
    assert max(adm) < eta0 < max(adm) + 0.01 + 1e-12
    assert min(adm) > -eta0 > min(adm) - 0.01 - 1e-12
    assert all(abs(e) > eta0 for e in inadm)
    for r in rows:
        if r["classification"] in ("admissible", "inadmissible"):
            assert r["classification_consistent"] == "true"
            both = r["condA"] == "true" and r["condB"] == "true"
            assert both == (abs(float(r["eta"])) < eta0)


def test_scan_json(capsys):
    code, out, _ = run(["scan", "--alpha", "3", "-3", "--eta-min", "-0.3", "--eta-max", "0.3",
                        "--eta-steps", "7", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert len(rep["rows"]) == 14
    assert rep["eta0"]["3.0"] == rep["eta0"]["-3.0"]


@pytest.mark.parametrize("argv", [
    ["scan", "--alpha", "1.5", "--eta-min", "0", "--eta-max", "1", "--eta-steps", "3"],
    ["scan", "--alpha", "3", "--eta-min", "0", "--eta-max", "1", "--eta-steps", "0"],
    ["scan", "--alpha", "3", "--eta-min", "1", "--eta-max", "0", "--eta-steps", "3"],
])
def test_scan_bad_grid(capsys, argv):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_oracle_oscillator(capsys):
    code, out, _ = run(["oracle", "--epsilon", "1", "--eta-re", "0", "--dim", "60",
                        "--block", "20"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["eq31"]["resA"] <= 1e-9 and rep["eq31"]["resB"] <= 1e-9
    assert rep["intertwining"]["HS_Sh"] <= 1e-9
    assert rep["eq35"]["phi_deviation"] <= 1e-9


def test_oracle_generic(capsys):
    code, out, _ = run(["oracle", "--epsilon", "0.3", "--eta-re", "0.1", "--dim", "80",
                        "--block", "20"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert max(rep["eq31"]["resA"], rep["eq31"]["resB"]) <= 1e-6
    assert rep["eq31_convergence"]["dims"] == [40, 60, 80]
    assert rep["eq31_convergence"]["non_increasing"] is True


def test_oracle_precondition(capsys):
    code, _, err = run(["oracle", "--epsilon", "0.3", "--eta-re", "0.1", "--dim", "10",
                        "--block", "20"], capsys)
    assert code == 2
    assert "--dim" in err


def test_convergence_exit_three(capsys, monkeypatch):
    from pseudoboson.errors import ConvergenceError

    def boom(*args, **kwargs):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "verify_eq31", boom)
    code, _, err = run(["oracle", "--epsilon", "0.3", "--eta-re", "0.1"], capsys)
    assert code == 3
    assert "forced" in err


def test_output_file_and_determinism(tmp_path, capsys):
    argv = ["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "8"]
    paths = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert cli.main(argv + ["-o", str(path)]) == 0
        paths.append(path)
    a, b = (strip_meta(p.read_text()) for p in paths)
    assert a == b
    texts = [p.read_text().split('"metadata"')[0] for p in paths]
    assert texts[0] == texts[1]


def test_scan_csv_byte_identical(tmp_path):
    argv = ["scan", "--alpha", "3", "4", "--eta-min", "-0.4", "--eta-max", "0.4",
            "--eta-steps", "41", "--format", "csv"]
    outs = []
    for k in range(2):
        path = tmp_path / f"s{k}.csv"
        assert cli.main(argv + ["-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_floats_round_trip(capsys):
    code, out, _ = run(["family", "--epsilon", "0.3", "--eta-re", "0.1", "--nmax", "3"], capsys)
    rep = json.loads(out)
    from pseudoboson.core import coefficient_set, make_parameters

    c = coefficient_set(make_parameters(0.3, 0.1))
    assert rep["coefficients"]["kAplus"][0] == c.kAplus.real


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pseudoboson.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == cli.__version__
