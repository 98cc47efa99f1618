# coding: utf-8
import csv
import json
import os
import pathlib

import numpy as np
import pytest
import scipy.constants

import qgls
from qgls import cli
from qgls.config import TOL_ENV_VAR

TUTORIAL = pathlib.Path(__file__).resolve().parent.parent / "docs" / "source" / "tutorial"
LOSS_THEN_GAIN = str(TUTORIAL / "loss_then_gain.json")
PROFILE = str(TUTORIAL / "pt_profile.json")

PEAK = 2 / np.pi


def _pipeline_file(tmp_path, elements, amplitudes=((0.0, 0.0),), name="pipeline.json", **extra):
    doc = {"modes": len(amplitudes), "input": {"kind": "coherent", "amplitudes": [list(a) for a in amplitudes]}}
    doc["elements"] = elements
    doc.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return str(path)


def _text_file(tmp_path, text, name="pipeline.json"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _read_csv(path):
    with open(path, encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["x", "p", "w"]
    return np.array([[float(v) for v in row] for row in rows[1:]])


def test_version(capsys):
    with pytest.raises(SystemExit) as exc_info:
        cli.main(["--version"])
    assert exc_info.value.code == 0
    assert qgls.__version__ in capsys.readouterr().out


def test_missing_file(tmp_path, capsys):
    assert cli.main(["simulate", str(tmp_path / "nowhere.json")]) == cli.EXIT_IO
    assert capsys.readouterr().err.startswith("qgls: error:")


# -- validate ---------------------------------------------------------------


def test_validate__loss_then_gain(capsys):
    assert cli.main(["validate", LOSS_THEN_GAIN]) == cli.EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 2
    assert out[0].startswith("element 0 (loss): residual")
    assert out[1].startswith("element 1 (gain): residual")
    assert all(line.endswith("ok") for line in out)


def test_validate__json_report(tmp_path):
    target = tmp_path / "report.json"
    assert cli.main(["validate", LOSS_THEN_GAIN, "--pt-profile", PROFILE, "-o", str(target)]) == cli.EXIT_OK
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert [e["label"] for e in doc["elements"]] == ["loss", "gain"]
    assert doc["elements"][0]["singular_values"] == pytest.approx([2 / 3, 2 / 3])
    assert doc["elements"][1]["sigma"] == -1
    assert all(e["residual"] < 1e-12 for e in doc["elements"])
    assert doc["pt_profile"]["pt_symmetric"] is True


def test_validate__pt_profile(capsys):
    assert cli.main(["validate", LOSS_THEN_GAIN, "--pt-profile", PROFILE]) == cli.EXIT_OK
    assert "profile: PT-symmetric (residual" in capsys.readouterr().out


def test_validate__asymmetric_profile(tmp_path, capsys):
    profile = _text_file(tmp_path, json.dumps({"samples": [[-1.0, [1.5, 1.0]], [1.0, [1.5, 1.0]]]}), "n.json")
    assert cli.main(["validate", LOSS_THEN_GAIN, "--pt-profile", profile]) == cli.EXIT_VALIDATION
    assert "not PT-symmetric" in capsys.readouterr().out


def test_validate__loss_above_one(tmp_path, capsys):
    path = _pipeline_file(tmp_path, [{"kind": "loss", "t": 1.2}])
    assert cli.main(["validate", path]) == cli.EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "GainNotLoss" in err
    assert "element 0 (loss)" in err


def test_validate__gain_below_one(tmp_path, capsys):
    path = _pipeline_file(tmp_path, [{"kind": "gain", "T": [[0.5]], "label": "amp"}])
    assert cli.main(["validate", path]) == cli.EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "LossNotGain" in err
    assert "element 0 (amp)" in err


def test_validate__corrupted_row(tmp_path, capsys):
    path = _pipeline_file(
        tmp_path,
        [{"kind": "loss", "T": [[0.5, 0.0], [0.0]]}],
        amplitudes=((1.0, 0.0), (0.0, 0.0)),
    )
    assert cli.main(["validate", path]) == cli.EXIT_VALIDATION
    assert "rows must have 2 entries" in capsys.readouterr().err


def test_validate__unknown_key(tmp_path, capsys):
    text = '{\n  "modes": 1,\n  "input": {"kind": "coherent"},\n  "colour": "blue",\n  "elements": []\n}\n'
    assert cli.main(["validate", _text_file(tmp_path, text)]) == cli.EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "PipelineSyntaxError" in err
    assert "'colour'" in err
    assert "(line 4, column 3)" in err


def test_validate__bad_json(tmp_path, capsys):
    text = '{\n  "modes": 1,\n  "omega": ,\n  "elements": []\n}\n'
    assert cli.main(["validate", _text_file(tmp_path, text)]) == cli.EXIT_VALIDATION
    assert "(line 3, column" in capsys.readouterr().err


@pytest.mark.parametrize(
    "element",
    [
        {"kind": "loss"},
        {"kind": "loss", "t": 0.5, "T": [[0.5]]},
        {"kind": "unitary"},
        {"kind": "splitter", "t": 0.5},
        {"kind": "loss", "t": [0.5, 0.1, 0.2]},
        {"kind": "loss", "t": True},
    ],
)
def test_validate__malformed_element(tmp_path, element):
    path = _pipeline_file(tmp_path, [element])
    assert cli.main(["validate", path]) == cli.EXIT_VALIDATION


def test_validate__mode_out_of_range(tmp_path, capsys):
    path = _pipeline_file(tmp_path, [{"kind": "loss", "t": 0.5, "modes": [3]}])
    assert cli.main(["validate", path]) == cli.EXIT_VALIDATION
    assert "qgls: error:" in capsys.readouterr().err


def test_parse_pipeline__loss_then_gain():
    with open(LOSS_THEN_GAIN, encoding="utf-8") as f:
        p = cli.parse_pipeline(f.read())
    assert p.modes == 1
    assert [e.label for e in p.elements] == ["loss", "gain"]
    assert [e.device.kind for e in p.elements] == ["loss", "gain"]


# -- simulate ---------------------------------------------------------------


def _simulate(tmp_path, *args):
    target = tmp_path / "report.json"
    code = cli.main(["simulate"] + list(args) + ["-o", str(target)])
    assert code == cli.EXIT_OK
    return json.loads(target.read_text(encoding="utf-8"))


def test_simulate__loss_then_gain(tmp_path):
    doc = _simulate(tmp_path, LOSS_THEN_GAIN)
    assert doc["modes"] == 1
    assert doc["mean"] == [pytest.approx([3.0, 3.0], abs=1e-10)]
    assert np.allclose(doc["cov"], 0.875 * np.eye(2), atol=1e-10)
    assert doc["purity"] == pytest.approx(1 / 3.5, abs=1e-6)
    assert doc["mean_photon"] == [pytest.approx(19.25, abs=1e-9)]
    assert doc["inferred_nbar"] == [pytest.approx(1.25, abs=1e-9)]
    assert doc["units"] == "natural"
    [gain] = doc["gain"]
    assert gain["element"] == 1
    assert gain["label"] == "gain"
    assert gain["G"] == [pytest.approx(1.5)]
    assert gain["n_th"] == [pytest.approx(1.25, abs=1e-12)]
    assert gain["T_eff"] == [pytest.approx(1 / np.log(9 / 5), rel=1e-12)]
    assert "T_eff_literal" not in gain


def test_simulate__stdout_is_deterministic(capsys):
    assert cli.main(["simulate", LOSS_THEN_GAIN]) == cli.EXIT_OK
    first = capsys.readouterr().out
    assert cli.main(["simulate", LOSS_THEN_GAIN]) == cli.EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("}\n")
    assert json.loads(first)["purity"] == pytest.approx(1 / 3.5, abs=1e-6)


def test_simulate__literal_formula(tmp_path, capsys):
    doc = _simulate(tmp_path, LOSS_THEN_GAIN, "--literal-paper-formula")
    [gain] = doc["gain"]
    assert gain["T_eff_literal"] == [pytest.approx(np.log(9 / 5), abs=1e-12)]
    assert gain["T_eff"] == [pytest.approx(1 / np.log(9 / 5), rel=1e-12)]
    assert "qgls: FormulaCaveatWarning:" in capsys.readouterr().err


def test_simulate__literal_formula_quiet(tmp_path, capsys):
    target = tmp_path / "report.json"
    argv = ["--quiet", "simulate", LOSS_THEN_GAIN, "--literal-paper-formula", "-o", str(target)]
    assert cli.main(argv) == cli.EXIT_OK
    assert capsys.readouterr().err == ""


def test_simulate__si_units(tmp_path):
    doc = _simulate(tmp_path, LOSS_THEN_GAIN, "--si", "--omega-hz", "1e14")
    omega = 2 * np.pi * 1e14
    expected = scipy.constants.hbar * omega / (scipy.constants.k * np.log(9 / 5))
    assert doc["units"] == "si"
    assert doc["omega"] == pytest.approx(omega)
    assert doc["gain"][0]["T_eff"] == [pytest.approx(expected, rel=1e-12)]


def test_simulate__omega_hz_needs_si(capsys):
    assert cli.main(["simulate", LOSS_THEN_GAIN, "--omega-hz", "1e14"]) == cli.EXIT_VALIDATION
    assert "--si" in capsys.readouterr().err


def test_simulate__si_needs_omega_hz(capsys):
    assert cli.main(["simulate", LOSS_THEN_GAIN, "--si"]) == cli.EXIT_VALIDATION
    assert "--omega-hz" in capsys.readouterr().err


def test_simulate__identity_on_vacuum(tmp_path):
    path = _pipeline_file(tmp_path, [{"kind": "loss", "t": 1.0}, {"kind": "gain", "g": 1.0}])
    doc = _simulate(tmp_path, path)
    assert doc["purity"] == pytest.approx(1.0, abs=1e-12)
    assert doc["mean_photon"] == [pytest.approx(0.0, abs=1e-12)]
    assert doc["gain"][0]["n_th"] == [0.0]
    assert doc["gain"][0]["T_eff"] == [0.0]


def test_simulate__unit_gain_is_reported(tmp_path):
    path = _pipeline_file(tmp_path, [{"kind": "gain", "g": 1.0, "label": "idle amplifier"}])
    doc = _simulate(tmp_path, path)
    [gain] = doc["gain"]
    assert gain["element"] == 0
    assert gain["label"] == "idle amplifier"
    assert gain["G"] == [pytest.approx(1.0)]


def test_simulate__invalid_utf8(tmp_path, capsys):
    path = tmp_path / "pipeline.json"
    path.write_bytes(b"\xff\xfe{\"modes\": 1}")
    assert cli.main(["simulate", str(path)]) == cli.EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "PipelineSyntaxError" in err
    assert "UTF-8" in err


def test_simulate__loss_on_coherent(tmp_path):
    path = _pipeline_file(tmp_path, [{"kind": "loss", "t": 0.5}], amplitudes=((4.0, 0.0),))
    doc = _simulate(tmp_path, path)
    assert doc["mean"] == [pytest.approx([2.0, 0.0], abs=1e-12)]
    assert doc["purity"] == pytest.approx(1.0, abs=1e-12)
    assert "gain" not in doc


def test_simulate__tolerance_flag_restores_environment(monkeypatch, tmp_path):
    argv = ["--tol", "1e-6", "simulate", LOSS_THEN_GAIN, "-o", str(tmp_path / "report.json")]
    monkeypatch.setenv(TOL_ENV_VAR, "1e-9")
    assert cli.main(argv) == cli.EXIT_OK
    assert os.environ[TOL_ENV_VAR] == "1e-9"
    monkeypatch.delenv(TOL_ENV_VAR)
    assert cli.main(argv) == cli.EXIT_OK
    assert TOL_ENV_VAR not in os.environ


# -- wigner -----------------------------------------------------------------


def test_wigner__all_stages(tmp_path):
    target = tmp_path / "out.csv"
    assert cli.main(["wigner", LOSS_THEN_GAIN, "-o", str(target)]) == cli.EXIT_OK
    expected = [(3.0, 3.0, PEAK), (2.0, 2.0, PEAK), (3.0, 3.0, PEAK / 3.5)]
    for k, (x, p, w) in enumerate(expected):
        rows = _read_csv(tmp_path / "out_stage{0}.csv".format(k))
        assert rows.shape == (121 * 121, 3)
        peak = rows[np.argmax(rows[:, 2])]
        np.testing.assert_allclose(peak, [x, p, w], atol=1e-9)
    assert not target.exists()


def test_wigner__single_stage_json(tmp_path):
    target = tmp_path / "out.json"
    argv = ["wigner", LOSS_THEN_GAIN, "--stage", "2", "--format", "json", "--xrange", "0:6:61"]
    code = cli.main(argv + ["-o", str(target)])
    assert code == cli.EXIT_OK
    doc = json.loads(target.read_text(encoding="utf-8"))
    [stage] = doc["stages"]
    assert stage["stage"] == 2
    assert stage["label"] == "gain"
    assert stage["peak"] == pytest.approx([3.0, 3.0, PEAK / 3.5], abs=1e-9)
    assert stage["grid"]["samples"] == [61, 121]
    assert len(stage["grid"]["values"]) == 61 * 121


def test_wigner__single_point(tmp_path):
    target = tmp_path / "point.csv"
    argv = ["wigner", LOSS_THEN_GAIN, "--stage", "0", "--xrange", "3:3:1", "--prange", "3:3:1"]
    code = cli.main(argv + ["-o", str(target)])
    assert code == cli.EXIT_OK
    rows = _read_csv(target)
    assert rows == pytest.approx(np.array([[3.0, 3.0, PEAK]]), abs=1e-12)


@pytest.mark.parametrize(
    "args",
    [
        ["--stage", "7"],
        ["--stage", "last"],
        ["--mode", "1"],
    ],
)
def test_wigner__bad_arguments(tmp_path, args):
    target = tmp_path / "out.csv"
    assert cli.main(["wigner", LOSS_THEN_GAIN, "-o", str(target)] + args) == cli.EXIT_VALIDATION


@pytest.mark.parametrize(
    "args",
    [
        ["--xrange", "-6:6"],
        ["--xrange", "-6:6:0"],
        ["--xrange=-6:inf:3"],
        ["--prange", "a:b:3"],
        ["--prange", "-6"],
    ],
)
def test_wigner__bad_range(tmp_path, capsys, args):
    target = tmp_path / "out.csv"
    assert cli.main(["wigner", LOSS_THEN_GAIN, "-o", str(target)] + args) == cli.EXIT_VALIDATION
    assert "BadGrid" in capsys.readouterr().err


def test_wigner__negative_range_as_separate_token(tmp_path):
    target = tmp_path / "out.csv"
    argv = ["wigner", LOSS_THEN_GAIN, "--stage", "1", "--xrange", "-6:6:121", "--prange", "-6:6:61"]
    assert cli.main(argv + ["-o", str(target)]) == cli.EXIT_OK
    rows = _read_csv(target)
    assert rows.shape == (121 * 61, 3)
    assert rows[:, 0].min() == pytest.approx(-6.0)
    assert rows[:, 1].max() == pytest.approx(6.0)
    np.testing.assert_allclose(rows[np.argmax(rows[:, 2])], [2.0, 2.0, PEAK], atol=1e-9)


def test_wigner__several_stages_to_stdout(capsys):
    assert cli.main(["wigner", LOSS_THEN_GAIN]) == cli.EXIT_VALIDATION
    assert "BadGrid" in capsys.readouterr().err


# -- oracle -----------------------------------------------------------------


def test_oracle__loss_then_gain(tmp_path):
    target = tmp_path / "oracle.json"
    assert cli.main(["oracle", LOSS_THEN_GAIN, "-o", str(target)]) == cli.EXIT_OK
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["passed"] is True
    assert doc["dim"] == 80
    assert doc["purity_diff"] < 1e-5
    assert doc["mean_diff"] < 1e-5
    assert doc["cov_diff"] < 1e-5
    assert 0.0 < doc["truncation"]["leak"] < doc["bound"]


def test_oracle__truncation_overflow(capsys):
    assert cli.main(["oracle", LOSS_THEN_GAIN, "--dim", "10"]) == cli.EXIT_TRUNCATION
    assert "qgls: error:" in capsys.readouterr().err


def test_oracle__identity(tmp_path):
    path = _pipeline_file(tmp_path, [{"kind": "loss", "t": 1.0}], amplitudes=((0.5, -0.5),))
    target = tmp_path / "oracle.json"
    code = cli.main(["oracle", path, "--dim", "20", "--points", "0,0;1,-1", "-o", str(target)])
    assert code == cli.EXIT_OK
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["passed"] is True
    assert len(doc["wigner_points"]) == 4
    assert doc["wigner_diff"] < 1e-8


def test_oracle__bad_points(capsys):
    assert cli.main(["oracle", LOSS_THEN_GAIN, "--points", "1;2"]) == cli.EXIT_VALIDATION
    assert "re,im" in capsys.readouterr().err
