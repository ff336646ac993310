import json

import numpy as np
import pytest

from sinespec.cli import main


def write_coeff(tmp_path, name, u=(0.0,), w=()):
    path = tmp_path / name
    path.write_text(json.dumps({"u": list(u), "w": list(w)}))
    return str(path)


@pytest.fixture
def cos2(tmp_path):
    return write_coeff(tmp_path, "cos2.json", u=(0, 0, 1.0))


@pytest.fixture
def one(tmp_path):
    return write_coeff(tmp_path, "one.json", u=(1.0,))


def test_trace_constant_p_passes(capsys, one):
    code = main(["trace", "--formula", "TRF3", "--p", one, "-N", "64", "-K", "16"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("formula=TRF3 gap=")
    assert out.strip().endswith("PASS")


def test_trace_trs_summary_and_report(capsys, tmp_path, cos2):
    out_path = tmp_path / "trs.csv"
    code = main(
        ["trace", "--formula", "TRS", "--q", cos2, "-N", "128", "-K", "48", "--out", str(out_path)]
    )
    assert code == 0
    line = capsys.readouterr().out.strip()
    assert "formula=TRS" in line and line.endswith("PASS")
    rows = out_path.read_text().strip().splitlines()
    assert rows[0] == "K,S_K,accelerated,rhs,gap"
    assert len(rows) == 49
    # rhs column is -0.5 in every row
    assert all(abs(float(r.split(",")[3]) + 0.5) < 1e-12 for r in rows[1:])


def test_trace_fail_exit_code(capsys, cos2):
    # impossible tolerance forces the FAIL branch and exit 1
    code = main(
        ["trace", "--formula", "TRF3", "--p", cos2, "-N", "128", "-K", "48", "--tol", "1e-12"]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "formula=TRF3" in out and "FAIL" in out


def test_trace_json_report(tmp_path, one):
    out_path = tmp_path / "rep.json"
    code = main(
        [
            "trace", "--formula", "GLF", "--p", one,
            "-N", "64", "-K", "16", "--out", str(out_path), "--format", "json",
        ]
    )
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data["formula"] == "GLF"
    assert len(data["partial"]) == 16


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"u": [1, ')
    code = main(["trace", "--formula", "GLF", "--p", str(bad), "-N", "64", "-K", "16"])
    err = capsys.readouterr().err
    assert code == 2
    assert "line" in err and "column" in err


def test_bad_field_type_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad2.json"
    bad.write_text('{"u": ["x"]}')
    code = main(["trace", "--formula", "GLF", "--p", str(bad), "-N", "64", "-K", "16"])
    err = capsys.readouterr().err
    assert code == 2
    assert "'u'" in err


def test_precondition_violation_exits_2(tmp_path, capsys):
    q = write_coeff(tmp_path, "shifted.json", u=(0.5, 0, 1.0))
    code = main(["trace", "--formula", "TRF3", "--q", q, "-N", "64", "-K", "16"])
    err = capsys.readouterr().err
    assert code == 2
    assert "zero-mean" in err


def test_n_must_cover_2k(capsys, one):
    code = main(["trace", "--formula", "GLF", "--p", one, "-N", "100", "-K", "64"])
    assert code == 2
    assert "N >= 2K" in capsys.readouterr().err


def test_spectrum_command_writes_csv(tmp_path, capsys, one):
    out_path = tmp_path / "spec.csv"
    code = main(
        ["spectrum", "--kind", "H", "--p", one, "-N", "32", "-K", "16", "--out", str(out_path)]
    )
    assert code == 0
    assert "n_trusted=" in capsys.readouterr().out
    rows = out_path.read_text().strip().splitlines()
    assert rows[0] == "n,value,est_abs_err,trusted"
    assert len(rows) == 33


def test_spectrum_dump_matrix(tmp_path, one):
    dump = tmp_path / "mat.csv"
    code = main(
        ["spectrum", "--kind", "h", "--p", one, "-N", "8", "-K", "4", "--dump-matrix", str(dump)]
    )
    assert code == 0
    grid = [row.split(",") for row in dump.read_text().strip().splitlines()]
    assert len(grid) == 8 and len(grid[0]) == 8
    a = np.array([[float(v) for v in row] for row in grid])
    assert a[0, 0] == pytest.approx(np.pi**2 - 1.0, rel=1e-12)


def test_dispute_command(tmp_path, capsys, cos2):
    out_path = tmp_path / "disp.json"
    code = main(
        [
            "dispute", "--variant", "DikiiTrfD1", "--p", cos2,
            "-N", "128", "-K", "48", "--out", str(out_path),
        ]
    )
    assert code == 0
    line = capsys.readouterr().out
    assert "verdict=reference" in line
    data = json.loads(out_path.read_text())
    assert data["variant"] == "DikiiTrfD1"
    assert data["disagreement"] == pytest.approx(2 * np.pi**2, abs=1e-10)


def test_asym_command(tmp_path, capsys, cos2):
    out_path = tmp_path / "asym.csv"
    code = main(["asym", "--p", cos2, "-N", "128", "-K", "48", "--out", str(out_path)])
    assert code == 0
    assert "fitted_C=" in capsys.readouterr().out
    rows = out_path.read_text().strip().splitlines()
    assert rows[0] == "n,residual,n2_abs_residual"
    assert len(rows) == 49


def test_localize_command(capsys, cos2):
    code = main(["localize", "--kind", "H", "--p", cos2, "-N", "64", "-K", "32"])
    assert code == 0
    out = capsys.readouterr().out
    assert "n0=" in out and "violations=0" in out


def test_sweep_command_csv(tmp_path, capsys, cos2):
    sin2 = write_coeff(tmp_path, "sin2.json", u=(0.0,), w=(0.0, 1.0))
    out_path = tmp_path / "rec.csv"
    code = main(
        [
            "sweep", "--recover", "q", "--p", cos2, "--q", sin2,
            "--grid", "8", "-N", "64", "-K", "24",
            "--mode", "richardson", "--out", str(out_path),
        ]
    )
    assert code == 0
    assert "sweep target=q" in capsys.readouterr().out
    rows = out_path.read_text().strip().splitlines()
    assert rows[0] == "tau,recovered_value,accelerated_sum,n_trusted"
    assert len(rows) == 9


def test_sweep_grid_16_row_count(tmp_path, cos2):
    sin2 = write_coeff(tmp_path, "sin2.json", u=(0.0,), w=(0.0, 1.0))
    out_path = tmp_path / "rec16.csv"
    code = main(
        [
            "sweep", "--recover", "q", "--p", cos2, "--q", sin2,
            "--grid", "16", "-N", "32", "-K", "12",
            "--mode", "richardson", "--out", str(out_path),
        ]
    )
    assert code == 0
    assert len(out_path.read_text().strip().splitlines()) == 17


def test_sweep_json_with_spectra(tmp_path, cos2):
    out_path = tmp_path / "sweep.json"
    code = main(
        [
            "sweep", "--recover", "V", "--p", cos2,
            "--grid", "4", "-N", "32", "-K", "12",
            "--out", str(out_path), "--format", "json", "--full-spectra",
        ]
    )
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data["target"] == "V"
    assert len(data["taus"]) == 4
    assert len(data["spectra"]) == 4
    assert "mu" in data["spectra"][0]


def test_csv_outputs_byte_identical(tmp_path, cos2):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        code = main(
            ["trace", "--formula", "TRS", "--q", cos2, "-N", "64", "-K", "24", "--out", str(path)]
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_unknown_command_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
