import json
import os

import numpy as np
import pytest

from xiladder.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_ground_stdout_summary(tmp_path, capsys):
    code, out, _ = run(
        ["ground", "--na", "2", "--mu12", "1.2", "--mu23", "0", "--resonance", "double"],
        capsys,
    )
    assert code == 0
    assert out == "M=1 E=-0.2"


def test_basis_csv(tmp_path, capsys):
    code, out, _ = run(["basis", "--na", "2", "--m", "2", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    assert "dim=4" in out
    header, rows = read_csv(tmp_path / "basis.csv")
    assert header == ["nu", "q", "r"]
    assert rows == [["2", "2", "2"], ["1", "2", "1"], ["0", "2", "0"], ["0", "1", "1"]]


def test_dump_h_matrix(tmp_path, capsys):
    code, out, _ = run(
        ["dump-h", "--na", "2", "--m", "1", "--mu12", "0.5", "--outdir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "hmatrix.csv")
    assert header == ["nu1_q2_r2", "nu0_q2_r1"]
    got = np.array([[float(x) for x in row] for row in rows])
    np.testing.assert_allclose(got, [[1.0, -0.5], [-0.5, 1.0]], atol=1e-12)


def test_spectrum_csv(tmp_path, capsys):
    code, out, _ = run(
        [
            "spectrum", "--na", "2", "--m", "0:2", "--mu12", "1",
            "--mu23", "1.41421356237", "--outdir", str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "spectrum.csv")
    assert header == ["M", "k", "E"]
    assert len(rows) == 1 + 2 + 4
    eigen_m2 = [float(r[2]) for r in rows if r[0] == "2"]
    np.testing.assert_allclose(eigen_m2, [0.0, 2.0, 2.0, 4.0], atol=1e-10)


def test_sweep_csv_schema(tmp_path, capsys):
    code, out, _ = run(
        [
            "sweep", "--na", "2", "--var", "mu23", "--range", "0.2:0.6",
            "--delta", "0.1", "--other-offset", "-0.2", "--outdir", str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "sweep.csv")
    assert header == ["lambda", "mu12", "mu23", "M", "E", "F", "chi"]
    assert len(rows) == 5
    assert rows[-1][5] == "" and rows[-1][6] == ""  # no F/chi on the last sample
    assert float(rows[0][1]) == pytest.approx(0.0)  # mu12 = mu23 - 0.2


def test_cut_subcommand(tmp_path, capsys):
    code, out, _ = run(
        ["cut", "--na", "3", "--mu23", "0", "--range", "0:1.5", "--delta", "0.25", "--outdir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "cut.csv")
    assert header == ["lambda", "mu12", "mu23", "M", "E", "F", "chi"]
    assert [r[3] for r in rows][:5] == ["0", "0", "0", "0", "0"]


def test_phase_diagram_files(tmp_path, capsys):
    code, out, _ = run(
        [
            "phase-diagram", "--na", "2", "--mu12", "0:3:41", "--mu23", "0:3:41",
            "--outdir", str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "phase.csv")
    assert header == ["mu12", "mu23", "M"]
    assert len(rows) == 41 * 41
    theader, trows = read_csv(tmp_path / "triple.csv")
    assert theader == ["mu12", "mu23", "labels"]
    best = min(
        (r for r in trows if r[2] == "0|1|2"),
        key=lambda r: abs(float(r[0]) - 1.0),
    )
    assert float(best[0]) == pytest.approx(1.0, abs=1e-4)
    assert float(best[1]) == pytest.approx(np.sqrt(2), abs=1e-4)


def test_observables_csv(tmp_path, capsys):
    code, out, _ = run(
        [
            "observables", "--na", "5", "--m", "7", "--mu12", "1",
            "--mu23", "1.41421356237", "--outdir", str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "expect.csv")
    assert header == ["k", "E", "A11", "A22", "A33", "nphot"]
    for r in rows:
        a11, a22, a33, nphot = map(float, r[2:])
        assert a11 + a22 + a33 == pytest.approx(5.0, abs=1e-9)
        assert nphot + a22 + 2 * a33 == pytest.approx(7.0, abs=1e-9)


def test_photons_finite_and_limit(tmp_path, capsys):
    code, out, _ = run(
        ["photons", "--na", "4", "--m", "8", "--mu12", "1", "--mu23", "1.41421356237", "--outdir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    header, rows = read_csv(tmp_path / "photons.csv")
    assert header == ["nu", "P"]
    assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-9)

    code, out, _ = run(
        ["photons", "--na", "4", "--limit", "--tol", "1e-4", "--mu12", "1", "--mu23", "1.41421356237", "--outdir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    assert "nu0=" in out


def test_thermo_fan_csv(tmp_path, capsys):
    code, out, _ = run(["thermo", "--mu12", "0:2:5", "--mmax", "3", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    header, rows = read_csv(tmp_path / "thermo.csv")
    assert header == ["mu12", "M", "E"]
    code, out, _ = run(["thermo", "--mu12", "1", "--mmax", "3", "--outdir", str(tmp_path)], capsys)
    assert code == 0


def test_json_format(tmp_path, capsys):
    code, out, _ = run(
        ["basis", "--na", "2", "--m", "1", "--outdir", str(tmp_path), "--format", "json"],
        capsys,
    )
    assert code == 0
    records = json.loads((tmp_path / "basis.json").read_text())
    assert records == [{"nu": 1, "q": 2, "r": 2}, {"nu": 0, "q": 2, "r": 1}]


def test_byte_identical_reruns(tmp_path, capsys):
    args = ["spectrum", "--na", "3", "--m", "0:4", "--mu12", "0.9", "--mu23", "1.1"]
    run(args + ["--outdir", str(tmp_path / "a")], capsys)
    run(args + ["--outdir", str(tmp_path / "b")], capsys)
    assert (tmp_path / "a" / "spectrum.csv").read_bytes() == (tmp_path / "b" / "spectrum.csv").read_bytes()


def test_threads_do_not_change_output(tmp_path, capsys):
    base = ["phase-diagram", "--na", "2", "--mu12", "0:2:15", "--mu23", "0:2:15"]
    run(base + ["--outdir", str(tmp_path / "t1"), "--threads", "1"], capsys)
    run(base + ["--outdir", str(tmp_path / "t2"), "--threads", "2"], capsys)
    assert (tmp_path / "t1" / "phase.csv").read_bytes() == (tmp_path / "t2" / "phase.csv").read_bytes()
    assert (tmp_path / "t1" / "triple.csv").read_bytes() == (tmp_path / "t2" / "triple.csv").read_bytes()


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("na=2\nmu12=0.5\nmu23=0\n")
    code, out, _ = run(["ground", "--config", str(cfg)], capsys)
    assert code == 0
    assert out == "M=0 E=0"
    code, out, _ = run(["ground", "--config", str(cfg), "--mu12", "1.2"], capsys)
    assert out == "M=1 E=-0.2"


def test_outdir_environment_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("XILADDER_OUTDIR", str(tmp_path))
    code, out, _ = run(["basis", "--na", "1", "--m", "1"], capsys)
    assert code == 0
    assert (tmp_path / "basis.csv").exists()


def test_argument_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--na", "2", "--m", "nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["ground", "--na", "2", "--omega1", "0.5"])  # conflicts with double resonance
    assert exc.value.code == 2


def test_computation_errors_exit_1(tmp_path, capsys):
    code, out, err = run(["ground", "--na", "2", "--mu12", "-1"], capsys)
    assert code == 1
    assert "error:" in err


def test_no_partial_files_on_failure(tmp_path, capsys):
    # invalid parameters fail before any write; directory stays clean
    code, _, _ = run(["spectrum", "--na", "2", "--m", "0:3", "--mu12", "-2", "--outdir", str(tmp_path)], capsys)
    assert code == 1
    assert list(tmp_path.iterdir()) == []
