import numpy as np
import pytest

from splitphoton.cli import main

SCENARIO = """\
[mirror]
D = 5.0

[detector]
id = DR
position = 3.0

[detector]
id = DL
position = -3.0

[run]
trials = 400
seed = 7
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "two_detectors.txt"
    path.write_text(SCENARIO)
    return str(path)


class TestSnapshot:
    def test_header_and_shape(self, tmp_path):
        out = tmp_path / "snap.csv"
        assert main(["snapshot", "--s", "0.25", "--grid", "128", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x,E,B,rho"
        assert len(lines) == 129

    def test_rho_column_consistent(self, tmp_path):
        out = tmp_path / "snap.csv"
        main(["snapshot", "--t", "0.4", "--grid", "256", "--out", str(out)])
        data = np.genfromtxt(out, delimiter=",", names=True)
        assert np.allclose(data["rho"], data["E"] ** 2 + data["B"] ** 2, atol=1e-15)

    def test_requires_exactly_one_of_s_t(self, capsys):
        assert main(["snapshot"]) == 1
        assert main(["snapshot", "--s", "0.2", "--t", "0.3"]) == 1
        assert "exactly one" in capsys.readouterr().err

    def test_digits17_formatting(self, tmp_path):
        out = tmp_path / "snap.csv"
        main(["snapshot", "--s", "0.5", "--grid", "128", "--out", str(out), "--digits17"])
        row = out.read_text().splitlines()[70].split(",")
        e_text = row[1]
        mantissa = e_text.split("e")[0].lstrip("-").replace(".", "").lstrip("0")
        assert len(mantissa) == 17
        assert float(e_text) == pytest.approx(float(row[1]))  # parses back


class TestEnergy:
    def test_header_and_conservation(self, tmp_path):
        out = tmp_path / "energy.csv"
        assert main(["energy", "--steps", "101", "--out", str(out)]) == 0
        data = np.genfromtxt(out, delimiter=",", names=True)
        assert list(data.dtype.names) == ["s", "e_rw", "e_E_sw", "e_B_sw", "e_sw", "total"]
        assert np.allclose(data["total"], 1.0, atol=1e-12)
        assert np.allclose(data["e_rw"] + data["e_sw"], 1.0, atol=1e-12)


class TestTrack:
    def test_locator_matches_closed_form(self, tmp_path):
        out = tmp_path / "track.csv"
        assert main(["track", "--steps", "20", "--grid", "1024", "--out", str(out)]) == 0
        data = np.genfromtxt(out, delimiter=",", names=True)
        assert list(data.dtype.names) == ["s", "x_D_analytic", "x_D_located", "residual"]
        cell = 1.0 / 1023
        assert np.all(data["residual"] <= cell + 1e-15)


class TestDce:
    def test_csv_header_and_rows(self, tmp_path, scenario_file, capsys):
        out = tmp_path / "trials.csv"
        assert main(["dce", scenario_file, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "trial,instrument,click_time,scatter_x,branch"
        assert len(lines) == 401
        assert "trials: 400" in capsys.readouterr().out

    def test_byte_identical_reruns(self, tmp_path, scenario_file):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["dce", scenario_file, "--out", str(out1)])
        main(["dce", scenario_file, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_override_changes_output(self, tmp_path, scenario_file):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["dce", scenario_file, "--out", str(out1)])
        main(["dce", scenario_file, "--seed", "8", "--out", str(out2)])
        assert out1.read_bytes() != out2.read_bytes()

    def test_model_override(self, tmp_path, scenario_file, capsys):
        out = tmp_path / "pw.csv"
        code = main(["dce", scenario_file, "--model", "preferred-way", "--trials", "50",
                     "--out", str(out)])
        assert code == 0
        assert "comparator" in capsys.readouterr().out

    def test_parse_error_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("[detector]\nposition = wide\n")
        assert main(["dce", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file_exits_one(self, tmp_path):
        assert main(["dce", str(tmp_path / "nope.txt")]) == 1


class TestCheck:
    def test_all_checks_pass(self, capsys):
        assert main(["check"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out and out.count("OK") >= 6

    def test_higher_mode(self, capsys):
        assert main(["check", "--n", "3"]) == 0
        assert "FAIL" not in capsys.readouterr().out


class TestUsage:
    def test_no_subcommand(self, capsys):
        assert main([]) == 1

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1
