import json
import math

import pytest

from isotherm.cli import main

LN9 = math.log(9)


@pytest.fixture
def qubit_system(tmp_path):
    path = tmp_path / "qubit.json"
    path.write_text(json.dumps({"dim": 2, "hamiltonian": {"diagonal": [0.0, 1.0]}}))
    return str(path)


@pytest.fixture
def charged_system(tmp_path):
    path = tmp_path / "charged.json"
    path.write_text(json.dumps({
        "dim": 4,
        "hamiltonian": {"diagonal": [0.0, 1.0, 2.0, 3.0]},
        "charges": [{"diagonal": [0.0, 1.0, 1.0, 2.0]}],
    }))
    return str(path)


@pytest.fixture
def p91_state(tmp_path):
    path = tmp_path / "p91.json"
    path.write_text(json.dumps({"diagonal": [0.1, 0.9]}))
    return str(path)


def state_file(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestInfo:
    def test_text_report(self, qubit_system, p91_state, capsys):
        assert main(["info", qubit_system, p91_state]) == 0
        out = capsys.readouterr().out
        values = dict(line.split(" = ") for line in out.strip().splitlines())
        assert float(values["E"]) == pytest.approx(0.9)
        assert float(values["B"]) == pytest.approx(0.1, abs=1e-10)
        assert float(values["F"]) == pytest.approx(0.8, abs=1e-10)
        assert float(values["beta_intrinsic"]) == pytest.approx(LN9, abs=1e-9)

    def test_json_report(self, qubit_system, p91_state, capsys):
        assert main(["info", "--json", qubit_system, p91_state]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["S"] == pytest.approx(0.3250829733914482, abs=1e-10)
        assert data["beta_spontaneous"] == pytest.approx(-LN9, abs=1e-9)

    def test_sentinel_serialization(self, qubit_system, tmp_path, capsys):
        ground = state_file(tmp_path, "ground.json", {"diagonal": [1.0, 0.0]})
        assert main(["info", "--json", qubit_system, ground]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["beta_intrinsic"] == "inf"

    def test_deterministic_across_runs(self, qubit_system, p91_state, capsys):
        main(["info", qubit_system, p91_state])
        first = capsys.readouterr().out
        main(["info", qubit_system, p91_state])
        assert capsys.readouterr().out == first


class TestBoundary:
    def test_writes_csv(self, qubit_system, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert main(["boundary", qubit_system, "--beta-min", "-4", "--beta-max", "4",
                     "--points", "17", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "beta,E,S"
        assert len(lines) == 19

    def test_with_states(self, qubit_system, p91_state, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert main(["boundary", qubit_system, "--state", p91_state,
                     "--points", "9", "-o", str(out)]) == 0
        assert out.read_text().splitlines()[-1].startswith("state0,0.9,")


class TestRate:
    def test_qubit_pair(self, qubit_system, tmp_path, capsys):
        src = state_file(tmp_path, "src.json", {
            "matrix": {"re": [[0.7, -math.sqrt(3) * 0.2],
                              [-math.sqrt(3) * 0.2, 0.3]],
                       "im": [[0.0, 0.0], [0.0, 0.0]]}})
        tgt = state_file(tmp_path, "tgt.json", {"diagonal": [0.5, 0.5]})
        assert main(["rate", qubit_system, src, tgt]) == 0
        out = capsys.readouterr().out
        values = dict(line.split(" = ") for line in out.strip().splitlines())
        assert float(values["r"]) == pytest.approx(0.4689955935892812, abs=1e-3)


class TestEquilibrate:
    def test_two_qubit_fixture(self, qubit_system, tmp_path, capsys):
        cold = state_file(tmp_path, "cold.json", {"diagonal": [0.9, 0.1]})
        hot = state_file(tmp_path, "hot.json", {"diagonal": [0.7, 0.3]})
        assert main(["equilibrate", "--system", qubit_system, qubit_system,
                     "--state", hot, cold]) == 0
        out = capsys.readouterr().out
        values = dict(line.split(" = ") for line in out.strip().splitlines())
        assert float(values["beta_joint"]) == pytest.approx(1.5316255950049886, abs=1e-8)
        assert float(values["work_released"]) == pytest.approx(0.0444880673503, abs=1e-9)

    def test_isoenergetic_mode(self, qubit_system, tmp_path, capsys):
        a = state_file(tmp_path, "a.json", {"diagonal": [0.8, 0.2]})
        b = state_file(tmp_path, "b.json", {"diagonal": [1.0, 0.0]})
        assert main(["equilibrate", "--mode", "isoenergetic",
                     "--system", qubit_system, qubit_system,
                     "--state", a, b]) == 0
        values = dict(line.split(" = ")
                      for line in capsys.readouterr().out.strip().splitlines())
        assert float(values["entropy_produced"]) >= 0.0


class TestEngine:
    def test_csv_output(self, tmp_path, capsys):
        sys_a = state_file(tmp_path, "sa.json",
                           {"dim": 2, "hamiltonian": {"diagonal": [0.0, 1.0]}})
        sys_b = state_file(tmp_path, "sb.json",
                           {"dim": 2, "hamiltonian": {"diagonal": [0.0, 1.0]}})
        assert main(["engine", "--system-a", sys_a, "--system-b", sys_b,
                     "--beta-a", str(math.log(9)), "--beta-b", str(math.log(7 / 3)),
                     "--copies", "1,2,4"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n_a,n_b,W,eta,bound_finite,bound_carnot,gap"
        assert len(lines) == 4
        eta = float(lines[1].split(",")[3])
        assert eta == pytest.approx(0.36392833263769536, abs=1e-8)

    def test_equal_temperatures_exit_4(self, qubit_system, capsys):
        code = main(["engine", "--system-a", qubit_system, "--system-b", qubit_system,
                     "--beta-a", "1.0", "--beta-b", "1.0"])
        assert code == 4
        assert capsys.readouterr().out == ""  # no partial CSV

    def test_wrong_ordering_exit_3(self, qubit_system, capsys):
        assert main(["engine", "--system-a", qubit_system, "--system-b", qubit_system,
                     "--beta-a", "0.5", "--beta-b", "2.0"]) == 3


class TestLaws:
    def test_sweep_passes(self, capsys):
        assert main(["laws", "--trials", "25", "--seed", "7", "--dims", "2x2"]) == 0
        out = capsys.readouterr().out
        assert "trials = 25, failures = 0" in out

    def test_seed_reproducibility(self, capsys, monkeypatch):
        monkeypatch.setenv("ISOTHERM_SEED", "11")
        main(["laws", "--trials", "5"])
        first = capsys.readouterr().out
        main(["laws", "--trials", "5"])
        assert capsys.readouterr().out == first


class TestCharges:
    def test_report(self, charged_system, tmp_path, capsys):
        rho = state_file(tmp_path, "gge.json", {"gge": {"beta_vec": [0.8, -0.3]}})
        assert main(["charges", charged_system, rho]) == 0
        values = dict(line.split(" = ")
                      for line in capsys.readouterr().out.strip().splitlines())
        assert float(values["A"]) == pytest.approx(0.0, abs=1e-7)
        betas = [float(x) for x in values["beta_vec"].split(",")]
        assert betas[0] == pytest.approx(0.8, abs=1e-6)
        assert betas[1] == pytest.approx(-0.3, abs=1e-6)

    def test_system_without_charges_exit_2(self, qubit_system, p91_state):
        assert main(["charges", qubit_system, p91_state]) == 2


class TestErrorPaths:
    def test_missing_file_exit_2(self, qubit_system):
        assert main(["info", qubit_system, "/nonexistent/state.json"]) == 2

    def test_malformed_json_exit_2(self, qubit_system, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["info", qubit_system, str(bad)]) == 2

    def test_wrong_dimension_exit_2(self, qubit_system, tmp_path):
        bad = state_file(tmp_path, "bad.json", {"diagonal": [0.5, 0.25, 0.25]})
        assert main(["info", qubit_system, bad]) == 2

    def test_invalid_state_exit_2(self, qubit_system, tmp_path):
        bad = state_file(tmp_path, "bad.json", {"diagonal": [0.7, 0.7]})
        assert main(["info", qubit_system, bad]) == 2

    def test_domain_error_exit_3(self, tmp_path):
        # a single-subsystem equilibration is a domain error, not a schema error
        sys_a = state_file(tmp_path, "s.json",
                           {"dim": 2, "hamiltonian": {"diagonal": [0.0, 1.0]}})
        st = state_file(tmp_path, "st.json", {"diagonal": [0.5, 0.5]})
        assert main(["equilibrate", "--system", sys_a,
                     "--state", st]) == 3
