"""Command-line behavior: output schemas, CSV shape, exit codes.

Most tests drive cli.main(argv) in process and read the captured stdout;
one subprocess test confirms the module entry point wires up to the same
function.
"""
import json
import subprocess
import sys

import numpy as np

from markovscope import cli
from markovscope.channels import ChannelMatrix, OperatorBasis
from markovscope.io import channel_to_dict, load_channel, save_channel
from markovscope.zoo import (
    dephasing_channel,
    figure2a_mixture,
    rabi_unitary,
    random_channel,
)

CSV_HEADER = "param,markovian,mu_min,measure,td_markovian,det"

REPORT_KEYS = {
    "schema",
    "verdict",
    "dimension",
    "witness_branch",
    "best_branch",
    "max_min_eigenvalue",
    "mu_min",
    "measure",
    "m_max",
    "diagnostics",
}

MU_HALF_MIX = 0.40126269753636545
MEASURE_HALF_MIX = 0.3000554186331298


def run_cli(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def decode_matrix(data):
    return np.array([[complex(re, im) for re, im in row] for row in data])


def test_check_json_markovian(capsys):
    code, out, _ = run_cli(capsys, ["check", "--model", "dephasing", "--json"])
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == REPORT_KEYS
    assert obj["verdict"] == "MARKOVIAN"
    assert obj["measure"] == 1.0
    assert obj["mu_min"] == 0.0
    assert obj["witness_branch"] == []
    assert obj["dimension"] == 2


def test_check_json_not_markovian(capsys):
    code, out, _ = run_cli(
        capsys, ["check", "--model", "figure2a", "--param", "p=0.5", "--json"]
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["verdict"] == "NOT_MARKOVIAN"
    assert np.abs(obj["mu_min"] - MU_HALF_MIX) < 1e-12
    assert np.abs(obj["measure"] - MEASURE_HALF_MIX) < 1e-12
    assert np.abs(obj["measure"] - np.exp(-3.0 * obj["mu_min"])) < 1e-15
    assert obj["witness_branch"] is None
    assert obj["best_branch"] is not None


def test_check_human_markovian(capsys):
    code, out, _ = run_cli(capsys, ["check", "--model", "rabi", "--param", "theta=0.3"])
    assert code == 0
    assert "verdict: MARKOVIAN" in out
    assert "measure: 1\n" in out
    assert "mu_min: 0\n" in out
    assert "witness branch: [0]" in out
    assert "diagnostics:" in out


def test_check_dump_spectrum_json(capsys):
    code, out, _ = run_cli(
        capsys,
        ["check", "--model", "figure2a", "--param", "p=0.5", "--json", "--dump-spectrum"],
    )
    assert code == 0
    obj = json.loads(out)
    assert len(obj["spectrum"]["clusters"]) == 4
    assert obj["spectrum"]["pairs"] == [[2, 3]]


def test_check_dump_spectrum_human(capsys):
    code, out, _ = run_cli(
        capsys, ["check", "--model", "figure2a", "--param", "p=0.5", "--dump-spectrum"]
    )
    assert code == 0
    assert "verdict: NOT_MARKOVIAN" in out
    assert "witness branch" not in out
    assert "cluster 0:" in out
    assert "conjugate pairs: [[2, 3]]" in out


def test_check_file_input(tmp_path, capsys):
    path = tmp_path / "chan.json"
    save_channel(dephasing_channel(0.7), str(path))
    code, out, _ = run_cli(capsys, ["check", str(path), "--json"])
    assert code == 0
    assert json.loads(out)["verdict"] == "MARKOVIAN"


def test_measure_human(capsys):
    code, out, _ = run_cli(capsys, ["measure", "--model", "figure2a", "--param", "p=0.5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("measure: 0.300055")
    assert lines[1].startswith("mu_min: 0.401262")


def test_tdcheck_json(capsys):
    code, out, _ = run_cli(capsys, ["tdcheck", "--model", "dephasing", "--json"])
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"schema", "td_markovian", "s", "det"}
    assert obj["td_markovian"] is True
    assert np.abs(np.array(obj["s"]) - [1.0, 1.0, np.exp(-2.0), np.exp(-2.0)]).max() < 1e-12
    assert np.abs(obj["det"] - np.exp(-4.0)) < 1e-12


def test_tdcheck_human(capsys):
    code, out, _ = run_cli(capsys, ["tdcheck", "--model", "transpose_approx"])
    assert code == 0
    assert "td_markovian: false" in out
    assert "det: -0.037037" in out


def test_scan_csv_stdout(capsys):
    code, out, _ = run_cli(
        capsys,
        ["scan", "--model", "figure2a", "--start", "0", "--stop", "0.1", "--step", "0.05"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4
    params = [float(row.split(",")[0]) for row in lines[1:]]
    assert np.abs(np.array(params) - [0.0, 0.05, 0.1]).max() < 1e-12
    first = lines[1].split(",")
    assert first[1] == "1"
    assert first[4] == "1"


def test_scan_single_point(capsys):
    code, out, _ = run_cli(
        capsys,
        ["scan", "--model", "figure2a", "--start", "0.5", "--stop", "0.5", "--step", "0.1"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    row = lines[1].split(",")
    assert row[0] == "0.5"
    assert row[1] == "0"
    assert np.abs(float(row[3]) - MEASURE_HALF_MIX) < 1e-10


def test_scan_to_file(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run_cli(
        capsys,
        ["scan", "--model", "jc", "--start", "0.2", "--stop", "1.0", "--step", "0.4",
         "-o", str(out_path)],
    )
    assert code == 0
    assert out == ""
    lines = out_path.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4


def test_scan_rejects_bad_grid(capsys):
    code, _, err = run_cli(
        capsys,
        ["scan", "--model", "dephasing", "--start", "2.0", "--stop", "1.0", "--step", "0.5"],
    )
    assert code == 1
    assert "error:" in err
    code, _, err = run_cli(
        capsys,
        ["scan", "--model", "dephasing", "--start", "0.0", "--stop", "1.0", "--step", "0"],
    )
    assert code == 1
    assert "error:" in err


def test_scan_needs_sweep_param(capsys):
    code, _, err = run_cli(
        capsys,
        ["scan", "--model", "transpose_approx", "--start", "0", "--stop", "1", "--step", "0.5"],
    )
    assert code == 1
    assert "error:" in err


def test_sample_json(capsys):
    code, out, _ = run_cli(capsys, ["sample", "--d", "2", "--n", "40", "--seed", "7"])
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {
        "schema",
        "d",
        "n",
        "seed",
        "fraction_markovian",
        "fraction_td_markovian",
        "fraction_markovian_and_not_td",
    }
    assert obj["d"] == 2 and obj["n"] == 40 and obj["seed"] == 7
    assert 0.0 <= obj["fraction_markovian"] <= 1.0
    assert 0.0 <= obj["fraction_td_markovian"] <= 1.0
    assert obj["fraction_markovian_and_not_td"] == 0.0


def test_sample_threads_match(capsys):
    code1, out1, _ = run_cli(capsys, ["sample", "--n", "30", "--seed", "3"])
    code2, out2, _ = run_cli(capsys, ["sample", "--n", "30", "--seed", "3", "--threads", "4"])
    assert code1 == 0 and code2 == 0
    assert json.loads(out1) == json.loads(out2)


def test_sample_qutrit_omits_td(capsys):
    code, out, _ = run_cli(capsys, ["sample", "--d", "3", "--n", "6", "--seed", "11"])
    assert code == 0
    obj = json.loads(out)
    assert obj["fraction_td_markovian"] is None
    assert obj["fraction_markovian_and_not_td"] is None
    assert 0.0 <= obj["fraction_markovian"] <= 1.0


def test_power_identity_exponent(capsys):
    code, out, _ = run_cli(
        capsys, ["power", "--model", "figure2a", "--param", "p=0.3", "--s", "1"]
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["basis"] == "pauli"
    M = decode_matrix(obj["data"])
    assert np.abs(M - figure2a_mixture(0.3).entries).max() < 1e-7


def test_power_semigroup_square(capsys):
    code, out, _ = run_cli(capsys, ["power", "--model", "dephasing", "--s", "2"])
    assert code == 0
    M = decode_matrix(json.loads(out)["data"])
    assert np.abs(M - dephasing_channel(2.0).entries).max() < 1e-9


def test_power_branch_flag(capsys):
    code, out, _ = run_cli(
        capsys,
        ["power", "--model", "rabi", "--param", "theta=0.3", "--s", "0.5", "--branch", "0"],
    )
    assert code == 0
    M = decode_matrix(json.loads(out)["data"])
    assert np.abs(M - rabi_unitary(0.15).entries).max() < 1e-9


def test_power_file_round_trip(tmp_path, capsys):
    out_path = tmp_path / "half.json"
    code, _, _ = run_cli(
        capsys, ["power", "--model", "dephasing", "--s", "0.5", "-o", str(out_path)]
    )
    assert code == 0
    half = load_channel(str(out_path))
    assert np.abs(half.entries - dephasing_channel(0.5).entries).max() < 1e-9


def test_exit_validation_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli(capsys, ["check", str(bad)])
    assert code == 1
    assert "error:" in err

    code, _, _ = run_cli(capsys, ["check"])
    assert code == 1

    code, _, _ = run_cli(capsys, ["check", "--model", "dephasing", "--param", "t"])
    assert code == 1

    code, _, _ = run_cli(capsys, ["check", "--model", "dephasing", "--param", "t=abc"])
    assert code == 1


def test_exit_not_qubit(tmp_path, capsys):
    path = tmp_path / "qutrit.json"
    save_channel(random_channel(3, 5), str(path))
    code, _, err = run_cli(capsys, ["tdcheck", str(path)])
    assert code == 1
    assert "error:" in err


def test_exit_branch_mismatch(capsys):
    code, _, err = run_cli(
        capsys,
        ["power", "--model", "rabi", "--param", "theta=0.3", "--s", "0.5",
         "--branch", "0", "1"],
    )
    assert code == 1
    assert "error:" in err


def test_exit_numerical(capsys):
    code, _, err = run_cli(capsys, ["power", "--model", "transpose_approx", "--s", "0.5"])
    assert code == 2
    assert "error:" in err


def test_exit_not_a_channel(tmp_path, capsys):
    path = tmp_path / "double.json"
    T = ChannelMatrix(2.0 * np.eye(4), OperatorBasis.matrix_units(2))
    save_channel(T, str(path))
    code, _, err = run_cli(capsys, ["check", str(path)])
    assert code == 3
    assert "error:" in err


def test_tol_flag_loosens_verdict(capsys):
    code, out, _ = run_cli(
        capsys,
        ["check", "--model", "figure2a", "--param", "p=0.5", "--tol", "0.25", "--json"],
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "MARKOVIAN"


def test_tol_env_var(tmp_path, capsys, monkeypatch):
    obj = channel_to_dict(dephasing_channel(1.0))
    obj["data"][0][0] = [1.0 + 1e-6, 0.0]
    path = tmp_path / "offtp.json"
    path.write_text(json.dumps(obj), encoding="utf-8")

    monkeypatch.delenv("MARKOVSCOPE_TOL", raising=False)
    code, _, err = run_cli(capsys, ["check", str(path)])
    assert code == 3
    assert "error:" in err

    monkeypatch.setenv("MARKOVSCOPE_TOL", "1e-3")
    code, _, _ = run_cli(capsys, ["check", str(path), "--json"])
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "markovscope.cli", "check", "--model", "dephasing", "--json"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "MARKOVIAN"
