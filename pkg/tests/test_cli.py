"""Command-line surface: exit codes, determinism, file formats."""

import json

import pytest

from coupledsusy.cli import main
from coupledsusy.reports import format_float


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_verify_passes(capsys):
    code, out = run_cli(["verify", "--n", "2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert len(payload["identities"]) == 11
    assert payload["mutation"] is None


def test_verify_rejects_bad_n(capsys):
    code, _ = run_cli(["verify", "--n", "0"], capsys)
    assert code == 2


def test_verify_mutation_fails(capsys):
    code, out = run_cli(["verify", "--n", "2", "--mutate", "b-coeff"], capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["pass"] is False
    assert payload["mutation"] == "b[1].alpha += 1"
    failing = [r for r in payload["identities"] if not r["pass"]]
    assert failing and failing[0]["first_failure"] is not None


def test_verify_deterministic_output(capsys):
    _, first = run_cli(["verify", "--n", "3"], capsys)
    _, second = run_cli(["verify", "--n", "3"], capsys)
    assert first == second


def test_spectrum_theory_column(capsys):
    code, out = run_cli(["spectrum", "--n", "2", "--count", "6"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["theory"] == [0, 3, 4, 7, 8, 11]
    assert len(payload["galerkin"]) == 2
    for report in payload["galerkin"]:
        assert max(report["rel_errors"]) < 1e-8


def test_spectrum_other_families(capsys):
    code, out = run_cli(["spectrum", "--n", "1", "--count", "5"], capsys)
    assert json.loads(out)["theory"] == [0, 1, 2, 3, 4]
    code, out = run_cli(["spectrum", "--n", "3", "--count", "4"], capsys)
    assert json.loads(out)["theory"] == [0, 5, 6, 11]


def test_spectrum_with_fd_csv(tmp_path, capsys):
    out_file = tmp_path / "spectrum.csv"
    code, _ = run_cli(
        [
            "spectrum",
            "--n",
            "1",
            "--count",
            "4",
            "--fd",
            "--fd-half-width",
            "8",
            "--fd-grid",
            "400",
            "--format",
            "csv",
            "--out",
            str(out_file),
        ],
        capsys,
    )
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "index,computed,theory,rel_error"
    assert len(lines) == 5


def test_eigenfunctions_csv_rows(tmp_path, capsys):
    out_file = tmp_path / "eigen.csv"
    code, _ = run_cli(
        [
            "eigenfunctions",
            "--n",
            "2",
            "--m",
            "3",
            "--grid",
            "-4:4:401",
            "--format",
            "csv",
            "--out",
            str(out_file),
        ],
        capsys,
    )
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "x,value"
    assert len(lines) == 402


def test_eigenfunctions_rejects_psitilde_zero(capsys):
    code, _ = run_cli(
        ["eigenfunctions", "--n", "2", "--sector", "psitilde", "--m", "0"], capsys
    )
    assert code == 2


def test_coherent_norm_and_half_lowering(capsys):
    code, out = run_cli(
        ["coherent", "--n", "2", "--sector", "psi", "--z", "0.5", "--tol", "1e-12"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["norm_sq"] - 1.0) < 1e-12
    assert payload["half_lowering"]["residual"] < 1e-10
    assert payload["half_lowering"]["target_sector"] == "psi~"
    assert payload["full_lowering_best_fit_residual"] > 0.01
    assert payload["k"] == "1/8"


def test_coherent_rejects_unit_disk_boundary(capsys):
    code, _ = run_cli(["coherent", "--n", "2", "--z", "1.0"], capsys)
    assert code == 2


def test_uncertainty_ground_product_half(capsys):
    code, out = run_cli(["uncertainty", "--n", "1", "--state", "ground"], capsys)
    assert code == 0
    payload = json.loads(out)
    result = payload["results"][0]
    assert result["observable_pair"] == "L,A"
    assert abs(result["product"] - 0.5) < 1e-12
    assert result["pass"] is True


def test_uncertainty_all_pairs_and_mixed(capsys):
    code, out = run_cli(["uncertainty", "--n", "2", "--state", "phitilde:0"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["results"][0]["product"] - 3.0) < 1e-11
    code, out = run_cli(["uncertainty", "--n", "2", "--state", "mixed"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["results"][0]["bound"] - 1.0) < 1e-12


def test_uncertainty_rejects_unknown_state(capsys):
    code, _ = run_cli(["uncertainty", "--n", "2", "--state", "bogus"], capsys)
    assert code == 2


def test_config_file_precedence(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("n=1\ncount=3\n")
    _, out = run_cli(["spectrum", "--config", str(config)], capsys)
    assert json.loads(out)["theory"] == [0, 1, 2]
    # flags beat the config file
    _, out = run_cli(["spectrum", "--config", str(config), "--n", "2"], capsys)
    assert json.loads(out)["theory"] == [0, 3, 4]
    code, _ = run_cli(["spectrum", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == 2


def test_atomic_output_no_partial_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, _ = run_cli(["verify", "--n", "0", "--out", str(target)], capsys)
    assert code == 2
    assert not target.exists()
    leftovers = [p for p in tmp_path.iterdir()]
    assert leftovers == []


def test_float_formatting_17_digits():
    assert format_float(0.5) == "0.5"
    assert format_float(1e-13) == "1e-13"
    assert format_float(1 / 3) == "0.33333333333333331"
    # 17 significant digits round-trip every double exactly
    for value in (0.1 + 0.2, 2.1558005495409279, 5.877471754111438e-39):
        assert float(format_float(value)) == value
    with pytest.raises(ValueError):
        format_float(float("nan"))
