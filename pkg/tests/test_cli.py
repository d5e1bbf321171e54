import csv
import io
import json

import pytest

from gaussmem.commands import compute
from gaussmem.config import settings
from gaussmem.errors import SolverError
from gaussmem.main import EXIT_DOMAIN, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run
from gaussmem.numerics.kernel import g

ATTENUATOR_FLAGS = ["--kappa", "0.9", "--mu", "0.8", "--energy", "8"]


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _run(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_identity_capacity_row(capsys):
    code, out, _ = _run(capsys, ["capacity", "--kappa", "1", "--mu", "0.5", "--nbar", "0", "--energy", "8"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 1
    assert float(rows[0]["capacity_nats"]) == pytest.approx(3.139489, abs=1e-6)
    assert rows[0]["method"] == "special_case"


def test_capacity_without_special_cases(capsys):
    code, out, _ = _run(capsys, ["capacity", "--kappa", "0", "--mu", "0.5", "--nbar", "1",
                                 "--energy", "8", "--no-special"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert row["method"] == "integral"
    assert float(row["capacity_nats"]) == pytest.approx(1.652995, abs=1e-6)


def test_finite_use_capacity(capsys):
    code, out, _ = _run(capsys, ["capacity", "--kappa", "0.5", "--mu", "0", "--nbar", "1",
                                 "--energy", "8", "--n", "4"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert row["method"] == "finite_spectrum"
    assert float(row["capacity_nats"]) == pytest.approx(1.652995, abs=1e-6)


def test_cutoff_sweep(capsys):
    code, out, _ = _run(capsys, ["sweep", "--var", "nbar", "--from", "0", "--to", "4", "--steps", "41",
                                 *ATTENUATOR_FLAGS, "--quantity", "z0_fraction"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 41
    assert list(rows[0]) == ["nbar", "z0_fraction"]
    points = [(float(row["nbar"]), float(row["z0_fraction"])) for row in rows]
    assert all(fraction == 0 for nbar, fraction in points if nbar < 0.7 + 1e-9)
    assert all(fraction > 0 for nbar, fraction in points if nbar > 0.9 + 1e-9)
    fractions = [fraction for _, fraction in points]
    assert all(b >= a for a, b in zip(fractions, fractions[1:]))


def test_sweep_over_uses(capsys):
    code, out, _ = _run(capsys, ["sweep", "--var", "n_uses", "--from", "1", "--to", "4", "--steps", "4",
                                 "--kappa", "0.5", "--mu", "0.5", "--energy", "8", "--quantity", "capacity"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [row["n_uses"] for row in rows] == ["1", "2", "3", "4"]


def test_spectrum_profile_sweep(capsys):
    code, out, _ = _run(capsys, ["sweep", "--var", "kappa", "--from", "0.2", "--to", "0.6", "--steps", "3",
                                 "--mu", "0.5", "--quantity", "spectrum", "--z-steps", "5"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 15
    assert list(rows[0]) == ["kappa", "z", "eta"]


def test_profile_quantity_must_be_alone(capsys):
    code, _, err = _run(capsys, ["sweep", "--var", "nbar", "--from", "0", "--to", "1", "--steps", "3",
                                 *ATTENUATOR_FLAGS, "--quantity", "n_of_z", "capacity"])
    assert code == EXIT_USAGE
    assert "usage error" in err


def test_parallel_sweep_matches_serial(capsys):
    argv = ["sweep", "--var", "nbar", "--from", "0", "--to", "2", "--steps", "5",
            *ATTENUATOR_FLAGS, "--quantity", "capacity", "z0_fraction"]
    serial = _run(capsys, argv)
    parallel = _run(capsys, argv + ["--workers", "2"])
    assert serial[0] == parallel[0] == EXIT_OK
    assert serial[1] == parallel[1]


def test_simulate_closed_form(capsys):
    code, out, _ = _run(capsys, ["simulate", "--kappa", "0.5", "--mu", "0.5", "--n", "8",
                                 "--check", "closed-form"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 1
    assert rows[0]["check"] == "closed-form"
    assert float(rows[0]["residual"]) < 1e-10
    assert rows[0]["passed"] == "true"


def test_simulate_default_checks(capsys):
    code, out, _ = _run(capsys, ["simulate", "--kappa", "4", "--mu", "0.5", "--n", "16"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [row["check"] for row in rows] == ["closed-form", "bogoliubov"]
    assert all(row["passed"] == "true" for row in rows)


def test_simulate_additive_check(capsys):
    code, out, _ = _run(capsys, ["simulate", "--mu", "0.5", "--nc", "1", "--n", "4", "--check", "additive"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert row["check"] == "additive"
    assert float(row["nbar"]) == 1000
    assert row["passed"] == ""


def test_spectrum_finite(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--kappa", "0.5", "--mu", "0.5", "--n", "2"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [float(row["eta"]) for row in rows] == pytest.approx([0.304806, 0.820194], abs=1e-6)
    assert all(row["divergent"] == "false" for row in rows)


def test_spectrum_flags_divergent_eigenvalue(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--kappa", "4", "--mu", "0.5", "--n", "8"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert [row["divergent"] for row in rows] == ["false"] * 7 + ["true"]


def test_spectrum_symbol(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--kappa", "0", "--mu", "0.3", "--steps", "5"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 5
    assert all(float(row["eta"]) == pytest.approx(0.3) for row in rows)


def test_waterfill_profile(capsys):
    code, out, _ = _run(capsys, ["waterfill", *ATTENUATOR_FLAGS, "--nbar", "1.2", "--steps", "11"])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 11
    assert float(rows[0]["n_of_z"]) == 0
    assert float(rows[-1]["n_of_z"]) > 0
    assert len({row["z0"] for row in rows}) == 1


def test_additive_below_threshold(capsys):
    flags = ["additive", "--mu", "0.25", "--nc", "2", "--energy", "1"]
    code, _, _ = _run(capsys, flags)
    assert code == EXIT_DOMAIN
    code, out, _ = _run(capsys, flags + ["--clipped"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["threshold"]) == pytest.approx(4.0)
    assert float(row["z0"]) > 0


def test_bounds_identity_channel(capsys):
    code, out, _ = _run(capsys, ["bounds", "--kappa", "1", "--mu", "0.5", "--energy", "8",
                                 "--p", "4", "--ell", "2", "4"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert row["ell_list"] == "2 4"
    assert float(row["lower_nats"]) == pytest.approx(g(8.0), rel=1e-9)
    assert float(row["upper_nats"]) == pytest.approx(g(8.0), rel=1e-9)


def test_json_output(capsys):
    code, out, _ = _run(capsys, ["capacity", *ATTENUATOR_FLAGS, "--format", "json"])
    assert code == EXIT_OK
    records = json.loads(out)
    assert len(records) == 1
    assert records[0]["method"] == "integral"
    assert 0 < records[0]["capacity_nats"] < g(8.0)


def test_json_writes_infinity_as_text(capsys):
    code, out, _ = _run(capsys, ["sweep", "--var", "kappa", "--from", "0.7", "--to", "0.8", "--steps", "2",
                                 "--mu", "0.8", "--nbar", "0.5", "--quantity", "e_crit", "--format", "json"])
    assert code == EXIT_OK
    records = json.loads(out)
    assert records[1]["e_crit"] == "inf"
    assert isinstance(records[0]["e_crit"], float)


def test_output_file(capsys, tmp_path):
    path = tmp_path / "capacity.csv"
    code, out, _ = _run(capsys, ["capacity", *ATTENUATOR_FLAGS, "--out", str(path)])
    assert code == EXIT_OK
    assert out == ""
    assert len(_rows(path.read_text())) == 1


def test_config_file_with_flag_override(capsys, tmp_path):
    config = tmp_path / "channel.env"
    config.write_text("kappa=0.9\nmu=0.8\nenergy=8\nnbar=0.5\n")
    code, out, _ = _run(capsys, ["capacity", "--config", str(config), "--nbar", "1.2"])
    assert code == EXIT_OK
    row = _rows(out)[0]
    assert float(row["nbar"]) == 1.2
    assert float(row["kappa"]) == 0.9


def test_config_file_sweep_aliases(capsys, tmp_path):
    config = tmp_path / "sweep.env"
    config.write_text("var=nbar\nfrom=0\nto=1\nsteps=3\nquantity=capacity,z0_fraction\n")
    code, out, _ = _run(capsys, ["sweep", "--config", str(config), *ATTENUATOR_FLAGS])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 3
    assert list(rows[0]) == ["nbar", "capacity_nats", "z0_fraction"]


def test_config_file_unknown_key(capsys, tmp_path):
    config = tmp_path / "bad.env"
    config.write_text("colour=blue\n")
    code, _, _ = _run(capsys, ["capacity", "--config", str(config), *ATTENUATOR_FLAGS])
    assert code == EXIT_USAGE


def test_missing_config_file(capsys, tmp_path):
    code, _, _ = _run(capsys, ["capacity", "--config", str(tmp_path / "absent.env"), *ATTENUATOR_FLAGS])
    assert code == EXIT_USAGE


def test_output_is_deterministic(capsys):
    argv = ["capacity", *ATTENUATOR_FLAGS, "--nbar", "1.2"]
    first = _run(capsys, argv)
    second = _run(capsys, argv)
    assert first[1] == second[1]


def test_tolerance_flag_does_not_leak(capsys):
    default_tol = settings.quad_tol
    argv = ["capacity", *ATTENUATOR_FLAGS, "--nbar", "1.2"]
    reference = _run(capsys, argv)

    assert _run(capsys, [*argv, "--tol", "1e-3"])[0] == EXIT_OK
    assert settings.quad_tol == default_tol
    assert _run(capsys, argv)[1] == reference[1]

    at_threshold = ["capacity", "--kappa", "2", "--mu", "0.5", "--energy", "8", "--tol", "1e-3"]
    assert _run(capsys, at_threshold)[0] == EXIT_DOMAIN
    assert settings.quad_tol == default_tol


@pytest.mark.parametrize("argv", [
    [],
    ["capacity", "--kappa", "0.9", "--mu", "0.8"],
    ["capacity", "--kappa", "abc", "--mu", "0.8", "--energy", "8"],
    ["capacity", *ATTENUATOR_FLAGS, "--format", "xml"],
    ["capacity", *ATTENUATOR_FLAGS, "--bogus"],
    ["teleport"],
    ["sweep", "--var", "nbar", "--from", "1", "--to", "0", "--steps", "3", *ATTENUATOR_FLAGS,
     "--quantity", "capacity"],
    ["sweep", "--var", "colour", "--from", "0", "--to", "1", "--steps", "3", *ATTENUATOR_FLAGS,
     "--quantity", "capacity"],
    ["bounds", *ATTENUATOR_FLAGS, "--p", "4"],
])
def test_usage_errors(capsys, argv):
    code, _, err = _run(capsys, argv)
    assert code == EXIT_USAGE
    assert "usage error" in err


@pytest.mark.parametrize("argv", [
    ["capacity", "--kappa", "0.9", "--mu", "1.5", "--energy", "8"],
    ["capacity", "--kappa", "2", "--mu", "0.5", "--energy", "8"],
    ["capacity", "--kappa", "0.9", "--mu", "0.8", "--energy", "-1"],
    ["spectrum", "--kappa", "0.5", "--mu", "0.5", "--n", "0"],
])
def test_domain_errors(capsys, argv):
    code, _, _ = _run(capsys, argv)
    assert code == EXIT_DOMAIN


def test_solver_failure(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise SolverError("Could not bracket lambda")

    monkeypatch.setattr(compute, "asymptotic_capacity", fail)
    code, _, _ = _run(capsys, ["capacity", *ATTENUATOR_FLAGS])
    assert code == EXIT_SOLVER
