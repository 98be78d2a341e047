import json
import math
import os
import subprocess
import sys

import pytest

from aqwalk.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, RunSpec, load_config, main, parse_spec, read_header
from aqwalk.engine import WalkConfig
from aqwalk.sweep import SweepConfig, SweepResult, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- seq ------------------------------------------------------------------------------

def test_seq_fibonacci(capsys):
    assert run(capsys, "seq", "--kind", "fibonacci", "--length", "8") == (EXIT_OK, "0 1 0 0 1 0 1 0\n", "")


def test_seq_thue_morse(capsys):
    assert run(capsys, "seq", "--kind", "thue-morse", "--length", "4")[1] == "0 1 1 0\n"


def test_seq_rudin_shapiro_signs_csv(capsys):
    code, out, _ = run(capsys, "seq", "--kind", "rudin-shapiro", "--length", "8", "--signs", "--format", "csv")
    assert out == "1,1,1,-1,1,1,-1,1\n"


def test_seq_random_deterministic(capsys):
    a = run(capsys, "seq", "--kind", "random", "--length", "5", "--seed", "7")
    b = run(capsys, "seq", "--kind", "random", "--length", "5", "--seed", "7")
    assert a == b and len(a[1].split()) == 5


@pytest.mark.parametrize("argv", [["seq", "--kind", "cantor", "--length", "3"], ["seq", "--kind", "fibonacci", "--length", "0"]])
def test_seq_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and err


# --- run ------------------------------------------------------------------------------

def test_run_homogeneous_is_ballistic(capsys, tmp_path):
    out_file = tmp_path / "h.csv"
    code, out, _ = run(capsys, "run", "--sequence", "homogeneous", "--rho1", "0.5", "--theta1", "0", "--phi1", "0",
                       "--steps", "2000", "--output", str(out_file))
    assert code == EXIT_OK
    alpha = float(out.split()[0].split("=")[1])
    assert abs(alpha - 1) < 0.02
    header = read_header(str(out_file))
    assert abs(header["summary"]["alpha"] - alpha) < 1e-6
    rows = [l for l in out_file.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "t,sigma,entropy"
    assert len(rows) == 2002
    t, sigma, ent = rows[3].split(",")
    assert t == "2" and math.isclose(float(sigma), math.sqrt(2), rel_tol=1e-12)


def test_run_twice_identical(capsys, tmp_path):
    files = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        run(capsys, "run", "--sequence", "fibonacci", "--mode", "dynamic", "--rho", "0.8", "--theta2", "0.3",
            "--phi2", "1.2", "--steps", "200", "--output", str(path))
        files.append(path.read_bytes())
    assert files[0] == files[1]


def test_run_steps_zero_fails(capsys):
    code, _, err = run(capsys, "run", "--steps", "0")
    assert code == EXIT_USAGE and "steps" in err


@pytest.mark.parametrize(
    "argv",
    [["run", "--rho", "2"], ["run", "--bogus"], ["run", "--theta2", "3", "--angle-unit", "pi"], ["run", "--fit-window", "5"]],
)
def test_run_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_run_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "run", "--steps", "20", "--output", str(tmp_path / "missing" / "x.csv"))
    assert code == EXIT_RUNTIME and err


def test_angle_units(capsys):
    a = run(capsys, "run", "--steps", "100", "--theta2", "0.5", "--angle-unit", "pi")[1]
    b = run(capsys, "run", "--steps", "100", "--theta2", repr(0.5 * math.pi), "--angle-unit", "rad")[1]
    assert a == b


def test_run_snapshots_and_json(capsys, tmp_path):
    path = tmp_path / "s.csv"
    run(capsys, "run", "--sequence", "homogeneous", "--steps", "4", "--snapshot-steps", "2,4", "--output", str(path))
    text = path.read_text()
    assert "# snapshot t=2\nx,p\n-2,0.25" in text
    jpath = tmp_path / "s.json"
    run(capsys, "run", "--sequence", "homogeneous", "--steps", "4", "--snapshot-steps", "2", "--format", "json", "--output", str(jpath))
    data = json.loads(jpath.read_text())
    assert data["series"]["t"][-1] == 4
    assert sum(data["snapshots"]["2"]["p"]) == pytest.approx(1.0)
    assert read_header(str(jpath))["run"]["steps"] == 4


def test_output_header_reconstructs_run(capsys, tmp_path):
    first = tmp_path / "first.csv"
    argv = ["run", "--sequence", "thue-morse", "--mode", "static", "--rho", "0.3", "--theta2", "0.2", "--phi2", "1.7",
            "--steps", "150", "--seed", "4", "--fit-window", "20:150", "--avg-window", "100:150",
            "--static-indexing", "mirror", "--output", str(first)]
    run(capsys, *argv)
    spec = parse_spec(argv)
    again = parse_spec(["run", "--config", str(first), "--output", str(tmp_path / "second.csv")])
    assert again.header_items() == spec.header_items()
    main(["run", "--config", str(first), "--output", str(tmp_path / "second.csv")])
    capsys.readouterr()
    assert first.read_bytes() == (tmp_path / "second.csv").read_bytes()


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "walk.cfg"
    cfg.write_text("# comment\nsequence=rudin-shapiro\nsteps=60\nrho=0.2\nangle-unit=rad\n")
    spec = parse_spec(["run", "--config", str(cfg), "--steps", "70"])
    assert (spec.sequence, spec.steps, spec.rho, spec.angle_unit) == ("rudin-shapiro", 70, 0.2, "rad")
    assert load_config(str(cfg))["steps"] == 60


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("stepz=10\n")
    assert run(capsys, "run", "--config", str(cfg))[0] == EXIT_USAGE


def test_runspec_defaults_reproduce_protocol():
    spec = parse_spec(["run"])
    assert spec.steps == 5000
    assert spec.theta_step == 0.01 and spec.angle_unit == "pi"
    assert spec.walk_config().initial == (1 / math.sqrt(2), 1j / math.sqrt(2))


# --- sweep ----------------------------------------------------------------------------

def sweep_args(path, workers, *extra):
    return ["sweep", "--sequence", "fibonacci", "--rho", "0.5", "--steps", "80", "--theta-step", "1",
            "--phi-step", "1", "--workers", str(workers), "--output", str(path), *extra]


def test_sweep_smoke_3x3(capsys, tmp_path):
    path = tmp_path / "g.csv"
    assert run(capsys, *sweep_args(path, 1))[0] == EXIT_OK
    res = SweepResult.from_csv(path.read_text())
    assert res.shape == (3, 3) and len(res.records) == 9
    a = res.grid("alpha")
    assert abs(a[0, 0] - a[-1, -1]) < 1e-10 and abs(a[0, -1] - a[-1, 0]) < 1e-10
    assert not os.path.exists(f"{path}.partial")
    assert res.metadata["run.command"] == "sweep"


def test_sweep_workers_identical_bytes(capsys, tmp_path):
    run(capsys, *sweep_args(tmp_path / "a.csv", 1))
    run(capsys, *sweep_args(tmp_path / "b.csv", 4))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_resume(capsys, tmp_path):
    path = tmp_path / "r.csv"
    run(capsys, *sweep_args(path, 1))
    reference = path.read_bytes()
    # leave a checkpoint holding only the first four points
    cfg = SweepConfig(base=WalkConfig(sequence="fibonacci", steps=80), rho=0.5, theta_step=math.pi, phi_step=math.pi)
    run_sweep(cfg, checkpoint=f"{path}.partial")
    lines = open(f"{path}.partial").read().splitlines(True)
    open(f"{path}.partial", "w").writelines(lines[:5])
    path.unlink()
    assert run(capsys, *sweep_args(path, 2, "--resume"))[0] == EXIT_OK
    assert path.read_bytes() == reference


def test_sweep_failures_give_runtime_exit(capsys, tmp_path):
    code, _, err = run(capsys, *sweep_args(tmp_path / "f.csv", 1, "--fit-window", "0:80"))
    assert code == EXIT_RUNTIME and "failed" in err


def test_sweep_json(capsys, tmp_path):
    path = tmp_path / "g.json"
    run(capsys, *sweep_args(path, 1, "--format", "json"))
    data = json.loads(path.read_text())
    assert len(data["records"]) == 9


def test_resume_requires_output(capsys):
    assert run(capsys, "sweep", "--resume")[0] == EXIT_USAGE


# --- accept / entry point -----------------------------------------------------------------

def test_accept_subset(capsys):
    code, out, _ = run(capsys, "accept", "--only", "1,4")
    assert code == EXIT_OK
    assert out.count("[PASS]") == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "aqwalk.cli", "seq", "--kind", "thue-morse", "--length", "4"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "0 1 1 0\n"
