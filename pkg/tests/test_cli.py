import csv
import json

import numpy as np
import pytest

from discordlab import __version__
from discordlab.cli import format_value, main

SMALL = {
    "dqc1": ["--n-min", "2", "--n-max", "3", "--multistarts", "2", "--grid", "8"],
    "werner": ["--d", "2", "--d", "3", "--lambda-steps", "5"],
    "hierarchy": ["--dB", "2", "--samples", "30"],
    "scatter2q": ["--samples", "4", "--grid", "8"],
    "gaussian": ["--samples", "3"],
    "gaussian-sts": ["--samples", "3"],
    "qubitosc": ["--beta", "1", "--nbar", "0.5", "--cutoff", "60", "--p-steps", "2", "--r-steps", "2", "--grid", "8"],
}

COLUMNS = {
    "dqc1": ["mu", "n", "D_entropic_exact", "D_entropic_approx", "D_G", "D_adj", "D_T"],
    "werner": ["lambda", "d", "D_entropic", "D_G", "D_adj", "D_T"],
    "hierarchy": ["negativity", "D_T", "bound", "gap"],
    "scatter2q": ["D_entropic", "D_T"],
    "gaussian": ["a", "b", "c", "d", "purity", "D_T_gaussian"],
    "gaussian-sts": ["a", "b", "c", "closed_form", "numeric", "residual"],
    "qubitosc": ["p", "r", "D_entropic", "D_G", "D_T"],
}


def run(cmd, tmp_path, capsys, extra=(), name=None):
    out = tmp_path / (name or f"{cmd}.csv")
    code = main([cmd, *SMALL.get(cmd, []), *extra, "--out", str(out)])
    captured = capsys.readouterr()
    return code, out, captured


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("cmd", sorted(SMALL))
def test_header_and_summary(cmd, tmp_path, capsys):
    code, out, cap = run(cmd, tmp_path, capsys)
    assert code == 0, cap.err
    rows = read_csv(out)
    assert rows[0] == COLUMNS[cmd]
    assert all(len(r) == len(rows[0]) for r in rows)
    report = json.loads(cap.out)
    assert report["version"] == __version__
    assert report["command"] == cmd
    assert report["rows"] == len(rows) - 1
    assert report["wall_time_s"] >= 0
    assert report["config"]["seed"] == 0


@pytest.mark.parametrize("cmd", sorted(SMALL))
def test_byte_identical_reruns(cmd, tmp_path, capsys):
    _, a, _ = run(cmd, tmp_path, capsys, ["--seed", "3"], name="a.csv")
    _, b, _ = run(cmd, tmp_path, capsys, ["--seed", "3"], name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_thread_count_does_not_change_output(tmp_path, capsys, monkeypatch):
    _, a, _ = run("gaussian", tmp_path, capsys, ["--seed", "2"], name="a.csv")
    monkeypatch.setenv("DISCORDLAB_THREADS", "3")
    _, b, _ = run("gaussian", tmp_path, capsys, ["--seed", "2"], name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_output(tmp_path, capsys):
    _, a, _ = run("hierarchy", tmp_path, capsys, ["--seed", "1"], name="a.csv")
    _, b, _ = run("hierarchy", tmp_path, capsys, ["--seed", "2"], name="b.csv")
    assert a.read_bytes() != b.read_bytes()


def test_dqc1_example(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = main(["dqc1", "--mu", "0.5", "--n-min", "2", "--n-max", "6", "--seed", "7", "--no-exact", "--out", str(out)])
    assert code == 0
    rows = read_csv(out)[1:]
    dt = np.array([float(r[6]) for r in rows])
    dg = np.array([float(r[4]) for r in rows])
    assert np.ptp(dt) <= 1e-6
    assert np.allclose(dg[1:] / dg[:-1], 0.5, atol=1e-6)


def test_werner_example(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["werner", "--d", "2", "--lambda-steps", "51", "--out", str(out)]) == 0
    rows = [r for r in read_csv(out)[1:] if abs(float(r[0]) - 0.25) < 1e-12]
    assert len(rows) == 1
    assert all(abs(float(x)) <= 1e-6 for x in rows[0][2:])


def test_hierarchy_summary(tmp_path, capsys):
    code, _, cap = run("hierarchy", tmp_path, capsys, ["--seed", "1"])
    summary = json.loads(cap.out)["summary"]
    assert code == 0
    assert summary["violations"] == 0
    assert summary["min_gap"] >= -1e-9


def test_check_subcommand(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code = main(["check", "--scale", "0.05", "--out", str(out)])
    cap = capsys.readouterr()
    assert code == 0, cap.out
    rows = read_csv(out)
    assert rows[0] == ["check", "passed", "detail"]
    assert all(r[1] == "1" for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["werner", "--lambda-steps", "1"],
        ["werner", "--lambda-max", "2"],
        ["werner", "--d", "1"],
        ["hierarchy", "--samples", "0"],
        ["dqc1", "--mu", "1.5"],
        ["dqc1", "--n-min", "3", "--n-max", "3"],
        ["dqc1", "--unitary", "laf2", "--n-min", "2", "--n-max", "4"],
        ["qubitosc", "--nbar", "-1"],
        ["scatter2q", "--multistarts", "0"],
    ],
)
def test_invalid_config_exit_code(argv, tmp_path, capsys):
    assert main([*argv, "--out", str(tmp_path / "x.csv")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "config"


def test_missing_output_directory(tmp_path, capsys):
    assert main(["werner", "--d", "2", "--lambda-steps", "3", "--out", str(tmp_path / "no" / "x.csv")]) == 2


def test_truncation_is_config_error(tmp_path, capsys):
    argv = ["qubitosc", "--beta", "5", "--cutoff", "20", "--p-steps", "2", "--r-steps", "2"]
    assert main([*argv, "--out", str(tmp_path / "q.csv")]) == 2


def test_optimizer_failure_exit_code(tmp_path, capsys, monkeypatch):
    from discordlab import experiments
    from discordlab.exceptions import OptimizerError

    def boom(*args, **kwargs):
        raise OptimizerError("forced")

    monkeypatch.setattr(experiments, "entropic_discord", boom)
    assert main(["scatter2q", "--samples", "1", "--out", str(tmp_path / "s.csv")]) == 3


def test_format_value():
    assert format_value(3) == "3"
    assert format_value(0.0) == "0"
    assert format_value(float("nan")) == "nan"
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value("x") == "x"
