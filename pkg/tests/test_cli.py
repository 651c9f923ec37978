"""Experiment harness: subcommands, record schema, determinism, isolation."""

import csv
import json

import pytest

from phaseboost import ParameterError
from phaseboost.cli import ExperimentConfig, build_parser, main, run_experiment

FAST_COMMANDS = [
    ["boost", "--kind", "parity", "--learner", "parity", "--n", "6", "--eps", "0.3"],
    ["learn", "parity", "--n", "6", "--tau", "0.5"],
    ["learn", "dt", "--n", "6", "--s", "4", "--plant-size", "3", "--eps", "0.3"],
    ["learn", "junta", "--n", "6", "--k", "2", "--eps", "0.3"],
    ["learn", "junta-noboost", "--n", "6", "--k", "2", "--eps", "0.4", "--delta", "0.2"],
    ["learn", "dnf", "--n", "6", "--s", "2", "--eps", "0.3"],
    ["pac", "depth3", "--n", "6", "--m", "2", "--s", "2", "--eps", "0.3"],
    ["bonddim", "--kind", "hard-dnf", "--s", "2"],
    ["discriminator", "--n", "6", "--m", "2"],
    ["distrib", "--n", "6", "--phi", "parity"],
    ["spectrum", "--kind", "dt", "--size", "5", "--n", "6"],
    ["calibrate", "swap", "--n", "4", "--trials", "20", "--eps", "0.1", "--delta", "0.1"],
]


@pytest.mark.parametrize("argv", FAST_COMMANDS, ids=lambda a: "-".join(a[:2]))
def test_subcommand_runs_clean(argv, capsys):
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "seeds 1" in out


def test_jsonl_records_carry_the_schema(tmp_path):
    out = tmp_path / "runs.jsonl"
    argv = ["learn", "parity", "--n", "6", "--seeds", "0:3", "--out", str(out)]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    records = [json.loads(line) for line in lines]
    for rec, seed in zip(records, range(3)):
        assert rec["schema"] == "phaseboost.result.v1"
        assert rec["task"] == "learn-parity"
        assert rec["seed"] == seed
        assert rec["ok"] is True
        assert rec["error"] is None
        assert rec["outcome"]["success"] is True
        assert set(rec["config"]) == {
            "task", "n", "eps", "delta", "mode", "opt_lb", "params",
        }
        assert rec["wallclock_s"] >= 0.0


def test_reruns_are_identical_apart_from_wallclock(tmp_path):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for path in paths:
        argv = [
            "learn", "dt", "--n", "6", "--s", "4", "--plant-size", "3",
            "--eps", "0.3", "--mode", "sampled", "--seeds", "0:3",
            "--out", str(path),
        ]
        assert main(argv) == 0

    def stripped(path):
        out = []
        for line in path.read_text().splitlines():
            rec = json.loads(line)
            rec.pop("wallclock_s")
            out.append(rec)
        return out

    assert stripped(paths[0]) == stripped(paths[1])


def test_bonddim_csv_lists_every_cut(tmp_path):
    path = tmp_path / "ranks.csv"
    argv = ["bonddim", "--kind", "hard-dnf", "--s", "3", "--csv", str(path)]
    assert main(argv) == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["seed", "cut", "rank"]
    assert len(rows) == 6  # five cuts of a six-qubit state
    ranks = {int(cut): int(rank) for _, cut, rank in rows[1:]}
    assert ranks[3] == 8


def test_generic_csv_has_seed_and_ok_columns(tmp_path):
    path = tmp_path / "out.csv"
    argv = ["learn", "parity", "--n", "6", "--seeds", "0:2", "--csv", str(path)]
    assert main(argv) == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:2] == ["seed", "ok"]
    assert "success" in rows[0]
    assert len(rows) == 3


def test_seed_failures_are_recorded_not_raised(tmp_path):
    # Deep DNF schedules in sampled mode exceed the sampling budget; the run
    # must record that per seed and still exit cleanly.
    out = tmp_path / "fail.jsonl"
    argv = [
        "learn", "dnf", "--n", "6", "--s", "8", "--eps", "0.1",
        "--mode", "sampled", "--out", str(out),
    ]
    assert main(argv) == 0
    rec = json.loads(out.read_text().splitlines()[0])
    assert rec["ok"] is False
    assert rec["error"]
    assert rec["outcome"] == {}


def test_parallel_workers_match_serial_results(tmp_path):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "parallel.jsonl"
    base = ["learn", "parity", "--n", "6", "--seeds", "0:4"]
    assert main(base + ["--out", str(serial)]) == 0
    assert main(base + ["--workers", "2", "--out", str(parallel)]) == 0

    def stripped(path):
        out = []
        for line in path.read_text().splitlines():
            rec = json.loads(line)
            rec.pop("wallclock_s")
            out.append(rec)
        return out

    assert stripped(serial) == stripped(parallel)


def test_bad_choice_is_an_argparse_error():
    with pytest.raises(SystemExit) as exc:
        main(["learn", "parity", "--mode", "bogus"])
    assert exc.value.code == 2


def test_bad_seed_spec_exits_with_parameter_error(capsys):
    assert main(["learn", "parity", "--seeds", "x:y"]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_overlap_spec_exits_with_parameter_error(capsys):
    assert main(["calibrate", "swap", "--overlaps", "a,b"]) == 2
    assert "error:" in capsys.readouterr().err


def test_run_experiment_rejects_unknown_tasks():
    config = ExperimentConfig(
        task="frobnicate", n=4, seeds=(0,), eps=0.1, delta=0.05, mode="exact"
    )
    with pytest.raises(ParameterError):
        run_experiment(config)


def test_version_flag_prints_and_exits():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["--version"])
    assert exc.value.code == 0
