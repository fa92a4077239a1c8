import json
import subprocess
import sys

import numpy as np
import pytest

from entpow.channels import rank_boost_channel, swap_channel, unitary_channel
from entpow.cli import main
from entpow.serialize import channel_to_json, state_to_json
from entpow.states import DensityMatrix, max_entangled

CNOT = np.eye(4)[[0, 1, 3, 2]]


def write_spec(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_classify_swap_channel(tmp_path, capsys):
    spec = write_spec(tmp_path, "swap.json", channel_to_json(swap_channel(2)))
    assert main(["classify", spec]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["verdict"] == "stochastically_nonentangling"
    assert set(blob["kraus_forms"]) == {"permutation_local"}


def test_classify_cnot_reports_violation(tmp_path, capsys):
    spec = write_spec(
        tmp_path, "cx.json", channel_to_json(unitary_channel(CNOT, (2, 2), label="cx"))
    )
    assert main(["classify", spec, "--seed", "1", "--restarts", "32"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["verdict"] == "entangling"
    witness_hits = [v for v in blob["violations"] if v["kind"] == "witness"]
    assert min(v["value"] for v in witness_hits) < -0.99  # swap witness on CNOT
    bench = [v for v in witness_hits if v["witness"].get("label") == "benchmark_4/5"]
    assert bench and abs(bench[0]["value"] - (-0.2)) < 1e-6


def test_classify_bad_spec_exits_2(tmp_path, capsys):
    spec = write_spec(
        tmp_path,
        "bad.json",
        {"kind": "kraus", "dims": [2, 2], "kraus": [[[1.0, 0.0]] * 6]},
    )
    assert main(["classify", spec]) == 2
    err = capsys.readouterr().err
    assert "spec error" in err
    assert "kraus[0]" in err


def test_classify_missing_file_exits_2(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "nope.json")]) == 2
    assert "spec error" in capsys.readouterr().err


def test_scan_writes_deterministic_csv(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["scan", "--scenario", "fig3", "--step", "0.25", "--out"]
    assert main(args + [str(out1)]) == 0
    assert main(args + [str(out2)]) == 0
    captured = capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "p,q,min_value"
    assert len(lines) == 26
    # the measurement scenario's zero-contour kink advisory goes to stderr
    assert "transposed" in captured.err


def test_scan_optimizer_engine(tmp_path):
    out = tmp_path / "opt.csv"
    rc = main(
        [
            "scan",
            "--scenario",
            "unitary_mix",
            "--step",
            "0.25",
            "--engine",
            "optimizer",
            "--restarts",
            "24",
            "--seed",
            "5",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 16
    row = dict()
    for ln in lines[1:]:
        p, q, v = ln.split(",")
        row[(p, q)] = float(v)
    assert abs(row[("1", "0")] - (-0.2)) < 1e-6
    assert abs(row[("0", "0")] - 0.3) < 1e-6


def test_scan_rejects_bad_step(tmp_path, capsys):
    out = tmp_path / "x.csv"
    rc = main(["scan", "--scenario", "fig3", "--step", "0.4", "--out", str(out)])
    assert rc == 2
    assert "spec error" in capsys.readouterr().err
    assert not out.exists()


def test_schmidt_pure_state_report(tmp_path, capsys):
    spec = write_spec(tmp_path, "phi3.json", state_to_json(max_entangled(3, 3)))
    assert main(["schmidt", spec]) == 0
    out = capsys.readouterr().out
    assert "pure state on dims (3, 3)" in out
    assert "schmidt rank 3" in out


def test_schmidt_mixed_state_ppt_report(tmp_path, capsys):
    rho = DensityMatrix(np.eye(4) / 4, (2, 2))
    spec = write_spec(tmp_path, "mixed.json", state_to_json(rho))
    assert main(["schmidt", spec]) == 0
    out = capsys.readouterr().out
    assert "partial transpose across (0)|(1): positive" in out

    ent = max_entangled(2, 2).projector()
    spec = write_spec(
        tmp_path, "bell.json", state_to_json(DensityMatrix(ent, (2, 2)))
    )
    assert main(["schmidt", spec]) == 0
    out = capsys.readouterr().out
    # a pure density matrix falls back to the pure-state report
    assert "schmidt rank 2" in out


def test_schmidt_channel_report_and_cut(tmp_path, capsys):
    spec = write_spec(tmp_path, "swap.json", channel_to_json(swap_channel(2)))
    assert main(["schmidt", spec]) == 0
    captured = capsys.readouterr()
    assert "channel schmidt rank: 1" in captured.out
    assert "permutation_local" in captured.out

    assert main(["schmidt", spec, "--cut", "0,2"]) == 0
    captured = capsys.readouterr()
    assert "choi cut (0,2)|(1,3): schmidt rank 4" in captured.out
    assert "rank d^2" in captured.err  # swap-cut advisory


def test_schmidt_rank_boost_channel(tmp_path, capsys):
    ch = rank_boost_channel(2, 3, np.sqrt([0.5, 0.3, 0.2]))
    spec = write_spec(tmp_path, "boost.json", channel_to_json(ch))
    assert main(["schmidt", spec]) == 0
    out = capsys.readouterr().out
    assert "3" in out


def test_schmidt_bad_cut_exits_2(tmp_path, capsys):
    spec = write_spec(tmp_path, "swap.json", channel_to_json(swap_channel(2)))
    assert main(["schmidt", spec, "--cut", "0,9"]) == 2
    assert "spec error" in capsys.readouterr().err


def test_installed_entry_point(tmp_path):
    spec = write_spec(tmp_path, "swap.json", channel_to_json(swap_channel(2)))
    proc = subprocess.run(
        [sys.executable, "-m", "entpow.cli", "classify", spec],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "stochastically_nonentangling"
