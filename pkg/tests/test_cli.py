import json

import numpy as np
import pytest

from itso.cli import main
from itso.objectives import OBJECTIVE_NAMES

SPHERE = """
    import sys
    import numpy as np

    for line in sys.stdin:
        x = np.array([float(v) for v in line.split()])
        print(repr(float(np.sum((x - 1.3) ** 2))), flush=True)
"""


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in ("ITSO_SEED", "ITSO_OUTPUT_DIR", "ITSO_WORKERS", "ITSO_TIMEOUT_MS", "ITSO_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("ITSO_PROGRESS", "0")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_optimize_prints_json(capsys):
    code, out, _ = run(capsys, "optimize", "--objective", "sphere", "--dim", "10", "--budget", "500",
                       "--variant", "short", "--seed", "7")
    assert code == 0
    report = json.loads(out)
    assert report["objective"] == "sphere"
    assert report["evaluations_used"] == 500
    assert len(report["best_point"]) == 10
    assert isinstance(report["best_value"], float)


def test_optimize_is_deterministic(capsys):
    argv = ("optimize", "--objective", "griewank", "--dim", "4", "--budget", "300", "--variant", "full", "--seed", "3")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_optimize_writes_trace(capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    code, _, _ = run(capsys, "optimize", "--objective", "x_5", "--dim", "2", "--budget", "50", "--trace-out", str(trace))
    assert code == 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "evaluation,best_f"
    assert len(lines) == 51


def test_unknown_objective_is_usage_error(capsys):
    code, _, err = run(capsys, "optimize", "--objective", "nosuch")
    assert code == 2
    assert all(name in err for name in OBJECTIVE_NAMES)


@pytest.mark.parametrize(
    "argv",
    [
        ("optimize", "--objective", "sphere", "--bogus-flag"),
        ("optimize", "--objective", "sphere", "--variant", "medium"),
        ("optimize", "--objective", "sphere", "--budget", "0"),
        ("optimize", "--objective", "sphere", "--alpha", "1"),
        ("optimize",),
        ("nosuch-command",),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bench_writes_grid(capsys, tmp_path):
    out_dir = tmp_path / "bench"
    code, out, _ = run(capsys, "bench", "--functions", "sphere,griewank", "--repeats", "2", "--budget", "200",
                       "--dim", "3", "--out", str(out_dir))
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert len([n for n in names if "__run" in n]) == 12
    assert len([n for n in names if n.endswith("__h.csv")]) == 3
    assert "summary.csv" in names
    for optimizer in ("itso-short", "random", "de"):
        assert optimizer in out


def test_bench_rerun_is_byte_identical(capsys, tmp_path):
    argv = ["bench", "--functions", "sphere", "--repeats", "2", "--budget", "100", "--dim", "2", "--seed", "4"]
    run(capsys, *argv, "--out", str(tmp_path / "a"))
    run(capsys, *argv, "--out", str(tmp_path / "b"), "--workers", "3")
    for path in (tmp_path / "a").iterdir():
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()


def test_bench_unwritable_directory(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    code, _, _ = run(capsys, "bench", "--functions", "sphere", "--repeats", "1", "--budget", "20", "--dim", "2",
                     "--out", str(blocker / "out"))
    assert code == 1


def test_trace_dist_parabola(capsys, tmp_path):
    code, out, _ = run(capsys, "trace-dist", "--objective", "parabola", "--snapshots", "3,100,350,500",
                       "--seed", "1", "--out", str(tmp_path))
    assert code == 0
    report = json.loads(out)
    assert [s["evaluations"] for s in report["snapshots"]] == [3, 100, 350, 500]
    for k in (3, 100, 350, 500):
        rows = (tmp_path / f"parabola__snapshot{k}.csv").read_text().splitlines()
        assert rows[0] == "x,pdf,cdf"
        assert len(rows) == 513
        data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
        assert data[0, 0] == 0.0 and data[-1, 0] == 10.0
        assert np.all(np.diff(data[:, 2]) >= 0)
        assert np.all(data[:, 1] >= 0)
    low, high = report["snapshots"][-1]["window"]
    assert 0.0 <= low <= high <= 10.0
    assert abs(report["best_point"][0] - 5.0) < 0.5


def _trace_windows(capsys, tmp_path, objective, snapshots, seed):
    out_dir = tmp_path / f"{objective}-{seed}"
    code, out, _ = run(capsys, "trace-dist", "--objective", objective, "--snapshots", snapshots,
                       "--seed", str(seed), "--out", str(out_dir))
    assert code == 0
    return {s["evaluations"]: s["window"] for s in json.loads(out)["snapshots"]}, out_dir


def test_trace_dist_parabola_final_window_narrows_on_five(capsys, tmp_path):
    hits = 0
    for seed in range(10):
        windows, _ = _trace_windows(capsys, tmp_path, "parabola", "3,100,350,500", seed)
        low, high = windows[500]
        hits += (high - low < 1.0) and (low <= 5.0 <= high)
    assert hits >= 9


def test_trace_dist_wavy_final_window_holds_global_minimum(capsys, tmp_path):
    hits = 0
    for seed in range(10):
        windows, _ = _trace_windows(capsys, tmp_path, "wavy", "3,150,250,500", seed)
        low, high = windows[500]
        hits += low <= -2.24 <= high
    assert hits >= 9


def test_trace_dist_warmup_snapshot_is_uniform(capsys, tmp_path):
    for seed in (0, 4, 8):
        windows, out_dir = _trace_windows(capsys, tmp_path, "parabola", "3,500", seed)
        rows = (out_dir / "parabola__snapshot3.csv").read_text().splitlines()[1:]
        data = np.array([[float(v) for v in row.split(",")] for row in rows])
        assert data[:, 2] == pytest.approx(data[:, 0] / 10.0)
        assert windows[3] == pytest.approx([0.5, 9.5])


def test_trace_dist_rejects_bad_requests(capsys):
    assert run(capsys, "trace-dist", "--dim", "3")[0] == 2
    assert run(capsys, "trace-dist", "--snapshots", "3,600")[0] == 2
    assert run(capsys, "trace-dist", "--snapshots", "a,b")[0] == 2


def test_external_matches_optimize(capsys, evaluator_script):
    cmd = evaluator_script(SPHERE)
    common = ("--dim", "5", "--budget", "150", "--seed", "9", "--lb", "-15", "--ub", "15")
    code, remote, _ = run(capsys, "external", "--cmd", cmd, *common)
    assert code == 0
    _, local, _ = run(capsys, "optimize", "--objective", "sphere", *common)
    remote, local = json.loads(remote), json.loads(local)
    assert remote["best_value"] == pytest.approx(local["best_value"], abs=1e-9)
    assert remote["objective"] == "external"


def test_external_failure_exit_code(capsys, evaluator_script):
    cmd = evaluator_script("""
        import sys

        for line in sys.stdin:
            print("abc", flush=True)
    """)
    code, _, err = run(capsys, "external", "--cmd", cmd, "--dim", "2", "--budget", "10")
    assert code == 1
    assert "evaluation 1" in err


def test_external_timeout_exit_code(capsys, evaluator_script):
    cmd = evaluator_script("""
        import sys
        import time

        for line in sys.stdin:
            time.sleep(5)
    """)
    code, _, err = run(capsys, "external", "--cmd", cmd, "--dim", "2", "--budget", "1000000", "--timeout-ms", "1")
    assert code == 1
    assert "no reply" in err
