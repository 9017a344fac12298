import numpy as np
import pytest

from vqae.cli import main


def read(path):
    return path.read_text(encoding="utf-8")


def test_expectation_prints_amplitude(capsys):
    assert main(["expectation", "--dist", "gaussian"]) == 0
    out = capsys.readouterr().out
    assert "a = 0.4999997677" in out
    assert "theta = " in out
    assert "table_checksum = " in out


def test_expectation_rejects_bad_dist(capsys):
    assert main(["expectation", "--dist", "poisson"]) == 2


def test_infeasible_scale_exit_code(capsys):
    assert main(["expectation", "--dist", "gaussian", "--C", "1.2"]) == 2
    assert "error" in capsys.readouterr().err


def test_mc_sweep_csv_shape(tmp_path, capsys):
    out = tmp_path / "mc.csv"
    rc = main(["sweep", "--estimator", "mc", "--reps", "3", "--seed", "5",
               "--threads", "1", "--out", str(out)])
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0] == ("estimator,dist,n,C,m,N_q_total,N_q_sampling,"
                        "N_q_variational,N_q_loose,delta_theta_rms,reps,seed")
    assert len(lines) == 7  # header + shots decades 1e2..1e7
    first = lines[1].split(",")
    assert first[0] == "mc"
    assert first[4] == first[5] == "100"


def test_sweep_is_byte_deterministic(tmp_path):
    args = ["sweep", "--estimator", "mlae", "--M", "6", "--h", "200",
            "--reps", "2", "--seed", "9", "--threads", "1"]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert read(out1) == read(out2)
    assert "\r" not in read(out1)


def test_sweep_deterministic_across_thread_counts(tmp_path):
    args = ["sweep", "--estimator", "mlae", "--M", "5", "--h", "100",
            "--reps", "4", "--seed", "3"]
    serial = tmp_path / "serial.csv"
    pooled = tmp_path / "pooled.csv"
    assert main(args + ["--threads", "1", "--out", str(serial)]) == 0
    assert main(args + ["--threads", "2", "--out", str(pooled)]) == 0
    assert read(serial) == read(pooled)


def test_vqae_sweep_reports_cost_components(tmp_path):
    out = tmp_path / "ad.csv"
    rc = main(["sweep", "--estimator", "vqae-adaptive", "--M", "10", "--k", "5",
               "--h", "100", "--nf", "10", "--ns", "10", "--loose-shots", "10000",
               "--reps", "2", "--seed", "4", "--threads", "1", "--out", str(out)])
    assert rc == 0
    rows = [line.split(",") for line in read(out).splitlines()[1:]]
    assert len(rows) == 11
    last = rows[-1]
    total, samp, var, loose = (int(v) for v in last[5:9])
    assert total == samp + var + loose
    assert loose == 10000
    assert var == 2 * 2 * 10 * 10 * 6 * 12
    assert float(last[9]) > 0


def test_naive_sweep_runs(tmp_path):
    out = tmp_path / "nv.csv"
    rc = main(["sweep", "--estimator", "vqae-naive", "--M", "6", "--k", "2",
               "--h", "100", "--nf", "5", "--ns", "5", "--depth", "1",
               "--reps", "2", "--seed", "4", "--threads", "1", "--out", str(out)])
    assert rc == 0
    assert len(read(out).splitlines()) == 8


def test_infidelity_depth_sweep(tmp_path):
    out = tmp_path / "inf.csv"
    rc = main(["infidelity", "--M", "4", "--k", "1", "--ns", "20", "--lr", "0.1",
               "--depth", "1,2", "--reps", "3", "--threads", "1",
               "--out", str(out)])
    assert rc == 0
    lines = read(out).splitlines()
    assert lines[0] == "dist,d,m,infidelity_mean,infidelity_sem,inits"
    assert len(lines) == 3  # one row per depth at fixed m
    assert lines[1].split(",")[1] == "1"
    assert lines[2].split(",")[1] == "2"


def test_infidelity_m_sweep(tmp_path):
    out = tmp_path / "inf.csv"
    rc = main(["infidelity", "--M", "4", "--k", "1", "--ns", "20", "--lr", "0.1",
               "--depth", "2", "--reps", "2", "--threads", "1", "--out", str(out)])
    assert rc == 0
    lines = read(out).splitlines()
    assert len(lines) == 6  # header + m = 0..4
    assert [row.split(",")[2] for row in lines[1:]] == ["0", "1", "2", "3", "4"]


def test_config_file_merges_under_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("reps=2\nseed=7\nestimator=mc\n# comment\n", encoding="utf-8")
    out = tmp_path / "out.csv"
    rc = main(["sweep", "--config", str(cfg), "--reps", "3", "--threads", "1",
               "--out", str(out)])
    assert rc == 0
    row = read(out).splitlines()[1].split(",")
    assert row[0] == "mc"        # from config
    assert row[-2] == "3"        # flag wins over config reps
    assert row[-1] == "7"        # seed from config


def test_config_file_bad_line(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("this is not a pair\n", encoding="utf-8")
    assert main(["sweep", "--config", str(cfg), "--out", "x.csv"]) == 2


def test_bad_depth_list(tmp_path, capsys):
    rc = main(["infidelity", "--depth", "2,zero", "--out", "x.csv"])
    assert rc == 2
