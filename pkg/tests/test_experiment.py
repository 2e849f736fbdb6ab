"""Experiment driver: config handling, determinism, reports, figure data."""

import dataclasses
import json

import numpy as np
import pytest

from tailcond.errors import ParameterError
from tailcond.experiment import (DEFAULT_SEED, ExperimentConfig, PRESETS,
                                 conditional_maxima_sample, figure_data,
                                 preset_config, run_experiment, run_single,
                                 run_table, unconditional_maxima_sample,
                                 write_table_csv)

# small but statistically meaningful settings for fast pipeline tests
TINY = dict(family="gumbel", theta=3.0, dim=3, n=2000, u=0.9, epsilon=0.01,
            k=50, blocks=30, reps=4, calibration_reps=50)


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(reps=0)
    with pytest.raises(ParameterError):
        ExperimentConfig(u=0.99, epsilon=0.02)      # window crosses 1
    with pytest.raises(ParameterError):
        ExperimentConfig(alpha=1.5)
    with pytest.raises(ParameterError):
        ExperimentConfig(dim=3, j=3)
    cfg = ExperimentConfig(dim=3)
    assert cfg.j_index == 2
    assert ExperimentConfig(dim=3, j=0).j_index == 0


def test_presets():
    desk = preset_config("desk")
    assert desk.n == 20_000 and desk.k == 500 and desk.reps == 200
    paper = preset_config("paper")
    assert paper.n == 110_000 and paper.k == 1000 and paper.u == 0.99
    assert preset_config("desk", reps=7).reps == 7
    with pytest.raises(ParameterError):
        preset_config("nope")
    assert set(PRESETS) == {"paper", "desk"}


def test_config_round_trip_drops_threads():
    cfg = ExperimentConfig(threads=8)
    d = cfg.to_dict()
    assert "threads" not in d
    back = ExperimentConfig.from_dict(d)
    assert back == dataclasses.replace(cfg, threads=1)


def test_maxima_samples_shapes():
    cfg = ExperimentConfig(**TINY)
    unc = unconditional_maxima_sample(cfg, 0)
    assert unc.data.shape == (cfg.blocks, cfg.dim)
    assert np.all(unc.data <= 0.0)
    cond, shortfalls = conditional_maxima_sample(cfg, 0)
    assert cond.data.shape == (cfg.blocks, cfg.dim - 1)
    assert shortfalls == 0
    assert np.all(cond.data > 0.0)


def test_run_single_deterministic():
    cfg = ExperimentConfig(**TINY)
    a = run_single(cfg, 2)
    b = run_single(cfg, 2)
    assert a == b
    c = run_single(cfg, 3)
    assert (a.s_unconditional, a.s_conditional) != \
        (c.s_unconditional, c.s_conditional)


def test_run_experiment_report():
    cfg = ExperimentConfig(**TINY)
    rep = run_experiment(cfg)
    assert len(rep.runs) == cfg.reps
    assert [r.rep_index for r in rep.runs] == list(range(cfg.reps))
    # strong dependence: the unconditional test must reject every repetition
    assert rep.rejection_rate_unconditional == 100.0
    d = rep.to_dict()
    assert d["critical_values"]["source"] == "monte-carlo"
    json.loads(rep.to_json())       # serializable


def test_run_experiment_threads_equivalent():
    cfg1 = ExperimentConfig(**TINY)
    cfg2 = ExperimentConfig(**TINY, threads=2)
    assert run_experiment(cfg1).to_json() == run_experiment(cfg2).to_json()


def test_runs_csv(tmp_path):
    rep = run_experiment(ExperimentConfig(**TINY))
    path = tmp_path / "runs.csv"
    rep.write_runs_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "rep,s_unconditional,s_conditional,shortfalls"
    assert len(lines) == 1 + len(rep.runs)


def test_run_table_isolation(tmp_path):
    base = ExperimentConfig(**{**TINY, "reps": 2, "calibration_reps": 20})
    rows = run_table(base, [3, 4], [2.0])
    assert len(rows) == 2
    assert all(r["error"] == "" for r in rows)
    # an invalid cell is reported, not raised
    bad = dataclasses.replace(base, family="logistic")
    rows = run_table(bad, [2], [2.0])
    assert rows[0]["error"] != ""
    assert np.isnan(rows[0]["rejection_rate_conditional"])
    write_table_csv(rows, tmp_path / "table1.csv")
    text = (tmp_path / "table1.csv").read_text()
    assert text.startswith("dim,theta,rejection_rate_conditional")


def test_figure_data_files(tmp_path):
    cfg = ExperimentConfig(**TINY)
    paths = figure_data(cfg, tmp_path)
    assert sorted(paths) == [f"fig1_panel{i}.csv" for i in range(1, 7)]
    header = (tmp_path / "fig1_panel2.csv").read_text().splitlines()[0]
    assert header == "t1,t2,t3,a_hat"
    pair = np.loadtxt(tmp_path / "fig1_panel3.csv", delimiter=",", skiprows=1)
    assert pair.shape == (cfg.blocks, 2)
    cond_header = (tmp_path / "fig1_panel6.csv").read_text().splitlines()[0]
    assert cond_header == "t1,t2,a_hat"


def test_default_seed_is_fixed():
    assert DEFAULT_SEED == 20160
    assert ExperimentConfig().seed == DEFAULT_SEED
