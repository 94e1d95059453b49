import logging

import pandas as pd
import pytest
from pandas.testing import assert_frame_equal

from src.config.settings import Algorithm, SweepKind
from src.harness.sweeps import COLUMNS, SweepTable, run_sweep, sweep_algorithms, sweep_m_values, sweep_points

METRICS_PER_CONFIGURATION = 3 + 5


def test_sweep_points(small_config):
    snr = sweep_points(small_config, SweepKind.SNR)
    assert [(p.value, p.snr_db, p.targets) for p in snr] == [(10.0, 10.0, (20.0, 40.0))]

    counts = sweep_points(small_config, SweepKind.TARGETS)
    assert [p.targets for p in counts] == [(20.0,), (20.0, 25.0)]
    assert all(p.snr_db == 0.0 for p in counts)

    separation = sweep_points(small_config, SweepKind.SEPARATION)
    assert [(p.targets, p.snr_db) for p in separation] == [((20.0, 40.0), 20.0)]


def test_separation_runs_both_algorithms(small_config):
    assert sweep_algorithms(small_config, SweepKind.SEPARATION) == [Algorithm.BATCH, Algorithm.SEQUENTIAL]
    assert sweep_algorithms(small_config, SweepKind.SNR) == [Algorithm.BATCH]


def test_snr_table_layout(small_config):
    ticks = []
    table = run_sweep(small_config, "snr", progress=ticks.append)
    frame = table.to_frame()

    assert list(frame.columns) == COLUMNS
    assert len(frame) == 1 * 2 * METRICS_PER_CONFIGURATION
    assert sum(ticks) == 2 * small_config.trials
    assert set(frame["m"]) == {16, 0}
    assert set(frame["metric"]) == {"mse", "p_d", "srp", "cdf_lt_0.25", "cdf_lt_0.5", "cdf_lt_1", "cdf_lt_2", "cdf_lt_5"}
    plain = frame[frame["metric"] != "mse"]
    assert (plain["trials"] == 2).all()
    assert frame["config_hash"].nunique() == 1

    for m in (16, 0):
        rows = frame[frame["m"] == m].set_index("metric")
        assert rows.loc["mse", "trials"] == round(rows.loc["p_d", "value"] * 2)

    rates = frame[frame["metric"] != "mse"]["value"]
    assert rates.between(0.0, 1.0).all()
    mse = frame[frame["metric"] == "mse"]["value"].dropna()
    assert (mse >= 0).all()


def test_targets_and_separation_tables(small_config):
    targets = run_sweep(small_config, SweepKind.TARGETS).to_frame()
    assert len(targets) == 2 * 2 * METRICS_PER_CONFIGURATION
    assert sorted(targets["point"].unique()) == [1, 2]

    separation = run_sweep(small_config, SweepKind.SEPARATION).to_frame()
    assert len(separation) == 1 * 2 * 2 * METRICS_PER_CONFIGURATION
    assert set(separation["algorithm"]) == {"batch", "sequential"}


def test_same_seed_same_table(small_config):
    first = run_sweep(small_config, SweepKind.SNR)
    second = run_sweep(small_config, SweepKind.SNR)
    assert_frame_equal(first.to_frame(), second.to_frame())
    assert first.to_csv() == second.to_csv()


def test_worker_processes_give_the_same_table(small_config):
    serial = run_sweep(small_config, SweepKind.SNR).to_frame()
    parallel = run_sweep(small_config.model_copy(update={"workers": 2}), SweepKind.SNR).to_frame()
    assert_frame_equal(serial, parallel)


def test_curve_and_csv(tmp_path):
    table = SweepTable(sweep=SweepKind.SNR)
    table.add(-2.0, 16, Algorithm.BATCH, "p_d", 0.5, 10, "abc")
    table.add(0.0, 16, Algorithm.BATCH, "p_d", 0.9, 10, "abc")
    table.add(0.0, 16, Algorithm.BATCH, "mse", float("nan"), 10, "abc")
    table.add(0.0, 0, Algorithm.BATCH, "p_d", 0.1, 10, "abc")

    assert table.curve("p_d", 16).to_dict() == {-2.0: 0.5, 0.0: 0.9}

    text = table.to_csv(tmp_path / "out" / "table.csv")
    assert (tmp_path / "out" / "table.csv").read_text() == text
    lines = text.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert lines[3] == "snr,0,16,batch,mse,undefined,10,abc"
    assert pd.read_csv(tmp_path / "out" / "table.csv", na_values=["undefined"])["value"].isna().sum() == 1


def test_baseline_is_added_when_missing(small_config, caplog):
    cfg = small_config.model_copy(update={"m_values": [16], "trials": 1})
    with caplog.at_level(logging.WARNING, logger="src.harness.sweeps"):
        assert sweep_m_values(cfg) == [16, 0]
    assert "no-RIS baseline" in caplog.text
    assert sweep_m_values(small_config) == [16, 0]

    frame = run_sweep(cfg, SweepKind.SNR).to_frame()
    assert set(frame["m"]) == {16, 0}
