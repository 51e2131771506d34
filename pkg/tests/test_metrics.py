import io
from fractions import Fraction

import pytest

from helpers import file_level_verdict

from sleepcolor.coloring import PipelineConfig, run_pipeline
from sleepcolor.errors import UsageError
from sleepcolor.graph import generate, make_default_instance, write_instance
from sleepcolor.metrics import (
    CSV_FIELDS,
    RunMetrics,
    aggregate,
    nearest_rank,
    validity_verdict,
    write_csv,
)


def _metrics(worst=3, avg=Fraction(2), rounds=5, valid="proper_total"):
    return RunMetrics(
        per_node={0: (worst, rounds, 1)},
        worst_case_awake=worst,
        average_awake=avg,
        total_rounds=rounds,
        decay_histogram={1: 1},
        validity=valid,
        phase2_incomplete=False,
    )


def test_validity_verdicts():
    g = generate("clique", 3, seed=0)
    inst = make_default_instance(g)
    assert validity_verdict(inst, {0: 1, 1: 2, 2: 3}) == "proper_total"
    assert validity_verdict(inst, {0: 1, 1: 2}) == "proper_partial"
    assert validity_verdict(inst, {0: 1, 1: 1, 2: 3}) == "invalid"      # conflict
    assert validity_verdict(inst, {0: 9, 1: 2, 2: 3}) == "invalid"      # off-list


def test_injected_fault_detected():
    g = generate("cycle", 8, seed=1)
    inst = make_default_instance(g)
    coloring, metrics = run_pipeline(inst, PipelineConfig(seed=1))
    assert metrics.validity == "proper_total"
    broken = dict(coloring.assignment)
    broken[0] = broken[1]
    assert validity_verdict(inst, broken) == "invalid"


def test_verdict_agrees_with_file_level_recheck(tmp_path):
    for seed in range(10):
        g = generate("gnp", 40, seed=seed, param=0.15)
        inst = make_default_instance(g)
        coloring, metrics = run_pipeline(inst, PipelineConfig(seed=seed))
        path = tmp_path / f"i{seed}.dlc"
        write_instance(inst, str(path))
        assert file_level_verdict(str(path), coloring.assignment) == metrics.validity


def test_aggregate_single_run_equals_itself():
    m = _metrics()
    summary = aggregate([m])
    assert summary["runs"] == 1
    assert summary["worst_case_awake"]["mean"] == 3
    assert summary["worst_case_awake"]["max"] == 3
    assert summary["all_valid"]


def test_aggregate_two_runs():
    summary = aggregate([_metrics(worst=3), _metrics(worst=5)])
    assert summary["worst_case_awake"]["max"] == 5
    assert summary["worst_case_awake"]["mean"] == 4


def test_nearest_rank_p95_of_100():
    values = sorted(range(1, 101))
    assert nearest_rank(values, 0.95) == 95
    assert nearest_rank(values, 0.50) == 50


def test_aggregate_empty_raises():
    with pytest.raises(UsageError):
        aggregate([])


def test_csv_schema_and_padding():
    m = _metrics()
    row = m.csv_row(seed=7, family="cycle", n=8, param=None, k=3, threshold=8)
    assert len(row) == len(CSV_FIELDS) == 23
    assert row[0] == "7" and row[1] == "cycle"
    assert row[11:] == ["1"] + ["0"] * 11          # decay padded to x12
    buf = io.StringIO()
    write_csv(buf, [row], header_comments=["k1=3"])
    text = buf.getvalue()
    assert text.startswith("# k1=3\n")
    assert text.splitlines()[1] == ",".join(CSV_FIELDS)


def test_average_awake_six_decimals():
    m = _metrics(avg=Fraction(7, 3))
    row = m.csv_row(seed=0, family="path", n=2, param=None, k=1, threshold=8)
    assert row[7] == "2.333333"


def test_uncolored_after_iteration():
    m = RunMetrics(
        per_node={},
        worst_case_awake=0,
        average_awake=Fraction(0),
        total_rounds=0,
        decay_histogram={1: 4, 2: 3, 3: 1},
        validity="proper_total",
        phase2_incomplete=False,
    )
    assert m.uncolored_after_iteration(1, 10) == 6
    assert m.uncolored_after_iteration(2, 10) == 3
    assert m.uncolored_after_iteration(3, 10) == 2
