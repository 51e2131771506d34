import pytest

from sleepcolor.coloring import PipelineConfig, run_pipeline
from sleepcolor.errors import InternalError, RunIncomplete
from sleepcolor.graph import build_graph, generate, make_default_instance, make_instance
from sleepcolor.metrics import collect, validity_verdict
from sleepcolor.simcore import Trace


def test_single_node_graph_colors_with_at_most_four_awake_rounds():
    g = build_graph([], [0])
    inst = make_instance(g, {0: (7,)})
    for seed in range(64):
        coloring, metrics = run_pipeline(inst, PipelineConfig(seed=seed))
        assert coloring.assignment[0] == 7
        assert metrics.worst_case_awake <= 4
        assert metrics.validity == "proper_total"


def test_k3_seed_sweep_always_proper_total():
    inst = make_default_instance(generate("clique", 3, seed=0))
    for seed in range(1000):
        coloring, metrics = run_pipeline(inst, PipelineConfig(seed=seed))
        assert metrics.validity == "proper_total" and metrics.complete
        assert all(coloring.assignment[v] in inst.lists[v] for v in inst.graph.nodes)


def test_metric_ordering_invariant():
    g = generate("gnp", 300, seed=21, param=0.03)
    inst = make_default_instance(g)
    _, m = run_pipeline(inst, PipelineConfig(seed=21))
    assert float(m.average_awake) <= m.worst_case_awake <= m.total_rounds


def test_determinism_of_coloring_metrics_and_trace():
    g = generate("gnp", 120, seed=5, param=0.06)
    inst = make_default_instance(g)
    t1, t2 = Trace(), Trace()
    c1, m1 = run_pipeline(inst, PipelineConfig(seed=5), trace=t1)
    c2, m2 = run_pipeline(inst, PipelineConfig(seed=5), trace=t2)
    assert c1.assignment == c2.assignment
    assert m1.per_node == m2.per_node
    assert t1.render() == t2.render()


def test_decay_histogram_accounts_for_every_node():
    g = generate("gnp", 400, seed=9, param=0.02)
    inst = make_default_instance(g)
    _, m = run_pipeline(inst, PipelineConfig(seed=9))
    phase1_colored = sum(m.decay_histogram.values())
    later = sum(1 for _, (_a, _t, ph) in m.per_node.items() if ph in (2, 3))
    assert phase1_colored + later == inst.graph.node_count


def test_phase_windows_respected():
    g = generate("gnp", 200, seed=13, param=0.05)
    inst = make_default_instance(g)
    cfg = PipelineConfig(seed=13)
    _, m = run_pipeline(inst, cfg)
    s2, s3 = cfg.phase_boundaries(inst.graph.node_count)
    for v, (_awake, term, phase) in m.per_node.items():
        assert term is not None
        if phase == 1:
            assert term <= s2
        elif phase == 2:
            assert s2 < term <= s3
        else:
            assert term > s3


def test_round_cap_propagates_run_incomplete():
    g = generate("gnp", 64, seed=2, param=0.2)
    inst = make_default_instance(g)
    with pytest.raises(RunIncomplete) as err:
        run_pipeline(inst, PipelineConfig(seed=2, round_cap=3))
    coloring, metrics = err.value.partial
    assert not metrics.complete
    assert metrics.total_rounds == 3
    assert validity_verdict(inst, coloring.assignment) in ("proper_partial", "proper_total")


def test_phase3_disabled_returns_partial_without_raising():
    g = generate("gnp", 64, seed=3, param=0.2)
    inst = make_default_instance(g)
    coloring, metrics = run_pipeline(
        inst, PipelineConfig(seed=3, k1=1, phase3_enabled=False)
    )
    assert not metrics.complete
    assert metrics.validity in ("proper_partial", "proper_total")


def test_forced_phase2_window_and_phase3_offsets():
    g = generate("gnp", 150, seed=4, param=0.12)
    inst = make_default_instance(g)
    cfg = PipelineConfig(seed=4, k1=2, phase2_degree_threshold=6, phase2_iteration_cap=10)
    _, m = run_pipeline(inst, cfg)
    assert m.validity == "proper_total"
    s2, s3 = cfg.phase_boundaries(inst.graph.node_count)
    assert s3 == s2 + 20
    phase2_terms = [t for _, (_a, t, ph) in m.per_node.items() if ph == 2]
    phase3_terms = [t for _, (_a, t, ph) in m.per_node.items() if ph == 3]
    assert all(s2 < t <= s3 for t in phase2_terms)
    assert all(t > s3 for t in phase3_terms)


def test_trace_collect_agrees_with_pipeline_metrics():
    g = generate("gnp", 90, seed=6, param=0.08)
    inst = make_default_instance(g)
    cfg = PipelineConfig(seed=6, k1=2, phase2_degree_threshold=5, phase2_iteration_cap=8)
    trace = Trace()
    coloring, m = run_pipeline(inst, cfg, trace=trace)
    rebuilt = collect(trace, coloring, inst, cfg)
    assert rebuilt.worst_case_awake == m.worst_case_awake
    assert rebuilt.average_awake == m.average_awake
    assert rebuilt.total_rounds == m.total_rounds
    assert rebuilt.decay_histogram == m.decay_histogram
    assert rebuilt.validity == m.validity
    assert rebuilt.per_node == m.per_node
    assert rebuilt.phase_awake == m.phase_awake


def test_collect_detects_trace_coloring_mismatch():
    g = build_graph([], [0, 1])
    inst = make_default_instance(g)
    cfg = PipelineConfig(seed=1)
    trace = Trace()
    coloring, _ = run_pipeline(inst, cfg, trace=trace)
    corrupted = dict(coloring.assignment)
    corrupted[0] = 0
    trace.node_events = [e for e in trace.node_events
                         if not (e[1] == 0 and e[2] == "term")]
    with pytest.raises(InternalError):
        collect(trace, {1: corrupted.get(1, 0), 0: 5}, inst, cfg)


def test_empty_graph_pipeline():
    from sleepcolor.coloring import default_k1

    g = build_graph([], list(range(50)))
    inst = make_default_instance(g)
    _, m = run_pipeline(inst, PipelineConfig(seed=77))
    assert m.validity == "proper_total"
    # worst case: survive all of phase 1, then preliminary + leaf in phase 3
    assert m.worst_case_awake <= 2 * default_k1(50, 3.0) + 2
