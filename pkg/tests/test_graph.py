import pytest
from hypothesis import given
from hypothesis import strategies as st

from sleepcolor.errors import InstanceError, ParseError
from sleepcolor.graph import (
    build_graph,
    generate,
    make_default_instance,
    make_instance,
    read_instance,
    write_instance,
)


def test_single_isolated_node():
    g = build_graph([], [7])
    assert g.node_count == 1
    assert g.max_degree == 0
    assert g.adjacency[7] == ()
    assert g.id_bit_size == 3


def test_path_of_three():
    g = build_graph([(1, 2), (2, 3)], [1, 2, 3])
    assert g.max_degree == 2
    assert g.adjacency[2] == (1, 3)
    assert g.edges() == [(1, 2), (2, 3)]


def test_duplicate_edge_after_normalization_rejected():
    with pytest.raises(InstanceError):
        build_graph([(1, 2), (2, 1)], [1, 2])


def test_self_loop_rejected():
    with pytest.raises(InstanceError):
        build_graph([(1, 1)], [1])


def test_duplicate_node_id_rejected():
    with pytest.raises(InstanceError):
        build_graph([], [1, 1])


def test_unknown_endpoint_rejected():
    with pytest.raises(InstanceError):
        build_graph([(1, 5)], [1, 2])


def test_empty_node_set_rejected():
    with pytest.raises(InstanceError):
        build_graph([], [])


def test_id_bit_size():
    assert build_graph([], [0]).id_bit_size == 1
    assert build_graph([], [8]).id_bit_size == 4
    assert build_graph([], [0, 255]).id_bit_size == 8


def test_default_instance_triangle():
    g = generate("clique", 3, seed=0)
    inst = make_default_instance(g)
    assert all(inst.lists[v] == (1, 2, 3) for v in g.nodes)


def test_default_instance_isolated_and_star():
    g = build_graph([], [0])
    assert make_default_instance(g).lists[0] == (1,)
    star = generate("star", 5, seed=0)
    inst = make_default_instance(star)
    assert inst.lists[0] == (1, 2, 3, 4, 5)
    assert all(inst.lists[v] == (1, 2) for v in star.nodes if v != 0)


def test_make_instance_rejects_short_list():
    g = build_graph([(0, 1), (1, 2)], [0, 1, 2])
    with pytest.raises(InstanceError):
        make_instance(g, {0: (1, 2), 1: (1, 2), 2: (1, 2)})  # node 1 has deg 2


def test_make_instance_rejects_nonpositive_and_duplicate_colors():
    g = build_graph([], [0])
    with pytest.raises(InstanceError):
        make_instance(g, {0: (0,)})
    with pytest.raises(InstanceError):
        make_instance(g, {0: (2, 2)})


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def test_cycle_and_clique_shapes():
    c5 = generate("cycle", 5, seed=99)
    assert c5.max_degree == 2 and c5.edge_count() == 5
    k4 = generate("clique", 4, seed=99)
    assert k4.max_degree == 3 and k4.edge_count() == 6


def test_cycle_needs_three_nodes():
    with pytest.raises(InstanceError):
        generate("cycle", 2, seed=0)


def test_gnp_seed_determinism():
    a = generate("gnp", 100, seed=5, param=0.1)
    b = generate("gnp", 100, seed=5, param=0.1)
    assert a.edges() == b.edges()
    c = generate("gnp", 100, seed=6, param=0.1)
    assert a.edges() != c.edges()


def test_gnp_edge_count_plausible():
    g = generate("gnp", 200, seed=1, param=0.1)
    expect = 0.1 * 200 * 199 / 2
    assert 0.6 * expect < g.edge_count() < 1.4 * expect


def test_gnp_extremes():
    assert generate("gnp", 50, seed=1, param=0.0).edge_count() == 0
    assert generate("gnp", 10, seed=1, param=1.0).edge_count() == 45


def test_regular_generator():
    g = generate("regular", 16, seed=3, param=4)
    assert all(g.degree(v) == 4 for v in g.nodes)
    assert generate("regular", 16, seed=3, param=4).edges() == g.edges()


def test_regular_parameter_validation():
    with pytest.raises(InstanceError):
        generate("regular", 5, seed=0, param=3)       # odd n*d
    with pytest.raises(InstanceError):
        generate("regular", 4, seed=0, param=4)       # d >= n


def test_unknown_family():
    with pytest.raises(InstanceError):
        generate("torus", 10, seed=0)


@given(
    family=st.sampled_from(["path", "cycle", "clique", "star", "gnp"]),
    n=st.integers(min_value=3, max_value=40),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_generated_graphs_are_symmetric_with_true_max_degree(family, n, seed):
    g = generate(family, n, seed=seed, param=0.2 if family == "gnp" else None)
    for u in g.nodes:
        for v in g.adjacency[u]:
            assert u != v
            assert u in g.adjacency[v]
    assert g.max_degree == max(len(g.adjacency[v]) for v in g.nodes)


def test_induced_subgraph():
    g = generate("cycle", 6, seed=0)
    sub = g.induced([0, 1, 2, 4])
    assert sub.nodes == (0, 1, 2, 4)
    assert sub.adjacency[1] == (0, 2)
    assert sub.adjacency[4] == ()
    assert sub.max_degree == 2


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


def test_round_trip_default_k3(tmp_path):
    inst = make_default_instance(generate("clique", 3, seed=0))
    path = tmp_path / "k3.dlc"
    write_instance(inst, str(path))
    back = read_instance(str(path))
    assert back.graph.nodes == inst.graph.nodes
    assert back.graph.adjacency == inst.graph.adjacency
    assert back.lists == inst.lists


def test_round_trip_irregular_instance(tmp_path):
    g = generate("gnp", 30, seed=2, param=0.15)
    lists = {v: tuple(range(v + 1, v + g.degree(v) + 3)) for v in g.nodes}
    inst = make_instance(g, lists)
    path = tmp_path / "irr.dlc"
    write_instance(inst, str(path))
    back = read_instance(str(path))
    assert back.lists == inst.lists and back.graph.adjacency == inst.graph.adjacency


def test_read_rejects_inadmissible_list(tmp_path):
    path = tmp_path / "bad.dlc"
    path.write_text(
        "dlc 1 3 2\nnode 0 1 2\nnode 1 1 2\nnode 2 1 2\nedge 0 1\nedge 1 2\n"
    )
    with pytest.raises(InstanceError):
        read_instance(str(path))


def test_read_empty_file(tmp_path):
    path = tmp_path / "empty.dlc"
    path.write_text("")
    with pytest.raises(ParseError):
        read_instance(str(path))


def test_read_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / "mal.dlc"
    path.write_text("dlc 1 1 0\nnode zero 1\n")
    with pytest.raises(ParseError) as err:
        read_instance(str(path))
    assert err.value.line == 2


def test_read_allows_comments_and_checks_counts(tmp_path):
    path = tmp_path / "c.dlc"
    path.write_text("# a comment\ndlc 1 1 0\n# another\nnode 5 1\n")
    inst = read_instance(str(path))
    assert inst.graph.nodes == (5,)
    bad = tmp_path / "counts.dlc"
    bad.write_text("dlc 1 2 0\nnode 0 1\n")
    with pytest.raises(ParseError):
        read_instance(str(bad))
