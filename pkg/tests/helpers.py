"""Shared test utilities: independent reference implementations.

These deliberately re-derive results through different code paths than the
package (sequential greedy instead of the tournament, a file-level
properness scan instead of the in-memory one) so that agreement between
the two is meaningful.
"""

from __future__ import annotations

from sleepcolor.graph import ColoringInstance, make_instance, read_instance
from sleepcolor.rng import NodeRng


def greedy_by_class(instance: ColoringInstance, interim: dict[int, int]) -> dict[int, int]:
    """Centralized sequential greedy: interim-color order, smallest free color."""
    order = sorted(instance.graph.nodes, key=lambda v: (interim[v], v))
    colors: dict[int, int] = {}
    for v in order:
        used = {colors[u] for u in instance.graph.adjacency[v] if u in colors}
        colors[v] = next(c for c in instance.lists[v] if c not in used)
    return colors


def file_level_verdict(instance_path: str, assignment: dict[int, int]) -> str:
    """Second properness scan, driven by re-reading the instance file."""
    inst = read_instance(instance_path)
    g = inst.graph
    colored = {v: c for v, c in assignment.items() if c != 0}
    for v, c in colored.items():
        if c not in inst.lists[v]:
            return "invalid"
    for u, v in g.edges():
        if u in colored and v in colored and colored[u] == colored[v]:
            return "invalid"
    return "proper_total" if len(colored) == g.node_count else "proper_partial"


def random_residual_instance(trial: int, max_n: int = 60) -> ColoringInstance:
    """A random small instance with irregular (but admissible) lists."""
    from sleepcolor.graph import generate

    rng = NodeRng(0xFEED, trial)
    n = 2 + rng.randrange(max_n - 1)
    p = 0.03 + 0.25 * (rng.randrange(1000) / 1000.0)
    graph = generate("gnp", n, seed=trial, param=p)
    lists = {}
    for v in graph.nodes:
        start = 1 + rng.randrange(4)
        extra = rng.randrange(3)
        step = 1 + rng.randrange(2)
        size = graph.degree(v) + 1 + extra
        lists[v] = tuple(start + step * i for i in range(size))
    return make_instance(graph, lists)
