"""Exact single-iteration analysis by brute-force enumeration.

For tiny instances the joint distribution of one propose round is small
enough to enumerate exactly: each node draws 0 with probability 1/2 and
each of its list colors with probability 1/(2|L|).  Everything here uses
exact rationals, so bound checks like "adoption probability >= 1/4" carry
no floating-point risk.  Doubles as the calibration target for the Monte
Carlo paths through the simulator.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import _kernels
from .errors import TooLargeForOracle
from .graph import ColoringInstance, build_graph, make_instance

ENUMERATION_GUARD = 10**7


def choice_space(instance: ColoringInstance) -> dict[int, list[tuple[int, Fraction]]]:
    """Per node: weighted outcomes [(0, 1/2)] + [(c, 1/(2|L|)) for c in L]."""
    space = {}
    for v in instance.graph.nodes:
        lst = instance.lists[v]
        w = Fraction(1, 2 * len(lst))
        outcomes = [(0, Fraction(1, 2))] + [(c, w) for c in lst]
        assert sum(weight for _, weight in outcomes) == 1
        space[v] = outcomes
    return space


def _guard(instance: ColoringInstance) -> None:
    size = 1
    for v in instance.graph.nodes:
        size *= len(instance.lists[v]) + 1
        if size > ENUMERATION_GUARD:
            raise TooLargeForOracle(
                f"joint choice space exceeds {ENUMERATION_GUARD} outcomes"
            )


def exact_adoption_probabilities(instance: ColoringInstance) -> dict[int, Fraction]:
    """Exact per-node probability of adopting in one iteration."""
    _guard(instance)
    g = instance.graph
    nodes = g.nodes
    space = choice_space(instance)
    probs = {v: Fraction(0) for v in nodes}
    index = {v: i for i, v in enumerate(nodes)}
    for joint in itertools.product(*(space[v] for v in nodes)):
        weight = Fraction(1)
        for _, w in joint:
            weight *= w
        for v in nodes:
            cv = joint[index[v]][0]
            if cv == 0:
                continue
            if all(joint[index[u]][0] != cv for u in g.adjacency[v]):
                probs[v] += weight
    return probs


def exact_expected_uncolored_after_one_iteration(instance: ColoringInstance) -> Fraction:
    """Sum over nodes of (1 - adoption probability); at most (3/4) * n."""
    probs = exact_adoption_probabilities(instance)
    return sum((1 - p for p in probs.values()), Fraction(0))


def monte_carlo_adoption(
    instance: ColoringInstance, seed_base: int, trials: int, backend: str | None = None
) -> dict[int, Fraction]:
    """Empirical adoption frequencies over `trials` seeded single iterations.

    Each trial is bit-identical to one run of the first phase-1 iteration
    through the round engine (see the kernels package), so this estimates
    exactly the distribution the simulator realizes.
    """
    counts = _kernels.phase1_trial_counts(instance, seed_base, trials, backend=backend)
    return {v: Fraction(c, trials) for v, c in counts.items()}


# ---------------------------------------------------------------------------
# the tiny-instance catalog
# ---------------------------------------------------------------------------


def _nonisomorphic_graphs(max_n: int = 4):
    """All non-isomorphic simple graphs on 1..max_n nodes, by brute force."""
    out = []
    for n in range(1, max_n + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        seen = set()
        for bits in range(1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
            canon = None
            for perm in itertools.permutations(range(n)):
                mapped = tuple(
                    sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges)
                )
                if canon is None or mapped < canon:
                    canon = mapped
            if canon in seen:
                continue
            seen.add(canon)
            out.append((n, edges))
    return out


def _assignment(kind: str, graph) -> dict[int, tuple[int, ...]]:
    lists = {}
    for i, v in enumerate(graph.nodes):
        size = graph.degree(v) + 1
        if kind == "minimal":
            lists[v] = tuple(range(1, size + 1))
        elif kind == "shifted":
            lists[v] = tuple(range(6, 6 + size))
        else:  # staggered: distinct windows per node
            lists[v] = tuple(range(i + 1, i + 1 + size))
    return lists


ASSIGNMENT_KINDS = ("minimal", "shifted", "staggered")


def tiny_catalog() -> list[tuple[str, ColoringInstance]]:
    """Every graph on <= 4 nodes (up to isomorphism) with three list kinds."""
    catalog = []
    for n, edges in _nonisomorphic_graphs(4):
        graph = build_graph(edges, list(range(n)))
        tag = f"n{n}e{len(edges)}_" + (
            "-".join(f"{u}{v}" for u, v in edges) if edges else "empty"
        )
        for kind in ASSIGNMENT_KINDS:
            instance = make_instance(graph, _assignment(kind, graph))
            catalog.append((f"{tag}/{kind}", instance))
    return catalog
