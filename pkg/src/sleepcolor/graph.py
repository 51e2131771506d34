"""Graphs, list-coloring instances, generators and instance file I/O.

Node identifiers are arbitrary distinct non-negative integers (not
necessarily 0..n-1).  Colors are positive integers; 0 is reserved as the
"no color yet" sentinel used throughout the coloring pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InstanceError, ParseError
from .rng import NodeRng

UNCOLORED = 0

# role constants so generator streams never collide with node streams
_GEN_STREAM = 0x67656E                       # "gen"


def _id_bit_size(ids: Iterable[int]) -> int:
    return max(1, max(ids).bit_length())


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with stable integer node ids."""

    nodes: tuple[int, ...]                       # sorted, distinct
    adjacency: Mapping[int, tuple[int, ...]]     # id -> sorted neighbor ids
    max_degree: int
    id_bit_size: int

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in self.nodes:
            for v in self.adjacency[u]:
                if u < v:
                    out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency.values()) // 2

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Subgraph induced on `keep` (ids preserved)."""
        keep_set = set(keep)
        unknown = keep_set.difference(self.nodes)
        if unknown:
            raise InstanceError(f"unknown node ids in induced subgraph: {sorted(unknown)}")
        nodes = tuple(sorted(keep_set))
        adjacency = {
            v: tuple(u for u in self.adjacency[v] if u in keep_set) for v in nodes
        }
        max_degree = max((len(a) for a in adjacency.values()), default=0)
        return Graph(nodes, adjacency, max_degree, _id_bit_size(nodes) if nodes else 1)


def build_graph(edges: Sequence[tuple[int, int]], node_ids: Sequence[int]) -> Graph:
    """Build a graph from explicit edges and node ids.

    Rejects duplicate ids, self-loops, duplicate edges (after normalizing
    orientation) and edges touching unknown ids.  Isolated nodes are fine.
    """
    if not node_ids:
        raise InstanceError("a graph needs at least one node")
    ids = list(node_ids)
    id_set = set(ids)
    if len(id_set) != len(ids):
        raise InstanceError("duplicate node id")
    if any(v < 0 for v in ids):
        raise InstanceError("node ids must be non-negative")

    adj: dict[int, set[int]] = {v: set() for v in ids}
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        if u == v:
            raise InstanceError(f"self-loop at node {u}")
        if u not in id_set or v not in id_set:
            raise InstanceError(f"edge ({u},{v}) touches an unknown node id")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise InstanceError(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
        adj[u].add(v)
        adj[v].add(u)

    nodes = tuple(sorted(ids))
    adjacency = {v: tuple(sorted(adj[v])) for v in nodes}
    max_degree = max(len(a) for a in adjacency.values())
    return Graph(nodes, adjacency, max_degree, _id_bit_size(nodes))


@dataclass(frozen=True)
class ColoringInstance:
    """A (deg+1)-list-coloring problem: a graph plus one color list per node."""

    graph: Graph
    lists: Mapping[int, tuple[int, ...]]         # id -> sorted color list

    def admissible(self) -> bool:
        g = self.graph
        return all(len(self.lists[v]) >= g.degree(v) + 1 for v in g.nodes)


def make_instance(graph: Graph, lists: Mapping[int, Sequence[int]]) -> ColoringInstance:
    """Validate and normalize lists (sorted, deduplicated is an error)."""
    norm: dict[int, tuple[int, ...]] = {}
    for v in graph.nodes:
        if v not in lists:
            raise InstanceError(f"node {v} has no color list")
        lst = tuple(sorted(lists[v]))
        if len(set(lst)) != len(lst):
            raise InstanceError(f"node {v}: duplicate color in list")
        if any(c <= 0 for c in lst):
            raise InstanceError(f"node {v}: colors must be positive (0 is reserved)")
        if len(lst) < graph.degree(v) + 1:
            raise InstanceError(
                f"node {v}: list of size {len(lst)} but degree {graph.degree(v)} "
                f"(needs at least deg+1)"
            )
        norm[v] = lst
    extra = set(lists).difference(graph.nodes)
    if extra:
        raise InstanceError(f"lists given for unknown nodes: {sorted(extra)}")
    return ColoringInstance(graph, norm)


def make_default_instance(graph: Graph) -> ColoringInstance:
    """The (deg+1)-coloring special case: node v gets the list {1, ..., deg(v)+1}."""
    return ColoringInstance(
        graph, {v: tuple(range(1, graph.degree(v) + 2)) for v in graph.nodes}
    )


@dataclass
class Coloring:
    """A (possibly partial) color assignment; UNCOLORED (=0) marks absent."""

    assignment: dict[int, int] = field(default_factory=dict)

    def color(self, v: int) -> int:
        return self.assignment.get(v, UNCOLORED)

    def uncolored_nodes(self, graph: Graph) -> list[int]:
        return [v for v in graph.nodes if self.color(v) == UNCOLORED]

    def is_total(self, graph: Graph) -> bool:
        return all(self.color(v) != UNCOLORED for v in graph.nodes)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

FAMILIES = ("path", "cycle", "clique", "star", "gnp", "regular")


def generate(family: str, n: int, seed: int, param: float | None = None) -> Graph:
    """Generate a graph from one of the supported families.

    Deterministic: the same (family, n, seed, param) always yields the same
    graph.  `param` is the edge probability for gnp and the degree for
    regular; the other families ignore it.
    """
    if n < 1:
        raise InstanceError("n must be >= 1")
    ids = list(range(n))
    if family == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif family == "cycle":
        if n < 3:
            raise InstanceError("a cycle needs n >= 3")
        edges = [(i, (i + 1) % n) for i in range(n)]
    elif family == "clique":
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif family == "star":
        edges = [(0, i) for i in range(1, n)]
    elif family == "gnp":
        if param is None:
            raise InstanceError("gnp needs an edge probability parameter")
        edges = _gnp_edges(n, float(param), seed)
    elif family == "regular":
        if param is None:
            raise InstanceError("regular needs a degree parameter")
        edges = _regular_edges(n, int(param), seed)
    else:
        raise InstanceError(f"unknown family {family!r}")
    return build_graph(edges, ids)


def _gnp_edges(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    """G(n,p) by geometric gap-skipping over the C(n,2) pair indexes."""
    if not 0.0 <= p <= 1.0:
        raise InstanceError("gnp probability must be in [0,1]")
    if p == 0.0 or n < 2:
        return []
    if p == 1.0:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng = NodeRng(seed, _GEN_STREAM)
    log1p = math.log(1.0 - p)
    total = n * (n - 1) // 2
    edges = []
    k = -1
    # decode increasing pair ranks (i, j) incrementally: O(n + m) overall
    i = 0
    row_start = 0
    row_len = n - 1
    while True:
        u = rng.uniform01()
        # gap ~ Geometric(p): number of skipped pairs before the next edge
        gap = int(math.log(1.0 - u) / log1p) if u > 0.0 else 0
        k += 1 + gap
        if k >= total:
            break
        while k - row_start >= row_len:
            row_start += row_len
            i += 1
            row_len -= 1
        edges.append((i, i + 1 + (k - row_start)))
    return edges


def _regular_edges(n: int, d: int, seed: int) -> list[tuple[int, int]]:
    """A simple d-regular graph via stub matching with restarts.

    Not the uniform distribution over d-regular graphs, but a valid and
    deterministic member of the family, which is all the harness needs.
    """
    if d < 0 or d >= n:
        raise InstanceError("regular needs 0 <= d < n")
    if (n * d) % 2 != 0:
        raise InstanceError("regular needs n*d even")
    if d == 0:
        return []
    rng = NodeRng(seed, _GEN_STREAM)
    for _attempt in range(200):
        stubs = [v for v in range(n) for _ in range(d)]
        # Fisher-Yates with the node stream
        for i in range(len(stubs) - 1, 0, -1):
            j = rng.randrange(i + 1)
            stubs[i], stubs[j] = stubs[j], stubs[i]
        edges: set[tuple[int, int]] = set()
        ok = True
        while stubs and ok:
            u = stubs.pop()
            # find a partner stub that keeps the graph simple
            pick = None
            for _try in range(80):
                idx = rng.randrange(len(stubs))
                w = stubs[idx]
                key = (u, w) if u < w else (w, u)
                if w != u and key not in edges:
                    pick = idx
                    break
            if pick is None:
                for idx, w in enumerate(stubs):
                    key = (u, w) if u < w else (w, u)
                    if w != u and key not in edges:
                        pick = idx
                        break
            if pick is None:
                ok = False
                break
            w = stubs.pop(pick)
            edges.add((u, w) if u < w else (w, u))
        if ok:
            return sorted(edges)
    raise InstanceError(f"could not realize a simple {d}-regular graph on {n} nodes")


# ---------------------------------------------------------------------------
# instance file format
#
#   # comment
#   dlc 1 <n> <m>
#   node <id> <c1> <c2> ... <ck>
#   edge <u> <v>
# ---------------------------------------------------------------------------


def write_instance(instance: ColoringInstance, path: str) -> None:
    g = instance.graph
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"dlc 1 {g.node_count} {g.edge_count()}\n")
        for v in g.nodes:
            cols = " ".join(str(c) for c in instance.lists[v])
            fh.write(f"node {v} {cols}\n")
        for u, v in g.edges():
            fh.write(f"edge {u} {v}\n")


def read_instance(path: str) -> ColoringInstance:
    header = None
    node_lines: list[tuple[int, tuple[int, ...]]] = []
    edge_lines: list[tuple[int, int]] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "dlc":
                if header is not None:
                    raise ParseError("duplicate header", lineno)
                if len(parts) != 4:
                    raise ParseError("header must be 'dlc 1 <n> <m>'", lineno)
                try:
                    version, n, m = int(parts[1]), int(parts[2]), int(parts[3])
                except ValueError:
                    raise ParseError("non-integer header field", lineno) from None
                if version != 1:
                    raise ParseError(f"unsupported format version {version}", lineno)
                header = (n, m)
            elif kind == "node":
                if header is None:
                    raise ParseError("node line before header", lineno)
                if len(parts) < 3:
                    raise ParseError("node line needs an id and at least one color", lineno)
                try:
                    vid = int(parts[1])
                    cols = tuple(int(c) for c in parts[2:])
                except ValueError:
                    raise ParseError("non-integer field in node line", lineno) from None
                node_lines.append((vid, cols))
            elif kind == "edge":
                if header is None:
                    raise ParseError("edge line before header", lineno)
                if len(parts) != 3:
                    raise ParseError("edge line must be 'edge <u> <v>'", lineno)
                try:
                    edge_lines.append((int(parts[1]), int(parts[2])))
                except ValueError:
                    raise ParseError("non-integer field in edge line", lineno) from None
            else:
                raise ParseError(f"unknown record {kind!r}", lineno)
    if header is None:
        raise ParseError("missing 'dlc' header (empty file?)", 1)
    n, m = header
    if len(node_lines) != n:
        raise ParseError(f"header declares {n} nodes but file has {len(node_lines)}", 1)
    if len(edge_lines) != m:
        raise ParseError(f"header declares {m} edges but file has {len(edge_lines)}", 1)
    graph = build_graph(edge_lines, [vid for vid, _ in node_lines])
    return make_instance(graph, {vid: cols for vid, cols in node_lines})
