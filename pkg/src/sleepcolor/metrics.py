"""Complexity accounting, validity verdicts, aggregation and CSV output."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InternalError, UsageError
from .graph import UNCOLORED, ColoringInstance

PROPER_TOTAL = "proper_total"
PROPER_PARTIAL = "proper_partial"
INVALID = "invalid"

DECAY_COLUMNS = 12

CSV_FIELDS = (
    ["seed", "family", "n", "param", "K", "threshold", "worst_awake",
     "avg_awake", "total_rounds", "valid", "phase2_incomplete"]
    + [f"x{i}" for i in range(1, DECAY_COLUMNS + 1)]
)


def validity_verdict(instance: ColoringInstance, assignment: Mapping[int, int]) -> str:
    """Exhaustive scan: list membership per node, conflict per edge, totality."""
    g = instance.graph
    total = True
    for v in g.nodes:
        c = assignment.get(v, UNCOLORED)
        if c == UNCOLORED:
            total = False
            continue
        if c not in instance.lists[v]:
            return INVALID
    for u in g.nodes:
        cu = assignment.get(u, UNCOLORED)
        if cu == UNCOLORED:
            continue
        for v in g.adjacency[u]:
            if assignment.get(v, UNCOLORED) == cu:
                return INVALID
    return PROPER_TOTAL if total else PROPER_PARTIAL


@dataclass
class RunMetrics:
    """Per-run complexity measurements and verdicts."""

    per_node: dict[int, tuple[int, int | None, int | None]]
    # node -> (awake rounds, termination round or None, phase terminated in)
    worst_case_awake: int
    average_awake: Fraction
    total_rounds: int
    decay_histogram: dict[int, int]
    validity: str
    phase2_incomplete: bool
    complete: bool = True
    phase_awake: dict[int, int] = field(default_factory=dict)
    phase_rounds: dict[int, int] = field(default_factory=dict)
    phase3_classes: int = 0

    def uncolored_after_iteration(self, i: int, n: int) -> int:
        """Nodes still uncolored once phase-1 iteration i has resolved."""
        done = sum(c for j, c in self.decay_histogram.items() if j <= i)
        return n - done

    def csv_row(self, seed: int, family: str, n: int, param, k: int,
                threshold: int) -> list[str]:
        xs = [self.decay_histogram.get(i, 0) for i in range(1, DECAY_COLUMNS + 1)]
        avg = self.average_awake
        return (
            [str(seed), family, str(n), _fmt_param(param), str(k), str(threshold),
             str(self.worst_case_awake),
             f"{avg.numerator / avg.denominator:.6f}",
             str(self.total_rounds),
             "1" if (self.validity == PROPER_TOTAL and self.complete) else "0",
             "1" if self.phase2_incomplete else "0"]
            + [str(x) for x in xs]
        )


def _fmt_param(param) -> str:
    if param is None:
        return "0"
    if isinstance(param, float):
        return repr(param)
    return str(param)


def collect(trace, coloring, instance: ColoringInstance, config) -> RunMetrics:
    """Rebuild run metrics from a trace alone (plus the final coloring).

    An independent accounting path: node lines give awake counts and
    termination rounds, the configured phase boundaries attribute rounds to
    phases, and validity comes from re-scanning the coloring against the
    instance.  Raises InternalError when the trace and coloring disagree.
    """
    n = instance.graph.node_count
    s2, s3 = config.phase_boundaries(n)
    cfg = config.resolve(n)

    awake = {v: 0 for v in instance.graph.nodes}
    term: dict[int, int | None] = {v: None for v in instance.graph.nodes}
    for rnd, v, act in trace.node_events:
        if v not in awake:
            raise InternalError(f"trace mentions unknown node {v}")
        awake[v] += 1
        if act == "term":
            if term[v] is not None:
                raise InternalError(f"node {v} terminated twice in trace")
            term[v] = rnd

    assignment = coloring.assignment if hasattr(coloring, "assignment") else coloring
    for v in instance.graph.nodes:
        colored = assignment.get(v, UNCOLORED) != UNCOLORED
        if colored and term[v] is None:
            raise InternalError(f"node {v} colored but never terminated in trace")

    def phase_for(rnd: int) -> int:
        if rnd <= s2:
            return 1
        if rnd <= s3:
            return 2
        return 3

    decay = {i: 0 for i in range(1, cfg.k1 + 1)}
    phase_of: dict[int, int | None] = {}
    for v, r in term.items():
        if r is None:
            phase_of[v] = None
            continue
        phase_of[v] = phase_for(r)
        if r <= s2:
            decay[(r + 1) // 2] += 1

    phase_awake = {1: 0, 2: 0, 3: 0}
    phase_rounds = {1: 0, 2: 0, 3: 0}
    for rnd, v, _act in trace.node_events:
        p = phase_for(rnd)
        phase_awake[p] += 1
        base = 0 if p == 1 else (s2 if p == 2 else s3)
        phase_rounds[p] = max(phase_rounds[p], rnd - base)

    complete = all(r is not None for r in term.values())
    total_rounds = max((r for r in term.values() if r is not None), default=0)
    if not complete:
        total_rounds = max(total_rounds, cfg.round_cap)
    return RunMetrics(
        per_node={v: (awake[v], term[v], phase_of[v]) for v in instance.graph.nodes},
        worst_case_awake=max(awake.values()),
        average_awake=Fraction(sum(awake.values()), n),
        total_rounds=total_rounds,
        decay_histogram=decay,
        validity=validity_verdict(instance, assignment),
        phase2_incomplete=False,   # not derivable from the trace; caller's concern
        complete=complete,
        phase_awake=phase_awake,
        phase_rounds=phase_rounds,
    )


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

_AGG_FIELDS = ("worst_case_awake", "average_awake", "total_rounds")


def nearest_rank(sorted_values: Sequence, q: float):
    """Nearest-rank quantile: the ceil(q*N)-th smallest value."""
    if not sorted_values:
        raise UsageError("quantile of empty data")
    import math

    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def aggregate(runs: Iterable[RunMetrics]) -> dict:
    """Deterministic summary (mean/max/min/p50/p95) of each metric field."""
    runs = list(runs)
    if not runs:
        raise UsageError("aggregate needs at least one run")
    out: dict = {"runs": len(runs)}
    for name in _AGG_FIELDS:
        values = sorted(float(getattr(m, name)) for m in runs)
        out[name] = {
            "mean": sum(values) / len(values),
            "min": values[0],
            "max": values[-1],
            "p50": nearest_rank(values, 0.50),
            "p95": nearest_rank(values, 0.95),
        }
    out["all_valid"] = all(
        m.validity == PROPER_TOTAL and m.complete for m in runs
    )
    return out


def write_csv(fh, rows: Iterable[Sequence[str]], header_comments: Iterable[str] = ()) -> None:
    """Write the run CSV: comment block, mandatory header row, data rows."""
    for line in header_comments:
        fh.write(f"# {line}\n")
    fh.write(",".join(CSV_FIELDS) + "\n")
    for row in rows:
        fh.write(",".join(row) + "\n")
