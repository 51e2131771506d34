"""The three-phase list-coloring pipeline and its configuration.

Phase boundaries are globally scheduled from (n, config) alone, which is
what lets every node compute them locally:

  phase 1   rounds 1 .. 2*k1
  phase 2   rounds 2*k1+1 .. 2*k1 + 2*cap, scheduled only when the degree
            threshold is reachable at all (threshold <= n-1 and cap >= 1);
            the window passes silently when no node is above the threshold
  phase 3   starts right after the phase-2 window (or after phase 1 when
            no window is scheduled) and runs until every node terminated

The output is Las Vegas: whenever the pipeline completes, the coloring is
proper and every node's color comes from its original list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from ..errors import RunIncomplete
from ..graph import Coloring, ColoringInstance
from ..metrics import RunMetrics, validity_verdict
from ..rng import derive_seed
from ..simcore import Trace, default_round_cap
from .phase1 import run_phase1
from .phase2 import run_phase2
from .phase3 import run_phase3

_PHASE1_SALT = 0x70310001
_PHASE2_SALT = 0x70320002


def default_k1(n: int, coefficient: float) -> int:
    """Iteration budget for phase 1: ~coefficient * log2 log2 n, at least 1."""
    inner = math.log2(max(2, n))
    if inner <= 1.0:
        return 1
    return max(1, math.ceil(coefficient * math.log2(inner)))


def default_phase2_threshold(n: int) -> int:
    """Degree cutoff for the reduction phase, clamped to at least 8.

    The polylog cutoff exceeds n at desk scale, making phase 2 a scheduled
    no-op unless the caller forces a small threshold explicitly.
    """
    if n < 2:
        return 8
    return max(8, math.ceil(math.log2(n) ** 7))


@dataclass(frozen=True)
class PipelineConfig:
    k1: int | None = None
    k1_coefficient: float = 3.0
    phase2_degree_threshold: int | None = None
    phase2_iteration_cap: int = 40
    phase3_enabled: bool = True
    seed: int = 0
    round_cap: int | None = None

    def resolve(self, n: int) -> "PipelineConfig":
        """Fill the size-dependent defaults for an n-node instance."""
        return replace(
            self,
            k1=self.k1 if self.k1 is not None else default_k1(n, self.k1_coefficient),
            phase2_degree_threshold=(
                self.phase2_degree_threshold
                if self.phase2_degree_threshold is not None
                else default_phase2_threshold(n)
            ),
            round_cap=self.round_cap if self.round_cap is not None else default_round_cap(n),
        )

    def phase2_scheduled(self, n: int) -> bool:
        """Whether the global schedule reserves a phase-2 window at all."""
        cfg = self.resolve(n)
        return cfg.phase2_iteration_cap >= 1 and cfg.phase2_degree_threshold <= n - 1

    def phase_boundaries(self, n: int) -> tuple[int, int]:
        """(end of phase-1 window, end of phase-2 window) in global rounds."""
        cfg = self.resolve(n)
        s2 = 2 * cfg.k1
        s3 = s2 + (2 * cfg.phase2_iteration_cap if self.phase2_scheduled(n) else 0)
        return s2, s3

    def kv_block(self, n: int | None = None) -> list[str]:
        """Flat key=value lines (embedded in CSV output for reproducibility)."""
        cfg = self if n is None else self.resolve(n)
        return [
            f"k1={cfg.k1 if cfg.k1 is not None else 'auto'}",
            f"k1_coefficient={cfg.k1_coefficient}",
            f"phase2_degree_threshold="
            f"{cfg.phase2_degree_threshold if cfg.phase2_degree_threshold is not None else 'auto'}",
            f"phase2_iteration_cap={cfg.phase2_iteration_cap}",
            f"phase3_enabled={int(cfg.phase3_enabled)}",
            f"seed={cfg.seed}",
            f"round_cap={cfg.round_cap if cfg.round_cap is not None else 'auto'}",
        ]


def run_pipeline(
    instance: ColoringInstance,
    config: PipelineConfig,
    trace: Trace | None = None,
) -> tuple[Coloring, RunMetrics]:
    """Run all phases on an admissible instance.

    Raises RunIncomplete (carrying the partial coloring and metrics) if the
    global round cap cuts phase 3 short.  With phase3_enabled=False the
    possibly-partial coloring after phase 2 is returned as-is.
    """
    graph = instance.graph
    n = graph.node_count
    cfg = config.resolve(n)
    s2, s3 = config.phase_boundaries(n)

    awake: dict[int, int] = {v: 0 for v in graph.nodes}
    termination: dict[int, int | None] = {v: None for v in graph.nodes}
    phase_of: dict[int, int] = {}
    phase_awake = {1: 0, 2: 0, 3: 0}
    phase_rounds = {1: 0, 2: 0, 3: 0}
    assignment: dict[int, int] = {}

    def fold(outcome, phase: int, offset: int) -> None:
        for v, a in outcome.awake_rounds.items():
            awake[v] += a
            phase_awake[phase] += a
        for v, c in outcome.colors.items():
            assignment[v] = c
            termination[v] = offset + outcome.termination_round[v]
            phase_of[v] = phase
        phase_rounds[phase] = outcome.rounds_executed

    if trace is not None:
        trace.round_offset = 0
    p1 = run_phase1(
        instance, cfg.k1, derive_seed(cfg.seed, _PHASE1_SALT),
        trace=trace, round_cap=cfg.round_cap,
    )
    fold(p1, 1, 0)
    residual = p1.residual
    decay = _decay_histogram(p1, cfg.k1)

    phase2_incomplete = False
    if residual is not None and config.phase2_scheduled(n) and cfg.round_cap > s2:
        iteration_budget = min(cfg.phase2_iteration_cap, (cfg.round_cap - s2) // 2)
        if iteration_budget >= 1:
            if trace is not None:
                trace.round_offset = s2
            p2 = run_phase2(
                residual,
                cfg.phase2_degree_threshold,
                iteration_budget,
                derive_seed(cfg.seed, _PHASE2_SALT),
                trace=trace,
            )
            fold(p2, 2, s2)
            residual = p2.residual
            phase2_incomplete = bool(p2.extra.get("incomplete"))

    complete = residual is None
    phase3_classes = 0
    if residual is not None and cfg.phase3_enabled and cfg.round_cap > s3:
        if trace is not None:
            trace.round_offset = s3
        p3 = run_phase3(residual, trace=trace, round_cap=cfg.round_cap - s3)
        fold(p3, 3, s3)
        phase3_classes = p3.extra["classes"]
        complete = p3.extra["complete"]
        residual = p3.residual

    coloring = Coloring(dict(assignment))
    total_rounds = max(
        (r for r in termination.values() if r is not None), default=0
    )
    if not complete:
        # survivors are conceptually still running when the cap hits
        total_rounds = max(total_rounds, cfg.round_cap)

    verdict = validity_verdict(instance, coloring.assignment)
    metrics = RunMetrics(
        per_node={
            v: (awake[v], termination[v], phase_of.get(v)) for v in graph.nodes
        },
        worst_case_awake=max(awake.values()),
        average_awake=Fraction(sum(awake.values()), n),
        total_rounds=total_rounds,
        decay_histogram=decay,
        validity=verdict,
        phase2_incomplete=phase2_incomplete,
        complete=complete,
        phase_awake=phase_awake,
        phase_rounds=phase_rounds,
        phase3_classes=phase3_classes,
    )
    if not complete and cfg.phase3_enabled:
        raise RunIncomplete(
            f"pipeline hit the round cap ({cfg.round_cap}) with "
            f"{len(coloring.uncolored_nodes(graph))} uncolored nodes",
            partial=(coloring, metrics),
        )
    return coloring, metrics


def _decay_histogram(p1_outcome, k1: int) -> dict[int, int]:
    """Iteration -> number of nodes that adopted in that phase-1 iteration."""
    hist = {i: 0 for i in range(1, k1 + 1)}
    for v, rnd in p1_outcome.termination_round.items():
        hist[(rnd + 1) // 2] += 1
    return hist
