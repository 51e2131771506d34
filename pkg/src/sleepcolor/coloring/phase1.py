"""Phase 1: the randomized propose/resolve list-coloring procedure.

Each iteration spans two simulator rounds.  In the propose round a node
draws 0 with probability 1/2, otherwise a uniformly random color from its
current (pruned) list, each specific color with probability 1/(2|L|), and
sends the draw to all neighbors.  In the resolve round it collects the
neighbors' draws; a node whose nonzero draw clashes with no neighbor draw
adopts it, announces the adoption, and terminates in the same round.
Adoption announcements land in the neighbors' buffers and are pruned from
their lists at the start of the next propose round, so probabilities are
always computed over the current list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import AlgorithmInvariantViolation
from ..graph import ColoringInstance, make_instance
from ..simcore import Action, Trace, run_simulation

PROPOSE = "propose"
ADOPT = "adopt"


@dataclass
class Phase1State:
    remaining: list[int]
    proposal: int = 0
    iteration: int = 1
    proposing: bool = True


class Phase1Program:
    """Node program running `iterations` propose/resolve iterations."""

    def __init__(self, iterations: int):
        if iterations < 1:
            raise ValueError("iterations must be >= 1")
        self.iterations = iterations

    def initial_state(self, ctx) -> Phase1State:
        return Phase1State(remaining=list(ctx.input))

    def on_round(self, ctx, inbox) -> Action:
        st: Phase1State = ctx.state
        if st.proposing:
            if inbox:
                taken = {color for kind, color in inbox if kind == ADOPT}
                if taken:
                    st.remaining = [c for c in st.remaining if c not in taken]
            if not st.remaining:
                raise AlgorithmInvariantViolation(
                    f"node {ctx.node_id} ran out of colors (inadmissible instance?)"
                )
            zero = ctx.rng.coin()
            idx = ctx.rng.randrange(len(st.remaining))
            st.proposal = 0 if zero else st.remaining[idx]
            st.proposing = False
            msg = (PROPOSE, st.proposal)
            return Action(sends={u: msg for u in ctx.neighbors})
        seen = {color for kind, color in inbox}
        if st.proposal != 0 and st.proposal not in seen:
            msg = (ADOPT, st.proposal)
            return Action(
                sends={u: msg for u in ctx.neighbors},
                terminate=True,
                output=st.proposal,
            )
        st.iteration += 1
        st.proposing = True
        return Action()


@dataclass
class PhaseOutcome:
    """What one pipeline phase produced, in phase-local round numbering."""

    colors: dict[int, int]                     # newly colored nodes
    residual: ColoringInstance | None          # uncolored nodes, pruned lists
    awake_rounds: dict[int, int]
    termination_round: dict[int, int]          # colored nodes only (local)
    rounds_executed: int
    extra: dict = field(default_factory=dict)


def run_phase1(
    instance: ColoringInstance,
    iterations: int,
    seed: int,
    trace: Trace | None = None,
    round_cap: int | None = None,
) -> PhaseOutcome:
    """Run phase 1 and extract the residual instance.

    Survivors' buffered adoption messages from the final resolve round are
    folded into their lists here; in a longer run they would consume them
    at their next awake round.  A `round_cap` below 2*iterations truncates
    the phase (used when the global pipeline cap is that tight).
    """
    cap = 2 * iterations if round_cap is None else min(2 * iterations, round_cap)
    result = run_simulation(
        instance.graph,
        Phase1Program(iterations),
        inputs=instance.lists,
        seed=seed,
        round_cap=max(1, cap),
        trace=trace,
        on_incomplete="return",
    )
    colors = dict(result.outputs)
    uncolored = sorted(result.final_states)
    residual = None
    if uncolored:
        lists = {}
        for v in uncolored:
            st: Phase1State = result.final_states[v]
            taken = {color for kind, color in result.pending_inbox[v] if kind == ADOPT}
            lists[v] = tuple(c for c in st.remaining if c not in taken)
        residual = make_instance(instance.graph.induced(uncolored), lists)
    return PhaseOutcome(
        colors=colors,
        residual=residual,
        awake_rounds=result.awake_rounds,
        termination_round={
            v: r for v, r in result.termination_round.items() if r is not None
        },
        rounds_executed=result.rounds_executed,
    )
