"""Deterministic synchronous round engine with sleeping semantics.

Round structure (round t, starting at t=1):

  1. nodes whose scheduled wake round is t become awake;
  2. every awake node's program runs once, seeing the messages that were
     *sent to it in round t-1 while it was awake*; the returned action
     bundles the messages to transmit in round t with an optional status
     change (sleep / terminate);
  3. all round-t messages are routed: a message reaches its receiver's
     buffer iff the receiver is awake in round t (the sender is awake by
     construction, since only awake nodes run);
  4. status changes take effect for round t+1 onward.

A message received in round t is consumed by the receiver's next program
call, i.e. in round t+1 if it stays awake.  Messages sent to sleeping or
terminated nodes are dropped without trace to the algorithm.  Programs can
only read their own state, their own random stream, and their inbox, so
the iteration order within a round cannot influence results.

Each awake, not-yet-terminated node pays exactly one awake round per round
it is awake, including its terminating round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Any, Callable, Mapping

from .errors import ProgramError, RunIncomplete
from .graph import Graph
from .rng import NodeRng

AWAKE = "awake"
SLEEPING = "sleeping"
TERMINATED = "terminated"


def deliverable(sender_status: str, receiver_status: str) -> bool:
    """Two nodes can exchange a message in a round only if both are awake."""
    return sender_status == AWAKE and receiver_status == AWAKE


def default_round_cap(n: int) -> int:
    """A cap comfortably above the pipeline's polylog round bound."""
    if n < 2:
        return 100
    return int(10 * math.log2(n) ** 14) + 100


@dataclass(frozen=True)
class Action:
    """What a node does with its current round.

    `sends` maps neighbor id -> payload and is transmitted this round.
    Exactly one of the control outcomes applies: terminate (with output),
    sleep for `sleep_rounds` >= 1, or continue awake.
    """

    sends: Mapping[int, Any] | None = None
    sleep_rounds: int = 0
    terminate: bool = False
    output: Any = None

    def __post_init__(self):
        if self.terminate and self.sleep_rounds:
            raise ProgramError("an action cannot both sleep and terminate")
        if self.sleep_rounds < 0:
            raise ProgramError("sleep_rounds must be >= 1 when sleeping")


CONTINUE = Action()


@dataclass
class NodeContext:
    """Per-node view handed to programs: identity, topology, stream, state."""

    node_id: int
    neighbors: tuple[int, ...]
    rng: NodeRng
    input: Any
    globals: Mapping[str, Any]
    state: Any = None
    round: int = 0


class Trace:
    """Structured event log with the line-oriented text rendering.

    Node lines:    t=<round> v=<id> status=A act=<send|sleep:r|term|cont>
    Message lines: msg t=<round> <u>-><v> delivered=<0|1>
    """

    def __init__(self, round_offset: int = 0):
        self.round_offset = round_offset
        self.node_events: list[tuple[int, int, str]] = []    # (round, node, act)
        self.msg_events: list[tuple[int, int, int, bool]] = []

    def node(self, rnd: int, v: int, act: str) -> None:
        self.node_events.append((rnd + self.round_offset, v, act))

    def message(self, rnd: int, u: int, v: int, delivered: bool) -> None:
        self.msg_events.append((rnd + self.round_offset, u, v, delivered))

    def render(self) -> str:
        lines = []
        by_round: dict[int, list[str]] = {}
        for rnd, v, act in self.node_events:
            by_round.setdefault(rnd, []).append(f"t={rnd} v={v} status=A act={act}")
        for rnd, u, v, ok in self.msg_events:
            by_round.setdefault(rnd, []).append(
                f"msg t={rnd} {u}->{v} delivered={1 if ok else 0}"
            )
        for rnd in sorted(by_round):
            lines.extend(by_round[rnd])
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class SimulationResult:
    """Everything observable after a run (complete or capped)."""

    outputs: dict[int, Any]                  # terminated node -> output
    awake_rounds: dict[int, int]
    termination_round: dict[int, int | None]
    final_states: dict[int, Any]             # survivors' algorithm state
    pending_inbox: dict[int, list[Any]]      # survivors' unconsumed buffers
    rounds_executed: int
    complete: bool

    def survivors(self) -> list[int]:
        return sorted(self.final_states)


def run_simulation(
    graph: Graph,
    program,
    inputs: Mapping[int, Any] | None,
    seed: int,
    round_cap: int,
    global_inputs: Mapping[str, Any] | None = None,
    trace: Trace | None = None,
    call_order: Callable[[int, list[int]], list[int]] | None = None,
    on_incomplete: str = "raise",
) -> SimulationResult:
    """Run `program` on every node of `graph` until all terminate or the cap.

    All nodes start awake at round 1.  Identical (graph, program, inputs,
    seed) produce identical results and traces.  `call_order` is a test
    hook permuting the within-round iteration order; it must not change
    any output.  With on_incomplete="raise" a capped run raises
    RunIncomplete carrying the partial SimulationResult.
    """
    if round_cap < 1:
        raise ProgramError("round_cap must be >= 1")
    gi = dict(global_inputs or {})
    gi.setdefault("n", graph.node_count)
    gi.setdefault("max_degree", graph.max_degree)
    gi.setdefault("id_bit_size", graph.id_bit_size)

    nodes = graph.nodes
    adjacency = graph.adjacency
    nbr_sets = {v: frozenset(adjacency[v]) for v in nodes}
    ctxs: dict[int, NodeContext] = {}
    for v in nodes:
        ctx = NodeContext(
            node_id=v,
            neighbors=adjacency[v],
            rng=NodeRng(seed, v),
            input=None if inputs is None else inputs.get(v),
            globals=gi,
        )
        ctx.state = program.initial_state(ctx)
        ctxs[v] = ctx

    status = {v: AWAKE for v in nodes}
    awake: set[int] = set(nodes)
    wake_heap: list[tuple[int, int]] = []
    buffers: dict[int, list[Any]] = {v: [] for v in nodes}
    awake_rounds = {v: 0 for v in nodes}
    termination_round: dict[int, int | None] = {v: None for v in nodes}
    outputs: dict[int, Any] = {}
    alive = graph.node_count

    rnd = 0
    while alive > 0:
        if awake:
            nxt = rnd + 1
        elif wake_heap:
            nxt = wake_heap[0][0]        # fast-forward over silent rounds
        else:
            break                        # quiescent: survivors sleep forever
        if nxt > round_cap:
            rnd = round_cap
            break
        rnd = nxt

        while wake_heap and wake_heap[0][0] == rnd:
            _, v = heappop(wake_heap)
            status[v] = AWAKE
            awake.add(v)

        active = sorted(awake)
        if call_order is not None:
            active = list(call_order(rnd, active))

        actions: dict[int, Action] = {}
        for v in active:
            awake_rounds[v] += 1
            ctx = ctxs[v]
            ctx.round = rnd
            inbox = buffers[v]
            buffers[v] = []
            actions[v] = program.on_round(ctx, inbox)

        # route round-t messages against the round-t awake set
        for v in sorted(actions):
            act = actions[v]
            if not act.sends:
                continue
            nbrs = nbr_sets[v]
            for u in sorted(act.sends):
                if u not in nbrs:
                    raise ProgramError(f"node {v} sent to non-neighbor {u}")
                ok = u in awake
                if ok:
                    buffers[u].append(act.sends[u])
                if trace is not None:
                    trace.message(rnd, v, u, ok)

        for v in sorted(actions):
            act = actions[v]
            if act.terminate:
                status[v] = TERMINATED
                awake.discard(v)
                termination_round[v] = rnd
                outputs[v] = act.output
                alive -= 1
                tok = "term"
            elif act.sleep_rounds:
                status[v] = SLEEPING
                awake.discard(v)
                heappush(wake_heap, (rnd + act.sleep_rounds + 1, v))
                tok = f"sleep:{act.sleep_rounds}"
            else:
                tok = "send" if act.sends else "cont"
            if trace is not None:
                trace.node(rnd, v, tok)

    complete = alive == 0
    result = SimulationResult(
        outputs=outputs,
        awake_rounds=awake_rounds,
        termination_round=termination_round,
        final_states={v: ctxs[v].state for v in nodes if status[v] != TERMINATED},
        pending_inbox={v: buffers[v] for v in nodes if status[v] != TERMINATED},
        rounds_executed=rnd,
        complete=complete,
    )
    if not complete and on_incomplete == "raise":
        raise RunIncomplete(
            f"round cap {round_cap} reached with {alive} non-terminated nodes",
            partial=result,
        )
    return result
