"""One synchronous rewrite step and long-horizon evolution.

A step, applied to the whole graph at once:

1. configuration of every vertex from the OLD states,
2. new states from the rule's next-state table,
3. division flags from the rule's division table (same configurations),
4. every flagged vertex divides; clones inherit the post-update state.

The division surgery runs over the flat neighbor table in O(order); the
dense-matrix reference in :mod:`gra.dense` is the semantic authority and
differential tests keep the two in lock step.
"""

import time as _time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .analysis import (
    STOP_CYCLE,
    STOP_MAX_ORDER,
    STOP_MAX_STEPS,
    STOP_WALL_CLOCK,
    EvolutionTrace,
    minimal_period,
)
from .errors import EngineInvariantError, IndexOutOfRangeError, LengthMismatchError
from .graph import Graph, state_fingerprint
from .rules import Rule

# a constant-order window longer than this restarts the cycle search
CYCLE_WINDOW_CAP = 100_000


@dataclass(frozen=True)
class StepOutcome:
    graph: Graph
    divisions_performed: int
    order_increment: int


@dataclass(frozen=True)
class Budget:
    """Stop conditions for evolve; the first limit reached wins.

    wall_clock is in seconds and checked cooperatively before each step;
    None disables it (required for bit-reproducible runs).
    """

    max_steps: int
    max_order: int = 5_000_000
    wall_clock: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "max_steps": self.max_steps,
            "max_order": self.max_order,
            "wall_clock": self.wall_clock,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Budget":
        return cls(**d)


def step(g: Graph, rule: Rule, backend: Optional[_kernels.Backend] = None) -> StepOutcome:
    """Apply one synchronous step of the rule to the whole graph."""
    be = backend if backend is not None else _kernels.ACTIVE
    new_states, div, n_div = be.step_tables(
        g.neighbors, g.states, rule.next_state, rule.divides
    )
    n_div = int(n_div)
    if n_div:
        nb2, st2 = be.divide_all(g.neighbors, new_states, div, n_div)
    else:
        # no topology change: share the immutable neighbor table
        nb2, st2 = g.neighbors, new_states
    out = Graph._wrap(nb2, st2, g.time + 1)
    inc = out.order - g.order
    if inc != 2 * n_div:
        raise EngineInvariantError(
            f"order changed by {inc} for {n_div} divisions"
        )
    return StepOutcome(graph=out, divisions_performed=n_div, order_increment=inc)


def divide_vertex(g: Graph, v: int, backend: Optional[_kernels.Backend] = None) -> Graph:
    """Divide a single vertex: replace it by a triangle of three clones on
    consecutive indices, each inheriting one former neighbor (ascending
    neighbor index to ascending clone index) and the current state of v.

    This is a surgical operation; the step counter does not advance.
    """
    if not 0 <= v < g.order:
        raise IndexOutOfRangeError(f"vertex {v} out of range for order {g.order}")
    d = np.zeros(g.order, dtype=np.uint8)
    d[v] = 1
    return apply_divisions(g, d, backend=backend)


def apply_divisions(
    g: Graph, d, backend: Optional[_kernels.Backend] = None
) -> Graph:
    """Perform every division flagged in d, lowest index first.

    Equivalent to repeatedly locating the first 1 in d, dividing there
    (which shifts later indices up by two and replaces the handled entry by
    three zeros, so clones never divide in the same pass) until d is null.
    """
    d = np.asarray(d, dtype=np.uint8)
    if d.shape != (g.order,):
        raise LengthMismatchError(
            f"division vector length {d.shape} does not match order {g.order}"
        )
    n_div = int(d.sum())
    if n_div == 0:
        return g
    be = backend if backend is not None else _kernels.ACTIVE
    nb2, st2 = be.divide_all(g.neighbors, g.states.copy(), d, n_div)
    out = Graph._wrap(nb2, st2, g.time)
    if out.order != g.order + 2 * n_div:
        raise EngineInvariantError("division surgery produced a wrong order")
    return out


def _advance_states(g: Graph, rule: Rule, k: int, backend) -> np.ndarray:
    """States k steps ahead of g, asserting the topology stays frozen."""
    cur = g
    for _ in range(k):
        out = step(cur, rule, backend=backend)
        if out.divisions_performed:
            raise EngineInvariantError("division inside a confirmed cycle window")
        cur = out.graph
    return cur.states


def evolve(
    g0: Graph,
    rule: Rule,
    budget: Budget,
    backend: Optional[_kernels.Backend] = None,
) -> EvolutionTrace:
    """Run the rule from g0 until a budget limit hits or a cycle is confirmed.

    Cycle search: state fingerprints are mapped to steps within the current
    constant-order window (any division restarts the window, since the
    order never decreases a cycle must have frozen topology).  A digest
    match only nominates a candidate period; it is confirmed by evolving
    that many further steps and comparing exact state vectors, then reduced
    to the minimal period.  Budget exhaustion is a normal outcome recorded
    in the trace.
    """
    g = g0
    orders = [g.order]
    increments: list[int] = []
    digest = state_fingerprint(g)
    window: list[str] = [digest]
    seen: dict[str, int] = {digest: 0}
    pending: Optional[tuple[int, int, bytes]] = None  # (due step, period, states)
    cycle_period: Optional[int] = None
    stop = None
    deadline = None
    if budget.wall_clock is not None:
        deadline = _time.monotonic() + budget.wall_clock

    t = 0
    while True:
        if t >= budget.max_steps:
            stop = STOP_MAX_STEPS
            break
        if deadline is not None and _time.monotonic() >= deadline:
            stop = STOP_WALL_CLOCK
            break
        out = step(g, rule, backend=backend)
        g = out.graph
        t += 1
        orders.append(g.order)
        increments.append(out.order_increment)

        if out.divisions_performed:
            seen.clear()
            window.clear()
            pending = None
        digest = state_fingerprint(g)
        window.append(digest)

        if g.order > budget.max_order:
            stop = STOP_MAX_ORDER
            break
        if out.divisions_performed:
            seen[digest] = t
            continue

        if pending is not None:
            due, p, snap = pending
            if t == due:
                if g.states.tobytes() == snap:
                    cycle_period = minimal_period(
                        g.states,
                        lambda s0, k, _g=g, _r=rule: _advance_states(_g, _r, k, backend),
                        p,
                    )
                    stop = STOP_CYCLE
                    break
                pending = None  # digest collision, keep scanning
        if pending is None and digest in seen:
            p = t - seen[digest]
            pending = (t + p, p, g.states.tobytes())
        if digest not in seen:
            seen[digest] = t
        if len(seen) > CYCLE_WINDOW_CAP:
            seen.clear()
            window.clear()
            window.append(digest)
            seen[digest] = t
            pending = None

    return EvolutionTrace(
        orders=np.asarray(orders, dtype=np.int64),
        increments=np.asarray(increments, dtype=np.int64),
        fingerprints=window,
        stop_reason=stop,
        cycle_period=cycle_period,
        final_graph=g,
    )
