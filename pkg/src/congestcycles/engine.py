"""Round-synchronous message-passing engine with congestion accounting.

One identifier is one message: a node that must forward m distinct
identifiers in a step pays m rounds under the serialized cost model (the
worst node sets the step's price), or 1 round under the unit-step model.
Messages sent at step t are delivered at step t+1; nothing crosses a
non-edge (that is a protocol bug, and the engine faults on it).
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph

UNIT_STEP = "unit-step"
SERIALIZED = "serialized-congestion"


class ProtocolFault(RuntimeError):
    """A protocol emitted a message on a non-incident edge."""


@dataclass(frozen=True)
class StepRecord:
    step: int
    max_forwarded: int        # max over nodes of distinct identifiers sent
    aborted: tuple            # nodes that gave up at this step
    rounds: int               # rounds charged for this step (>= 1)


@dataclass(frozen=True)
class PhaseTrace:
    mode: str
    steps: tuple
    total_rounds: int

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "total_rounds": self.total_rounds,
            "steps": [
                {
                    "step": r.step,
                    "max_forwarded": r.max_forwarded,
                    "aborted": list(r.aborted),
                    "rounds": r.rounds,
                }
                for r in self.steps
            ],
        }


class AbortLog:
    """Hands protocols a place to report per-step abort events."""

    def __init__(self):
        self.by_step: dict[int, set] = {}

    def note(self, step: int, node: int) -> None:
        self.by_step.setdefault(step, set()).add(node)


class Protocol:
    """Deterministic per-node behavior driven by the engine.

    `initial_nodes` are invoked at step 1 with an empty inbox; afterwards a
    node runs exactly when it has mail.  `on_step` returns the outbox as
    (neighbor, identifier) pairs.  After the last send step the engine flushes
    undelivered messages through `on_final` (delivery only, no sends, no round
    charge) so terminal recipients can react.
    """

    def begin(self, g: Graph, aborts: AbortLog) -> None:  # pragma: no cover - default hook
        pass

    def initial_nodes(self):
        return ()

    def on_step(self, node: int, step: int, inbox) -> list:
        raise NotImplementedError

    def on_final(self, node: int, step: int, inbox) -> None:  # pragma: no cover - default hook
        pass


def run_phase(g: Graph, protocol: Protocol, steps: int, mode: str = SERIALIZED) -> PhaseTrace:
    """Execute `steps` synchronous send steps plus a final delivery flush."""
    if mode not in (UNIT_STEP, SERIALIZED):
        raise ValueError(f"invalid-parameter: unknown cost mode {mode!r}")
    aborts = AbortLog()
    protocol.begin(g, aborts)
    adj_sets = g.adj_sets
    inbox: dict[int, list] = {}
    records = []
    for t in range(1, steps + 1):
        if t == 1:
            active = sorted(set(protocol.initial_nodes()))
        else:
            active = sorted(inbox)
        nxt: dict[int, list] = {}
        max_fwd = 0
        for node in active:
            sends = protocol.on_step(node, t, inbox.get(node, ()))
            if not sends:
                continue
            idents = set()
            for dst, ident in sends:
                if dst not in adj_sets[node]:
                    raise ProtocolFault(
                        f"step {t}: node {node} sent to non-neighbor {dst}"
                    )
                nxt.setdefault(dst, []).append((node, ident))
                idents.add(ident)
            if len(idents) > max_fwd:
                max_fwd = len(idents)
        rounds = 1 if mode == UNIT_STEP else max(1, max_fwd)
        records.append(
            StepRecord(
                step=t,
                max_forwarded=max_fwd,
                aborted=tuple(sorted(aborts.by_step.get(t, ()))),
                rounds=rounds,
            )
        )
        inbox = nxt
    for node in sorted(inbox):
        protocol.on_final(node, steps + 1, inbox[node])
    return PhaseTrace(mode=mode, steps=tuple(records), total_rounds=sum(r.rounds for r in records))


def rounds_upper_bound(k: int, w_size: int, max_degree: int) -> int:
    """Ceiling min(k*|W|, Delta^(k-1)) on the serialized cost of an
    uncapped search phase launched from w_size sources."""
    if k <= 0 or w_size <= 0 or max_degree <= 0:
        raise ValueError("invalid-parameter: all arguments must be positive")
    return min(k * w_size, max_degree ** (k - 1))
