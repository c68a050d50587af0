"""Random color assignment and the two-directional layered identifier flood.

A search for a 2k-cycle floods source identifiers through color layers
0 -> 1 -> ... -> k and 0 -> 2k-1 -> ... -> k+1; a node colored k that sees
the same identifier arrive from both sides rejects and reconstructs a
witness cycle from back-pointers.  Per-step forwarding caps make the flood
a threshold search: a node asked to forward more distinct identifiers than
its cap drops out of the phase entirely (or, under the alternative mode,
forwards a deterministic capped subset).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .engine import SERIALIZED, PhaseTrace, Protocol, run_phase
from .graphs import Graph, is_cycle_in


# ----------------------------------------------------------------------
# color assignments
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ColorAssignment:
    """One outer-loop coloring: every node gets a color in {-1,0,...,2k-1}
    (the -1 only when the palette includes it)."""

    k: int
    include_minus_one: bool
    colors: tuple

    @property
    def palette_size(self) -> int:
        return 2 * self.k + (1 if self.include_minus_one else 0)

    def color(self, v: int) -> int:
        return self.colors[v]

    def with_overrides(self, overrides: dict) -> "ColorAssignment":
        colors = list(self.colors)
        for v, c in overrides.items():
            colors[v] = c
        return ColorAssignment(self.k, self.include_minus_one, tuple(colors))


def assign_colors(
    g: Graph,
    k: int,
    include_minus_one: bool = False,
    seed: int = 0,
    rng: random.Random | None = None,
) -> ColorAssignment:
    """I.i.d. uniform colors over {0..2k-1}, or {-1..2k-1} when requested."""
    if k < 2:
        raise ValueError(f"invalid-parameter: k must be >= 2, got {k}")
    if rng is None:
        rng = random.Random(seed)
    lo = -1 if include_minus_one else 0
    hi = 2 * k  # randrange excludes the upper bound
    colors = tuple(rng.randrange(lo, hi) for _ in range(g.n))
    return ColorAssignment(k=k, include_minus_one=include_minus_one, colors=colors)


def cycle_is_well_colored(colors, cycle) -> bool:
    """True when the cycle's nodes carry consecutive colors 0..len-1 in some
    rotation and direction."""
    if isinstance(colors, ColorAssignment):
        colors = colors.colors
    L = len(cycle)
    seq = [colors[v] for v in cycle]
    for r in range(L):
        if all(seq[(r + j) % L] == j for j in range(L)):
            return True
        if all(seq[(r - j) % L] == j for j in range(L)):
            return True
    return False


# ----------------------------------------------------------------------
# threshold tables
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdTable:
    """Per-step forwarding caps for a half-length-k search.

    caps maps step i (1 <= i <= 2k-1) to a positive cap; missing steps are
    unbounded.  With the symmetric flag, the cap at step i also governs step
    2k-i, mirroring the fact that nodes colored i and 2k-i act at step i.
    """

    k: int
    caps: dict
    symmetric: bool = True
    provenance: str = "derived"

    def __post_init__(self):
        for i, cap in self.caps.items():
            if not 1 <= i <= 2 * self.k - 1:
                raise ValueError(f"invalid-parameter: cap index {i} outside 1..{2 * self.k - 1}")
            if cap < 1:
                raise ValueError(f"invalid-parameter: cap at step {i} must be >= 1, got {cap}")
        if self.symmetric:
            for i, cap in self.caps.items():
                j = 2 * self.k - i
                if j in self.caps and self.caps[j] != cap:
                    raise ValueError(
                        f"invalid-parameter: symmetric table disagrees at steps {i} and {j}"
                    )

    def cap(self, i: int):
        """Cap at step i, or None when unbounded.  Step 0 is always 1 (a
        source forwards only its own identifier)."""
        if i == 0:
            return 1
        if self.symmetric and i > self.k:
            i = 2 * self.k - i
        return self.caps.get(i)

    def as_sequence(self) -> tuple:
        """(T(0), T(1), ..., T(k-1)) with None for unbounded steps."""
        return (1,) + tuple(self.caps.get(i) for i in range(1, self.k))

    @classmethod
    def uniform(cls, k: int, cap: int, provenance: str = "derived") -> "ThresholdTable":
        return cls(k=k, caps={i: cap for i in range(1, k)}, provenance=provenance)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "caps": {str(i): c for i, c in sorted(self.caps.items())},
            "symmetric": self.symmetric,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ThresholdTable":
        return cls(
            k=int(obj["k"]),
            caps={int(i): int(c) for i, c in obj["caps"].items()},
            symmetric=bool(obj.get("symmetric", True)),
            provenance=str(obj.get("provenance", "file")),
        )


# ----------------------------------------------------------------------
# the layered search protocol
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionEvent:
    node: int          # the rejecting color-k node
    ident: int         # the matched source identifier
    step: int          # delivery step at which the match fired
    witness: tuple     # validated simple cycle of length 2k


@dataclass
class PhaseOutcome:
    rejected: bool
    events: tuple = ()
    aborted_nodes: tuple = ()
    probe_received: dict = field(default_factory=dict)


class WitnessError(RuntimeError):
    """Back-pointer reconstruction produced an invalid cycle (engine bug)."""


class ColorBfsProtocol(Protocol):
    """Layered two-directional flood over a fixed coloring.

    All state is scoped to one phase.  A node forwards each distinct
    identifier at most once; its direction is determined by its color (below
    k feeds upward, above k feeds downward).  Identifier = source node id.
    """

    def __init__(
        self,
        g: Graph,
        k: int,
        colors: ColorAssignment,
        sources,
        thresholds: ThresholdTable | None = None,
        *,
        participants=None,
        source_role_override: bool = False,
        abort_mode: str = "full",
        probes=(),
    ):
        if k < 2:
            raise ValueError(f"invalid-parameter: k must be >= 2, got {k}")
        if thresholds is not None and thresholds.k != k:
            raise ValueError(
                f"invalid-parameter: threshold table is for k={thresholds.k}, search uses k={k}"
            )
        if abort_mode not in ("full", "truncate"):
            raise ValueError(f"invalid-parameter: unknown abort mode {abort_mode!r}")
        self.g = g
        self.k = k
        self.thresholds = thresholds
        self.abort_mode = abort_mode
        self.participants = frozenset(participants) if participants is not None else None
        self.sources = tuple(sorted(set(sources)))
        src_set = set(self.sources)
        eff = list(colors.colors)
        if source_role_override:
            for s in self.sources:
                eff[s] = 0
        else:
            for s in self.sources:
                if eff[s] != 0:
                    raise ValueError(
                        f"invalid-parameter: source {s} is colored {eff[s]}, not 0"
                    )
        self.eff = eff
        self.src_set = src_set
        self.probe_set = frozenset(probes)
        self.probe_received = {p: set() for p in self.probe_set}
        self.forwarded: dict[int, set] = {}
        self.pred: dict = {}
        self.aborted: set = set()
        self.detections: list[DetectionEvent] = []
        self._aborts = None

    # -- engine hooks ---------------------------------------------------

    def begin(self, g, aborts):
        self._aborts = aborts

    def initial_nodes(self):
        if self.participants is None:
            return self.sources
        return [s for s in self.sources if s in self.participants]

    def _participant(self, v: int) -> bool:
        return self.participants is None or v in self.participants

    def _tap(self, node: int, inbox) -> None:
        want = self.eff[node] - 1
        bag = self.probe_received[node]
        for src, ident in inbox:
            if self.eff[src] == want:
                bag.add(ident)

    def on_step(self, node: int, step: int, inbox):
        if node in self.probe_set and inbox:
            self._tap(node, inbox)
        k = self.k
        if step == 1:
            # source emission: own id to the two first layers
            up, down = 1, 2 * k - 1
            return [
                (w, node)
                for w in self.g.adj[node]
                if self._participant(w) and self.eff[w] in (up, down)
            ]
        if node in self.aborted:
            return []
        c = self.eff[node]
        if c == k or c <= 0:
            return []
        seen = self.forwarded.setdefault(node, set())
        fresh = {}
        for src, ident in inbox:
            if ident not in seen and ident not in fresh:
                fresh[ident] = src
            elif ident in fresh and src < fresh[ident]:
                fresh[ident] = src  # deterministic back-pointer: smallest sender
        if not fresh:
            return []
        idents = sorted(fresh)
        if self.thresholds is not None:
            cap = self.thresholds.cap(step - 1)
            if cap is not None and len(idents) > cap:
                if self.abort_mode == "full":
                    self.aborted.add(node)
                    self._aborts.note(step, node)
                    return []
                idents = idents[:cap]
                self._aborts.note(step, node)
        target_color = c + 1 if c < k else c - 1
        targets = [
            w for w in self.g.adj[node]
            if self._participant(w) and self.eff[w] == target_color
        ]
        sends = []
        for ident in idents:
            seen.add(ident)
            self.pred[(node, ident)] = fresh[ident]
            for w in targets:
                sends.append((w, ident))
        return sends

    def on_final(self, node: int, step: int, inbox):
        if node in self.probe_set and inbox:
            self._tap(node, inbox)
        k = self.k
        if self.eff[node] != k:
            return
        ups: dict[int, int] = {}
        downs: dict[int, int] = {}
        for src, ident in inbox:
            sc = self.eff[src]
            if sc == k - 1:
                if ident not in ups or src < ups[ident]:
                    ups[ident] = src
            elif sc == k + 1:
                if ident not in downs or src < downs[ident]:
                    downs[ident] = src
        for ident in sorted(set(ups) & set(downs)):
            witness = self._reconstruct(node, ident, ups[ident], downs[ident])
            self.detections.append(
                DetectionEvent(node=node, ident=ident, step=step, witness=witness)
            )

    # -- witness assembly -----------------------------------------------

    def _chain(self, ident: int, first: int) -> list:
        chain = []
        cur = first
        while cur != ident:
            chain.append(cur)
            cur = self.pred[(cur, ident)]
        return chain

    def _reconstruct(self, node: int, ident: int, up_sender: int, down_sender: int) -> tuple:
        up = self._chain(ident, up_sender)      # colors k-1 down to 1
        down = self._chain(ident, down_sender)  # colors k+1 up to 2k-1
        cycle = (ident, *reversed(up), node, *down)
        if set(up) & set(down) or not is_cycle_in(self.g, cycle, 2 * self.k):
            raise WitnessError(f"invalid witness {cycle} at node {node}")
        return cycle


def color_bfs(
    g: Graph,
    k: int,
    sources,
    colors: ColorAssignment,
    thresholds: ThresholdTable | None = None,
    *,
    engine_mode: str = SERIALIZED,
    participants=None,
    source_role_override: bool = False,
    abort_mode: str = "full",
    probes=(),
) -> tuple[PhaseOutcome, PhaseTrace]:
    """One search phase: flood, detect, reconstruct, validate.

    Runs k send steps plus the terminal delivery.  Returns the phase outcome
    (detections carry oracle-validated witnesses) and the engine trace.
    """
    proto = ColorBfsProtocol(
        g, k, colors, sources, thresholds,
        participants=participants,
        source_role_override=source_role_override,
        abort_mode=abort_mode,
        probes=probes,
    )
    trace = run_phase(g, proto, steps=k, mode=engine_mode)
    outcome = PhaseOutcome(
        rejected=bool(proto.detections),
        events=tuple(proto.detections),
        aborted_nodes=tuple(sorted(proto.aborted)),
        probe_received={p: tuple(sorted(s)) for p, s in proto.probe_received.items()},
    )
    return outcome, trace


def well_colored_path_exists(
    g: Graph,
    colors,
    s: int,
    target: int,
    i: int,
) -> bool:
    """True iff a path s, w_0, ..., w_{i-1}, target exists with w_j colored j.

    Node-distinctness is automatic: every layer carries a different color and
    s (-1) and target (i) sit outside all layers.
    """
    palette = colors.colors if isinstance(colors, ColorAssignment) else colors
    if i < 1:
        raise ValueError(f"invalid-parameter: i must be >= 1, got {i}")
    if palette[s] != -1:
        raise ValueError(f"invalid-parameter: s={s} must be colored -1, is {palette[s]}")
    if palette[target] != i:
        raise ValueError(
            f"invalid-parameter: target={target} must be colored {i}, is {palette[target]}"
        )
    frontier = {w for w in g.adj[s] if palette[w] == 0}
    for layer in range(1, i):
        frontier = {
            x
            for w in frontier
            for x in g.adj[w]
            if palette[x] == layer
        }
        if not frontier:
            return False
    return any(target in g.adj_sets[w] for w in frontier)
