"""Top-level freeness deciders.

All of them share one stage shape: an outer loop of fresh colorings; per
coloring a light-cycle flood restricted to the light-induced subgraph, then
an inner loop of uniformly sampled start nodes s where an s colored -1
first searches for a cycle through itself and then launches the capped
flood from its heavy neighbors.  Rejections always carry an
oracle-validated witness, so every decider has one-sided error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .coloring import ColorAssignment, ThresholdTable, assign_colors, color_bfs
from .graphs import Graph, classify_nodes
from .util import derive_seed

# Caps for deciding C_6/C_8/C_10-freeness on their own come from earlier
# work and are not derivable here; these stand-ins keep the CLI usable and
# MUST be overridden for any claim-bearing run.
EXTERNAL_DEFAULT_TABLES = {
    3: ThresholdTable(3, {1: 8, 2: 8}, provenance="external-placeholder"),
    4: ThresholdTable(4, {1: 8, 2: 8, 3: 8}, provenance="external-placeholder"),
    5: ThresholdTable(5, {1: 8, 2: 8, 3: 8, 4: 8}, provenance="external-placeholder"),
}


def c12_c14_thresholds() -> ThresholdTable:
    """The length-14 stage caps, built step by step from the per-step growth
    factors (60, 10, 10, 5, 5, 6)."""
    factors = {1: 60, 2: 10, 3: 10, 4: 5, 5: 5, 6: 6}
    caps = {}
    prev = 1
    for i in range(1, 7):
        prev = factors[i] * prev
        caps[i] = prev
    return ThresholdTable(k=7, caps=caps)


def c12_stage_thresholds() -> ThresholdTable:
    """Caps of 1 at every step for the length-12 stage, valid only once the
    length-14 stage has accepted."""
    return ThresholdTable.uniform(6, 1)


def c10_c12_stage2_thresholds(t5: ThresholdTable) -> ThresholdTable:
    """Length-12 stage caps derived from a supplied length-10 table: steps
    1..4 copy T5, step 5 repeats step 4."""
    if t5.k != 5:
        raise ValueError(f"invalid-parameter: expected a k=5 table, got k={t5.k}")
    caps = {}
    for i in range(1, 5):
        cap = t5.cap(i)
        if cap is None:
            raise ValueError(f"invalid-parameter: supplied table leaves step {i} unbounded")
        caps[i] = cap
    caps[5] = caps[4]
    return ThresholdTable(k=6, caps=caps, provenance=t5.provenance)


def incremental_thresholds(level: int, variant: str) -> ThresholdTable:
    """Recursive cap tables for the cascaded families.

    variant "4l": stage `level` decides length 4*level (half-length 2*level);
    caps repeat at odd steps and grow by (i+1) at even steps.  variant
    "4l+2": length 4*level+2 (half-length 2*level+1) with the parities
    swapped.  T(0)=1 in both.
    """
    if level < 1:
        raise ValueError(f"invalid-parameter: level must be >= 1, got {level}")
    if variant == "4l":
        half = 2 * level
        grow_on_even = True
    elif variant == "4l+2":
        half = 2 * level + 1
        grow_on_even = False
    else:
        raise ValueError(f"invalid-parameter: unknown variant {variant!r}")
    seq = [1]
    for i in range(1, half):
        grows = (i % 2 == 0) if grow_on_even else (i % 2 == 1)
        seq.append((i + 1) * seq[i - 1] if grows else seq[i - 1])
    return ThresholdTable(k=half, caps={i: seq[i] for i in range(1, half)})


def family_lengths(variant: str, level_max: int) -> list:
    if variant == "4l":
        return [4 * level for level in range(1, level_max + 1)]
    if variant == "4l+2":
        return [4 * level + 2 for level in range(1, level_max + 1)]
    raise ValueError(f"invalid-parameter: unknown variant {variant!r}")


# ----------------------------------------------------------------------
# run configuration and verdicts
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ForcedColoring:
    """Test/experiment hook: pin one cycle to its canonical colors and a set
    of start candidates to -1, randomizing everything else.

    Applies only to stages whose half-length matches `k` (other stages keep
    fully random colors).  Non-algorithmic; runs using it are flagged.
    """

    k: int
    assignments: dict
    minus_one: tuple = ()

    @classmethod
    def for_cycle(cls, cycle, sources=()) -> "ForcedColoring":
        if len(cycle) % 2 != 0:
            raise ValueError("invalid-parameter: forced cycle must have even length")
        return cls(
            k=len(cycle) // 2,
            assignments={v: j for j, v in enumerate(cycle)},
            minus_one=tuple(sources),
        )

    def apply(self, ca: ColorAssignment) -> ColorAssignment:
        overrides = dict(self.assignments)
        overrides.update({s: -1 for s in self.minus_one})
        return ca.with_overrides(overrides)


@dataclass(frozen=True)
class RunConfig:
    """Knobs for one decider run.

    source_repetitions defaults to ceil(c1 * n^(1-1/k)); color_repetitions to
    c2 * (2k)^(2k) clipped at color_ceiling (the exact count is astronomically
    large for big k, so desk-scale runs set it explicitly).
    """

    seed: int = 0
    source_repetitions: int | None = None
    color_repetitions: int | None = None
    c1: float = 1.0
    c2: float = 1.0
    color_ceiling: int = 100_000
    loop_order: str = "colors-outer"   # or "sources-outer"
    abort_mode: str = "full"
    forced: ForcedColoring | None = None

    def resolved_source_reps(self, n: int, k: int) -> int:
        if self.source_repetitions is not None:
            return max(1, self.source_repetitions)
        return max(1, math.ceil(self.c1 * (n ** (1.0 - 1.0 / k))))

    def resolved_color_reps(self, k: int) -> int:
        if self.color_repetitions is not None:
            return max(1, self.color_repetitions)
        exact = self.c2 * float((2 * k) ** (2 * k))
        return max(1, min(self.color_ceiling, int(exact)))


@dataclass
class RunStats:
    colorings: int = 0
    source_draws: int = 0
    phases: int = 0
    aborts: int = 0
    rounds: int = 0

    def absorb(self, outcome, trace) -> None:
        self.phases += 1
        self.aborts += len(outcome.aborted_nodes)
        self.rounds += trace.total_rounds

    def to_json(self) -> dict:
        return {
            "colorings": self.colorings,
            "source_draws": self.source_draws,
            "phases": self.phases,
            "aborts": self.aborts,
            "rounds": self.rounds,
        }


FREE = "free"
CYCLE_FOUND = "cycle-found"


@dataclass
class Verdict:
    outcome: str
    witness: tuple | None
    stats: RunStats
    detail: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.outcome == CYCLE_FOUND

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness": list(self.witness) if self.witness else None,
            "stats": self.stats.to_json(),
            "detail": self.detail,
        }


# ----------------------------------------------------------------------
# the shared stage machinery
# ----------------------------------------------------------------------

def _first_witness(outcome):
    return outcome.events[0].witness if outcome.events else None


class _Stage:
    def __init__(self, g: Graph, k: int, nodecls, thresholds, cfg: RunConfig, tag: str, stats: RunStats):
        self.g = g
        self.k = k
        self.cls = nodecls
        self.thresholds = thresholds
        self.cfg = cfg
        self.tag = tag
        self.stats = stats
        self.light_set = frozenset(nodecls.light_nodes())
        self.src_rng = random.Random(derive_seed(cfg.seed, tag, "sources"))

    def _coloring(self, index: int) -> ColorAssignment:
        ca = assign_colors(
            self.g, self.k, include_minus_one=True,
            seed=derive_seed(self.cfg.seed, self.tag, "colors", index),
        )
        forced = self.cfg.forced
        if forced is not None and forced.k == self.k:
            ca = forced.apply(ca)
        self.stats.colorings += 1
        return ca

    def _light_phase(self, ca: ColorAssignment):
        sources = [v for v in self.light_set if ca.colors[v] == 0]
        if not sources:
            return None
        outcome, trace = color_bfs(
            self.g, self.k, sorted(sources), ca, None,
            participants=self.light_set, abort_mode=self.cfg.abort_mode,
        )
        self.stats.absorb(outcome, trace)
        return _first_witness(outcome)

    def _source_round(self, ca: ColorAssignment):
        s = self.src_rng.randrange(self.g.n)
        self.stats.source_draws += 1
        if ca.colors[s] != -1:
            return None
        outcome, trace = color_bfs(
            self.g, self.k, [s], ca, None,
            source_role_override=True, abort_mode=self.cfg.abort_mode,
        )
        self.stats.absorb(outcome, trace)
        if outcome.rejected:
            return _first_witness(outcome)
        heavy_w = [
            w for w in self.g.adj[s]
            if self.cls.is_heavy(w) and ca.colors[w] == 0
        ]
        if heavy_w:
            outcome, trace = color_bfs(
                self.g, self.k, heavy_w, ca, self.thresholds,
                abort_mode=self.cfg.abort_mode,
            )
            self.stats.absorb(outcome, trace)
            if outcome.rejected:
                return _first_witness(outcome)
        return None

    def run(self):
        creps = self.cfg.resolved_color_reps(self.k)
        sreps = self.cfg.resolved_source_reps(self.g.n, self.k)
        if self.cfg.loop_order == "colors-outer":
            for ci in range(creps):
                ca = self._coloring(ci)
                witness = self._light_phase(ca)
                if witness:
                    return witness
                for _ in range(sreps):
                    witness = self._source_round(ca)
                    if witness:
                        return witness
            return None
        if self.cfg.loop_order != "sources-outer":
            raise ValueError(f"invalid-parameter: unknown loop order {self.cfg.loop_order!r}")
        # original ordering: the light sweep up front, then per start node a
        # fresh run of colorings
        for ci in range(creps):
            witness = self._light_phase(self._coloring(ci))
            if witness:
                return witness
        counter = creps
        for _ in range(sreps):
            for _ in range(creps):
                ca = self._coloring(counter)
                counter += 1
                witness = self._source_round(ca)
                if witness:
                    return witness
        return None


def _run_stage(g, k, nodecls, thresholds, cfg, tag, stats):
    return _Stage(g, k, nodecls, thresholds, cfg, tag, stats).run()


# ----------------------------------------------------------------------
# public deciders
# ----------------------------------------------------------------------

def decide_c2k_freeness(g: Graph, k: int, cfg: RunConfig, thresholds: ThresholdTable) -> Verdict:
    """Decide whether g contains a cycle of length exactly 2k."""
    if k < 2:
        raise ValueError(f"invalid-parameter: k must be >= 2, got {k}")
    if thresholds is None:
        raise ValueError("invalid-parameter: a threshold table is required")
    if thresholds.k != k:
        raise ValueError(
            f"invalid-parameter: threshold table is for k={thresholds.k}, detector needs k={k}"
        )
    stats = RunStats()
    nodecls = classify_nodes(g, k)
    witness = _run_stage(g, k, nodecls, thresholds, cfg, f"c{2 * k}", stats)
    if witness:
        return Verdict(CYCLE_FOUND, witness, stats, {"length": 2 * k})
    return Verdict(FREE, None, stats, {"lengths_checked": [2 * k]})


def decide_c12_c14_freeness(g: Graph, cfg: RunConfig) -> Verdict:
    """Decide {12,14}-freeness: the length-14 pass runs with the fixed cap
    table, then the length-12 pass runs with caps of 1, which is only sound
    because the first pass vouched for the absence of 14-cycles.  Both passes
    use the n^(1/7) light threshold."""
    stats = RunStats()
    cls7 = classify_nodes(g, 7)
    witness = _run_stage(g, 7, cls7, c12_c14_thresholds(), cfg, "pair14", stats)
    if witness:
        return Verdict(CYCLE_FOUND, witness, stats, {"length": len(witness), "stage": "c14"})
    witness = _run_stage(g, 6, cls7, c12_stage_thresholds(), cfg, "pair12", stats)
    if witness:
        return Verdict(CYCLE_FOUND, witness, stats, {"length": len(witness), "stage": "c12"})
    return Verdict(FREE, None, stats, {"lengths_checked": [12, 14]})


def decide_c10_c12_freeness(g: Graph, cfg: RunConfig, t5_table: ThresholdTable) -> Verdict:
    """Decide {10,12}-freeness: first length 10 with the supplied caps, then
    length 12 with caps copied from them (step 5 repeating step 4)."""
    if t5_table is None:
        raise ValueError("invalid-parameter: a T5 threshold table must be supplied")
    stats = RunStats()
    cls5 = classify_nodes(g, 5)
    witness = _run_stage(g, 5, cls5, t5_table, cfg, "pair10", stats)
    if witness:
        return Verdict(CYCLE_FOUND, witness, stats, {"length": len(witness), "stage": "c10"})
    cls6 = classify_nodes(g, 6)
    witness = _run_stage(
        g, 6, cls6, c10_c12_stage2_thresholds(t5_table), cfg, "pair12b", stats
    )
    if witness:
        return Verdict(CYCLE_FOUND, witness, stats, {"length": len(witness), "stage": "c12"})
    return Verdict(FREE, None, stats, {"lengths_checked": [10, 12]})


def decide_family_freeness(g: Graph, variant: str, level_max: int, cfg: RunConfig) -> Verdict:
    """Cascade over the family: stage `level` decides one member length with
    its recursive cap table, assuming every earlier stage accepted."""
    if level_max < 1:
        raise ValueError(f"invalid-parameter: level_max must be >= 1, got {level_max}")
    stats = RunStats()
    checked = []
    for level in range(1, level_max + 1):
        table = incremental_thresholds(level, variant)
        k = table.k
        nodecls = classify_nodes(g, k)
        stage_cfg = replace(cfg, seed=derive_seed(cfg.seed, "family", variant, level))
        witness = _run_stage(g, k, nodecls, table, stage_cfg, f"fam{2 * k}", stats)
        if witness:
            return Verdict(
                CYCLE_FOUND, witness, stats,
                {"length": 2 * k, "stage_level": level, "variant": variant},
            )
        checked.append(2 * k)
    return Verdict(FREE, None, stats, {"lengths_checked": checked, "variant": variant})
