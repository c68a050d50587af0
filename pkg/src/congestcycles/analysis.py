"""Instrumentation that makes the correctness arguments computable: exact
maximum packings of internally-disjoint well-colored paths (unit-capacity
max flow on the color-layered graph), the bad-neighbor sets and their
bounds, and seeded congestion experiments whose identifier counts follow a
Binomial law.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .adversarial import GkInstance
from .coloring import ColorAssignment, color_bfs
from .graphs import Graph, classify_nodes, node_in_cycle_of_length
from .util import SCHEMA_VERSION, derive_seed


class AnalysisInvariantError(AssertionError):
    """A bound that must hold on precondition-satisfying instances failed."""


# ----------------------------------------------------------------------
# disjoint well-colored paths via unit-capacity max flow
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PathPackingResult:
    rho: int
    paths: tuple   # each path includes both endpoints: (s, w_0, ..., target)


def _colors_of(colors):
    return colors.colors if isinstance(colors, ColorAssignment) else colors


def _check_endpoints(palette, s, target, i):
    if i < 1:
        raise ValueError(f"invalid-parameter: i must be >= 1, got {i}")
    if palette[s] != -1:
        raise ValueError(f"invalid-parameter: s={s} must be colored -1, is {palette[s]}")
    if palette[target] != i:
        raise ValueError(
            f"invalid-parameter: target={target} must be colored {i}, is {palette[target]}"
        )


def max_disjoint_wellcolored_paths(
    g: Graph, colors, s: int, target: int, i: int
) -> PathPackingResult:
    """Exact maximum number of internally node-disjoint paths
    s, w_0, ..., w_{i-1}, target with w_j colored j, plus one witness family.

    Layer nodes get unit vertex capacity by the usual in/out split; s and
    target stay uncapacitated.  Augmenting-path max flow is exact on unit
    capacities, and a flow decomposition yields the witness paths.
    """
    palette = _colors_of(colors)
    _check_endpoints(palette, s, target, i)

    # arcs over split nodes: ('s',), ('t',), ('in', v), ('out', v)
    S, T = ("s",), ("t",)
    cap: dict = {}

    def add(a, b):
        cap.setdefault(a, {})[b] = cap.get(a, {}).get(b, 0) + 1
        cap.setdefault(b, {}).setdefault(a, 0)

    layer_nodes = [[] for _ in range(i)]
    for v in range(g.n):
        c = palette[v]
        if 0 <= c < i and v != s and v != target:
            layer_nodes[c].append(v)
            key_in, key_out = ("in", v), ("out", v)
            cap.setdefault(key_in, {})[key_out] = 1
            cap.setdefault(key_out, {}).setdefault(key_in, 0)
    for v in layer_nodes[0]:
        if v in g.adj_sets[s]:
            add(S, ("in", v))
    for layer in range(i - 1):
        for v in layer_nodes[layer]:
            for w in g.adj[v]:
                if palette[w] == layer + 1 and w != s and w != target:
                    add(("out", v), ("in", w))
    for v in layer_nodes[i - 1]:
        if target in g.adj_sets[v]:
            add(("out", v), T)
    cap.setdefault(S, {})
    cap.setdefault(T, {})

    flow: dict = {a: {b: 0 for b in nbrs} for a, nbrs in cap.items()}
    while True:
        # BFS for an augmenting path in the residual graph
        parent = {S: None}
        queue = [S]
        while queue and T not in parent:
            a = queue.pop(0)
            for b, c in cap[a].items():
                if b not in parent and c - flow[a][b] > 0:
                    parent[b] = a
                    queue.append(b)
        if T not in parent:
            break
        b = T
        while parent[b] is not None:
            a = parent[b]
            flow[a][b] += 1
            flow[b][a] -= 1
            b = a

    rho = sum(f for f in flow[S].values() if f > 0)

    paths = []
    used = {a: dict(fl) for a, fl in flow.items()}
    for first, f in sorted(used[S].items()):
        while used[S][first] > 0:
            used[S][first] -= 1
            path = [s]
            cur = first
            while cur != T:
                path.append(cur[1])
                out = ("out", cur[1])
                nxt = None
                for b, fl in sorted(used[out].items()):
                    if fl > 0:
                        nxt = b
                        break
                used[out][nxt] -= 1
                cur = nxt
            path.append(target)
            paths.append(tuple(path))
    return PathPackingResult(rho=rho, paths=tuple(paths))


def enumerate_wellcolored_paths(g: Graph, colors, s: int, target: int, i: int) -> list:
    """Every well-colored path from s to target (endpoints included);
    brute-force DFS, intended as the oracle for the flow route."""
    palette = _colors_of(colors)
    _check_endpoints(palette, s, target, i)
    out = []

    def extend(v, layer, trail):
        if layer == i:
            if target in g.adj_sets[v]:
                out.append(tuple(trail) + (target,))
            return
        for w in g.adj[v]:
            if palette[w] == layer and w != target and w not in trail:
                trail.append(w)
                extend(w, layer + 1, trail)
                trail.pop()

    extend(s, 0, [s])
    return out


def exhaustive_max_packing(paths) -> int:
    """Largest internally-disjoint subfamily by backtracking over the full
    path list (oracle-grade; exponential but fine at oracle scale)."""
    interiors = [frozenset(p[1:-1]) for p in paths]

    best = 0

    def grow(idx, used, count):
        nonlocal best
        if count + (len(paths) - idx) <= best:
            return
        if idx == len(paths):
            best = max(best, count)
            return
        if not (interiors[idx] & used):
            grow(idx + 1, used | interiors[idx], count + 1)
        grow(idx + 1, used, count)

    grow(0, frozenset(), 0)
    return best


def max_disjoint_paths_with_forbidden(
    g: Graph, colors, s: int, target: int, i: int, forbidden
) -> PathPackingResult:
    """Packing computed as above but with `forbidden` nodes removed (used to
    verify constructively that a path family can be extended around a set of
    already-chosen paths)."""
    keep = [v for v in range(g.n) if v not in set(forbidden) or v in (s, target)]
    remap = {v: idx for idx, v in enumerate(keep)}
    sub = Graph(
        len(keep),
        [
            (remap[u], remap[v])
            for u, v in g.edges()
            if u in remap and v in remap
        ],
    )
    palette = _colors_of(colors)
    sub_colors = tuple(palette[v] for v in keep)
    res = max_disjoint_wellcolored_paths(sub, sub_colors, remap[s], remap[target], i)
    back = {idx: v for v, idx in remap.items()}
    return PathPackingResult(
        rho=res.rho,
        paths=tuple(tuple(back[x] for x in p) for p in res.paths),
    )


# ----------------------------------------------------------------------
# bad-neighbor sets
# ----------------------------------------------------------------------

DEFAULT_BAD_SET_LIMITS = {1: 60, 2: 10, 3: 10, 4: 5, 5: 5, 6: 6}


@dataclass
class BadSetReport:
    """Per-index bad-neighbor sets around u_0 of a canonically colored
    14-cycle, with every bound they must satisfy spelled out."""

    cstar: tuple
    u0: int
    deg_u0: int
    u0_max_degree_on_cycle: bool
    f: dict
    candidates: tuple            # neighbors of u_0 colored -1
    excluded_by_cycle: tuple     # candidates sitting on a 12- or 14-cycle
    sets: dict                   # i (1..6) -> tuple of bad neighbors
    rho: dict                    # (i, s) -> packing size
    reverse: "BadSetReport | None" = None

    @property
    def union(self) -> tuple:
        nodes = set()
        for members in self.sets.values():
            nodes.update(members)
        if self.reverse is not None:
            for members in self.reverse.sets.values():
                nodes.update(members)
        return tuple(sorted(nodes))

    def union_bound(self) -> Fraction:
        # one side: (35/72) deg + 3; both sides double it
        one = Fraction(35, 72) * self.deg_u0 + 3
        return 2 * one if self.reverse is not None else one

    def per_index_bounds(self) -> dict:
        d = self.deg_u0
        return {
            1: Fraction(d, 4),
            2: Fraction(d, 9) + 2,
            3: Fraction(d, 8),
            4: Fraction(1),
            5: Fraction(0),
            6: Fraction(0),
        }

    def bounds_ok(self) -> dict:
        limits = self.per_index_bounds()
        out = {i: len(self.sets[i]) <= limits[i] for i in range(1, 7)}
        out["union"] = len(self.union) <= self.union_bound()
        return out

    def to_json(self) -> dict:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "u0": self.u0,
            "deg_u0": self.deg_u0,
            "u0_max_degree_on_cycle": self.u0_max_degree_on_cycle,
            "f": {str(i): v for i, v in self.f.items()},
            "candidates": list(self.candidates),
            "excluded_by_cycle": list(self.excluded_by_cycle),
            "sets": {str(i): list(v) for i, v in self.sets.items()},
            "union_size": len(self.union),
            "union_bound": float(self.union_bound()),
            "bounds_ok": {str(k): bool(v) for k, v in self.bounds_ok().items()},
        }
        if self.reverse is not None:
            payload["reverse_sets"] = {str(i): list(v) for i, v in self.reverse.sets.items()}
        return payload


def compute_bad_sets(
    g: Graph,
    colors,
    cstar,
    f: dict | None = None,
    *,
    include_reverse: bool = False,
    length_cap: int = 16,
    step_budget: int = 50_000_000,
) -> BadSetReport:
    """For each i in 1..6, the set of neighbors of u_0 that are colored -1,
    sit on no 12- or 14-cycle, and admit more than f(i) internally-disjoint
    well-colored paths to u_i.

    Requires cstar to be a 14-cycle colored canonically (u_j gets color j).
    With include_reverse, the mirrored sets (indices 8..13) are computed by
    recoloring the cycle in reverse traversal order and rerunning.
    """
    palette = list(_colors_of(colors))
    cstar = tuple(cstar)
    if len(cstar) != 14:
        raise ValueError(f"invalid-parameter: cstar must have 14 nodes, got {len(cstar)}")
    for j, v in enumerate(cstar):
        if palette[v] != j:
            raise ValueError(
                f"invalid-parameter: cstar node {v} must be colored {j}, is {palette[v]}"
            )
    f = dict(DEFAULT_BAD_SET_LIMITS if f is None else f)
    u0 = cstar[0]
    deg_u0 = g.degree(u0)
    max_on_cycle = max(g.degree(v) for v in cstar)

    candidates = tuple(sorted(v for v in g.adj[u0] if palette[v] == -1))
    excluded = tuple(
        sorted(
            v for v in candidates
            if node_in_cycle_of_length(g, v, 12, step_budget=step_budget)
            or node_in_cycle_of_length(g, v, 14, step_budget=step_budget)
        )
    )
    eligible = [v for v in candidates if v not in set(excluded)]

    sets = {}
    rho = {}
    for i in range(1, 7):
        target = cstar[i]
        members = []
        for s in eligible:
            res = max_disjoint_wellcolored_paths(g, palette, s, target, i)
            rho[(i, s)] = res.rho
            if res.rho > f[i]:
                members.append(s)
        sets[i] = tuple(members)

    report = BadSetReport(
        cstar=cstar,
        u0=u0,
        deg_u0=deg_u0,
        u0_max_degree_on_cycle=deg_u0 >= max_on_cycle,
        f=f,
        candidates=candidates,
        excluded_by_cycle=excluded,
        sets=sets,
        rho=rho,
    )
    if include_reverse:
        reversed_cycle = (cstar[0],) + tuple(reversed(cstar[1:]))
        rev_palette = list(palette)
        for j, v in enumerate(reversed_cycle):
            rev_palette[v] = j
        report.reverse = compute_bad_sets(
            g, rev_palette, reversed_cycle, f,
            include_reverse=False, length_cap=length_cap, step_budget=step_budget,
        )
    return report


def good_neighbor_fraction(report: BadSetReport) -> Fraction:
    """|N(u_0) minus all bad sets| / deg(u_0).

    When both traversal orientations are present and the instance satisfies
    the preconditions, the count must be at least deg(u_0)/36 - 6; a
    violation raises, because it would mean the packing or membership code is
    wrong."""
    bad = set(report.union)
    good = report.deg_u0 - len(bad)
    fraction = Fraction(good, report.deg_u0)
    if report.reverse is not None and report.u0_max_degree_on_cycle:
        lower = Fraction(report.deg_u0, 36) - 6
        if good < lower:
            raise AnalysisInvariantError(
                f"good-neighbor count {good} below bound {float(lower):.3f} "
                f"on a precondition-satisfying instance"
            )
    return fraction


# ----------------------------------------------------------------------
# binomial helpers (exact integer combinatorics, float probabilities)
# ----------------------------------------------------------------------

def binom_pmf(n: int, t: int, p: float) -> float:
    if t < 0 or t > n:
        return 0.0
    return math.comb(n, t) * (p ** t) * ((1.0 - p) ** (n - t))


def binom_cdf(n: int, t: int, p: float) -> float:
    if t < 0:
        return 0.0
    return min(1.0, sum(binom_pmf(n, j, p) for j in range(0, min(t, n) + 1)))


# ----------------------------------------------------------------------
# congestion experiments
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CongestionSample:
    trial: int
    seed: int
    x: int            # identifiers received by the probe from the layer below
    within: bool      # x <= threshold


@dataclass(frozen=True)
class CongestionSetup:
    """What a congestion trial needs: the host graph, the pool the start
    node is drawn from, the probe and its forced color, and the Binomial
    parameters the counts are compared against."""

    graph: Graph
    k: int
    start_pool: tuple
    probe: int
    probe_color: int
    n_paths: int          # Binomial n
    path_len: int         # nodes that must be colored correctly per path
    exclude_ident: int | None = None
    use_heavy_rule: bool = True
    label: str = "instance"

    @classmethod
    def from_instance(cls, inst: GkInstance) -> "CongestionSetup":
        n_paths = inst.d if inst.kind == "g6" else inst.N
        return cls(
            graph=inst.graph,
            k=inst.k,
            start_pool=inst.sources,
            probe=inst.attach,
            probe_color=inst.k - 3,
            n_paths=n_paths,
            path_len=inst.k - 3,
            exclude_ident=inst.u0,
            use_heavy_rule=True,
            label=inst.kind,
        )

    @classmethod
    def bundle(cls, n_paths: int, path_len: int) -> "CongestionSetup":
        """Synthetic reduced-scale setup: a start node fanning into n_paths
        disjoint paths of path_len nodes, all ending at one probe."""
        if path_len < 2:
            raise ValueError(f"invalid-parameter: path_len must be >= 2, got {path_len}")
        edges = []
        s = 0
        probe = 1
        nxt = 2
        for _ in range(n_paths):
            nodes = list(range(nxt, nxt + path_len))
            nxt += path_len
            edges.append((s, nodes[0]))
            edges += list(zip(nodes, nodes[1:]))
            edges.append((nodes[-1], probe))
        return cls(
            graph=Graph(nxt, edges),
            k=path_len,
            start_pool=(s,),
            probe=probe,
            probe_color=path_len,
            n_paths=n_paths,
            path_len=path_len,
            exclude_ident=None,
            use_heavy_rule=False,
            label="bundle",
        )


def _congestion_chunk(setup: CongestionSetup, trial_range, threshold: int, seed: int, palette: int):
    g = setup.graph
    k = setup.k
    cls = classify_nodes(g, k) if setup.use_heavy_rule else None
    samples = []
    for t in trial_range:
        tseed = derive_seed(seed, "congestion", t)
        rng = random.Random(tseed)
        palette_colors = [rng.randrange(palette) for _ in range(g.n)]
        s = setup.start_pool[rng.randrange(len(setup.start_pool))]
        palette_colors[s] = -1
        palette_colors[setup.probe] = setup.probe_color
        ca = ColorAssignment(k=k, include_minus_one=True, colors=tuple(palette_colors))
        sources = [
            w for w in g.adj[s]
            if palette_colors[w] == 0 and (cls is None or cls.is_heavy(w))
        ]
        x = 0
        if sources:
            outcome, _ = color_bfs(g, k, sources, ca, None, probes=(setup.probe,))
            received = outcome.probe_received.get(setup.probe, ())
            x = sum(1 for ident in received if ident != setup.exclude_ident)
        samples.append(CongestionSample(trial=t, seed=tseed, x=x, within=x <= threshold))
    return samples


def congestion_experiment(
    setup: CongestionSetup,
    trials: int,
    threshold: int,
    seed: int = 0,
    palette_size: int | None = None,
    jobs: int = 1,
):
    """Seeded trials: fresh uniform colors over {0..palette-1}, a start node
    from the pool (its color overridden to -1 so it stays inert), the probe
    pinned to its receiving color, one uncapped search phase from the start
    node's eligible neighbors, and the probe's identifier count recorded.

    Trials are independent with per-trial derived seeds, so jobs > 1 fans
    them out over processes; results are canonicalized by trial index and
    identical to a sequential run.

    Returns (samples, summary); the summary carries the matching Binomial
    law (n_paths, r=(1/palette)^path_len) next to the empirical moments.
    """
    palette = palette_size if palette_size is not None else 2 * setup.k
    if palette < setup.path_len + 1:
        raise ValueError(
            f"invalid-parameter: palette {palette} cannot well-color {setup.path_len} layers"
        )
    if jobs <= 1 or trials < 2 * jobs:
        samples = _congestion_chunk(setup, range(trials), threshold, seed, palette)
    else:
        import multiprocessing
        from functools import partial

        chunk = (trials + jobs - 1) // jobs
        ranges = [range(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]
        worker = partial(
            _congestion_chunk, setup, threshold=threshold, seed=seed, palette=palette
        )
        with multiprocessing.Pool(jobs) as pool:
            parts = pool.map(worker, ranges)
        samples = sorted(
            (s for part in parts for s in part), key=lambda s: s.trial
        )

    r = (1.0 / palette) ** setup.path_len
    xs = [s.x for s in samples]
    mean = sum(xs) / trials
    var = sum((x - mean) ** 2 for x in xs) / trials
    emp_counts = {}
    for x in xs:
        emp_counts[x] = emp_counts.get(x, 0) + 1
    hi = max(max(xs, default=0), setup.n_paths)
    ks = 0.0
    emp_acc = 0.0
    for t in range(hi + 1):
        emp_acc += emp_counts.get(t, 0) / trials
        ks = max(ks, abs(emp_acc - binom_cdf(setup.n_paths, t, r)))
    summary = {
        "schema_version": SCHEMA_VERSION,
        "label": setup.label,
        "trials": trials,
        "threshold": threshold,
        "palette": palette,
        "path_len": setup.path_len,
        "n_paths": setup.n_paths,
        "r": r,
        "empirical": {
            "mean": mean,
            "variance": var,
            "p_within": sum(1 for s in samples if s.within) / trials,
        },
        "theory": {
            "mean": setup.n_paths * r,
            "variance": setup.n_paths * r * (1.0 - r),
            "p_within": binom_cdf(setup.n_paths, threshold, r),
        },
        "ks_distance": ks,
    }
    return samples, summary


def wellcolored_path_rate(path_len: int, palette_size: int, trials: int, seed: int = 0) -> float:
    """Empirical probability that path_len i.i.d. uniform colors come out as
    exactly (0, 1, ..., path_len-1); closed form is (1/palette)^path_len.
    Vectorized so calibration runs at the 10^7 scale in seconds."""
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, palette_size, size=(trials, path_len), dtype=np.uint8)
    target = np.arange(path_len, dtype=np.uint8)
    return float(np.all(draws == target, axis=1).sum()) / trials
