"""Adversarial instance families: graphs whose unique long cycle forces
unbounded congestion at one attachment node, plus the weighted contraction
used to verify their cycle spectrum and the C4-free bipartite ingredient
for the k=6 variant.

Node numbering is deterministic: cycle nodes first, then the start-side
attachments S, then the far-side hubs W, then the internal connector paths
in (p,q,j) lexicographic order, then the private leaves.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .graphs import (
    Graph,
    canonical_cycle,
    classify_nodes,
    enumerate_cycles,
    DEFAULT_LENGTH_CAP,
    DEFAULT_STEP_BUDGET,
)
from .util import SCHEMA_VERSION


@dataclass(frozen=True)
class GkInstance:
    """A generated instance plus its role labels.

    cycle: the planted cycle u_0..u_{2k-1} (ids 0..2k-1)
    sources: S, the N neighbors of u_0
    hubs: W, the N neighbors of u_{k-3}
    paths: per (p,q) pair (1-based), the internal connector node ids
    leaves: per (p,q), leaves hanging off the first and last connector node
    """

    kind: str                 # "gk" | "g6"
    k: int
    N: int
    d: int | None
    graph: Graph
    cycle: tuple
    sources: tuple
    hubs: tuple
    paths: dict
    leaves: dict

    @property
    def u0(self) -> int:
        return self.cycle[0]

    @property
    def attach(self) -> int:
        """u_{k-3}, the far attachment node the hubs hang off."""
        return self.cycle[self.k - 3]

    def source_of(self, p: int) -> int:
        return self.sources[p - 1]

    def hub_of(self, q: int) -> int:
        return self.hubs[q - 1]

    def labels(self) -> dict:
        out = {}
        for j, v in enumerate(self.cycle):
            out[v] = f"u:{j}"
        for p, v in enumerate(self.sources, start=1):
            out[v] = f"s:{p}"
        for q, v in enumerate(self.hubs, start=1):
            out[v] = f"w:{q}"
        for (p, q), nodes in self.paths.items():
            for j, v in enumerate(nodes):
                out[v] = f"path:{p}:{q}:{j}"
        for (p, q), (first, last) in self.leaves.items():
            for r, v in enumerate(first, start=1):
                out[v] = f"leaf:{p}:{q}:first:{r}"
            for r, v in enumerate(last, start=1):
                out[v] = f"leaf:{p}:{q}:last:{r}"
        return out


def _assemble(kind, k, N, d, pairs, leaves_per_end):
    """Shared constructor: build edges and the role bookkeeping."""
    two_k = 2 * k
    path_len = k - 4          # internal connector nodes per pair
    cycle = tuple(range(two_k))
    sources = tuple(two_k + p for p in range(N))
    hubs = tuple(two_k + N + q for q in range(N))
    edges = [(i, (i + 1) % two_k) for i in range(two_k)]
    edges += [(0, s) for s in sources]
    edges += [(k - 3, w) for w in hubs]

    nxt = two_k + 2 * N
    paths = {}
    for (p, q) in pairs:
        nodes = tuple(range(nxt, nxt + path_len))
        nxt += path_len
        paths[(p, q)] = nodes
        edges.append((sources[p - 1], nodes[0]))
        for a, b in zip(nodes, nodes[1:]):
            edges.append((a, b))
        edges.append((nodes[-1], hubs[q - 1]))

    leaves = {}
    for (p, q) in pairs:
        nodes = paths[(p, q)]
        first = tuple(range(nxt, nxt + leaves_per_end))
        nxt += leaves_per_end
        last = tuple(range(nxt, nxt + leaves_per_end))
        nxt += leaves_per_end
        leaves[(p, q)] = (first, last)
        edges += [(nodes[0], v) for v in first]
        edges += [(nodes[-1], v) for v in last]

    return GkInstance(
        kind=kind, k=k, N=N, d=d,
        graph=Graph(nxt, edges),
        cycle=cycle, sources=sources, hubs=hubs,
        paths=paths, leaves=leaves,
    )


def generate_gk(k: int, N: int) -> GkInstance:
    """The generic family: a 2k-cycle, N start-side neighbors of u_0, N hubs
    on u_{k-3}, one internal path per (p,q) pair, and N private leaves on
    each path end.  Node count: 2k + 2N + (k-4)N^2 + 2N^3."""
    if k < 7:
        raise ValueError(f"invalid-parameter: generic family needs k >= 7 (use generate_g6), got {k}")
    if N < 1:
        raise ValueError(f"invalid-parameter: N must be >= 1, got {N}")
    pairs = [(p, q) for p in range(1, N + 1) for q in range(1, N + 1)]
    return _assemble("gk", k, N, None, pairs, leaves_per_end=N)


def _is_prime(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % f == 0:
            return False
        f += 1
    return True


def generate_c4free_bipartite(d: int) -> Graph:
    """Point/line incidence of the order-d affine plane with vertical lines
    dropped: parts of size d^2, d-regular, d^3 edges, and no 4-cycle (two
    points share at most one non-vertical line)."""
    if not _is_prime(d):
        raise ValueError(f"invalid-parameter: d must be prime, got {d}")
    edges = []
    for x in range(d):
        for y in range(d):
            point = x * d + y
            for m in range(d):
                b = (y - m * x) % d
                line = d * d + m * d + b
                edges.append((point, line))
    return Graph(2 * d * d, edges)


def generate_g6(d: int) -> GkInstance:
    """The k=6 variant: connector paths exist only for (p,q) pairs adjacent
    in the C4-free bipartite incidence graph, which kills the short cycles a
    complete pairing would create."""
    if not _is_prime(d):
        raise ValueError(f"invalid-parameter: d must be prime, got {d}")
    bip = generate_c4free_bipartite(d)
    N = d * d
    pairs = sorted(
        (u + 1, v - N + 1)
        for u, v in bip.edges()   # u < v, so u is a point and v a line
    )
    return _assemble("g6", 6, N, d, pairs, leaves_per_end=N)


# ----------------------------------------------------------------------
# weighted contraction
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedEdge:
    u: int
    v: int
    weight: int
    tag: str = ""


@dataclass(frozen=True)
class WeightedGraph:
    """Small weighted multigraph (parallel edges allowed); cycle length is
    the sum of edge weights along the cycle."""

    n: int
    edges: tuple

    def cycles(self):
        """All simple cycles (distinct nodes; the two-node cycle through a
        pair of parallel edges counts), each once, as edge-index tuples."""
        incident = [[] for _ in range(self.n)]
        for idx, e in enumerate(self.edges):
            incident[e.u].append((idx, e.v))
            incident[e.v].append((idx, e.u))
        found = {}

        def walk(start, v, visited, used_edges, path_edges):
            for idx, w in incident[v]:
                if idx in used_edges:
                    continue
                if w == start and len(path_edges) >= 1:
                    key = frozenset(path_edges + [idx])
                    if key not in found:
                        found[key] = tuple(sorted(path_edges + [idx]))
                    continue
                if w in visited or w < start:
                    continue
                visited.add(w)
                used_edges.add(idx)
                path_edges.append(idx)
                walk(start, w, visited, used_edges, path_edges)
                path_edges.pop()
                used_edges.discard(idx)
                visited.discard(w)

        for start in range(self.n):
            walk(start, start, {start}, set(), [])
        return sorted(found.values())

    def cycle_length_multiset(self, max_weight: int | None = None) -> Counter:
        counts = Counter()
        for cyc in self.cycles():
            w = sum(self.edges[i].weight for i in cyc)
            if max_weight is None or w <= max_weight:
                counts[w] += 1
        return counts


def contract_to_weighted(inst: GkInstance) -> WeightedGraph:
    """Collapse an instance to its weighted view: unit edges to S and W, one
    weight-(k-3) edge per connector path, the two cycle arcs as parallel
    edges of weight k-3 and k+3, leaves dropped."""
    if inst.kind not in ("gk", "g6"):
        raise ValueError(f"invalid-parameter: unknown instance kind {inst.kind!r}")
    k, N = inst.k, inst.N
    u0, attach = 0, 1
    s_ids = {p: 2 + (p - 1) for p in range(1, N + 1)}
    w_ids = {q: 2 + N + (q - 1) for q in range(1, N + 1)}
    edges = [
        WeightedEdge(u0, attach, k - 3, "arc-short"),
        WeightedEdge(u0, attach, k + 3, "arc-long"),
    ]
    edges += [WeightedEdge(u0, s_ids[p], 1, f"s:{p}") for p in range(1, N + 1)]
    edges += [WeightedEdge(attach, w_ids[q], 1, f"w:{q}") for q in range(1, N + 1)]
    edges += [
        WeightedEdge(s_ids[p], w_ids[q], k - 3, f"path:{p}:{q}")
        for (p, q) in sorted(inst.paths)
    ]
    return WeightedGraph(n=2 + 2 * N, edges=tuple(edges))


# ----------------------------------------------------------------------
# verification
# ----------------------------------------------------------------------

def verify_unique_cycle(
    inst: GkInstance,
    *,
    length_cap: int = DEFAULT_LENGTH_CAP,
    step_budget: int = DEFAULT_STEP_BUDGET,
    spectrum: bool = True,
) -> dict:
    """Oracle report: how many cycles of the planted length exist, whether
    the planted one is it, whether u_0 is heavy, and (optionally) whether the
    oracle's cycle-length multiset up to the cap matches the weighted
    contraction's."""
    g = inst.graph
    two_k = 2 * inst.k
    found = enumerate_cycles(g, two_k, length_cap=length_cap, step_budget=step_budget)
    cls = classify_nodes(g, inst.k)
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": inst.kind,
        "k": inst.k,
        "N": inst.N,
        "cycle_length": two_k,
        "cycle_count": len(found),
        "cycles": [list(c) for c in found],
        "matches_planted": found == [canonical_cycle(inst.cycle)],
        "u0_heavy": cls.is_heavy(inst.u0),
        "unique": len(found) == 1 and found == [canonical_cycle(inst.cycle)],
    }
    if spectrum:
        oracle_counts = Counter()
        for L in range(3, length_cap + 1):
            oracle_counts[L] = len(
                enumerate_cycles(g, L, length_cap=length_cap, step_budget=step_budget)
            )
        weighted_counts = contract_to_weighted(inst).cycle_length_multiset(length_cap)
        spectrum_match = all(
            oracle_counts.get(L, 0) == weighted_counts.get(L, 0)
            for L in range(3, length_cap + 1)
        )
        report["oracle_spectrum"] = {str(L): c for L, c in sorted(oracle_counts.items()) if c}
        report["weighted_spectrum"] = {str(L): c for L, c in sorted(weighted_counts.items()) if c}
        report["spectrum_match"] = spectrum_match
    return report


# ----------------------------------------------------------------------
# label sidecars
# ----------------------------------------------------------------------

def save_labels(inst: GkInstance, path) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": inst.kind,
        "k": inst.k,
        "N": inst.N,
        "d": inst.d,
        "cycle": list(inst.cycle),
        "sources": list(inst.sources),
        "hubs": list(inst.hubs),
        "paths": {f"{p}:{q}": list(nodes) for (p, q), nodes in sorted(inst.paths.items())},
        "leaves": {
            f"{p}:{q}": [list(first), list(last)]
            for (p, q), (first, last) in sorted(inst.leaves.items())
        },
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def load_instance(graph: Graph, labels_path) -> GkInstance:
    obj = json.loads(Path(labels_path).read_text())
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"invalid-parameter: labels schema {obj.get('schema_version')} unsupported"
        )

    def key(s):
        p, q = s.split(":")
        return (int(p), int(q))

    return GkInstance(
        kind=obj["kind"],
        k=obj["k"],
        N=obj["N"],
        d=obj.get("d"),
        graph=graph,
        cycle=tuple(obj["cycle"]),
        sources=tuple(obj["sources"]),
        hubs=tuple(obj["hubs"]),
        paths={key(s): tuple(nodes) for s, nodes in obj["paths"].items()},
        leaves={
            key(s): (tuple(pair[0]), tuple(pair[1]))
            for s, pair in obj["leaves"].items()
        },
    )
