"""Graph core: dense-id undirected simple graphs, degree classification,
benign instance generators, plain-text serialization, and the exhaustive
fixed-length cycle oracle that every detector is validated against.

The oracle is deliberately independent of the message-passing machinery: it
is a bounded DFS with distance pruning and a hard step budget, refusing
(rather than truncating) anything beyond desk scale.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from pathlib import Path

DEFAULT_LENGTH_CAP = 16
DEFAULT_STEP_BUDGET = 100_000_000


class GraphError(ValueError):
    """Malformed graph data (self-loop, duplicate edge, bad file)."""


class OracleBudgetError(RuntimeError):
    """The cycle oracle refused: length cap or step budget exceeded."""


class GenerationError(RuntimeError):
    """A generator could not satisfy its constraints within its retry budget."""


class Graph:
    """Immutable undirected simple graph on nodes 0..n-1.

    Adjacency lists are sorted tuples; `adj_sets` mirrors them as frozensets
    for O(1) membership tests (the engine uses these to reject messages on
    non-edges).
    """

    __slots__ = ("n", "m", "adj", "adj_sets")

    def __init__(self, n: int, edges):
        if n < 0:
            raise GraphError("node count must be non-negative")
        seen = set()
        adj = [[] for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
            m += 1
        self.n = n
        self.m = m
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.adj_sets = tuple(frozenset(a) for a in self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj_sets[u]

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def relabel(self, perm) -> "Graph":
        """New graph with node v renamed perm[v]."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ----------------------------------------------------------------------
# small builders used across tests and generators
# ----------------------------------------------------------------------

def cycle_graph(length: int) -> Graph:
    return Graph(length, [(i, (i + 1) % length) for i in range(length)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# ----------------------------------------------------------------------
# degree classification
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class NodeClass:
    """Per-node light/heavy split against the degree threshold n^(1/k).

    Comparisons are exact: v is light iff deg(v)^k <= n, so the boundary case
    deg(v) = n^(1/k) lands on the light side without floating-point noise.
    """

    k: int
    n: int
    light: tuple

    @property
    def degree_threshold(self) -> float:
        return self.n ** (1.0 / self.k)

    def is_light(self, v: int) -> bool:
        return self.light[v]

    def is_heavy(self, v: int) -> bool:
        return not self.light[v]

    def light_nodes(self):
        return [v for v, flag in enumerate(self.light) if flag]

    def heavy_nodes(self):
        return [v for v, flag in enumerate(self.light) if not flag]


def classify_nodes(g: Graph, k: int) -> NodeClass:
    """Split nodes into light (deg <= n^(1/k)) and heavy (deg > n^(1/k))."""
    if k < 2:
        raise ValueError(f"invalid-parameter: k must be >= 2, got {k}")
    if g.n == 0:
        raise ValueError("invalid-parameter: graph must be nonempty")
    light = tuple(g.degree(v) ** k <= g.n for v in range(g.n))
    return NodeClass(k=k, n=g.n, light=light)


# ----------------------------------------------------------------------
# fixed-length cycle oracle
# ----------------------------------------------------------------------

def canonical_cycle(nodes) -> tuple:
    """Canonical form: rotate so the smallest id is first, then pick the
    lexicographically smaller of the two directions."""
    nodes = tuple(nodes)
    n = len(nodes)
    i = nodes.index(min(nodes))
    fwd = nodes[i:] + nodes[:i]
    rev = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, rev)


def is_cycle_in(g: Graph, nodes, length: int | None = None) -> bool:
    """Check that `nodes` is a simple cycle of the host graph (and of the
    given length, when one is specified)."""
    nodes = tuple(nodes)
    if length is not None and len(nodes) != length:
        return False
    if len(nodes) < 3 or len(set(nodes)) != len(nodes):
        return False
    return all(g.has_edge(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes)))


def _distances_from(g: Graph, root: int, limit: int):
    """BFS hop counts from root, -1 beyond `limit` (admissible pruning bound)."""
    dist = [-1] * g.n
    dist[root] = 0
    q = deque([root])
    while q:
        v = q.popleft()
        d = dist[v]
        if d >= limit:
            continue
        for w in g.adj[v]:
            if dist[w] < 0:
                dist[w] = d + 1
                q.append(w)
    return dist


class _Budget:
    __slots__ = ("left",)

    def __init__(self, steps: int):
        self.left = steps

    def spend(self, amount: int = 1):
        self.left -= amount
        if self.left < 0:
            raise OracleBudgetError(
                "cycle oracle exceeded its step budget; refusing partial results"
            )


def enumerate_cycles(
    g: Graph,
    length: int,
    *,
    length_cap: int = DEFAULT_LENGTH_CAP,
    step_budget: int = DEFAULT_STEP_BUDGET,
):
    """Every simple cycle of exactly `length`, once each, in canonical form.

    Exhaustive bounded DFS: cycles are rooted at their minimum node, extended
    only through larger ids, pruned by BFS distance back to the root, and the
    two traversal directions are collapsed by requiring the second node to be
    smaller than the last.  Refuses (OracleBudgetError) beyond the length cap
    or the step budget; never silently truncates.
    """
    if length < 3:
        raise ValueError(f"cycle length must be >= 3, got {length}")
    if length > length_cap:
        raise OracleBudgetError(
            f"cycle length {length} exceeds the oracle cap {length_cap}"
        )
    budget = _Budget(step_budget)
    out = []
    path = []

    for start in range(g.n):
        dist = _distances_from(g, start, length - 1)
        adj = g.adj

        def extend(v: int, pos: int, on_path: set):
            # pos = index of v in the path; nodes after it still needed: length - pos - 1
            budget.spend()
            remaining = length - pos - 1
            if remaining == 0:
                if path[1] < v and start in g.adj_sets[v]:
                    out.append(tuple(path))
                return
            for w in adj[v]:
                if w <= start or w in on_path:
                    continue
                dw = dist[w]
                if dw < 0 or dw > remaining:
                    continue
                path.append(w)
                on_path.add(w)
                extend(w, pos + 1, on_path)
                on_path.discard(w)
                path.pop()

        path.clear()
        path.append(start)
        for first in adj[start]:
            if first <= start or dist[first] != 1:
                continue
            path.append(first)
            extend(first, 1, {start, first})
            path.pop()

    return sorted(out)


def node_in_cycle_of_length(
    g: Graph,
    v: int,
    length: int,
    *,
    length_cap: int = DEFAULT_LENGTH_CAP,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> bool:
    """True iff some simple cycle of exactly `length` passes through v.

    Same bounded-DFS contract as enumerate_cycles, but rooted at v only and
    short-circuiting on the first witness.
    """
    if length < 3:
        raise ValueError(f"cycle length must be >= 3, got {length}")
    if length > length_cap:
        raise OracleBudgetError(
            f"cycle length {length} exceeds the oracle cap {length_cap}"
        )
    budget = _Budget(step_budget)
    dist = _distances_from(g, v, length - 1)
    adj = g.adj
    on_path = {v}

    def extend(u: int, pos: int) -> bool:
        budget.spend()
        remaining = length - pos - 1
        if remaining == 0:
            return v in g.adj_sets[u]
        for w in adj[u]:
            if w in on_path:
                continue
            dw = dist[w]
            if dw < 0 or dw > remaining:
                continue
            on_path.add(w)
            if extend(w, pos + 1):
                return True
            on_path.discard(w)
        return False

    for first in adj[v]:
        on_path.add(first)
        if extend(first, 1):
            return True
        on_path.discard(first)
    return False


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

def random_graph(
    n: int,
    p: float | None = None,
    d: int | None = None,
    seed: int = 0,
) -> Graph:
    """Erdos-Renyi G(n,p) or a random d-regular graph, deterministic per seed."""
    if (p is None) == (d is None):
        raise ValueError("invalid-parameter: give exactly one of p (ER) or d (regular)")
    rng = random.Random(seed)
    if p is not None:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"invalid-parameter: p={p} outside [0,1]")
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        return Graph(n, edges)

    if d < 0 or d >= n or (n * d) % 2 != 0:
        raise ValueError(f"invalid-parameter: degree d={d} infeasible for n={n}")
    # configuration model with rejection of self-loops / multi-edges
    for _ in range(1000):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if ok:
            return Graph(n, sorted(edges))
    raise GenerationError(f"could not sample a simple {d}-regular graph on {n} nodes")


def plant_cycle(
    n: int,
    length: int,
    *,
    pendants: tuple[int, int] | None = None,
    clean: bool = True,
    seed: int = 0,
    max_retries: int = 20,
):
    """Graph of n nodes containing a planted simple cycle 0..length-1.

    `pendants=(pos, count)` hangs `count` leaf neighbors off cycle node `pos`
    so that node can be made heavy for a chosen k (and the leaves double as
    -1-colorable source candidates next to it).  Remaining nodes are attached
    as random tree edges, which cannot create cycles; in clean mode the oracle
    re-checks that no even cycle shorter than `length` exists and that the
    planted cycle is still unique at its length.

    Returns (graph, cycle_nodes).
    """
    if not 3 <= length <= n:
        raise ValueError(f"invalid-parameter: need 3 <= length <= n, got L={length}, n={n}")
    want = pendants[1] if pendants else 0
    if length + want > n:
        raise ValueError("invalid-parameter: pendant count exceeds the node budget")
    cycle = tuple(range(length))
    last_err = None
    for attempt in range(max_retries):
        rng = random.Random(seed + attempt)
        edges = [(i, (i + 1) % length) for i in range(length)]
        nxt = length
        if pendants:
            pos, count = pendants
            for _ in range(count):
                edges.append((pos, nxt))
                nxt += 1
        while nxt < n:
            edges.append((rng.randrange(nxt), nxt))
            nxt += 1
        g = Graph(n, edges)
        if not clean:
            return g, cycle
        shorter = [
            L for L in range(4, length, 2)
            if enumerate_cycles(g, L)
        ]
        if not shorter and len(enumerate_cycles(g, length)) == 1:
            return g, cycle
        last_err = f"attempt {attempt}: stray cycles at lengths {shorter}"
    raise GenerationError(f"plant_cycle could not build a clean instance: {last_err}")


# ----------------------------------------------------------------------
# plain-text graph files
# ----------------------------------------------------------------------

def save_graph(g: Graph, path, *, comments=()) -> None:
    """Write the `n m` header then one `u v` line per edge (u < v)."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    Path(path).write_text("\n".join(lines) + "\n")


def load_graph(path) -> Graph:
    """Parse and validate a graph file (simplicity and symmetry enforced)."""
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line)
    if not rows:
        raise GraphError(f"{path}: empty graph file")
    head = rows[0].split()
    if len(head) != 2:
        raise GraphError(f"{path}: header must be 'n m', got {rows[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise GraphError(f"{path}: header promises {m} edges, found {len(rows) - 1}")
    edges = []
    for line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{path}: bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((min(u, v), max(u, v)))
    return Graph(n, edges)
