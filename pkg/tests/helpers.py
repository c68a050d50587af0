"""Constructed instances shared between module tests and the acceptance
suite: bad-neighbor gadgets around a canonically colored 14-cycle, the
congestion gadget that blocks one even step, and random cycle-bearing hosts.
"""

from __future__ import annotations

import random

from congestcycles.graphs import Graph, plant_cycle


def _pad_u0(edges, next_id, target_degree, current_degree):
    pendants = []
    while current_degree < target_degree:
        edges.append((0, next_id))
        pendants.append(next_id)
        next_id += 1
        current_degree += 1
    return next_id, pendants


def c14_canonical_colors(n, fill=2):
    colors = [fill] * n
    for j in range(14):
        colors[j] = j
    return colors


def b1_gadget():
    """Two -1 starts on u_0 sharing 61 color-0 middle nodes to u_1: both land
    in the index-1 bad set (packing 62 > 60), nothing else does."""
    edges = [(i, (i + 1) % 14) for i in range(14)]
    s_nodes = [14, 15]
    edges += [(0, s) for s in s_nodes]
    middles = list(range(16, 16 + 61))
    for x in middles:
        edges += [(s_nodes[0], x), (s_nodes[1], x), (1, x)]
    nxt = 77
    # u_1 now has degree 63; pad u_0 to keep it the cycle maximum
    nxt, _ = _pad_u0(edges, nxt, 63, 4)
    g = Graph(nxt, edges)
    colors = c14_canonical_colors(nxt)
    for s in s_nodes:
        colors[s] = -1
    for x in middles:
        colors[x] = 0
    return g, colors, s_nodes


def _disjoint_path_gadget(i, n_starts, paths_per_start):
    """n_starts -1-colored neighbors of u_0, each with its own family of
    `paths_per_start` internally-disjoint well-colored length-i paths to u_i."""
    edges = [(a, (a + 1) % 14) for a in range(14)]
    nxt = 14
    starts = []
    for _ in range(n_starts):
        s = nxt
        nxt += 1
        starts.append(s)
        edges.append((0, s))
    path_nodes = []
    for s in starts:
        for _ in range(paths_per_start):
            nodes = list(range(nxt, nxt + i))
            nxt += i
            path_nodes.append(nodes)
            edges.append((s, nodes[0]))
            edges += list(zip(nodes, nodes[1:]))
            edges.append((nodes[-1], i))
    deg_ui = 2 + n_starts * paths_per_start
    deg_u0 = 2 + n_starts
    nxt, _ = _pad_u0(edges, nxt, deg_ui, deg_u0)
    g = Graph(nxt, edges)
    colors = c14_canonical_colors(nxt)
    for s in starts:
        colors[s] = -1
    for nodes in path_nodes:
        for layer, v in enumerate(nodes):
            colors[v] = layer
    return g, colors, starts


def b2_gadget():
    """Three starts with 11 private disjoint 2-layer paths each: all three
    land in the index-2 bad set (packing 12 > 10)."""
    return _disjoint_path_gadget(2, 3, 11)


def b3_gadget():
    """Two starts with 11 private disjoint 3-layer paths each (packing 12 > 10)."""
    return _disjoint_path_gadget(3, 2, 11)


def b4_gadget():
    """One start with 6 private disjoint 4-layer paths (packing 7 > 5): the
    index-4 bad set is allowed exactly one member."""
    return _disjoint_path_gadget(4, 1, 6)


def b5_gadget():
    """One start with 6 disjoint 5-layer paths: combining a path with the
    short cycle arc puts the start on a 12-cycle, so the membership filter
    must keep the index-5 bad set empty."""
    return _disjoint_path_gadget(5, 1, 6)


def b6_gadget():
    """As b5 but 6-layer paths: the start lands on a 14-cycle instead."""
    return _disjoint_path_gadget(6, 1, 6)


def blocking_gadget():
    """Length-8 planted cycle whose node at position 2 receives six
    identifiers when the congesting start is used: with the (1,1,3,3) caps
    it gives up at the even step, blocking that one start."""
    edges = [(i, (i + 1) % 8) for i in range(8)]
    nxt = 8
    star = nxt  # the congesting -1 start
    nxt += 1
    edges.append((0, star))
    pairs = []
    for _ in range(5):
        x, y, leaf = nxt, nxt + 1, nxt + 2
        nxt += 3
        pairs.append((x, y))
        edges += [(star, x), (x, y), (y, 2), (x, leaf)]
    plain = list(range(nxt, nxt + 4))  # harmless -1 starts
    for s in plain:
        edges.append((0, s))
    nxt += 4
    g = Graph(nxt, edges)
    colors = [6] * nxt  # inert filler color
    for j in range(8):
        colors[j] = j
    colors[star] = -1
    for s in plain:
        colors[s] = -1
    for x, y in pairs:
        colors[x] = 0
        colors[y] = 1
    return g, colors, star, plain


def random_c14_host(seed):
    """Sparse random host around a canonical 14-cycle: a few -1 starts on
    u_0, a few random color-0/1 middles, pendant padding so u_0 keeps the
    maximum cycle degree.  Small and sparse enough for the oracle."""
    rng = random.Random(seed)
    edges = [(i, (i + 1) % 14) for i in range(14)]
    nxt = 14
    starts = []
    for _ in range(rng.randrange(1, 4)):
        s = nxt
        nxt += 1
        starts.append(s)
        edges.append((0, s))
    extras = []
    for _ in range(rng.randrange(2, 7)):
        v = nxt
        nxt += 1
        extras.append(v)
        a = rng.choice(starts + list(range(14)))
        b = rng.randrange(14)
        if a != v and b != v and a != b:
            edges.append((min(a, v), max(a, v)))
            edges.append((min(b, v), max(b, v)))
    seen = set()
    dedup = []
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key not in seen and u != v:
            seen.add(key)
            dedup.append(key)
    deg0 = sum(1 for u, v in dedup if 0 in (u, v))
    degs = {}
    for u, v in dedup:
        degs[u] = degs.get(u, 0) + 1
        degs[v] = degs.get(v, 0) + 1
    need = max(degs.get(j, 0) for j in range(14))
    while deg0 < need:
        dedup.append((0, nxt))
        nxt += 1
        deg0 += 1
    g = Graph(nxt, dedup)
    colors = c14_canonical_colors(nxt)
    for s in starts:
        colors[s] = -1
    for v in extras:
        colors[v] = rng.choice([-1, 0, 0, 1, 1, 2, 3])
    return g, colors


def planted_with_sources(n, length, pendant_count, seed):
    """Clean planted cycle with pendant leaves on node 0; returns the graph,
    the cycle, and the pendant leaf ids (the -1 source candidates)."""
    g, cycle = plant_cycle(n, length, pendants=(0, pendant_count), seed=seed)
    pendants = [v for v in g.adj[0] if g.degree(v) == 1]
    return g, cycle, pendants
