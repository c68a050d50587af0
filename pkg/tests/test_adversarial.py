from collections import Counter

import pytest

from congestcycles.adversarial import (
    contract_to_weighted,
    generate_c4free_bipartite,
    generate_g6,
    generate_gk,
    load_instance,
    save_labels,
    verify_unique_cycle,
)
from congestcycles.graphs import (
    Graph,
    canonical_cycle,
    classify_nodes,
    enumerate_cycles,
    load_graph,
    save_graph,
)


# ------------------------------------------------------------ generic family

def test_gk_node_count_formula():
    for k in (7, 8, 9):
        for N in (1, 2, 3):
            inst = generate_gk(k, N)
            assert inst.graph.n == 2 * k + 2 * N + (k - 4) * N * N + 2 * N**3


def test_gk_structural_audit():
    for k in (7, 8):
        for N in (1, 2, 3):
            inst = generate_gk(k, N)
            g = inst.graph
            assert g.degree(inst.u0) == N + 2
            assert g.degree(inst.attach) == N + 2
            for (p, q), nodes in inst.paths.items():
                assert len(nodes) == k - 4
                assert g.degree(nodes[0]) == N + 2
                assert g.degree(nodes[-1]) == N + 2
                for v in nodes[1:-1]:
                    assert g.degree(v) == 2
                assert g.has_edge(inst.source_of(p), nodes[0])
                assert g.has_edge(nodes[-1], inst.hub_of(q))
            for first, last in inst.leaves.values():
                assert len(first) == N and len(last) == N
                for leaf in first + last:
                    assert g.degree(leaf) == 1


def test_gk_rejects_small_k():
    with pytest.raises(ValueError):
        generate_gk(6, 2)
    with pytest.raises(ValueError):
        generate_gk(7, 0)


# -------------------------------------------------------- bipartite incidence

@pytest.mark.parametrize("d", [2, 3, 5, 7, 11])
def test_c4free_bipartite_parameters(d):
    g = generate_c4free_bipartite(d)
    assert g.n == 2 * d * d
    assert g.m == d**3
    assert all(g.degree(v) == d for v in range(g.n))
    assert enumerate_cycles(g, 4) == []
    # bipartite: points only touch lines
    for point in range(d * d):
        assert all(nb >= d * d for nb in g.adj[point])


def test_c4free_common_neighbor_bound():
    g = generate_c4free_bipartite(3)
    for u in range(9):
        for v in range(u + 1, 9):
            assert len(g.adj_sets[u] & g.adj_sets[v]) <= 1


def test_bipartite_requires_prime():
    with pytest.raises(ValueError):
        generate_c4free_bipartite(4)


# ----------------------------------------------------------------- k=6 family

def test_g6_counts_and_incidence_degree():
    inst = generate_g6(2)
    assert inst.graph.n == 100
    # every start node has exactly d connector paths
    per_source = Counter(p for (p, q) in inst.paths)
    assert all(count == 2 for count in per_source.values())
    inst3 = generate_g6(3)
    assert inst3.graph.n == 12 + 2 * 9 + 2 * 27 + 2 * 243  # frozen regression value: 570
    assert inst3.graph.n == 570
    per_source3 = Counter(p for (p, q) in inst3.paths)
    assert all(count == 3 for count in per_source3.values())


def test_g6_unique_planted_cycle():
    inst = generate_g6(2)
    found = enumerate_cycles(inst.graph, 12)
    assert found == [canonical_cycle(inst.cycle)]


# ----------------------------------------------------------- weighted view

def test_contraction_has_parallel_arc_pair():
    inst = generate_gk(7, 2)
    wg = contract_to_weighted(inst)
    arcs = [e for e in wg.edges if {e.u, e.v} == {0, 1}]
    assert sorted(e.weight for e in arcs) == [4, 10]
    assert 14 in wg.cycle_length_multiset()


def test_weighted_spectrum_matches_oracle_exactly():
    inst = generate_gk(7, 2)
    weighted = contract_to_weighted(inst).cycle_length_multiset(16)
    oracle = Counter()
    for L in range(3, 17):
        oracle[L] = len(enumerate_cycles(inst.graph, L))
    oracle = Counter({L: c for L, c in oracle.items() if c})
    assert weighted == oracle
    assert weighted[10] == 8 and weighted[12] == 2 and weighted[14] == 1


def test_weighted_spectrum_matches_oracle_on_g6():
    inst = generate_g6(2)
    weighted = contract_to_weighted(inst).cycle_length_multiset(14)
    oracle = Counter()
    for L in range(3, 15):
        c = len(enumerate_cycles(inst.graph, L))
        if c:
            oracle[L] = c
    assert weighted == oracle
    assert oracle[12] == 1


# -------------------------------------------------------------- verification

def test_verify_unique_on_generated_instances():
    report = verify_unique_cycle(generate_gk(7, 2))
    assert report["unique"] and report["u0_heavy"] and report["spectrum_match"]
    report6 = verify_unique_cycle(generate_g6(2), spectrum=False)
    assert report6["unique"] and report6["u0_heavy"]


def test_verify_flags_tampered_instance():
    inst = generate_gk(7, 2)
    g = inst.graph
    # a three-edge bypass of the u_1..u_4 arc creates a second 14-cycle
    n = g.n
    edges = list(g.edges()) + [(1, n), (n, n + 1), (n + 1, 4)]
    tampered = Graph(n + 2, edges)
    from dataclasses import replace

    bad = replace(inst, graph=tampered)
    report = verify_unique_cycle(bad, spectrum=False)
    assert report["cycle_count"] == 2
    assert not report["unique"]
    assert len(report["cycles"]) == 2


# ------------------------------------------------------------------- labels

def test_label_sidecar_roundtrip(tmp_path):
    inst = generate_g6(2)
    gpath, lpath = tmp_path / "g.txt", tmp_path / "g.json"
    save_graph(inst.graph, gpath)
    save_labels(inst, lpath)
    loaded = load_instance(load_graph(gpath), lpath)
    assert loaded == inst


def test_labels_cover_every_node():
    inst = generate_gk(8, 2)
    labels = inst.labels()
    assert sorted(labels) == list(range(inst.graph.n))
    assert labels[0] == "u:0"
    assert labels[inst.attach] == f"u:{inst.k - 3}"
