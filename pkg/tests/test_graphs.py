import random

import pytest

import networkx as nx

from kssearch.graphs import (
    Graph,
    GraphFormatError,
    PartialGraph,
    compose,
    edge_slot,
    find_010_coloring,
    find_lex_reducer,
    find_subgraph_injection,
    graph6_decode,
    graph6_encode,
    is_010_colorable,
    is_canonical,
    num_slots,
    permute,
    slot_edge,
)

from helpers import (
    all_lex_min_keys,
    brute_injection_exists,
    brute_is_010_colorable,
    brute_lex_min_key,
    random_graph,
)


def test_slot_layout_roundtrip():
    for n in range(2, 10):
        seen = set()
        for j in range(2, n + 1):
            for i in range(1, j):
                t = edge_slot(i, j)
                assert slot_edge(t) == (i, j)
                seen.add(t)
        assert seen == set(range(num_slots(n)))


def test_lex_string_examples():
    assert Graph.from_edges(3, [(2, 3)]).lex_string() == "001"
    assert Graph(4).lex_string() == "000000"
    assert Graph.complete(3).lex_string() == "111"


def test_lex_string_is_column_major():
    g = Graph.from_edges(4, [(1, 2), (3, 4)])
    # slots: (1,2) (1,3) (2,3) (1,4) (2,4) (3,4)
    assert g.lex_string() == "100001"


def test_permute_examples():
    g = Graph.from_edges(3, [(1, 2)])
    h = permute(g, (3, 2, 1))  # 1 <-> 3
    assert h == Graph.from_edges(3, [(2, 3)])
    assert permute(g, (1, 2, 3)) == g
    k3 = Graph.complete(3)
    for p in [(2, 3, 1), (3, 1, 2), (2, 1, 3)]:
        assert permute(k3, p) == k3


def test_permute_rejects_mismatch():
    g = Graph.from_edges(3, [(1, 2)])
    with pytest.raises(ValueError):
        permute(g, (1, 2))
    with pytest.raises(ValueError):
        permute(g, (1, 1, 2))


def test_permute_is_group_action():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 8)
        g = random_graph(rng, n)
        p = list(range(1, n + 1))
        q = list(range(1, n + 1))
        rng.shuffle(p)
        rng.shuffle(q)
        assert permute(permute(g, p), q) == permute(g, compose(q, p))


def test_parent_examples():
    assert Graph.complete(3).parent() == Graph.complete(2)
    assert Graph.from_edges(3, [(1, 3)]).parent() == Graph(2)
    assert Graph.complete(4).parent().parent() == Graph.complete(2)
    with pytest.raises(ValueError):
        Graph(1).parent()


def test_canonicity_small_examples():
    assert is_canonical(Graph.from_edges(3, [(2, 3)]))
    g = Graph.from_edges(3, [(1, 2)])
    red = find_lex_reducer(g)
    assert red is not None
    assert permute(g, red).lex_key() < g.lex_key()
    # iterating the reducer bottoms out at the canonical labeling {2,3}
    while red is not None:
        g = permute(g, red)
        red = find_lex_reducer(g)
    assert g == Graph.from_edges(3, [(2, 3)])
    for n in range(1, 7):
        assert is_canonical(Graph(n))
        assert is_canonical(Graph.complete(n))


def test_canonicity_matches_brute_force_small():
    rng = random.Random(11)
    for n in range(2, 6):
        for bits in range(1 << num_slots(n)):
            g = Graph(n, bits)
            reducer = find_lex_reducer(g)
            if reducer is None:
                assert g.lex_key() == brute_lex_min_key(g)
            else:
                assert permute(g, reducer).lex_key() < g.lex_key()
    for _ in range(30):
        g = random_graph(rng, 7)
        reducer = find_lex_reducer(g)
        if reducer is None:
            assert g.lex_key() == brute_lex_min_key(g)
        else:
            assert permute(g, reducer).lex_key() < g.lex_key()


def test_canonicity_partition_order_6():
    keys, minkeys = all_lex_min_keys(6)
    for bits in range(1 << num_slots(6)):
        g = Graph(6, bits)
        assert is_canonical(g) == (keys[bits] == minkeys[bits])


def test_witness_soundness_random():
    rng = random.Random(23)
    for _ in range(200):
        n = rng.randint(2, 9)
        g = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]))
        reducer = find_lex_reducer(g)
        if reducer is not None:
            assert permute(g, reducer).lex_key() < g.lex_key()


def test_canonicity_handles_symmetric_graphs_quickly():
    # disjoint triangles have huge automorphism groups; the sibling pruning
    # must keep the search tractable
    comps = []
    for t in range(5):
        base = 3 * t
        comps += [(base + 1, base + 2), (base + 1, base + 3), (base + 2, base + 3)]
    g = Graph.from_edges(15, comps)
    reducer = find_lex_reducer(g)
    assert reducer is not None  # packed-early labeling is not lex-minimal
    h = permute(g, reducer)
    reducer = find_lex_reducer(h)
    while reducer is not None:
        h = permute(h, reducer)
        reducer = find_lex_reducer(h)
    assert is_canonical(h)


def test_colorability_examples():
    assert find_010_coloring(Graph(1)) in ([0], [1])
    k3 = Graph.complete(3)
    coloring = find_010_coloring(k3)
    assert coloring is not None and sorted(coloring) == [0, 0, 1]
    assert find_010_coloring(Graph.complete(4)) is None


def test_colorability_matches_brute_force():
    rng = random.Random(5)
    for n in range(1, 6):
        for bits in range(1 << num_slots(n)):
            g = Graph(n, bits)
            got = find_010_coloring(g)
            want = brute_is_010_colorable(g)
            assert (got is None) == (want is None), (n, bits)
            if got is not None:
                _assert_valid_010(g, got)
    for _ in range(100):
        n = rng.randint(6, 9)
        g = random_graph(rng, n, rng.choice([0.2, 0.4, 0.6]))
        got = find_010_coloring(g)
        want = brute_is_010_colorable(g)
        assert (got is None) == (want is None)
        if got is not None:
            _assert_valid_010(g, got)


def _assert_valid_010(g: Graph, coloring) -> None:
    assert len(coloring) == g.n
    for i, j in g.edges():
        assert not (coloring[i - 1] == 1 and coloring[j - 1] == 1)
    from itertools import combinations

    for i, j, k in combinations(range(1, g.n + 1), 3):
        if g.has_edge(i, j) and g.has_edge(i, k) and g.has_edge(j, k):
            assert coloring[i - 1] + coloring[j - 1] + coloring[k - 1] > 0


def test_subgraph_injection_examples():
    c4 = Graph.cycle(4)
    found = find_subgraph_injection(c4, c4)
    assert found is not None
    k3_plus_isolated = Graph.from_edges(4, [(1, 2), (1, 3), (2, 3)])
    assert find_subgraph_injection(c4, k3_plus_isolated) is None
    assert find_subgraph_injection(Graph.complete(3), Graph.complete(4)) is not None


def test_subgraph_injection_on_partial():
    pg = PartialGraph(4)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        pg.set_edge(i, j, 1)
    # remaining slots unassigned; only positive edges count
    assert find_subgraph_injection(Graph.complete(3), pg) is not None
    assert find_subgraph_injection(Graph.cycle(4), pg) is None


def test_subgraph_injection_matches_brute_force():
    rng = random.Random(13)
    for _ in range(150):
        hn = rng.randint(2, 5)
        gn = rng.randint(hn, 8)
        h = random_graph(rng, hn, 0.5)
        g = random_graph(rng, gn, 0.5)
        got = find_subgraph_injection(h, g)
        assert (got is not None) == brute_injection_exists(h, g)
        if got is not None:
            assert len(set(got.values())) == h.n
            for i, j in h.edges():
                assert g.has_edge(got[i], got[j])


def test_graph6_known_values():
    assert graph6_encode(Graph(1)) == "@"
    assert graph6_encode(Graph.complete(3)) == "Bw"
    assert graph6_encode(Graph.complete(3))[0] == chr(63 + 3)
    assert graph6_decode("Bw") == Graph.complete(3)
    assert graph6_decode(">>graph6<<Bw") == Graph.complete(3)


def test_graph6_roundtrip_random():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(1, 12)
        g = random_graph(rng, n, rng.random())
        assert graph6_decode(graph6_encode(g)) == g


def test_graph6_matches_networkx():
    rng = random.Random(17)
    for _ in range(100):
        n = rng.randint(1, 11)
        g = random_graph(rng, n, rng.random())
        gx = nx.from_graph6_bytes(graph6_encode(g).encode("ascii"))
        assert set(gx.edges()) == {(i - 1, j - 1) for i, j in g.edges()}
        back = nx.to_graph6_bytes(gx, header=False).decode("ascii").strip()
        assert graph6_decode(back) == g


def test_graph6_errors_carry_offset():
    with pytest.raises(GraphFormatError):
        graph6_decode("")
    with pytest.raises(GraphFormatError) as info:
        graph6_decode("B")  # order 3 needs one payload byte
    assert info.value.offset >= 0
    with pytest.raises(GraphFormatError):
        graph6_decode("@\x05")


def test_partial_graph_prefix():
    pg = PartialGraph(4)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        pg.set_edge(i, j, 1 if (i, j) != (1, 3) else 0)
    assert pg.complete_at(3)
    assert not pg.complete_at(4)
    assert pg.prefix_graph(3) == Graph.from_edges(3, [(1, 2), (2, 3)])
    with pytest.raises(ValueError):
        pg.prefix_graph(4)
