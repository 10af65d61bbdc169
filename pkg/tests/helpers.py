"""Independent brute-force oracles used across the test suite.

Everything here recomputes results from first principles (full enumeration
over permutations, colorings, or injections) so the library code under test
is never in its own loop.
"""

from itertools import combinations, permutations

import numpy as np

from kssearch.graphs import Graph, edge_slot, num_slots


def slot_permutation(n: int, p) -> list[int]:
    """dest[t] = slot that slot t moves to under vertex relabeling p."""
    dest = [0] * num_slots(n)
    for j in range(2, n + 1):
        for i in range(1, j):
            dest[edge_slot(i, j)] = edge_slot(p[i - 1], p[j - 1])
    return dest


def lex_key_of_bits(bits: int, nslots: int) -> int:
    """Slot 0 is the first (most significant) character of the lex string."""
    key = 0
    for t in range(nslots):
        if bits >> t & 1:
            key |= 1 << (nslots - 1 - t)
    return key


def brute_lex_min_key(g: Graph) -> int:
    """Minimum lex key over all n! relabelings."""
    m = num_slots(g.n)
    best = lex_key_of_bits(g.bits, m)
    for p in permutations(range(1, g.n + 1)):
        dest = slot_permutation(g.n, p)
        b = 0
        for t in range(m):
            if g.bits >> t & 1:
                b |= 1 << dest[t]
        best = min(best, lex_key_of_bits(b, m))
    return best


def all_lex_min_keys(n: int) -> np.ndarray:
    """Vectorized orbit lex-key minimum for every one of the 2^C(n,2) bitsets.

    Returns (keys, minkeys): keys[bits] is the graph's own lex key and
    minkeys[bits] the minimum over its isomorphism class, by brute force
    over all n! permutations.
    """
    nslots = num_slots(n)
    count = 1 << nslots
    codes = np.arange(count, dtype=np.int64)
    slots = np.arange(nslots, dtype=np.int64)
    bits = (codes[:, None] >> slots[None, :]) & 1  # row g, column t
    lexw = np.array([1 << (nslots - 1 - t) for t in range(nslots)], dtype=np.int64)
    keys = (bits * lexw[None, :]).sum(axis=1)
    best = keys.copy()
    for p in permutations(range(1, n + 1)):
        dest = np.array(slot_permutation(n, p), dtype=np.int64)
        permuted = (bits * lexw[dest][None, :]).sum(axis=1)
        np.minimum(best, permuted, out=best)
    return keys, best


def isomorphism_class_count(n: int) -> int:
    """Number of unlabeled graphs on n vertices via Burnside's lemma."""
    total = 0
    for p in permutations(range(n)):
        seen = [False] * num_slots(n)
        cycles = 0
        pairs = list(combinations(range(n), 2))
        index = {pair: t for t, pair in enumerate(pairs)}
        for t, (i, j) in enumerate(pairs):
            if seen[t]:
                continue
            cycles += 1
            a, b = i, j
            while True:
                seen[index[(min(p[a], p[b]), max(p[a], p[b]))]] = True
                a, b = p[a], p[b]
                if (min(a, b), max(a, b)) == (i, j):
                    break
        total += 1 << cycles
    from math import factorial

    return total // factorial(n)


def brute_is_010_colorable(g: Graph):
    """Exhaustive scan of all 2^n colorings; returns a witness or None."""
    n = g.n
    edges = g.edges()
    triangles = [
        (i, j, k)
        for i, j, k in combinations(range(1, n + 1), 3)
        if g.has_edge(i, j) and g.has_edge(i, k) and g.has_edge(j, k)
    ]
    for m in range(1 << n):
        ones = [v for v in range(1, n + 1) if m >> (v - 1) & 1]
        ones_set = set(ones)
        if any(i in ones_set and j in ones_set for i, j in edges):
            continue
        if any(
            i not in ones_set and j not in ones_set and k not in ones_set
            for i, j, k in triangles
        ):
            continue
        return [1 if v in ones_set else 0 for v in range(1, n + 1)]
    return None


def brute_injection_exists(h: Graph, g: Graph) -> bool:
    """Exhaustive scan over all injections of V(h) into V(g)."""
    for targets in permutations(range(1, g.n + 1), h.n):
        if all(g.has_edge(targets[i - 1], targets[j - 1]) for i, j in h.edges()):
            return True
    return False


def random_graph(rng, n: int, p: float = 0.5) -> Graph:
    bits = 0
    for t in range(num_slots(n)):
        if rng.random() < p:
            bits |= 1 << t
    return Graph(n, bits)
