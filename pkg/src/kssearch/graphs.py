"""Core graph machinery shared by every stage of the search pipeline.

Graphs are simple and undirected, with vertices labeled 1..n.  Only the
upper triangle of the adjacency matrix is stored, packed into a Python int
bitset.  Slot t of the bitset holds entry (i, j) with i < j, where

    t = (j - 2)(j - 1) / 2 + (i - 1)

so the bit string read slot 0, 1, 2, ... walks the matrix column by column
(top to bottom within a column).  All ordering-sensitive operations
(canonicity, edge variable numbering, graph6) agree on this layout.
"""

from __future__ import annotations

from array import array
from itertools import combinations

__all__ = [
    "Graph",
    "PartialGraph",
    "GraphFormatError",
    "edge_slot",
    "slot_edge",
    "num_slots",
    "permute",
    "compose",
    "find_lex_reducer",
    "is_canonical",
    "find_010_coloring",
    "is_010_colorable",
    "find_subgraph_injection",
    "graph6_encode",
    "graph6_decode",
    "graph6_load",
    "graph6_dump",
]


def num_slots(n: int) -> int:
    return n * (n - 1) // 2


def edge_slot(i: int, j: int) -> int:
    """0-based bit position of edge {i, j}, 1 <= i != j."""
    if i > j:
        i, j = j, i
    return (j - 2) * (j - 1) // 2 + i - 1


def slot_edge(t: int) -> tuple[int, int]:
    """Inverse of edge_slot."""
    j = 2
    while (j - 1) * j // 2 <= t:
        j += 1
    i = t - (j - 2) * (j - 1) // 2 + 1
    return i, j


class Graph:
    """Immutable order-n graph over a packed upper-triangular bitset."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 1:
            raise ValueError(f"graph order must be >= 1, got {n}")
        if bits < 0 or bits >> num_slots(n):
            raise ValueError(f"bitset out of range for order {n}")
        self.n = n
        self.bits = bits

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        bits = 0
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise ValueError(f"bad edge ({i}, {j}) for order {n}")
            bits |= 1 << edge_slot(i, j)
        return cls(n, bits)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, (1 << num_slots(n)) - 1)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.bits >> edge_slot(i, j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        bits = self.bits
        out = []
        t = 0
        while bits:
            if bits & 1:
                out.append(slot_edge(t))
            bits >>= 1
            t += 1
        return out

    def edge_count(self) -> int:
        return bin(self.bits).count("1")

    def degree(self, v: int) -> int:
        return bin(self.adjacency_masks()[v]).count("1")

    def adjacency_masks(self) -> list[int]:
        """masks[v] has bit u set iff {u, v} is an edge (entry 0 unused)."""
        masks = [0] * (self.n + 1)
        for i, j in self.edges():
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def lex_string(self) -> str:
        """Column-major upper-triangle bit string (slot 0 first)."""
        m = num_slots(self.n)
        return format(self.bits, f"0{m}b")[::-1] if m else ""

    def lex_key(self) -> int:
        """Integer that orders graphs of equal order like lex_string.

        Slot 0 is the most significant bit, so a < b as keys iff the bit
        string of a precedes the bit string of b lexicographically.
        """
        m = num_slots(self.n)
        key = 0
        bits = self.bits
        for t in range(m):
            if bits >> t & 1:
                key |= 1 << (m - 1 - t)
        return key

    def parent(self) -> "Graph":
        if self.n < 2:
            raise ValueError("order-1 graph has no parent")
        return self.prefix(self.n - 1)

    def prefix(self, k: int) -> "Graph":
        """Restriction to vertices 1..k (top-left submatrix)."""
        if not (1 <= k <= self.n):
            raise ValueError(f"prefix order {k} out of range")
        return Graph(k, self.bits & ((1 << num_slots(k)) - 1))

    def delete_vertex(self, v: int) -> "Graph":
        """Remove v and relabel vertices above it down by one."""
        keep = [u for u in range(1, self.n + 1) if u != v]
        relabel = {u: t for t, u in enumerate(keep, start=1)}
        return Graph.from_edges(
            self.n - 1,
            [(relabel[i], relabel[j]) for i, j in self.edges() if v not in (i, j)],
        )

    def delete_edge(self, i: int, j: int) -> "Graph":
        return Graph(self.n, self.bits & ~(1 << edge_slot(i, j)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


class PartialGraph:
    """Order-n graph with ternary edge slots: present, absent, or unassigned."""

    PRESENT = 1
    ABSENT = 0
    UNASSIGNED = -1

    __slots__ = ("n", "assign")

    def __init__(self, n: int):
        self.n = n
        self.assign = array("b", [-1] * num_slots(n))

    @classmethod
    def from_graph(cls, g: Graph) -> "PartialGraph":
        pg = cls(g.n)
        for t in range(num_slots(g.n)):
            pg.assign[t] = g.bits >> t & 1
        return pg

    def set_edge(self, i: int, j: int, value: int) -> None:
        self.assign[edge_slot(i, j)] = value

    def get_edge(self, i: int, j: int) -> int:
        return self.assign[edge_slot(i, j)]

    def complete_at(self, k: int) -> bool:
        """True iff every slot among vertices 1..k is assigned."""
        return all(v >= 0 for v in self.assign[: num_slots(k)])

    def prefix_graph(self, k: int) -> Graph:
        m = num_slots(k)
        if not self.complete_at(k):
            raise ValueError(f"prefix 1..{k} is not fully assigned")
        bits = 0
        for t in range(m):
            if self.assign[t] == 1:
                bits |= 1 << t
        return Graph(k, bits)

    def present_graph(self) -> Graph:
        """Graph of positively assigned edges only."""
        bits = 0
        for t, v in enumerate(self.assign):
            if v == 1:
                bits |= 1 << t
        return Graph(self.n, bits)


# ---------------------------------------------------------------------------
# permutations

def permute(g: Graph, p) -> Graph:
    """Relabel: result has edge {p[i-1], p[j-1]} iff g has edge {i, j}."""
    if len(p) != g.n:
        raise ValueError(f"permutation length {len(p)} != order {g.n}")
    if sorted(p) != list(range(1, g.n + 1)):
        raise ValueError("not a bijection on 1..n")
    bits = 0
    for i, j in g.edges():
        bits |= 1 << edge_slot(p[i - 1], p[j - 1])
    return Graph(g.n, bits)


def compose(q, p) -> tuple[int, ...]:
    """(q o p)(i) = q(p(i))."""
    return tuple(q[p[i] - 1] for i in range(len(p)))


# ---------------------------------------------------------------------------
# canonicity

def _column_values(g: Graph) -> list[int]:
    """col[j] = bits (1,j)..(j-1,j) of column j as an int, row 1 most significant."""
    col = [0] * (g.n + 1)
    for j in range(2, g.n + 1):
        v = 0
        for i in range(1, j):
            v = v << 1 | (g.bits >> edge_slot(i, j) & 1)
        col[j] = v
    return col


_GEN_CAP = 96  # automorphism generators kept for sibling pruning

#: sentinel returned when a budgeted canonicity search runs out of nodes
BUDGET_EXHAUSTED = object()


def _reducer_search(n, masks, col, autos, budget):
    """Branch-and-bound core behind find_lex_reducer.

    Places original vertices into matrix positions 1..n, comparing each
    permuted column against the original and descending only while equal.
    A strictly smaller column yields a reducer immediately; fully equal
    placements are automorphisms, recorded in `autos` and used to skip
    sibling candidates that an automorphism fixing the placed vertices maps
    onto an already-explored one.

    Returns the reducing placement (position -> vertex), None when no
    relabeling reduces, or BUDGET_EXHAUSTED after `budget` candidate
    evaluations (budget <= 0 means unlimited).
    """
    placement = [0] * n
    used = [False] * (n + 1)
    identity = list(range(1, n + 1))
    nodes = 0
    pairs = [(a, _invert(a)) for a in autos]

    def dfs(pos: int):
        nonlocal nodes
        if pos > n:
            if placement != identity and len(autos) < _GEN_CAP:
                a = tuple(placement)
                autos.append(a)
                pairs.append((a, _invert(a)))
            return None
        target = col[pos]
        prefix = placement[: pos - 1]
        fixing = [
            (a, ai)
            for a, ai in pairs
            if all(a[u - 1] == u for u in prefix)
        ]
        n_pairs = len(pairs)
        reached: set[int] = set()
        for v in range(1, n + 1):
            if used[v]:
                continue
            nodes += 1
            if budget > 0 and nodes > budget:
                return BUDGET_EXHAUSTED
            mv = masks[v]
            cand = 0
            for u in prefix:
                cand = cand << 1 | (mv >> u & 1)
            if cand > target:
                continue
            if cand < target:
                placement[pos - 1] = v
                rest = [u for u in range(1, n + 1) if not used[u] and u != v]
                return placement[:pos] + rest
            if v in reached:
                continue
            reached.add(v)
            for a, ai in fixing:
                reached.add(a[v - 1])
                reached.add(ai[v - 1])
            placement[pos - 1] = v
            used[v] = True
            found = dfs(pos + 1)
            used[v] = False
            if found is not None:
                return found
            if len(pairs) > n_pairs:
                # automorphisms found in the subtree prune later siblings
                for a, ai in pairs[n_pairs:]:
                    if all(a[u - 1] == u for u in prefix):
                        fixing.append((a, ai))
                        reached.update(
                            x for u in list(reached)
                            for x in (a[u - 1], ai[u - 1])
                        )
                n_pairs = len(pairs)
        return None

    return dfs(1)


def _invert(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x - 1] = i + 1
    return tuple(inv)


def _twin_transpositions(n: int, masks: list[int]):
    """Automorphisms swapping vertices with identical neighborhoods."""
    out = []
    for v in range(1, n + 1):
        for u in range(v + 1, n + 1):
            mu = masks[u] & ~(1 << v)
            mv = masks[v] & ~(1 << u)
            if mu == mv:
                a = list(range(1, n + 1))
                a[u - 1], a[v - 1] = v, u
                out.append(tuple(a))
                break  # one swap per v reaches the whole twin class
    return out


def lex_reducer_with_autos(g: Graph, seed_autos=(), node_budget: int = 0):
    """find_lex_reducer variant that also reports automorphism generators.

    seed_autos may carry known automorphisms of g (e.g. lifted from a
    parent prefix); they accelerate the search and are included, possibly
    extended, in the returned generator list.  A positive node_budget bounds
    the search; on exhaustion the reducer slot is BUDGET_EXHAUSTED and the
    caller must treat the graph as undecided.

    Returns (reducer permutation | None | BUDGET_EXHAUSTED, generators).
    """
    n = g.n
    if n == 1 or g.bits == 0 or g.bits == (1 << num_slots(n)) - 1:
        return None, ()

    # isolated vertices sort first in any lex-minimal labeling; peel them
    # off and recurse on the core, which keeps highly symmetric sparse
    # graphs (the common intermediate shape) cheap
    masks = g.adjacency_masks()
    isolated = [v for v in range(1, n + 1) if masks[v] == 0]
    r = len(isolated)
    if r:
        if isolated != list(range(1, r + 1)):
            p = [0] * n
            for t, v in enumerate(isolated, start=1):
                p[v - 1] = t
            rest = [v for v in range(1, n + 1) if masks[v]]
            for t, v in enumerate(rest, start=r + 1):
                p[v - 1] = t
            moved = permute(g, p)
            if moved.lex_key() < g.lex_key():
                return tuple(p), ()
        else:
            core = Graph.from_edges(
                n - r, [(i - r, j - r) for i, j in g.edges()]
            )
            seed_core = tuple(
                tuple(x - r for x in a[r:]) for a in seed_autos
                if all(a[t] == t + 1 for t in range(r))
            )
            red, gens = lex_reducer_with_autos(core, seed_core, node_budget)
            lift_gens = tuple(
                tuple(range(1, r + 1)) + tuple(x + r for x in a) for a in gens
            )
            if red is None or red is BUDGET_EXHAUSTED:
                return red, lift_gens
            lifted = tuple(range(1, r + 1)) + tuple(x + r for x in red)
            return lifted, lift_gens

    col = _column_values(g)
    autos = _twin_transpositions(n, masks)
    autos.extend(a for a in seed_autos if _is_automorphism(masks, a))
    q = _reducer_search(n, masks, col, autos, node_budget)
    if q is None or q is BUDGET_EXHAUSTED:
        return q, tuple(autos)
    p = [0] * n
    for t, v in enumerate(q):
        p[v - 1] = t + 1
    return tuple(p), tuple(autos)


def _is_automorphism(masks: list[int], a) -> bool:
    n = len(masks) - 1
    if len(a) != n:
        return False
    for v in range(1, n + 1):
        m = 0
        nb = masks[v]
        u = 1
        while nb >> u:
            if nb >> u & 1:
                m |= 1 << a[u - 1]
            u += 1
        if m != masks[a[v - 1]]:
            return False
    return True


def find_lex_reducer(g: Graph):
    """Search for a relabeling that strictly lex-decreases g's bit string.

    Returns a permutation tuple p (apply via permute) or None when g is
    canonical, i.e. no relabeling produces a smaller string.
    """
    return lex_reducer_with_autos(g)[0]


def is_canonical(g: Graph) -> bool:
    return find_lex_reducer(g) is None


# ---------------------------------------------------------------------------
# 010-colorability

def _triangles(g: Graph) -> list[tuple[int, int, int]]:
    masks = g.adjacency_masks()
    out = []
    for i, j, k in combinations(range(1, g.n + 1), 3):
        if masks[i] >> j & 1 and masks[i] >> k & 1 and masks[j] >> k & 1:
            out.append((i, j, k))
    return out


def find_010_coloring(g: Graph):
    """Return a coloring list (index 0 = vertex 1) with no adjacent 1-1 pair
    and no all-0 triangle, or None when no such coloring exists.

    Backtracking with unit-style forcing: a 1 forces 0 on neighbors, a
    triangle with two 0s forces 1 on the third vertex.
    """
    n = g.n
    masks = g.adjacency_masks()
    triangles = _triangles(g)
    tri_of = [[] for _ in range(n + 1)]
    for idx, (i, j, k) in enumerate(triangles):
        tri_of[i].append(idx)
        tri_of[j].append(idx)
        tri_of[k].append(idx)

    color = [-1] * (n + 1)
    order = sorted(range(1, n + 1), key=lambda v: -bin(masks[v]).count("1"))

    def propagate(queue, trail):
        while queue:
            v, c = queue.pop()
            if color[v] >= 0:
                if color[v] != c:
                    return False
                continue
            color[v] = c
            trail.append(v)
            if c == 1:
                m = masks[v]
                u = 1
                while m >> u:
                    if m >> u & 1 and color[u] != 0:
                        if color[u] == 1:
                            return False
                        queue.append((u, 0))
                    u += 1
            for idx in tri_of[v]:
                tri = triangles[idx]
                zeros = [u for u in tri if color[u] == 0]
                unset = [u for u in tri if color[u] < 0]
                if len(zeros) == 3:
                    return False
                if len(zeros) == 2 and len(unset) == 1:
                    queue.append((unset[0], 1))
        return True

    def solve() -> bool:
        v = next((u for u in order if color[u] < 0), 0)
        if v == 0:
            return True
        for c in (1, 0):
            trail: list[int] = []
            if propagate([(v, c)], trail) and solve():
                return True
            for u in trail:
                color[u] = -1
        return False

    if solve():
        return [color[v] if color[v] >= 0 else 0 for v in range(1, n + 1)]
    return None


def is_010_colorable(g: Graph) -> bool:
    return find_010_coloring(g) is not None


# ---------------------------------------------------------------------------
# subgraph search

def find_subgraph_injection(h: Graph, g):
    """Injective vertex map sending every edge of h to an edge of g.

    g may be a Graph or a PartialGraph (positively assigned edges count).
    Containment is not induced: non-edges of h are unconstrained.  Returns
    a dict {h vertex: g vertex} or None.
    """
    if isinstance(g, PartialGraph):
        g = g.present_graph()
    if h.n > g.n:
        return None
    hm = h.adjacency_masks()
    gm = g.adjacency_masks()
    hdeg = [bin(m).count("1") for m in hm]
    gdeg = [bin(m).count("1") for m in gm]

    # most-constrained-first: place vertices adjacent to already-placed ones
    order: list[int] = []
    pending = set(range(1, h.n + 1))
    while pending:
        best = max(
            pending,
            key=lambda v: (sum(1 for u in order if hm[v] >> u & 1), hdeg[v]),
        )
        order.append(best)
        pending.remove(best)

    image = {}
    used = [False] * (g.n + 1)

    def place(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        need = [u for u in image if hm[v] >> u & 1]
        for w in range(1, g.n + 1):
            if used[w] or gdeg[w] < hdeg[v]:
                continue
            if all(gm[w] >> image[u] & 1 for u in need):
                image[v] = w
                used[w] = True
                if place(idx + 1):
                    return True
                del image[v]
                used[w] = False
        return False

    if place(0):
        return dict(sorted(image.items()))
    return None


# ---------------------------------------------------------------------------
# graph6 codec

class GraphFormatError(ValueError):
    """Malformed graph6 text; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


_G6_HEADER = ">>graph6<<"


def graph6_encode(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = "~" + "".join(chr(63 + (n >> s & 63)) for s in (12, 6, 0))
    else:
        raise ValueError("order too large for graph6")
    m = num_slots(n)
    chunks = []
    for base in range(0, m, 6):
        b = 0
        for t in range(6):
            if base + t < m and g.bits >> (base + t) & 1:
                b |= 1 << (5 - t)
        chunks.append(chr(b + 63))
    return head + "".join(chunks)


def graph6_decode(text: str) -> Graph:
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):].strip()
    if not s:
        raise GraphFormatError("empty graph6 string", 0)
    vals = []
    for pos, ch in enumerate(s):
        v = ord(ch) - 63
        if not (0 <= v <= 63):
            raise GraphFormatError(f"character {ch!r} out of graph6 range", pos)
        vals.append(v)
    if vals[0] < 63:
        n, body = vals[0], vals[1:]
    else:
        if len(vals) < 4 or vals[1] == 63:
            raise GraphFormatError("truncated long-form order", 1)
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        body = vals[4:]
    if n < 1:
        raise GraphFormatError(f"order {n} out of range", 0)
    m = num_slots(n)
    if len(body) != (m + 5) // 6:
        raise GraphFormatError(
            f"expected {(m + 5) // 6} payload bytes for order {n}, got {len(body)}",
            len(s) - 1,
        )
    bits = 0
    for c, v in enumerate(body):
        for t in range(6):
            idx = 6 * c + t
            if v >> (5 - t) & 1:
                if idx >= m:
                    raise GraphFormatError("nonzero padding bits", len(s) - 1)
                bits |= 1 << idx
    return Graph(n, bits)


def graph6_load(path) -> list[Graph]:
    """Read one graph per non-comment line."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("c "):
                out.append(graph6_decode(line))
    return out


def graph6_dump(path, graphs) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for g in graphs:
            fh.write(graph6_encode(g) + "\n")
