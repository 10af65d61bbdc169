"""Isomorph-free generation callbacks.

The propagator sits between the solver and the graph machinery: whenever a
vertex prefix of the adjacency matrix becomes fully assigned it checks the
prefix for lex-canonicity and, if a relabeling strictly reduces it, answers
with a blocking clause over the prefix slots plus the relabeling as
witness.  At full assignments it scans a library of minimal unembeddable
graphs and blocks any model containing one, with the injection as witness.

Canonicity results are cached per prefix bitset, and automorphism
generators discovered for a prefix seed the check of its extension, which
keeps repeated work low across the solver's backtracking.  Prefix checks
run under a node budget: an undecided check simply skips blocking (the
search stays correct, only pruning weakens), while full-order checks are
exact so every enumerated candidate is truly canonical.
"""

from __future__ import annotations

import logging

from .certificates import (
    KIND_NONCANONICAL,
    KIND_SUBGRAPH,
    TrustedJustification,
)
from .encoding import VarMap
from .graphs import (
    BUDGET_EXHAUSTED,
    Graph,
    find_subgraph_injection,
    graph6_decode,
    graph6_encode,
    lex_reducer_with_autos,
    num_slots,
)

__all__ = ["OrderlyPropagator", "UnembeddableLibrary", "prefix_block_lits"]

log = logging.getLogger(__name__)

DEFAULT_PREFIX_BUDGET = 20_000
_CACHE_LIMIT = 400_000


def prefix_block_lits(prefix: Graph) -> list[int]:
    """The clause falsified exactly by assignments extending this prefix."""
    lits = []
    for t in range(num_slots(prefix.n)):
        var = t + 1
        lits.append(-var if prefix.bits >> t & 1 else var)
    return lits


class UnembeddableLibrary:
    """Minimal unembeddable graphs, smallest first, as loaded from disk."""

    def __init__(self, graphs: list[Graph], source: str = "<memory>"):
        self.graphs = sorted(graphs, key=lambda g: (g.n, graph6_encode(g)))
        self.source = source

    def __len__(self) -> int:
        return len(self.graphs)

    def counts_by_order(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.graphs:
            out[g.n] = out.get(g.n, 0) + 1
        return out

    @classmethod
    def empty(cls) -> "UnembeddableLibrary":
        return cls([], source="<empty>")

    def write(self, path) -> None:
        counts = self.counts_by_order()
        with open(path, "w", encoding="ascii") as fh:
            for order in sorted(counts):
                fh.write(f"c order {order} count {counts[order]}\n")
                for g in self.graphs:
                    if g.n == order:
                        fh.write(graph6_encode(g) + "\n")


def load_library(path, max_order: int = 12, expected_counts=None):
    """Read a library file: "c order <k> count <m>" headers + graph6 lines.

    Per-order counts must match the headers; orders above max_order are
    rejected.  An empty file yields an empty library with a warning.
    """
    graphs: list[Graph] = []
    declared: dict[int, int] = {}
    current_order = None
    with open(path, "r", encoding="ascii") as fh:
        for number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("c "):
                toks = line.split()
                if len(toks) == 5 and toks[1] == "order" and toks[3] == "count":
                    current_order = int(toks[2])
                    declared[current_order] = int(toks[4])
                continue
            g = graph6_decode(line)
            if g.n > max_order:
                raise ValueError(
                    f"{path}:{number}: order {g.n} exceeds limit {max_order}"
                )
            if current_order is not None and g.n != current_order:
                raise ValueError(
                    f"{path}:{number}: graph of order {g.n} under header "
                    f"for order {current_order}"
                )
            graphs.append(g)
    lib = UnembeddableLibrary(graphs, source=str(path))
    actual = lib.counts_by_order()
    if declared and actual != declared:
        raise ValueError(
            f"{path}: declared counts {declared} != actual {actual}"
        )
    if expected_counts is not None and actual != dict(expected_counts):
        raise ValueError(
            f"{path}: counts {actual} do not match manifest {expected_counts}"
        )
    if not graphs:
        log.warning("library %s is empty; no subgraph blocking", path)
    return lib


class OrderlyPropagator:
    """Solver callbacks implementing canonicity and subgraph blocking."""

    def __init__(
        self,
        varmap: VarMap,
        library: UnembeddableLibrary | None = None,
        prefix_budget: int = DEFAULT_PREFIX_BUDGET,
        prefix_subgraphs: bool = False,
        min_prefix: int = 3,
    ):
        self.varmap = varmap
        self.library = library or UnembeddableLibrary.empty()
        self.prefix_budget = prefix_budget
        self.prefix_subgraphs = prefix_subgraphs
        self.min_prefix = min_prefix
        self._cache: dict[tuple[int, int], tuple] = {}
        self.stats_blocked_prefixes = 0
        self.stats_blocked_models = 0
        self.stats_budget_misses = 0

    def _check_canonical(self, prefix: Graph, k: int):
        key = (k, prefix.bits)
        hit = self._cache.get(key)
        if hit is not None:
            return hit[0]
        parent_key = (k - 1, prefix.bits & ((1 << num_slots(k - 1)) - 1))
        parent = self._cache.get(parent_key)
        seeds = ()
        if parent is not None:
            seeds = tuple(a + (k,) for a in parent[1])
        budget = self.prefix_budget if k < self.varmap.n else 0
        reducer, gens = lex_reducer_with_autos(prefix, seeds, budget)
        if len(self._cache) >= _CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = (reducer, gens)
        return reducer

    def on_assignment(self, prefix: Graph, k: int):
        """Blocking clause + witness for a noncanonical complete prefix."""
        if k >= self.min_prefix:
            reducer = self._check_canonical(prefix, k)
            if reducer is BUDGET_EXHAUSTED:
                self.stats_budget_misses += 1
            elif reducer is not None:
                self.stats_blocked_prefixes += 1
                just = TrustedJustification(KIND_NONCANONICAL, reducer)
                return prefix_block_lits(prefix), just
        if self.prefix_subgraphs and len(self.library):
            hit = self._subgraph_block(prefix)
            if hit is not None:
                return hit
        return None

    def on_model(self, g: Graph):
        """Blocking clause + witness when the model contains a library graph."""
        hit = self._subgraph_block(g)
        if hit is not None:
            self.stats_blocked_models += 1
        return hit

    def _subgraph_block(self, g: Graph):
        for libid, h in enumerate(self.library.graphs):
            if h.n > g.n:
                break
            image = find_subgraph_injection(h, g)
            if image is not None:
                lits = [
                    -self.varmap.edge_var(image[a], image[b])
                    for a, b in h.edges()
                ]
                payload = (libid, tuple(image[v] for v in range(1, h.n + 1)))
                return lits, TrustedJustification(KIND_SUBGRAPH, payload)
        return None
