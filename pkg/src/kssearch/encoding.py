"""CNF generation for the graph search.

Variable numbering is frozen here and everything downstream (cubes, proofs,
witness records) depends on it:

  * edge variables come first, e(i,j) = (j-2)(j-1)/2 + i for i < j, which is
    column-major over the upper triangle (same order as Graph slots);
  * triangle variables follow, t(i,j,k) ranked colexicographically;
  * auxiliary variables for the row-ordering constraints come last, one
    block per vertex pair.

Subsets are always enumerated in colex order, so identical inputs produce
byte-identical DIMACS output.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb

from .graphs import Graph, num_slots

__all__ = [
    "VarMap",
    "CnfFormula",
    "EncodeOptions",
    "encode_triangle_defs",
    "encode_squarefree",
    "encode_min_degree",
    "encode_triangle_membership",
    "encode_noncolorability",
    "encode_lex_symmetry",
    "assemble",
]


def _colex(iterable, k):
    return sorted(combinations(iterable, k), key=lambda t: t[::-1])


class VarMap:
    """Bijection between edge/triangle/auxiliary variables and DIMACS indices."""

    def __init__(self, n: int, triangles: bool = True, aux_pairs: bool = False):
        self.n = n
        self.edge_count = num_slots(n)
        self.triangle_count = comb(n, 3) if triangles else 0
        self.aux_per_pair = max(n - 3, 0) if aux_pairs else 0
        self.aux_count = self.aux_per_pair * self.edge_count if aux_pairs else 0
        self.var_count = self.edge_count + self.triangle_count + self.aux_count

    def edge_var(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if not (1 <= i < j <= self.n):
            raise ValueError(f"edge ({i},{j}) out of range")
        return (j - 2) * (j - 1) // 2 + i

    def triangle_var(self, i: int, j: int, k: int) -> int:
        i, j, k = sorted((i, j, k))
        if not (1 <= i < j < k <= self.n) or not self.triangle_count:
            raise ValueError(f"triangle ({i},{j},{k}) unavailable")
        rank = comb(k - 1, 3) + comb(j - 1, 2) + comb(i - 1, 1)
        return self.edge_count + rank + 1

    def aux_var(self, i: int, j: int, idx: int) -> int:
        """idx-th auxiliary (1-based) of the row-pair (i,j) block."""
        if i > j:
            i, j = j, i
        if not (1 <= idx <= self.aux_per_pair):
            raise ValueError(f"aux index {idx} out of range")
        base = self.edge_count + self.triangle_count
        return base + (self.edge_var(i, j) - 1) * self.aux_per_pair + idx

    def is_edge_var(self, v: int) -> bool:
        return 1 <= v <= self.edge_count

    def decode_graph(self, model_lits) -> Graph:
        """Build the graph selected by the edge literals of a model."""
        bits = 0
        for lit in model_lits:
            v = abs(lit)
            if lit > 0 and self.is_edge_var(v):
                bits |= 1 << (v - 1)
        return Graph(self.n, bits)

    def graph_lits(self, g: Graph) -> list[int]:
        """Every edge variable, signed by its value in g."""
        return [
            (v if g.bits >> (v - 1) & 1 else -v)
            for v in range(1, self.edge_count + 1)
        ]

    def write_map(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"p map {self.n} {self.var_count}\n")
            for j in range(2, self.n + 1):
                for i in range(1, j):
                    fh.write(f"e {i} {j} {self.edge_var(i, j)}\n")
            if self.triangle_count:
                for i, j, k in _colex(range(1, self.n + 1), 3):
                    fh.write(f"t {i} {j} {k} {self.triangle_var(i, j, k)}\n")
            if self.aux_per_pair:
                for i, j in _colex(range(1, self.n + 1), 2):
                    for idx in range(1, self.aux_per_pair + 1):
                        fh.write(f"a {i} {j} {idx} {self.aux_var(i, j, idx)}\n")


@dataclass
class CnfFormula:
    var_count: int
    clauses: list[list[int]] = field(default_factory=list)

    def add(self, clause) -> None:
        self.clauses.append(list(clause))

    def extend(self, other: "CnfFormula") -> None:
        self.var_count = max(self.var_count, other.var_count)
        self.clauses.extend(other.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def validate(self) -> None:
        for c in self.clauses:
            seen = set(c)
            if any(-lit in seen for lit in c):
                raise ValueError(f"tautological clause {c}")
            if any(lit == 0 or abs(lit) > self.var_count for lit in c):
                raise ValueError(f"literal out of range in {c}")

    def write_dimacs(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"p cnf {self.var_count} {len(self.clauses)}\n")
            for c in self.clauses:
                fh.write(" ".join(map(str, c)) + " 0\n")

    @classmethod
    def read_dimacs(cls, path) -> "CnfFormula":
        var_count = 0
        clauses = []
        pending: list[int] = []
        with open(path, "r", encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("c"):
                    continue
                if line.startswith("p"):
                    parts = line.split()
                    var_count = int(parts[2])
                    continue
                for tok in line.split():
                    lit = int(tok)
                    if lit == 0:
                        clauses.append(pending)
                        pending = []
                    else:
                        pending.append(lit)
        if pending:
            raise ValueError("unterminated clause at end of file")
        return cls(var_count, clauses)


def encode_triangle_defs(n: int, varmap: VarMap | None = None) -> CnfFormula:
    """t(i,j,k) <-> the three edges of the triple; 4 clauses per triple."""
    vm = varmap or VarMap(n)
    f = CnfFormula(vm.var_count)
    for i, j, k in _colex(range(1, n + 1), 3):
        t = vm.triangle_var(i, j, k)
        eij, eik, ejk = vm.edge_var(i, j), vm.edge_var(i, k), vm.edge_var(j, k)
        f.add([-t, eij])
        f.add([-t, eik])
        f.add([-t, ejk])
        f.add([-eij, -eik, -ejk, t])
    return f


def encode_squarefree(n: int, varmap: VarMap | None = None) -> CnfFormula:
    """Forbid the three 4-cycles on every 4-subset; 3 C(n,4) clauses."""
    vm = varmap or VarMap(n)
    f = CnfFormula(vm.var_count)
    e = vm.edge_var
    for i, j, k, l in _colex(range(1, n + 1), 4):
        f.add([-e(i, j), -e(j, k), -e(k, l), -e(l, i)])
        f.add([-e(i, j), -e(j, l), -e(l, k), -e(k, i)])
        f.add([-e(i, l), -e(l, j), -e(j, k), -e(k, i)])
    return f


def encode_min_degree(n: int, d: int, varmap: VarMap | None = None) -> CnfFormula:
    """Each vertex has >= d neighbors: one clause per (n-d)-subset of others."""
    if not (1 <= d < n):
        raise ValueError(f"degree bound {d} must satisfy 1 <= d < n")
    vm = varmap or VarMap(n)
    f = CnfFormula(vm.var_count)
    for i in range(1, n + 1):
        others = [v for v in range(1, n + 1) if v != i]
        for subset in _colex(others, n - d):
            f.add([vm.edge_var(i, j) for j in subset])
    return f


def encode_triangle_membership(n: int, varmap: VarMap | None = None) -> CnfFormula:
    """Every vertex lies in some triangle: n clauses of C(n-1,2) literals."""
    vm = varmap or VarMap(n)
    f = CnfFormula(vm.var_count)
    for i in range(1, n + 1):
        others = [v for v in range(1, n + 1) if v != i]
        f.add([vm.triangle_var(i, j, k) for j, k in _colex(others, 2)])
    return f


def encode_noncolorability(
    n: int, truncate: bool = True, varmap: VarMap | None = None
) -> CnfFormula:
    """One clause per coloring ruling it out as a valid 010-coloring.

    The clause for a coloring with 1-side V1 and 0-side V0 requires an edge
    inside V1 or a triangle inside V0.  With truncation only colorings with
    |V1| < ceil(n/2) are emitted; degenerate colorings may produce the empty
    clause, which is emitted as-is.
    """
    vm = varmap or VarMap(n)
    f = CnfFormula(vm.var_count)
    limit = (n + 1) // 2 if truncate else n + 1
    vertices = range(1, n + 1)
    for size in range(0, limit):
        for ones in _colex(vertices, size):
            v1 = set(ones)
            v0 = [v for v in vertices if v not in v1]
            clause = [vm.edge_var(i, j) for i, j in _colex(sorted(v1), 2)]
            clause += [vm.triangle_var(i, j, k) for i, j, k in _colex(v0, 3)]
            f.add(clause)
    return f


def encode_lex_symmetry(n: int, varmap: VarMap | None = None) -> CnfFormula:
    """Rows of the adjacency matrix ordered pairwise lexicographically.

    For each vertex pair i < j, row i (without columns i and j) must be
    lexicographically <= row j over the shared n-2 positions, chained
    through one fresh block of n-3 auxiliary variables.
    """
    vm = varmap or VarMap(n, aux_pairs=True)
    if vm.aux_per_pair != max(n - 3, 0):
        raise ValueError("varmap lacks auxiliary blocks")
    f = CnfFormula(vm.var_count)
    if n < 3:
        return f
    for i, j in _colex(range(1, n + 1), 2):
        shared = [c for c in range(1, n + 1) if c not in (i, j)]
        x = [vm.edge_var(i, c) for c in shared]
        y = [vm.edge_var(j, c) for c in shared]
        a = [vm.aux_var(i, j, idx) for idx in range(1, vm.aux_per_pair + 1)]
        m = len(shared)
        for k in range(1, m):
            prev = [-a[k - 2]] if k >= 2 else []
            f.add([-x[k - 1], y[k - 1]] + prev)
            f.add([-x[k - 1], a[k - 1]] + prev)
            f.add([y[k - 1], a[k - 1]] + prev)
        tail = [-a[m - 2]] if m >= 2 else []
        f.add([-x[m - 1], y[m - 1]] + tail)
    return f


@dataclass(frozen=True)
class EncodeOptions:
    """Constraint family selection for assemble()."""

    squarefree: bool = True
    min_degree: int | None = 3
    triangle_defs: bool = True
    triangle_membership: bool = True
    noncolorability: bool = True
    truncate: bool = True
    lex_symmetry: bool = True

    @classmethod
    def ks(cls, min_degree: int = 3, truncate: bool = True) -> "EncodeOptions":
        """Full search instance."""
        return cls(min_degree=min_degree, truncate=truncate)

    @classmethod
    def enumeration(cls, min_degree: int = 2) -> "EncodeOptions":
        """Squarefree + minimum-degree enumeration instance."""
        return cls(
            squarefree=True,
            min_degree=min_degree,
            triangle_defs=False,
            triangle_membership=False,
            noncolorability=False,
            lex_symmetry=False,
        )

    @classmethod
    def cubing(cls, min_degree: int = 3) -> "EncodeOptions":
        """Reduced instance for the splitting phase: no coloring clauses."""
        return cls(min_degree=min_degree, noncolorability=False)

    def without_noncolorability(self) -> "EncodeOptions":
        return replace(self, noncolorability=False)


def assemble(n: int, options: EncodeOptions) -> tuple[CnfFormula, VarMap]:
    """Concatenate the selected constraint families over one variable map.

    Families are emitted in a fixed order (triangle definitions, squarefree,
    minimum degree, triangle membership, noncolorability, row ordering) so
    the output is deterministic.
    """
    needs_triangles = options.triangle_membership or options.noncolorability
    if needs_triangles and not options.triangle_defs:
        raise ValueError(
            "triangle variables are referenced but triangle_defs is disabled"
        )
    if options.min_degree is not None and not (1 <= options.min_degree < n):
        raise ValueError(f"min_degree {options.min_degree} invalid for order {n}")
    vm = VarMap(n, triangles=options.triangle_defs, aux_pairs=options.lex_symmetry)
    f = CnfFormula(vm.var_count)
    if options.triangle_defs and n >= 3:
        f.extend(encode_triangle_defs(n, vm))
    if options.squarefree and n >= 4:
        f.extend(encode_squarefree(n, vm))
    if options.min_degree is not None:
        f.extend(encode_min_degree(n, options.min_degree, vm))
    if options.triangle_membership and n >= 3:
        f.extend(encode_triangle_membership(n, vm))
    if options.noncolorability:
        f.extend(encode_noncolorability(n, options.truncate, vm))
    if options.lex_symmetry:
        f.extend(encode_lex_symmetry(n, vm))
    return f, vm
