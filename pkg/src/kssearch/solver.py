"""Conflict-driven clause-learning engine with model enumeration.

The solver enumerates every satisfying assignment of a CNF instance,
projected to the edge variables of a VarMap.  An optional propagator is
consulted at each propagation fixpoint (with the newest fully assigned
vertex prefix) and at full assignments; it may answer with a blocking
clause plus the external evidence justifying it.  Blocking clauses and the
per-model candidate blocks enter the clause database as permanent trusted
clauses and are logged to the proof with their witnesses, so a finished run
certifies that the enumeration is exhaustive.

Decisions are restricted to edge variables (triangle and auxiliary
variables are functionally determined by propagation); the heuristic is
activity-ordered with phase saving, with ties broken toward the lowest
variable index so the search completes vertex prefixes early.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from heapq import heappop, heappush

from .certificates import (
    ProofBudgetExceeded,
    ProofWriter,
    TrustedJustification,
)
from .encoding import CnfFormula, VarMap
from .graphs import Graph, num_slots

__all__ = ["Solver", "SolveOutcome", "SolverStats", "evaluate_on_graph"]

EXHAUSTED = "exhausted"
ABORTED = "aborted"

_LUBY_BASE = 256


def _luby(i: int) -> int:
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while i != (1 << k) - 1:
        i = i - (1 << k) + 1
        k = 1
        while (1 << (k + 1)) - 1 <= i:
            k += 1
    return 1 << (k - 1)


@dataclass
class SolverStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    propagator_calls: int = 0
    restarts: int = 0
    models: int = 0
    learned: int = 0
    deleted: int = 0


@dataclass
class SolveOutcome:
    status: str
    candidates: list[Graph] = field(default_factory=list)
    stats: SolverStats = field(default_factory=SolverStats)
    abort_reason: str | None = None
    proof_bytes: int = 0


class Solver:
    def __init__(
        self,
        formula: CnfFormula,
        varmap: VarMap,
        propagator=None,
        proof: ProofWriter | None = None,
        conflict_budget: int = 0,
        decide: str = "activity",
        candidate_sink=None,
    ):
        self.varmap = varmap
        self.propagator = propagator
        self.proof = proof
        self.conflict_budget = conflict_budget
        self.decide_mode = decide
        self.candidate_sink = candidate_sink
        self.stats = SolverStats()

        nv = formula.var_count
        self.nvars = nv
        self.assign = [0] * (2 * nv + 1)  # index lit+nv -> 1 true, -1 false
        self.level = [0] * (nv + 1)
        self.reason: list = [None] * (nv + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list] = [[] for _ in range(2 * nv + 1)]
        self.seen = bytearray(nv + 1)

        ev = varmap.edge_count
        self.edge_count = ev
        self.activity = [0.0] * (nv + 1)
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = [(0.0, v) for v in range(1, ev + 1)]
        self.phase = bytearray(nv + 1)  # saved phase, 0 = false first

        self.learnts: list[list[int]] = []
        self.permanent: list[list[int]] = []  # trusted clauses, never deleted
        self.cla_act: dict[int, float] = {}
        self.cla_inc = 1.0
        self.max_learnts = 4000

        # prefix bookkeeping for the propagator
        self.fue = 1  # lowest unassigned edge variable
        self.checked_k = 1  # largest prefix already offered to the propagator
        self.fue_snap: list[int] = []
        self.checked_snap: list[int] = []

        self.root_conflict = False
        for clause in formula.clauses:
            self._add_original(clause)

    # ------------------------------------------------------------------
    # clause database

    def _add_original(self, lits) -> None:
        c = sorted(set(lits), key=abs)
        if any(-l in c for l in c):
            return  # tautology never participates
        if not c:
            self.root_conflict = True
            return
        if len(c) == 1:
            self._enqueue_root(c[0])
            return
        clause = list(c)
        self.watches[clause[0] + self.nvars].append(clause)
        self.watches[clause[1] + self.nvars].append(clause)

    def _enqueue_root(self, lit: int) -> None:
        nv = self.nvars
        val = self.assign[lit + nv]
        if val < 0:
            self.root_conflict = True
        elif val == 0:
            self.assign[lit + nv] = 1
            self.assign[-lit + nv] = -1
            self.level[abs(lit)] = 0
            self.trail.append(lit)

    def _attach(self, clause: list[int]) -> None:
        nv = self.nvars
        self.watches[clause[0] + nv].append(clause)
        self.watches[clause[1] + nv].append(clause)

    # ------------------------------------------------------------------
    # assignment management

    @property
    def decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason) -> None:
        nv = self.nvars
        self.assign[lit + nv] = 1
        self.assign[-lit + nv] = -1
        v = abs(lit)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _new_level(self) -> None:
        self.trail_lim.append(len(self.trail))
        self.fue_snap.append(self.fue)
        self.checked_snap.append(self.checked_k)

    def _backjump(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        bound = self.trail_lim[target]
        nv = self.nvars
        assign = self.assign
        trail = self.trail
        phase = self.phase
        heap = self.heap
        activity = self.activity
        ec = self.edge_count
        for idx in range(len(trail) - 1, bound - 1, -1):
            lit = trail[idx]
            v = abs(lit)
            assign[lit + nv] = 0
            assign[-lit + nv] = 0
            phase[v] = 1 if lit > 0 else 0
            self.reason[v] = None
            if v <= ec:
                heappush(heap, (-activity[v], v))
        del trail[bound:]
        self.qhead = min(self.qhead, bound)
        self.fue = self.fue_snap[target]
        self.checked_k = self.checked_snap[target]
        del self.trail_lim[target:]
        del self.fue_snap[target:]
        del self.checked_snap[target:]

    # ------------------------------------------------------------------
    # propagation

    def propagate(self):
        """Unit propagation to fixpoint; returns a conflicting clause or None."""
        nv = self.nvars
        assign = self.assign
        watches = self.watches
        trail = self.trail
        stats = self.stats
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            stats.propagations += 1
            np = -p
            ws = watches[np + nv]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == np:
                    c[0] = c[1]
                    c[1] = np
                first = c[0]
                fv = assign[first + nv]
                if fv > 0:
                    ws[j] = c
                    j += 1
                    continue
                found = False
                for t in range(2, len(c)):
                    lit = c[t]
                    if assign[lit + nv] >= 0:
                        c[1] = lit
                        c[t] = np
                        watches[lit + nv].append(c)
                        found = True
                        break
                if found:
                    continue
                ws[j] = c
                j += 1
                if fv < 0:
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return c
                self.assign[first + nv] = 1
                self.assign[-first + nv] = -1
                v = first if first > 0 else -first
                self.level[v] = len(self.trail_lim)
                self.reason[v] = c
                trail.append(first)
            del ws[j:]
        return None

    # ------------------------------------------------------------------
    # conflict analysis

    def _bump_var(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > 1e100:
            scale = 1e-100
            for u in range(1, self.nvars + 1):
                self.activity[u] *= scale
            self.var_inc *= scale
        if v <= self.edge_count and self.assign[v + self.nvars] == 0:
            heappush(self.heap, (-self.activity[v], v))

    def analyze(self, confl) -> tuple[list[int], int]:
        """1UIP learning; returns (learnt clause, backjump level)."""
        seen = self.seen
        level = self.level
        trail = self.trail
        current = len(self.trail_lim)
        learnt = [0]
        path = 0
        idx = len(trail) - 1
        p = 0
        c = confl
        to_clear = []
        while True:
            for q in c:
                if q == p:
                    continue
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if level[v] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            cid = id(c)
            if cid in self.cla_act:
                self.cla_act[cid] += self.cla_inc
            while not seen[abs(trail[idx])]:
                idx -= 1
            plit = trail[idx]
            v = abs(plit)
            seen[v] = 0
            idx -= 1
            path -= 1
            if path == 0:
                learnt[0] = -plit
                break
            c = self.reason[v]
            p = plit
        for v in to_clear:
            seen[v] = 0
        if len(learnt) == 1:
            bj = 0
        else:
            # move a literal of the highest remaining level to slot 1
            best = 1
            for t in range(2, len(learnt)):
                if level[abs(learnt[t])] > level[abs(learnt[best])]:
                    best = t
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bj = level[abs(learnt[1])]
        self.var_inc /= 0.95
        self.cla_inc /= 0.999
        return learnt, bj

    def _record_learnt(self, learnt: list[int], bj: int) -> None:
        if self.proof is not None:
            self.proof.add_clause(learnt)
        self.stats.learned += 1
        self._backjump(bj)
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
        else:
            self.learnts.append(learnt)
            self.cla_act[id(learnt)] = self.cla_inc
            self._attach(learnt)
            self._enqueue(learnt[0], learnt)

    def _detach(self, c: list[int]) -> None:
        for lit in (c[0], c[1]):
            ws = self.watches[lit + self.nvars]
            for t in range(len(ws)):
                if ws[t] is c:
                    ws[t] = ws[-1]
                    ws.pop()
                    break

    def _reduce_db(self) -> None:
        locked = {
            id(self.reason[abs(l)]) for l in self.trail if self.reason[abs(l)]
        }
        ranked = sorted(self.learnts, key=lambda c: self.cla_act.get(id(c), 0.0))
        keep_from = len(ranked) // 2
        kept = []
        for t, c in enumerate(ranked):
            if t < keep_from and id(c) not in locked and len(c) > 2:
                self._detach(c)
                self.cla_act.pop(id(c), None)
                if self.proof is not None:
                    self.proof.delete_clause(c)
                self.stats.deleted += 1
            else:
                kept.append(c)
        self.learnts = kept
        self.max_learnts += 512

    # ------------------------------------------------------------------
    # trusted clauses from the propagator / model blocking

    def _add_trusted(self, lits: list[int], just: TrustedJustification):
        """Install an externally justified clause; must be currently falsified.

        Returns the clause, backjumped so that it is in a conflicting state
        at its highest decision level, ready for analyze().
        """
        nv = self.nvars
        if any(self.assign[l + nv] >= 0 for l in lits):
            raise RuntimeError("propagator returned a non-falsified clause")
        if self.proof is not None:
            self.proof.trusted_clause(lits, just)
        clause = list(lits)
        if len(clause) >= 2:
            # watch the two deepest literals so the clause wakes correctly
            # after backjumping
            clause.sort(key=lambda l: -self.level[abs(l)])
            self._attach(clause)
            self.permanent.append(clause)
        maxlev = max(self.level[abs(l)] for l in clause) if clause else 0
        self._backjump(maxlev)
        return clause

    # ------------------------------------------------------------------
    # propagator cadence

    def _advance_fue(self) -> None:
        nv = self.nvars
        fue = self.fue
        ec = self.edge_count
        assign = self.assign
        while fue <= ec and assign[fue + nv] != 0:
            fue += 1
        self.fue = fue

    def _prefix_graph(self, k: int) -> Graph:
        nv = self.nvars
        assign = self.assign
        bits = 0
        for t in range(num_slots(k)):
            if assign[t + 1 + nv] > 0:
                bits |= 1 << t
        return Graph(k, bits)

    def _run_prefix_hooks(self):
        """Offer newly completed prefixes to the propagator.

        Returns a (clause, justification) pair when some prefix is blocked.
        """
        n = self.varmap.n
        self._advance_fue()
        while self.checked_k < n and num_slots(self.checked_k + 1) < self.fue:
            k = self.checked_k + 1
            self.stats.propagator_calls += 1
            hit = self.propagator.on_assignment(self._prefix_graph(k), k)
            if hit is not None:
                return hit
            self.checked_k = k
        return None

    def _model_graph(self) -> Graph:
        nv = self.nvars
        bits = 0
        for t in range(self.edge_count):
            if self.assign[t + 1 + nv] > 0:
                bits |= 1 << t
        return Graph(self.varmap.n, bits)

    # ------------------------------------------------------------------
    # decision

    def _pick_branch(self) -> int:
        nv = self.nvars
        heap = self.heap
        assign = self.assign
        if self.decide_mode == "lex":
            self._advance_fue()
            return self.fue if self.fue <= self.edge_count else 0
        while heap:
            _, v = heappop(heap)
            if assign[v + nv] == 0:
                return v
        return 0

    # ------------------------------------------------------------------
    # main loop

    def solve_all(self) -> SolveOutcome:
        out = SolveOutcome(status=ABORTED, stats=self.stats)
        try:
            out = self._solve_all()
        except ProofBudgetExceeded:
            out = SolveOutcome(
                status=ABORTED, stats=self.stats, abort_reason="proof_budget"
            )
        except OSError as exc:
            out = SolveOutcome(
                status=ABORTED, stats=self.stats, abort_reason=f"proof_io: {exc}"
            )
        if self.proof is not None:
            out.proof_bytes = self.proof.bytes_written
        return out

    def _finish_exhausted(self, candidates) -> SolveOutcome:
        if self.proof is not None:
            self.proof.add_clause([])
        return SolveOutcome(
            status=EXHAUSTED, candidates=candidates, stats=self.stats
        )

    def _solve_all(self) -> SolveOutcome:
        candidates: list[Graph] = []
        stats = self.stats
        restart_count = 0
        conflicts_until_restart = _LUBY_BASE * _luby(restart_count)
        conflicts_at_level0 = 0

        if self.root_conflict:
            return self._finish_exhausted(candidates)

        while True:
            confl = self.propagate()
            if confl is not None:
                stats.conflicts += 1
                conflicts_until_restart -= 1
                if self.conflict_budget and stats.conflicts > self.conflict_budget:
                    return SolveOutcome(
                        status=ABORTED,
                        candidates=candidates,
                        stats=stats,
                        abort_reason="conflict_budget",
                    )
                if not self.trail_lim:
                    return self._finish_exhausted(candidates)
                learnt, bj = self.analyze(confl)
                self._record_learnt(learnt, bj)
                continue

            if self.propagator is not None:
                hit = self._run_prefix_hooks()
                if hit is not None:
                    clause, just = hit
                    clause = self._add_trusted(clause, just)
                    if not self.trail_lim:
                        # blocked a root-forced prefix: nothing else remains
                        return self._finish_exhausted(candidates)
                    learnt, bj = self.analyze(clause)
                    self._record_learnt(learnt, bj)
                    continue

            if len(self.learnts) > self.max_learnts:
                self._reduce_db()

            v = self._pick_branch()
            if v == 0:
                g = self._model_graph()
                stats.models += 1
                hit = self.propagator.on_model(g) if self.propagator else None
                if hit is None:
                    candidates.append(g)
                    if self.candidate_sink is not None:
                        self.candidate_sink(g)
                    lits = [-l for l in self.varmap.graph_lits(g)]
                    just = TrustedJustification.for_candidate(g)
                else:
                    lits, just = hit
                clause = self._add_trusted(lits, just)
                if not self.trail_lim:
                    # the blocked assignment was forced at the root
                    return self._finish_exhausted(candidates)
                learnt, bj = self.analyze(clause)
                self._record_learnt(learnt, bj)
                continue

            if conflicts_until_restart <= 0:
                stats.restarts += 1
                restart_count += 1
                conflicts_until_restart = _LUBY_BASE * _luby(restart_count)
                self._backjump(0)
                continue

            stats.decisions += 1
            self._new_level()
            lit = v if self.phase[v] else -v
            self._enqueue(lit, None)


def evaluate_on_graph(formula: CnfFormula, varmap: VarMap, g: Graph) -> bool:
    """Check a graph against an instance by direct clause evaluation.

    Triangle variables take their defined values; auxiliary chain variables
    are completed greedily (forced true only while the compared prefixes
    stay equal), matching the convention used by the search.
    """
    values = _completion(varmap, g)
    return all(
        any(values[abs(l)] == (l > 0) for l in clause)
        for clause in formula.clauses
    )


def _completion(varmap: VarMap, g: Graph) -> dict[int, bool]:
    from itertools import combinations

    values: dict[int, bool] = {}
    n = varmap.n
    for j in range(2, n + 1):
        for i in range(1, j):
            values[varmap.edge_var(i, j)] = g.has_edge(i, j)
    if varmap.triangle_count:
        for i, j, k in combinations(range(1, n + 1), 3):
            values[varmap.triangle_var(i, j, k)] = (
                g.has_edge(i, j) and g.has_edge(i, k) and g.has_edge(j, k)
            )
    if varmap.aux_per_pair:
        for i, j in combinations(range(1, n + 1), 2):
            shared = [c for c in range(1, n + 1) if c not in (i, j)]
            equal = True
            for idx in range(1, varmap.aux_per_pair + 1):
                x = g.has_edge(i, shared[idx - 1])
                y = g.has_edge(j, shared[idx - 1])
                equal = equal and x == y
                values[varmap.aux_var(i, j, idx)] = equal
    return values
