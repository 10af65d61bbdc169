"""Proof and witness artifact formats.

A proof is DRAT text with one extension: clauses justified by an external
check instead of unit propagation are written as

    t <seq> <lit> ... <lit> 0

and each such line has exactly one witness record in a sidecar file:

    s <seq> perm <k> <p1> ... <pk>          a relabeling of the blocked
                                            order-k prefix that strictly
                                            lex-decreases it
    s <seq> subgraph <libid> <k> <m1>...<mk> an injection of library graph
                                            libid (order k, vertex t -> mt)
                                            into the blocked edge set
    s <seq> candidate <graph6>              full-edge-set block of an
                                            enumerated model

Sequence numbers are strictly increasing and shared between the two files.
Standard DRAT lines (additions and "d" deletions) are unchanged, so a proof
stripped of "t" lines plus the trusted clauses appended to the formula can
be fed to ordinary DRAT tooling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, graph6_decode, graph6_encode

__all__ = [
    "TrustedJustification",
    "ProofWriter",
    "WitnessRecord",
    "ProofLine",
    "parse_proof_line",
    "parse_witness_line",
    "load_witnesses",
    "ProofBudgetExceeded",
]

KIND_NONCANONICAL = "noncanonical"
KIND_SUBGRAPH = "unembeddable_subgraph"
KIND_CANDIDATE = "candidate_block"


@dataclass(frozen=True)
class TrustedJustification:
    """External evidence attached to a non-RUP clause."""

    kind: str
    # noncanonical: tuple permutation; unembeddable_subgraph: (libid, injection
    # tuple mapping library vertex t+1 -> injection[t]); candidate_block:
    # graph6 text of the blocked model
    payload: object

    def witness_text(self, seq: int) -> str:
        if self.kind == KIND_NONCANONICAL:
            p = self.payload
            return f"s {seq} perm {len(p)} " + " ".join(map(str, p))
        if self.kind == KIND_SUBGRAPH:
            libid, image = self.payload
            return (
                f"s {seq} subgraph {libid} {len(image)} "
                + " ".join(map(str, image))
            )
        if self.kind == KIND_CANDIDATE:
            return f"s {seq} candidate {self.payload}"
        raise ValueError(f"unknown justification kind {self.kind}")

    @classmethod
    def for_candidate(cls, g: Graph) -> "TrustedJustification":
        return cls(KIND_CANDIDATE, graph6_encode(g))


class ProofBudgetExceeded(RuntimeError):
    pass


class ProofWriter:
    """Streams proof and witness lines; tracks bytes against a budget."""

    def __init__(self, proof_path, witness_path, byte_budget: int = 0):
        self.proof_path = proof_path
        self.witness_path = witness_path
        self._proof = open(proof_path, "w", encoding="ascii")
        self._witness = open(witness_path, "w", encoding="ascii")
        self.bytes_written = 0
        self.byte_budget = byte_budget
        self.next_seq = 1
        self.trusted_count = 0

    def _emit(self, line: str) -> None:
        self._proof.write(line)
        self.bytes_written += len(line)
        if self.byte_budget and self.bytes_written > self.byte_budget:
            raise ProofBudgetExceeded(
                f"proof exceeded {self.byte_budget} bytes"
            )

    def add_clause(self, lits) -> None:
        self._emit(" ".join(map(str, lits)) + " 0\n" if lits else "0\n")

    def delete_clause(self, lits) -> None:
        self._emit("d " + " ".join(map(str, lits)) + " 0\n")

    def trusted_clause(self, lits, just: TrustedJustification) -> int:
        seq = self.next_seq
        self.next_seq += 1
        self.trusted_count += 1
        self._emit(f"t {seq} " + " ".join(map(str, lits)) + " 0\n")
        wline = just.witness_text(seq) + "\n"
        self._witness.write(wline)
        self.bytes_written += len(wline)
        return seq

    def close(self) -> None:
        self._proof.close()
        self._witness.close()


@dataclass(frozen=True)
class ProofLine:
    kind: str  # "add" | "delete" | "trusted"
    lits: tuple[int, ...]
    seq: int = 0


def parse_proof_line(line: str, number: int) -> ProofLine | None:
    """Parse one proof line; returns None for blanks and comments."""
    line = line.strip()
    if not line or line.startswith("c"):
        return None
    toks = line.split()
    kind = "add"
    seq = 0
    if toks[0] == "d":
        kind = "delete"
        toks = toks[1:]
    elif toks[0] == "t":
        kind = "trusted"
        if len(toks) < 2:
            raise ValueError(f"proof line {number}: truncated trusted line")
        seq = int(toks[1])
        toks = toks[2:]
    try:
        lits = [int(t) for t in toks]
    except ValueError as exc:
        raise ValueError(f"proof line {number}: {exc}") from None
    if not lits or lits[-1] != 0:
        raise ValueError(f"proof line {number}: missing 0 terminator")
    body = lits[:-1]
    if any(l == 0 for l in body):
        raise ValueError(f"proof line {number}: embedded 0")
    return ProofLine(kind, tuple(body), seq)


@dataclass(frozen=True)
class WitnessRecord:
    seq: int
    kind: str
    payload: object

    def graph(self) -> Graph:
        if self.kind != KIND_CANDIDATE:
            raise ValueError("not a candidate record")
        return graph6_decode(self.payload)


def parse_witness_line(line: str, number: int) -> WitnessRecord | None:
    line = line.strip()
    if not line or line.startswith("c"):
        return None
    toks = line.split()
    if toks[0] != "s" or len(toks) < 3:
        raise ValueError(f"witness line {number}: malformed record")
    seq = int(toks[1])
    tag = toks[2]
    if tag == "perm":
        k = int(toks[3])
        perm = tuple(int(t) for t in toks[4:])
        if len(perm) != k or sorted(perm) != list(range(1, k + 1)):
            raise ValueError(f"witness line {number}: bad permutation")
        return WitnessRecord(seq, KIND_NONCANONICAL, perm)
    if tag == "subgraph":
        libid = int(toks[3])
        k = int(toks[4])
        image = tuple(int(t) for t in toks[5:])
        if len(image) != k or len(set(image)) != k:
            raise ValueError(f"witness line {number}: bad injection")
        return WitnessRecord(seq, KIND_SUBGRAPH, (libid, image))
    if tag == "candidate":
        if len(toks) != 4:
            raise ValueError(f"witness line {number}: bad candidate record")
        return WitnessRecord(seq, KIND_CANDIDATE, toks[3])
    raise ValueError(f"witness line {number}: unknown kind {tag!r}")


def load_witnesses(path) -> list[WitnessRecord]:
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for number, line in enumerate(fh, start=1):
            rec = parse_witness_line(line, number)
            if rec is not None:
                out.append(rec)
    return out
