"""Decide whether one tree automaton covers another.

The decision runs in two passes over the target tree:

* availability (bottom-up): ``A[v]`` is the set of cover states whose whole
  subtree embeds at target node ``v``. A childless cover state fits anywhere.
* pruning (top-down): the root must play ``q0``; every other node plays the
  roles continued from its parent, plus ``q0`` when an occurrence can start
  there. Final target nodes must play at least one final role.

Role sets are bitsets over cover states stored as Python ints. Because both
automata are deterministic trees, an occurrence is fixed by the node playing
``q0`` (its anchor), so witnesses are stored as anchor lists.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Iterator

from .automata import AlphabetMismatch, Dta

__all__ = [
    "AvailabilityMap",
    "CoverMode",
    "CoverOutcome",
    "CoverStats",
    "Failure",
    "FailureKind",
    "NoEmbedding",
    "OccurrenceSet",
    "PrunedMap",
    "WitnessCheck",
    "availability_pass",
    "covers",
    "covers_parallel",
    "expand_occurrence",
    "extract_occurrences",
    "pruning_pass",
    "verify_witness",
]


class CoverMode(enum.Enum):
    """``EDGE`` matches string covers; ``NODE`` only asks every state be hit."""

    NODE = "node"
    EDGE = "edge"


class FailureKind(enum.Enum):
    ROOT_CANNOT_PLAY_Q0 = "RootCannotPlayQ0"
    EMPTY_ROLE_SET = "EmptyRoleSet"
    FINAL_MISMATCH = "FinalMismatch"
    UNCOVERED_EDGE = "UncoveredEdge"


@dataclass(frozen=True)
class Failure:
    kind: FailureKind
    node: int
    parent: int | None = None

    @property
    def edge(self) -> tuple[int, int] | None:
        return None if self.parent is None else (self.parent, self.node)

    def __str__(self) -> str:
        if self.kind is FailureKind.UNCOVERED_EDGE:
            return f"{self.kind.value}({self.parent}->{self.node})"
        return f"{self.kind.value}({self.node})"


class NoEmbedding(ValueError):
    """The cover automaton does not embed at the requested anchor."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class AvailabilityMap:
    """Per target node, the bitset of cover states it could play."""

    bits: tuple[int, ...]

    def __getitem__(self, node: int) -> frozenset[int]:
        return frozenset(_bits(self.bits[node]))

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class PrunedMap:
    """Per target node, the bitset of cover states it actually plays."""

    bits: tuple[int, ...]

    def __getitem__(self, node: int) -> frozenset[int]:
        return frozenset(_bits(self.bits[node]))

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class OccurrenceSet:
    """Anchors (target nodes playing ``q0``), one per occurrence."""

    anchors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(sorted(set(self.anchors))))

    def __iter__(self):
        return iter(self.anchors)

    def __len__(self) -> int:
        return len(self.anchors)


@dataclass
class CoverStats:
    basic_steps: int = 0
    parallel_rounds: int = 0
    messages: int = 0
    # parallel engine only: sum over rounds of the busiest node's steps, and
    # the most steps any single node took in one round
    critical_steps: int = 0
    max_node_steps: int = 0


@dataclass
class CoverOutcome:
    covered: bool
    witness: OccurrenceSet | None = None
    failure: Failure | None = None
    stats: CoverStats = field(default_factory=CoverStats)
    availability: AvailabilityMap | None = None
    pruned: PrunedMap | None = None

    def __post_init__(self):
        if self.covered == (self.failure is not None):
            raise ValueError("exactly one of covered / failure must hold")

    def __bool__(self) -> bool:
        return self.covered


class _Instance:
    """Shared precomputation for one (cover, target) pair."""

    __slots__ = ("cover", "target", "transitions", "by_symbol", "q0_bit", "final_bits", "n_cover")

    def __init__(self, cover: Dta, target: Dta):
        if cover.alphabet != target.alphabet:
            cover = cover.reindex(target.alphabet)
        self.cover = cover
        self.target = target
        self.n_cover = cover.n_states
        # (state bit, symbol, child) for every cover transition
        self.transitions = [(1 << q, sym, c) for q, sym, c in cover.transitions()]
        by_symbol: dict[int, list[tuple[int, int]]] = {}
        for q, sym, c in cover.transitions():
            by_symbol.setdefault(sym, []).append((1 << q, 1 << c))
        self.by_symbol = by_symbol
        self.q0_bit = 1 << cover.root
        self.final_bits = sum(1 << q for q in cover.finals)

    def available(self, node: int, avail: list[int]) -> tuple[int, int]:
        """Availability bitset of ``node`` given its children's; returns (bits, steps)."""
        kids = self.target.children[node]
        mask = (1 << self.n_cover) - 1
        for qbit, sym, c in self.transitions:
            child = kids.get(sym)
            if child is None or not (avail[child] >> c) & 1:
                mask &= ~qbit
        return mask, 1 + len(self.transitions)

    def continuation(self, parent_roles: int, symbol: int) -> tuple[int, int]:
        """Roles handed down along a ``symbol`` edge; returns (bits, steps)."""
        out = 0
        pairs = self.by_symbol.get(symbol, ())
        for pbit, cbit in pairs:
            if parent_roles & pbit:
                out |= cbit
        return out, 1 + len(pairs)

    def prune_child(self, parent: int, child: int, symbol: int, pruned: list[int], avail: list[int],
                    mode: CoverMode) -> tuple[int, Failure | None, int]:
        cont, steps = self.continuation(pruned[parent], symbol)
        roles = cont | (avail[child] & self.q0_bit)
        if not roles:
            return 0, Failure(FailureKind.EMPTY_ROLE_SET, child, parent), steps
        if mode is CoverMode.EDGE and not cont:
            return roles, Failure(FailureKind.UNCOVERED_EDGE, child, parent), steps
        return roles, self.check_final(child, roles), steps + 1

    def check_final(self, node: int, roles: int) -> Failure | None:
        if node in self.target.finals and not roles & self.final_bits:
            return Failure(FailureKind.FINAL_MISMATCH, node)
        return None


def availability_pass(cover: Dta, target: Dta) -> AvailabilityMap:
    return AvailabilityMap(_availability(_Instance(cover, target), CoverStats()))


def _availability(inst: _Instance, stats: CoverStats) -> tuple[int, ...]:
    target = inst.target
    avail = [0] * target.n_states
    steps = 0
    for level in reversed(target.levels):
        for v in level:
            avail[v], s = inst.available(v, avail)
            steps += s
    stats.basic_steps += steps
    stats.messages += target.n_states - 1
    return tuple(avail)


def pruning_pass(cover: Dta, target: Dta, avail: AvailabilityMap,
                 mode: CoverMode = CoverMode.EDGE) -> PrunedMap | Failure:
    """Top-down pass; returns the pruned role sets or the first failure found.

    Nodes are visited level by level, ascending ids within a level, so the
    reported failure is the same one the parallel engine reports.
    """
    result = _pruning(_Instance(cover, target), avail.bits, mode, CoverStats())
    return result if isinstance(result, Failure) else PrunedMap(result)


def _prune_root(inst: _Instance, avail: tuple[int, ...] | list[int]) -> tuple[int, Failure | None]:
    root = inst.target.root
    if not avail[root] & inst.q0_bit:
        return 0, Failure(FailureKind.ROOT_CANNOT_PLAY_Q0, root)
    return inst.q0_bit, inst.check_final(root, inst.q0_bit)


def _pruning(inst: _Instance, avail, mode: CoverMode, stats: CoverStats) -> tuple[int, ...] | Failure:
    target = inst.target
    pruned = [0] * target.n_states
    root_roles, failure = _prune_root(inst, avail)
    stats.basic_steps += 2
    if failure:
        return failure
    pruned[target.root] = root_roles
    parents = target.parents
    steps = 0
    for level in target.levels[1:]:
        for v in level:
            p = parents[v]
            symbol = _edge_symbol(target, p, v)
            pruned[v], failure, s = inst.prune_child(p, v, symbol, pruned, avail, mode)
            steps += s
            stats.messages += 1
            if failure:
                stats.basic_steps += steps
                return failure
    stats.basic_steps += steps
    return tuple(pruned)


def _edge_symbol(target: Dta, parent: int, child: int) -> int:
    for sym, c in target.children[parent].items():
        if c == child:
            return sym
    raise AssertionError(f"{child} is not a child of {parent}")


def extract_occurrences(cover: Dta, target: Dta, pruned: PrunedMap) -> OccurrenceSet:
    q0_bit = 1 << cover.root
    return OccurrenceSet(tuple(v for v, bits in enumerate(pruned.bits) if bits & q0_bit))


def covers(cover: Dta, target: Dta, mode: CoverMode = CoverMode.EDGE) -> CoverOutcome:
    """Serial engine: one bottom-up and one top-down traversal.

    Raises :class:`AlphabetMismatch` if the cover uses a symbol the target's
    alphabet lacks; every other negative answer comes back as a failure.
    """
    inst = _Instance(cover, target)
    stats = CoverStats()
    avail = _availability(inst, stats)
    result = _pruning(inst, avail, mode, stats)
    return _finish(inst, AvailabilityMap(avail), result, stats)


def _finish(inst: _Instance, avail: AvailabilityMap, result, stats: CoverStats) -> CoverOutcome:
    if isinstance(result, Failure):
        return CoverOutcome(False, failure=result, stats=stats, availability=avail)
    pruned = PrunedMap(result)
    witness = extract_occurrences(inst.cover, inst.target, pruned)
    return CoverOutcome(True, witness=witness, stats=stats, availability=avail, pruned=pruned)


def covers_parallel(cover: Dta, target: Dta, mode: CoverMode = CoverMode.EDGE,
                    executor: Executor | None = None, shuffle: random.Random | None = None) -> CoverOutcome:
    """Level-synchronous engine: one round per tree level in each direction.

    Within a round every node reads only finished slots of the neighbouring
    level and writes only its own slot, so the result does not depend on the
    order nodes are processed in. ``executor`` spreads a round's nodes over
    workers; ``shuffle`` permutes the in-round order (for testing that claim).
    Without either, rounds run inline.
    """
    inst = _Instance(cover, target)
    stats = CoverStats()
    n = target.n_states
    levels = target.levels

    def run_round(fn, nodes):
        nodes = list(nodes)
        if shuffle is not None:
            shuffle.shuffle(nodes)
        if executor is not None:
            results = list(executor.map(fn, nodes))
        else:
            results = [fn(v) for v in nodes]
        stats.parallel_rounds += 1
        return nodes, results

    avail = [0] * n

    def up(v):
        return inst.available(v, avail)

    for level in reversed(levels):
        nodes, results = run_round(up, level)
        for v, (bits, _) in zip(nodes, results):
            avail[v] = bits
        _account(stats, [s for _, s in results])
    stats.messages += n - 1
    availability = AvailabilityMap(tuple(avail))

    pruned = [0] * n
    parents = target.parents

    def root_step(v):
        bits, failure = _prune_root(inst, avail)
        return bits, failure, 2

    def down(v):
        p = parents[v]
        return inst.prune_child(p, v, _edge_symbol(target, p, v), pruned, avail, mode)

    for d, level in enumerate(levels):
        nodes, results = run_round(root_step if d == 0 else down, level)
        _account(stats, [s for _, _, s in results])
        if d:
            stats.messages += len(level)
        failures = []
        for v, (bits, failure, _) in zip(nodes, results):
            pruned[v] = bits
            if failure:
                failures.append((v, failure))
        if failures:
            return _finish(inst, availability, min(failures, key=lambda vf: vf[0])[1], stats)
    return _finish(inst, availability, tuple(pruned), stats)


def _account(stats: CoverStats, steps: list[int]) -> None:
    busiest = max(steps, default=0)
    stats.basic_steps += sum(steps)
    stats.critical_steps += busiest
    stats.max_node_steps = max(stats.max_node_steps, busiest)


def expand_occurrence(cover: Dta, target: Dta, anchor: int) -> dict[int, int]:
    """Map every cover state to the target node it lands on from ``anchor``."""
    if cover.alphabet != target.alphabet:
        cover = cover.reindex(target.alphabet)
    if not 0 <= anchor < target.n_states:
        raise NoEmbedding(f"anchor {anchor} is not a target node")
    phi = {cover.root: anchor}
    stack = [cover.root]
    while stack:
        q = stack.pop()
        for sym, c in cover.children[q].items():
            image = target.children[phi[q]].get(sym)
            if image is None:
                raise NoEmbedding(
                    f"no {cover.alphabet.resolve(sym)!r}-transition at node {phi[q]} "
                    f"(needed by anchor {anchor})"
                )
            phi[c] = image
            stack.append(c)
    return phi


@dataclass
class WitnessCheck:
    ok: bool
    reasons: list[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_witness(cover: Dta, target: Dta, witness: OccurrenceSet,
                   mode: CoverMode = CoverMode.EDGE) -> WitnessCheck:
    """Re-check a witness from scratch by expanding every anchor."""
    reasons = []
    try:
        if cover.alphabet != target.alphabet:
            cover = cover.reindex(target.alphabet)
    except AlphabetMismatch as exc:
        return WitnessCheck(False, [str(exc)])

    nodes_hit = set()
    finals_hit = set()
    edges_hit = set()
    for anchor in witness:
        try:
            phi = expand_occurrence(cover, target, anchor)
        except NoEmbedding as exc:
            reasons.append(str(exc))
            continue
        nodes_hit.update(phi.values())
        finals_hit.update(phi[q] for q in cover.finals)
        for q, sym, c in cover.transitions():
            edges_hit.add((phi[q], phi[c]))

    missing = [v for v in target.states if v not in nodes_hit]
    if missing:
        reasons.append(f"nodes not covered: {missing}")
    bad_finals = sorted(f for f in target.finals if f not in finals_hit)
    if bad_finals:
        reasons.append(f"final nodes not played by a final state: {bad_finals}")
    if mode is CoverMode.EDGE:
        bare = [(q, c) for q, _, c in target.transitions() if (q, c) not in edges_hit]
        if bare:
            reasons.append(f"edges not traversed: {bare}")
    return WitnessCheck(not reasons, reasons)
