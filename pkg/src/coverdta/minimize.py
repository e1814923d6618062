"""Searching candidate automata for the best cover of a target.

The main entry points are :func:`shortest_common_cover` and
:func:`shortest_cover`, which minimise length over path automata. The generic
:func:`minimize_over` and :func:`randomized_minimize` accept any candidates.
"""

from __future__ import annotations

import logging
from itertools import groupby
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .automata import AlphabetMismatch, Dta, build_trie, canonical_serialize, depth, path_automaton
from .recognition import CoverMode, CoverOutcome, OccurrenceSet, covers

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Objective:
    """A named measure over automata; returning ``None`` declines a candidate."""

    name: str
    measure: Callable[[Dta], float | None]

    def __call__(self, dta: Dta) -> float | None:
        return self.measure(dta)


DEPTH = Objective("depth", depth)
STATE_COUNT = Objective("state_count", lambda dta: dta.n_states)


@dataclass
class CandidateGenerator:
    draw: Callable[[], Dta]
    max_iterations: int
    threshold: float

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass
class MinimizationResult:
    best: Dta
    value: float
    witness: OccurrenceSet
    candidates_checked: int
    skipped: list[str] = field(default_factory=list)
    total_steps: int = 0


@dataclass
class Exhausted:
    candidates_checked: int
    reason: str

    def __bool__(self) -> bool:
        return False


def minimize_over(candidates: Iterable[Dta], objective: Objective, target: Dta,
                  mode: CoverMode = CoverMode.EDGE, size_filter: bool = True,
                  executor: Executor | None = None) -> MinimizationResult | None:
    """Best-scoring candidate that covers ``target``, or ``None``.

    Candidates with more states than the target cannot embed even once and
    are skipped when ``size_filter`` is on. Ties go to the smaller canonical
    serialization, so the answer does not depend on check order.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("no candidates given")
    skipped = []
    scored = []
    for cand in candidates:
        value = objective(cand)
        if value is None:
            continue
        if size_filter and cand.n_states > target.n_states:
            continue
        scored.append((cand, value))

    def check(item) -> CoverOutcome | str:
        try:
            return covers(item[0], target, mode)
        except AlphabetMismatch as exc:
            return str(exc)

    if executor is not None:
        outcomes = list(executor.map(check, scored))
    else:
        outcomes = [check(item) for item in scored]

    winners = []
    total_steps = 0
    for (cand, value), outcome in zip(scored, outcomes):
        if isinstance(outcome, str):
            log.warning("skipping candidate: %s", outcome)
            skipped.append(outcome)
            continue
        total_steps += outcome.stats.basic_steps
        if outcome.covered:
            winners.append((value, canonical_serialize(cand), cand, outcome.witness))
    if not winners:
        return None
    value, _, best, witness = min(winners, key=lambda t: (t[0], t[1]))
    return MinimizationResult(best, value, witness, len(scored), skipped, total_steps)


def randomized_minimize(gen: CandidateGenerator, objective: Objective, target: Dta,
                        mode: CoverMode = CoverMode.EDGE) -> MinimizationResult | Exhausted:
    """Draw candidates until one scores at most ``gen.threshold`` and covers."""
    checked = 0
    for _ in range(gen.max_iterations):
        try:
            cand = gen.draw()
        except Exception as exc:
            return Exhausted(checked, f"generator failed: {exc!r}")
        checked += 1
        value = objective(cand)
        if value is None or value > gen.threshold:
            continue
        try:
            outcome = covers(cand, target, mode)
        except AlphabetMismatch as exc:
            log.warning("skipping candidate: %s", exc)
            continue
        if outcome.covered:
            return MinimizationResult(cand, value, outcome.witness, checked,
                                      total_steps=outcome.stats.basic_steps)
    return Exhausted(checked, f"no covering candidate with {objective.name} <= {gen.threshold} "
                              f"in {gen.max_iterations} draws")


def _shortest_word(target: Dta) -> tuple[int, ...]:
    # breadth-first, so the first final reached is a shortest accepted word
    frontier = [(target.root, ())]
    while frontier:
        for q, path in frontier:
            if q in target.finals:
                return path
        frontier = [(c, path + (sym,)) for q, path in frontier for sym, c in sorted(target.children[q].items())]
    raise AssertionError("trimmed automaton without a final state")


def _root_paths(target: Dta, max_len: int) -> list[tuple[int, ...]]:
    out = []
    frontier = [(target.root, ())]
    for _ in range(max_len):
        frontier = [(c, path + (sym,)) for q, path in frontier for sym, c in sorted(target.children[q].items())]
        out.extend(path for _, path in frontier)
    return out


def _candidate_paths(target: Dta, mode: CoverMode) -> list[tuple[int, ...]]:
    shortest = _shortest_word(target)
    if mode is CoverMode.EDGE:
        return [shortest[:k] for k in range(1, len(shortest) + 1)]
    return _root_paths(target, len(shortest))


def path_candidates(target: Dta, mode: CoverMode = CoverMode.EDGE) -> list[Dta]:
    """Every path automaton that could cover ``target``, shortest first.

    An edge-mode cover must start an occurrence at the root along every
    first edge and end one at every final node, so it is a prefix of every
    word and in particular of the shortest one. Node mode only forces a root
    path no longer than the shortest word, so all of those are returned.
    """
    return [path_automaton(p, target.alphabet) for p in _candidate_paths(target, mode)]


def failure_function(symbols: Sequence) -> list[int]:
    """KMP failure table: ``fail[i]`` is the longest proper border of ``symbols[:i+1]``."""
    fail = [0] * len(symbols)
    k = 0
    for i in range(1, len(symbols)):
        while k and symbols[i] != symbols[k]:
            k = fail[k - 1]
        if symbols[i] == symbols[k]:
            k += 1
        fail[i] = k
    return fail


def border_lengths(symbols: Sequence) -> set[int]:
    """Lengths of all borders of ``symbols``, including the whole word."""
    if not symbols:
        return set()
    fail = failure_function(symbols)
    out = {len(symbols)}
    k = fail[-1]
    while k:
        out.add(k)
        k = fail[k - 1]
    return out


def common_cover_search(words: Sequence[str], mode: CoverMode = CoverMode.EDGE,
                        border_filter: bool = True) -> tuple[Dta, MinimizationResult | None]:
    """Build the trie of ``words`` and minimise length over its path candidates.

    Covering the trie is necessary for a common cover but not sufficient: an
    occurrence running along a shared prefix can cover edges of several words
    at once, so ``ba`` covers the trie of {ba, bba} without covering ``bba``.
    A candidate that covers the trie is therefore also checked against the
    path automaton of each word.

    Candidates are tried one length at a time, shortest first, and the search
    stops at the first length with a cover. ``candidates_checked`` and
    ``total_steps`` of the result count every candidate tried.
    """
    words = list(words)
    if not words:
        raise ValueError("need at least one word")
    if any(not w for w in words):
        raise ValueError("words must be non-empty")
    trie = build_trie(words)
    # in either mode a cover of a single path starts at its root and ends at
    # its final node, so a common cover is a border of every word and in
    # particular a prefix of the shortest one
    paths = _candidate_paths(trie, CoverMode.EDGE)
    if border_filter:
        lengths = border_lengths(_shortest_word(trie))
        paths = [p for p in paths if len(p) in lengths]
    distinct = sorted(set(words))
    # a single word's trie is its own path, so the trie check already decides
    word_paths = [path_automaton(w, trie.alphabet) for w in distinct] if len(distinct) > 1 else []
    checked = steps = 0
    for length, group in groupby(paths, key=len):
        winners = []
        for path in group:
            cand = path_automaton(path, trie.alphabet)
            outcome = covers(cand, trie, mode)
            checked += 1
            steps += outcome.stats.basic_steps
            if not outcome.covered:
                continue
            for word_path in word_paths:
                per_word = covers(cand, word_path, mode)
                steps += per_word.stats.basic_steps
                if not per_word.covered:
                    break
            else:
                winners.append((canonical_serialize(cand), cand, outcome.witness))
        if winners:
            _, best, witness = min(winners, key=lambda t: t[0])
            return trie, MinimizationResult(best, length, witness, checked, total_steps=steps)
    return trie, None


def shortest_common_cover(words: Sequence[str], mode: CoverMode = CoverMode.EDGE,
                          border_filter: bool = True) -> str | None:
    """Shortest word covering every word in ``words``, or ``None`` if there is none."""
    trie, result = common_cover_search(words, mode, border_filter)
    if result is None:
        return None
    return spell_path(result.best)


def shortest_cover(word: str) -> str:
    if not word:
        raise ValueError("word must be non-empty")
    found = shortest_common_cover([word])
    assert found is not None, "a word always covers itself"
    return found


def spell_path(path: Dta) -> str:
    """The single word a path automaton accepts."""
    out = []
    q = path.root
    while path.children[q]:
        (sym, q), = path.children[q].items()
        out.append(path.alphabet.resolve(sym))
    return "".join(out)
