"""Trimmed deterministic tree automata (tries) over finite word languages.

A :class:`Dta` is a rooted, edge-labelled tree whose leaves are all final.
Every finite non-empty language has exactly one such automaton up to
isomorphism, so :func:`canonical_serialize` doubles as an equality test.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "Dta",
    "EmptyLanguage",
    "ParseError",
    "ValidationError",
    "Violation",
    "ViolationKind",
    "accepts",
    "build_trie",
    "canonical_serialize",
    "depth",
    "enumerate_language",
    "insert_word",
    "parse_automaton",
    "path_automaton",
    "validate",
]

Word = Union[str, Sequence[int]]


class AlphabetMismatch(ValueError):
    """A word or automaton uses a symbol outside the expected alphabet."""


class EmptyLanguage(ValueError):
    """The empty language has no trimmed automaton."""


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


class Alphabet:
    """Bidirectional table between characters and dense symbol ids.

    Ids are assigned in code point order, so ascending id order and ascending
    character order agree for every alphabet.
    """

    __slots__ = ("_chars", "_ids")

    def __init__(self, chars: Iterable[str] = ()):
        unique = sorted(set(chars))
        for ch in unique:
            if len(ch) != 1:
                raise ValueError(f"symbol must be a single character, got {ch!r}")
        self._chars = tuple(unique)
        self._ids = {ch: i for i, ch in enumerate(unique)}

    @classmethod
    def from_words(cls, words: Iterable[str]) -> Alphabet:
        return cls(ch for w in words for ch in w)

    def __len__(self) -> int:
        return len(self._chars)

    def __iter__(self):
        return iter(self._chars)

    def __contains__(self, ch: object) -> bool:
        return ch in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self._chars == other._chars

    def __hash__(self) -> int:
        return hash(self._chars)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self._chars)!r})"

    @property
    def chars(self) -> tuple[str, ...]:
        return self._chars

    def intern(self, ch: str) -> int:
        try:
            return self._ids[ch]
        except KeyError:
            raise AlphabetMismatch(f"symbol {ch!r} not in {self!r}") from None

    def resolve(self, symbol: int) -> str:
        if not 0 <= symbol < len(self._chars):
            raise AlphabetMismatch(f"symbol id {symbol} not in {self!r}")
        return self._chars[symbol]

    def encode(self, word: Word) -> tuple[int, ...]:
        if isinstance(word, str):
            return tuple(self.intern(ch) for ch in word)
        ids = tuple(word)
        for sym in ids:
            self.resolve(sym)
        return ids

    def decode(self, symbols: Iterable[int]) -> str:
        return "".join(self._chars[s] for s in symbols)

    def union(self, other: Alphabet) -> Alphabet:
        return Alphabet(self._chars + other._chars)


@dataclass(frozen=True, eq=False)
class Dta:
    """Deterministic automaton with a tree-shaped transition graph.

    ``children[q]`` maps symbol ids to child states. Instances are treated as
    immutable; constructors in this module always return valid, trimmed trees
    numbered in canonical preorder with the root at 0.
    """

    children: tuple[dict[int, int], ...]
    finals: frozenset[int]
    alphabet: Alphabet
    root: int = 0

    @property
    def n_states(self) -> int:
        return len(self.children)

    @property
    def states(self) -> range:
        return range(len(self.children))

    def child(self, state: int, symbol: int) -> int | None:
        return self.children[state].get(symbol)

    def transitions(self) -> list[tuple[int, int, int]]:
        return [(q, sym, c) for q, kids in enumerate(self.children) for sym, c in sorted(kids.items())]

    @cached_property
    def parents(self) -> tuple[int | None, ...]:
        parent: list[int | None] = [None] * self.n_states
        for q, kids in enumerate(self.children):
            for c in kids.values():
                parent[c] = q
        return tuple(parent)

    @cached_property
    def levels(self) -> tuple[tuple[int, ...], ...]:
        """Nodes grouped by distance from the root, ascending ids per level."""
        levels = []
        frontier = [self.root]
        while frontier:
            levels.append(tuple(sorted(frontier)))
            frontier = [c for q in frontier for c in self.children[q].values()]
        return tuple(levels)

    @cached_property
    def node_depths(self) -> tuple[int, ...]:
        out = [0] * self.n_states
        for d, level in enumerate(self.levels):
            for q in level:
                out[q] = d
        return tuple(out)

    def is_leaf(self, state: int) -> bool:
        return not self.children[state]

    def reindex(self, alphabet: Alphabet) -> Dta:
        """Re-express this automaton over a superset alphabet."""
        if alphabet == self.alphabet:
            return self
        remap = {}
        for sym, ch in enumerate(self.alphabet.chars):
            if ch in alphabet:
                remap[sym] = alphabet.intern(ch)
        used = {sym for kids in self.children for sym in kids}
        missing = sorted(self.alphabet.resolve(s) for s in used if s not in remap)
        if missing:
            raise AlphabetMismatch(f"symbols {missing} not in {alphabet!r}")
        children = tuple({remap[s]: c for s, c in kids.items()} for kids in self.children)
        return Dta(children, self.finals, alphabet, self.root)

    def __repr__(self) -> str:
        return f"Dta(states={self.n_states}, finals={sorted(self.finals)}, alphabet={self.alphabet!r})"


def _renumber(children: list[dict[int, int]], finals: set[int], alphabet: Alphabet, root: int) -> Dta:
    """Relabel states by symbol-ascending DFS preorder."""
    order = []
    stack = [root]
    while stack:
        q = stack.pop()
        order.append(q)
        kids = children[q]
        stack.extend(kids[s] for s in sorted(kids, reverse=True))
    new_id = {q: i for i, q in enumerate(order)}
    new_children = tuple({s: new_id[c] for s, c in sorted(children[q].items())} for q in order)
    return Dta(new_children, frozenset(new_id[q] for q in finals), alphabet, 0)


def _insert(children: list[dict[int, int]], finals: set[int], root: int, symbols: Sequence[int]) -> None:
    # follow the longest shared prefix, then grow a fresh branch for the rest
    q = root
    i = 0
    while i < len(symbols) and symbols[i] in children[q]:
        q = children[q][symbols[i]]
        i += 1
    for sym in symbols[i:]:
        children.append({})
        children[q][sym] = len(children) - 1
        q = len(children) - 1
    finals.add(q)


def path_automaton(word: Word, alphabet: Alphabet | None = None) -> Dta:
    """The automaton accepting exactly ``word``: states q0..q|w|, last one final."""
    if alphabet is None:
        if not isinstance(word, str):
            raise TypeError("an alphabet is required for symbol-id words")
        alphabet = Alphabet(word)
    symbols = alphabet.encode(word)
    n = len(symbols)
    children = tuple({symbols[i]: i + 1} for i in range(n)) + ({},)
    return Dta(children, frozenset([n]), alphabet, 0)


def insert_word(dta: Dta, word: Word) -> Dta:
    """Return the trimmed automaton for ``L(dta) | {word}``."""
    symbols = dta.alphabet.encode(word)
    children = [dict(kids) for kids in dta.children]
    finals = set(dta.finals)
    _insert(children, finals, dta.root, symbols)
    return _renumber(children, finals, dta.alphabet, dta.root)


def build_trie(words: Iterable[Word], alphabet: Alphabet | None = None) -> Dta:
    """Build the unique trimmed automaton accepting exactly ``words``.

    Duplicates are ignored. The alphabet defaults to the characters used.
    """
    words = list(words)
    if not words:
        raise EmptyLanguage("cannot build a trimmed automaton for the empty language")
    if alphabet is None:
        if not all(isinstance(w, str) for w in words):
            raise TypeError("an alphabet is required for symbol-id words")
        alphabet = Alphabet.from_words(words)
    children: list[dict[int, int]] = [{}]
    finals: set[int] = set()
    for w in words:
        _insert(children, finals, 0, alphabet.encode(w))
    return _renumber(children, finals, alphabet, 0)


def accepts(dta: Dta, word: Word) -> bool:
    q = dta.root
    try:
        symbols = dta.alphabet.encode(word)
    except AlphabetMismatch:
        return False
    for sym in symbols:
        q = dta.children[q].get(sym)
        if q is None:
            return False
    return q in dta.finals


def enumerate_language(dta: Dta) -> list[str]:
    """All accepted words, shortest first, ties in code point order."""
    words = []
    stack: list[tuple[int, str]] = [(dta.root, "")]
    while stack:
        q, prefix = stack.pop()
        if q in dta.finals:
            words.append(prefix)
        for sym, c in dta.children[q].items():
            stack.append((c, prefix + dta.alphabet.resolve(sym)))
    words.sort(key=lambda w: (len(w), w))
    return words


def depth(dta: Dta) -> int:
    return len(dta.levels) - 1


def canonical_serialize(dta: Dta) -> str:
    """Line-oriented text form; equal text iff isomorphic automata.

    ::

        dta 4 root 0
        finals 3
        t 0 a 1
        t 1 b 2
        t 2 a 3
    """
    order = []
    stack = [dta.root]
    while stack:
        q = stack.pop()
        order.append(q)
        kids = dta.children[q]
        stack.extend(kids[s] for s in sorted(kids, key=dta.alphabet.resolve, reverse=True))
    new_id = {q: i for i, q in enumerate(order)}
    lines = [
        f"dta {len(order)} root 0",
        " ".join(["finals"] + [str(i) for i in sorted(new_id[q] for q in dta.finals if q in new_id)]),
    ]
    edges = []
    for q in order:
        for sym, c in dta.children[q].items():
            edges.append((new_id[c], new_id[q], dta.alphabet.resolve(sym)))
    for to, frm, ch in sorted(edges):
        lines.append(f"t {frm} {ch} {to}")
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"dta (\d+) root (\d+)")
_FINALS = re.compile(r"finals((?: \d+)*)")
_TRANSITION = re.compile(r"t (\d+) (.) (\d+)")


def parse_automaton(text: str) -> Dta:
    """Parse the canonical text format and validate the result.

    Raises :class:`ParseError` on malformed lines and :class:`ValidationError`
    if the described automaton is not a trimmed deterministic tree.
    """
    lines = text.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "empty input")

    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise ParseError(1, f"expected 'dta <n> root <id>', got {lines[0]!r}")
    n, root = int(m.group(1)), int(m.group(2))
    if n == 0:
        raise ParseError(1, "automaton must have at least one state")
    if root >= n:
        raise ParseError(1, f"root {root} out of range for {n} states")

    if len(lines) < 2:
        raise ParseError(2, "missing 'finals' line")
    m = _FINALS.fullmatch(lines[1])
    if not m:
        raise ParseError(2, f"expected 'finals <ids>', got {lines[1]!r}")
    finals = set()
    for tok in m.group(1).split():
        q = int(tok)
        if q >= n:
            raise ParseError(2, f"final state {q} out of range for {n} states")
        finals.add(q)

    raw: list[tuple[int, str, int]] = []
    for line_no, line in enumerate(lines[2:], start=3):
        m = _TRANSITION.fullmatch(line)
        if not m:
            raise ParseError(line_no, f"expected 't <from> <symbol> <to>', got {line!r}")
        frm, ch, to = int(m.group(1)), m.group(2), int(m.group(3))
        for q in (frm, to):
            if q >= n:
                raise ParseError(line_no, f"dangling state id {q} (only {n} states)")
        raw.append((frm, ch, to))

    alphabet = Alphabet(ch for _, ch, _ in raw)
    children: list[dict[int, int]] = [{} for _ in range(n)]
    violations = []
    for frm, ch, to in raw:
        sym = alphabet.intern(ch)
        if sym in children[frm]:
            violations.append(Violation(ViolationKind.NONDETERMINISTIC, frm, f"two {ch!r}-transitions"))
            continue
        children[frm][sym] = to

    dta = Dta(tuple(children), frozenset(finals), alphabet, root)
    violations.extend(validate(dta))
    if violations:
        raise ValidationError(violations)
    return dta


class ViolationKind(enum.Enum):
    DANGLING = "dangling"
    ROOT_HAS_PARENT = "root-has-parent"
    MULTIPLE_PARENTS = "multiple-parents"
    UNREACHABLE = "unreachable"
    CYCLE = "cycle"
    UNTRIMMED = "untrimmed"
    NONDETERMINISTIC = "nondeterministic"
    NO_STATES = "no-states"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    state: int | None
    detail: str = ""

    def __str__(self) -> str:
        where = "" if self.state is None else f" at state {self.state}"
        extra = f": {self.detail}" if self.detail else ""
        return f"{self.kind.value}{where}{extra}"


def validate(dta: Dta) -> list[Violation]:
    """Return every broken invariant; an empty list means the automaton is valid.

    For a tree, "every state can reach a final state" is the same as "every
    leaf is final".
    """
    n = dta.n_states
    if n == 0:
        return [Violation(ViolationKind.NO_STATES, None)]
    out = []
    if not 0 <= dta.root < n:
        return [Violation(ViolationKind.DANGLING, dta.root, "root out of range")]
    for q in dta.finals:
        if not 0 <= q < n:
            out.append(Violation(ViolationKind.DANGLING, q, "final state out of range"))

    indegree = [0] * n
    for q, kids in enumerate(dta.children):
        for sym, c in kids.items():
            if not 0 <= c < n:
                out.append(Violation(ViolationKind.DANGLING, q, f"transition to missing state {c}"))
                continue
            if not 0 <= sym < len(dta.alphabet):
                out.append(Violation(ViolationKind.DANGLING, q, f"symbol id {sym} outside alphabet"))
            indegree[c] += 1
    if out:
        return out

    if indegree[dta.root]:
        out.append(Violation(ViolationKind.ROOT_HAS_PARENT, dta.root))
    for q in range(n):
        if q != dta.root and indegree[q] > 1:
            out.append(Violation(ViolationKind.MULTIPLE_PARENTS, q, f"{indegree[q]} incoming transitions"))

    seen = [False] * n
    seen[dta.root] = True
    queue = deque([dta.root])
    while queue:
        q = queue.popleft()
        for c in dta.children[q].values():
            if not seen[c]:
                seen[c] = True
                queue.append(c)
    cycle_at = _find_cycle(dta)
    if cycle_at is not None:
        out.append(Violation(ViolationKind.CYCLE, cycle_at))
    out.extend(Violation(ViolationKind.UNREACHABLE, q) for q in range(n) if not seen[q])

    for q in range(n):
        if not dta.children[q] and q not in dta.finals:
            out.append(Violation(ViolationKind.UNTRIMMED, q, "leaf is not final"))
    return out


def _find_cycle(dta: Dta) -> int | None:
    colour = [0] * dta.n_states
    for start in dta.states:
        if colour[start]:
            continue
        stack = [(start, iter(dta.children[start].values()))]
        colour[start] = 1
        while stack:
            q, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[q] = 2
                stack.pop()
            elif colour[nxt] == 1:
                return nxt
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(dta.children[nxt].values())))
    return None
