"""Brute-force reference implementations of string covering.

Everything here is intentionally slow and obvious, and imports nothing from
the rest of the package: these functions are the ground truth the automaton
code is tested against.
"""

from __future__ import annotations

import itertools


class GuardExceeded(RuntimeError):
    pass


def naive_covers(s: str, w: str) -> bool:
    """True iff every position of ``w`` lies inside some occurrence of ``s``."""
    if not s or not w:
        return False
    covered = [False] * len(w)
    for start in range(len(w) - len(s) + 1):
        if w[start:start + len(s)] == s:
            for i in range(start, start + len(s)):
                covered[i] = True
    return all(covered)


def naive_borders(w: str) -> list[str]:
    """Proper prefixes of ``w`` that are also suffixes, then ``w`` itself."""
    return [w[:k] for k in range(1, len(w) + 1) if w.endswith(w[:k])]


def naive_shortest_cover(w: str) -> str:
    for k in range(1, len(w) + 1):
        if naive_covers(w[:k], w):
            return w[:k]
    return w


def naive_shortest_common_cover(words: list[str]) -> str | None:
    shortest = min(words, key=len)
    for k in range(1, len(shortest) + 1):
        candidate = shortest[:k]
        if all(naive_covers(candidate, w) for w in words):
            return candidate
    return None


def enumerate_covered_language(s: str, n: int, limit: int = 200_000) -> list[str]:
    """All words of length <= n covered by ``s``, shortest first.

    Words are grown by chaining occurrences of ``s`` whose starts are at most
    ``len(s)`` apart, then each one is re-certified with :func:`naive_covers`.
    """
    if len(s) > n:
        return []
    found = {s}
    frontier = [s]
    while frontier:
        nxt = []
        for w in frontier:
            for shift in range(1, len(s) + 1):
                overlap = len(s) - shift
                if overlap and not w.endswith(s[:overlap]):
                    continue
                ext = w + s[overlap:]
                if len(ext) <= n and ext not in found:
                    found.add(ext)
                    nxt.append(ext)
                    if len(found) > limit:
                        raise GuardExceeded(f"more than {limit} covered words")
        frontier = nxt
    out = [w for w in found if naive_covers(s, w)]
    out.sort(key=lambda w: (len(w), w))
    return out


def exhaustive_covered_language(s: str, n: int, alphabet: str) -> list[str]:
    """Filter all of ``alphabet``^{<=n} through :func:`naive_covers`."""
    out = []
    for length in range(1, n + 1):
        for letters in itertools.product(sorted(alphabet), repeat=length):
            w = "".join(letters)
            if naive_covers(s, w):
                out.append(w)
    return out


def _nested_trie(words) -> tuple[dict, set]:
    # node = dict symbol -> node; finals tracked by id()
    root: dict = {}
    finals = set()
    for w in words:
        node = root
        for ch in w:
            node = node.setdefault(ch, {})
        finals.add(id(node))
    return root, finals


def naive_trie_covers(cover_words: list[str], target_words: list[str], edges: bool = True) -> bool:
    """Cover check for the tries of two word sets by exhaustive embedding search.

    Tries every target node as a place to put the cover's root, keeps the ones
    where the whole cover tree fits, and checks that together they reach every
    target node (and every target edge when ``edges``) and land a final cover
    state on every final target node.
    """
    cover, cover_finals = _nested_trie(cover_words)
    target, target_finals = _nested_trie(target_words)

    def nodes(tree, path=""):
        yield path, tree
        for ch, sub in tree.items():
            yield from nodes(sub, path + ch)

    def embeds(c, t):
        return all(ch in t and embeds(c[ch], t[ch]) for ch in c)

    target_nodes = dict(nodes(target))
    hit_nodes, hit_edges, hit_finals = set(), set(), set()
    for anchor, t in target_nodes.items():
        if not embeds(cover, t):
            continue
        for path, c in nodes(cover):
            hit_nodes.add(anchor + path)
            if path:
                hit_edges.add(anchor + path)
            if id(c) in cover_finals:
                hit_finals.add(anchor + path)
    if any(p not in hit_nodes for p in target_nodes):
        return False
    if edges and any(p and p not in hit_edges for p in target_nodes):
        return False
    return all(p in hit_finals for p, t in target_nodes.items() if id(t) in target_finals)
