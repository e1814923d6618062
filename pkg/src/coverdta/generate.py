"""Seeded random instances: words, covered words, word families, cover chains."""

from __future__ import annotations

import random

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def letters(k: int) -> str:
    if not 1 <= k <= len(LETTERS):
        raise ValueError(f"alphabet size must be in 1..{len(LETTERS)}")
    return LETTERS[:k]


def random_word(rng: random.Random, alphabet: str, min_len: int, max_len: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(min_len, max_len)))


def covered_word(rng: random.Random, s: str, max_len: int, stop: float = 0.25) -> str:
    """A word covered by ``s`` made by chaining overlapping copies of it.

    Each step shifts the next copy by 1..len(s) positions, choosing among the
    shifts consistent with what is already written.
    """
    if len(s) > max_len:
        raise ValueError("max_len shorter than the cover")
    w = s
    while rng.random() > stop:
        shifts = [k for k in range(1, len(s) + 1)
                  if len(w) + k <= max_len and w.endswith(s[:len(s) - k])]
        if not shifts:
            break
        k = rng.choice(shifts)
        w += s[len(s) - k:]
    return w


def covered_family(rng: random.Random, s: str, count: int, max_len: int) -> list[str]:
    return [covered_word(rng, s, max_len, stop=rng.uniform(0.05, 0.5)) for _ in range(count)]


def mutate(rng: random.Random, w: str, alphabet: str) -> str:
    i = rng.randrange(len(w))
    return w[:i] + rng.choice(alphabet) + w[i + 1:]


def adversarial_family(rng: random.Random, alphabet: str, count: int, max_len: int) -> list[str]:
    """Words sharing long prefixes but (usually) no common cover.

    One of: a covered family with one damaged member; a covered family where
    one member repeats its first letter, so its branch shares a prefix with
    covered words in the trie; or a shared random prefix with random tails.
    """
    kind = rng.randrange(3)
    if kind < 2:
        s = random_word(rng, alphabet, 2, 5)
        family = covered_family(rng, s, count, max_len)
        j = rng.randrange(len(family))
        family[j] = mutate(rng, family[j], alphabet) if kind == 0 else family[j][0] + family[j]
        return family
    prefix = random_word(rng, alphabet, 2, max(2, max_len // 2))
    return [prefix + random_word(rng, alphabet, 1, max(1, max_len - len(prefix))) for _ in range(count)]


def cover_chain(rng: random.Random, alphabet: str, max_len: int = 24) -> tuple[str, str, list[str]]:
    """Words ``(s1, s2, family)`` with s1 covering s2 and s2 covering each of family."""
    s1 = random_word(rng, alphabet, 1, 4)
    s2 = covered_word(rng, s1, max(len(s1), max_len // 3))
    family = covered_family(rng, s2, rng.randint(1, 4), max_len)
    return s1, s2, family
