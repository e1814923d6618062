"""Acceptance criteria, one marked group per criterion.

Counts, seeds and time limits are fixed here. Run ``pytest tests/test_acceptance.py``
to get the per-criterion PASS/FAIL summary at the end of the report.
"""

import random
import time

import pytest

from coverdta.automata import (
    Alphabet,
    build_trie,
    canonical_serialize,
    depth,
    insert_word,
    path_automaton,
)
from coverdta.cli import main
from coverdta.generate import adversarial_family, cover_chain, covered_family, covered_word, random_word
from coverdta.minimize import shortest_common_cover, shortest_cover
from coverdta.oracle import (
    enumerate_covered_language,
    exhaustive_covered_language,
    naive_covers,
    naive_shortest_common_cover,
    naive_shortest_cover,
    naive_trie_covers,
)
from coverdta.order import compose_witnesses, identity_witness
from coverdta.recognition import CoverMode, FailureKind, covers, covers_parallel, verify_witness

EDGE, NODE = CoverMode.EDGE, CoverMode.NODE

STRING_PAIRS = 10_000
STRING_PAIRS_SECONDS = 10.0
FAMILIES = 1_000
ADVERSARIAL_FAMILIES = 200
SHORTEST_COVER_WORDS = 10_000
SHORTEST_COVER_SECONDS = 30.0
LANGUAGES = 1_000
PERMUTATIONS = 5
REFLEXIVE_TRIES = 1_000
CHAINS = 1_000
STEP_BUDGET = 8
SUBSETS = 100


def string_pairs(seed=1):
    """Seeded (s, w, alphabet) triples; about half of the w are built to be covered by s."""
    rng = random.Random(seed)
    for _ in range(STRING_PAIRS):
        alphabet = "abc"[:rng.randint(2, 3)]
        s = random_word(rng, alphabet, 1, 6)
        if rng.random() < 0.5:
            w = covered_word(rng, s, 24, stop=rng.uniform(0.05, 0.5))
            if rng.random() < 0.3:
                i = rng.randrange(len(w))
                w = w[:i] + rng.choice(alphabet) + w[i + 1:]
        else:
            w = random_word(rng, alphabet, 1, 24)
        yield s, w, alphabet


def certified_families(seed=2):
    """Seeded (s, W) with every word of W covered by s, checked by the string oracle."""
    rng = random.Random(seed)
    for _ in range(FAMILIES):
        alphabet = "abc"[:rng.randint(2, 3)]
        s = random_word(rng, alphabet, 1, 5)
        family = covered_family(rng, s, rng.randint(1, 8), 20)
        assert all(naive_covers(s, w) for w in family)
        yield s, family


def adversarial_families(seed=3):
    rng = random.Random(seed)
    for _ in range(ADVERSARIAL_FAMILIES):
        yield adversarial_family(rng, "abc"[:rng.randint(2, 3)], rng.randint(2, 6), 16)


def recognition_suite():
    """(cover, target) automata pairs drawn from the string and family suites."""
    for s, w, alphabet in string_pairs():
        ab = Alphabet(alphabet)
        yield path_automaton(s, ab), path_automaton(w, ab)
    for s, family in certified_families():
        yield path_automaton(s), build_trie(family)
    for family in adversarial_families():
        yield path_automaton(family[0][:3]), build_trie(family)


@pytest.mark.criterion(1, "string-cover equivalence on path automata, edge mode")
def test_string_cover_equivalence(record_property):
    pairs = list(string_pairs())
    start = time.perf_counter()
    disagreements = []
    positives = 0
    for s, w, alphabet in pairs:
        ab = Alphabet(alphabet)
        got = covers(path_automaton(s, ab), path_automaton(w, ab), EDGE).covered
        want = naive_covers(s, w)
        positives += want
        if got != want:
            disagreements.append((s, w, got, want))
    elapsed = time.perf_counter() - start
    record_property("pairs", len(pairs))
    record_property("covered", positives)
    record_property("disagreements", len(disagreements))
    record_property("seconds", f"{elapsed:.2f}")
    assert not disagreements, disagreements[:5]
    assert elapsed < STRING_PAIRS_SECONDS


@pytest.mark.criterion(2, "paths cover tries of certified covered word sets, both modes")
def test_certified_families_covered(record_property):
    failures = []
    count = 0
    for s, family in certified_families():
        cover, trie = path_automaton(s), build_trie(family)
        for mode in (NODE, EDGE):
            outcome = covers(cover, trie, mode)
            if not outcome.covered:
                failures.append((s, family, mode, str(outcome.failure)))
        count += 1
    record_property("families", count)
    record_property("failures", len(failures))
    assert count == FAMILIES
    assert not failures, failures[:5]


@pytest.mark.criterion(3, "node/edge mode separation on aba vs abaaaba")
def test_mode_separation_regression():
    cover, target = path_automaton("aba"), path_automaton("abaaaba")
    node = covers(cover, target, NODE)
    edge = covers(cover, target, EDGE)
    assert node.covered and tuple(node.witness) == (0, 4)
    assert not edge.covered
    assert edge.failure.kind is FailureKind.UNCOVERED_EDGE
    assert edge.failure.edge == (3, 4)
    # the embedding-search oracle agrees on both sides of the gap
    assert naive_trie_covers(["aba"], ["abaaaba"], edges=False)
    assert not naive_trie_covers(["aba"], ["abaaaba"], edges=True)
    assert not naive_covers("aba", "abaaaba")


@pytest.mark.criterion(4, "shortest common cover matches the brute-force oracle")
def test_scc_oracle_equivalence(record_property):
    assert shortest_common_cover(["ababa", "abaaba"]) == "aba"
    assert shortest_common_cover(["abc", "abd"]) is None
    families = [family for _, family in certified_families()] + list(adversarial_families())
    disagreements = []
    none_count = 0
    for family in families:
        got = shortest_common_cover(family)
        want = naive_shortest_common_cover(family)
        none_count += want is None
        if got != want:
            disagreements.append((family, got, want))
    record_property("families", len(families))
    record_property("without_cover", none_count)
    record_property("disagreements", len(disagreements))
    assert len(families) == FAMILIES + ADVERSARIAL_FAMILIES
    assert not disagreements, disagreements[:5]


@pytest.mark.criterion(5, "single-word shortest cover matches the brute-force oracle")
def test_shortest_cover(record_property):
    rng = random.Random(5)
    words = []
    for _ in range(SHORTEST_COVER_WORDS):
        alphabet = "abc"[:rng.randint(1, 3)]
        if rng.random() < 0.5:
            words.append(covered_word(rng, random_word(rng, alphabet, 1, 5), 30))
        else:
            words.append(random_word(rng, alphabet, 1, 30))
    start = time.perf_counter()
    got = [shortest_cover(w) for w in words]
    elapsed = time.perf_counter() - start
    disagreements = [(w, g) for w, g in zip(words, got) if g != naive_shortest_cover(w)]
    nontrivial = sum(naive_shortest_cover(w) != w for w in words)
    record_property("words", len(words))
    record_property("proper_covers", nontrivial)
    record_property("disagreements", len(disagreements))
    record_property("seconds", f"{elapsed:.2f}")
    assert not disagreements, disagreements[:5]
    assert elapsed < SHORTEST_COVER_SECONDS


@pytest.mark.criterion(6, "trie is canonical under insertion order and depth is max length")
def test_canonical_trie(record_property):
    rng = random.Random(6)
    mismatches = []
    for _ in range(LANGUAGES):
        alphabet = "abcd"[:rng.randint(1, 4)]
        words = list({random_word(rng, alphabet, 0, 10) for _ in range(rng.randint(1, 12))})
        reference = canonical_serialize(build_trie(words))
        for _ in range(PERMUTATIONS):
            order = rng.sample(words, len(words))
            trie = build_trie(order)
            incremental = path_automaton(order[0], trie.alphabet)
            for w in order[1:]:
                incremental = insert_word(incremental, w)
            if (canonical_serialize(trie) != reference
                    or canonical_serialize(incremental) != reference
                    or depth(trie) != max(map(len, words))):
                mismatches.append(words)
    record_property("languages", LANGUAGES)
    record_property("builds", LANGUAGES * PERMUTATIONS * 2)
    record_property("mismatches", len(mismatches))
    assert not mismatches, mismatches[:3]


@pytest.mark.criterion(7, "reflexivity and witness-level transitivity")
def test_reflexivity(record_property):
    rng = random.Random(71)
    bad = []
    for _ in range(REFLEXIVE_TRIES):
        alphabet = "abc"[:rng.randint(1, 3)]
        trie = build_trie([random_word(rng, alphabet, 1, 10) for _ in range(rng.randint(1, 8))])
        for mode in (NODE, EDGE):
            outcome = covers(trie, trie, mode)
            if not (outcome.covered and verify_witness(trie, trie, identity_witness(trie), mode)):
                bad.append(canonical_serialize(trie))
    record_property("reflexive_failures", len(bad))
    assert not bad, bad[:3]


@pytest.mark.criterion(7, "reflexivity and witness-level transitivity")
def test_transitivity(record_property):
    rng = random.Random(72)
    bad = []
    for _ in range(CHAINS):
        s1, s2, family = cover_chain(rng, "abc"[:rng.randint(1, 3)])
        a1, a2, a3 = path_automaton(s1), path_automaton(s2), build_trie(family)
        for mode in (NODE, EDGE):
            w12 = covers(a1, a2, mode).witness
            w23 = covers(a2, a3, mode).witness
            composed = compose_witnesses(a1, a2, a3, w12, w23, mode)
            check = verify_witness(a1, a3, composed, mode)
            if not check:
                bad.append((s1, s2, family, mode, check.reasons))
    record_property("chains", CHAINS)
    record_property("transitive_failures", len(bad))
    assert not bad, bad[:3]


def _same(a, b):
    return (a.covered == b.covered and a.witness == b.witness and a.failure == b.failure
            and a.availability == b.availability and a.pruned == b.pruned)


@pytest.mark.criterion(8, "serial and parallel engines agree within step and round budgets")
def test_engine_equivalence_and_bounds(record_property):
    instances = 0
    mismatches, over_steps, over_rounds = [], [], []
    worst_ratio = 0.0
    for cover, target in recognition_suite():
        for mode in (NODE, EDGE):
            serial = covers(cover, target, mode)
            parallel = covers_parallel(cover, target, mode)
            instances += 1
            if not _same(serial, parallel):
                mismatches.append((cover, target, mode))
            budget = cover.n_states * target.n_states
            worst_ratio = max(worst_ratio, serial.stats.basic_steps / budget,
                              parallel.stats.basic_steps / budget)
            if max(serial.stats.basic_steps, parallel.stats.basic_steps) > STEP_BUDGET * budget:
                over_steps.append((cover, target, mode))
            if parallel.stats.parallel_rounds > 2 * depth(target) + 2:
                over_rounds.append((cover, target, mode))
    record_property("instances", instances)
    record_property("max_steps_per_QQ", f"{worst_ratio:.3f}")
    record_property("mismatches", len(mismatches))
    assert not mismatches
    assert not over_steps
    assert not over_rounds


@pytest.mark.criterion(9, "aba-covered language up to length 11")
def test_covered_language_scenario(record_property):
    language = enumerate_covered_language("aba", 11)
    assert language == exhaustive_covered_language("aba", 11, "ab")
    assert len(language) == 15
    trie = build_trie(language)
    outcome = covers(path_automaton("aba"), trie, EDGE)
    assert outcome.covered and verify_witness(path_automaton("aba"), trie, outcome.witness, EDGE)
    assert shortest_common_cover(language) == "aba"
    rng = random.Random(9)
    failures = []
    for _ in range(SUBSETS):
        subset = rng.sample(language, rng.randint(1, len(language)))
        if not covers(path_automaton("aba"), build_trie(subset), EDGE).covered:
            failures.append(subset)
    record_property("language_size", len(language))
    record_property("subset_failures", len(failures))
    assert not failures


@pytest.mark.criterion(10, "candidate-count claim flagged, parallel constant reported")
def test_bench_reports_candidates_and_note(capsys, record_property):
    # paths ending in a final state of the trie miss the common cover "aba"
    finals_only = [w for w in ("ababa", "abaaba")
                   if all(naive_covers(w, x) for x in ("ababa", "abaaba"))]
    assert finals_only == [] and shortest_common_cover(["ababa", "abaaba"]) == "aba"

    assert main(["bench", "--instances", "20", "--seed", "10"]) == 0
    out = capsys.readouterr().out
    section = out.split("# shortest common cover on equal-length families\n", 1)[1].splitlines()
    header = section[0].split("\t")
    rows = [dict(zip(header, line.split("\t"))) for line in section[1:] if line[0].isdigit()]
    report = dict(line.split("\t", 1) for line in section if line.split("\t", 1)[0] in ("max_c_parallel", "note"))
    assert len(rows) == 20
    assert all(row["prefix_candidates"] == row["min_len"] for row in rows)
    assert all(int(row["serial_steps"]) > 0 for row in rows)
    assert "criterion 10" in report["note"]
    c = float(report["max_c_parallel"])
    record_property("max_c_parallel", f"{c:.3f}")
    assert c > 0
