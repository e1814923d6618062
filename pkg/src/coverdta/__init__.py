"""Covering finite-language tries with smaller tree automata.

Generalises string covers: a path automaton for ``s`` covers the path
automaton of ``w`` exactly when ``s`` covers ``w``, and covers the trie of any
word set whose members ``s`` all cover.
"""

from .automata import (
    Alphabet,
    AlphabetMismatch,
    Dta,
    EmptyLanguage,
    ParseError,
    ValidationError,
    accepts,
    build_trie,
    canonical_serialize,
    depth,
    enumerate_language,
    insert_word,
    parse_automaton,
    path_automaton,
    validate,
)
from .minimize import (
    DEPTH,
    STATE_COUNT,
    CandidateGenerator,
    Exhausted,
    MinimizationResult,
    Objective,
    minimize_over,
    path_candidates,
    randomized_minimize,
    shortest_common_cover,
    shortest_cover,
)
from .order import InvalidWitness, compose_witnesses, identity_witness
from .recognition import (
    AvailabilityMap,
    CoverMode,
    CoverOutcome,
    CoverStats,
    Failure,
    FailureKind,
    NoEmbedding,
    OccurrenceSet,
    PrunedMap,
    availability_pass,
    covers,
    covers_parallel,
    expand_occurrence,
    extract_occurrences,
    pruning_pass,
    verify_witness,
)

__version__ = "0.1.0"
