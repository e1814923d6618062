"""Reflexivity and transitivity of the cover relation, at the witness level."""

from __future__ import annotations

from .automata import Dta
from .recognition import CoverMode, OccurrenceSet, expand_occurrence, verify_witness


class InvalidWitness(ValueError):
    def __init__(self, which: str, reasons: list[str]):
        super().__init__(f"{which}: " + "; ".join(reasons))
        self.reasons = reasons


def identity_witness(dta: Dta) -> OccurrenceSet:
    return OccurrenceSet((dta.root,))


def compose_witnesses(a1: Dta, a2: Dta, a3: Dta, w12: OccurrenceSet, w23: OccurrenceSet,
                      mode: CoverMode = CoverMode.EDGE) -> OccurrenceSet:
    """Witness that ``a1`` covers ``a3``, given ``a1`` covers ``a2`` covers ``a3``.

    Each pair (occurrence of a2 in a3, occurrence of a1 in a2) composes into
    one occurrence of a1 in a3, whose anchor is the first occurrence's image
    of the second's anchor. Equal compositions collapse to one anchor.
    """
    for which, (cover, target, witness) in (("a1->a2", (a1, a2, w12)), ("a2->a3", (a2, a3, w23))):
        check = verify_witness(cover, target, witness, mode)
        if not check:
            raise InvalidWitness(which, check.reasons)
    anchors = set()
    for u in w23:
        psi = expand_occurrence(a2, a3, u)
        anchors.update(psi[v] for v in w12)
    return OccurrenceSet(tuple(anchors))
