"""Instance encodings and the two similarity measures used for retrieval."""

from __future__ import annotations

from fractions import Fraction
from typing import AbstractSet

from .pddl import Instance

SEPARATOR = "|"


def encode_set(inst: Instance) -> frozenset[str]:
    """Initial atoms and goal literals as tagged strings, e.g. ``init:on(a,b)``."""
    return frozenset(
        [f"init:{atom}" for atom in inst.init] + [f"goal:{lit}" for lit in inst.goal]
    )


def encode_string(inst: Instance) -> str:
    """Sorted init atoms, ``||``, sorted goal literals; atoms joined by ``|``."""
    init = SEPARATOR.join(sorted(str(a) for a in inst.init))
    goal = SEPARATOR.join(sorted(str(lit) for lit in inst.goal))
    return f"{init}{SEPARATOR}{SEPARATOR}{goal}"


def jaccard(a: AbstractSet, b: AbstractSet) -> Fraction:
    """|a & b| / |a | b|, with two empty sets counted as identical."""
    union = len(a | b)
    if union == 0:
        return Fraction(1)
    return Fraction(len(a & b), union)


def levenshtein(a: str, b: str) -> int:
    """Edit distance (unit insert/delete/substitute).

    Bit-parallel column recurrence over the shorter string, so each
    character of the longer string costs a handful of integer operations.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return len(a)

    peq: dict[str, int] = {}
    for i, ch in enumerate(b):
        peq[ch] = peq.get(ch, 0) | (1 << i)
    full = (1 << m) - 1
    top = 1 << (m - 1)
    pv, mv, score = full, 0, m
    for ch in a:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = ((((eq & pv) + pv) ^ pv) | eq) & full
        ph = mv | (~(xh | pv) & full)
        mh = pv & xh
        if ph & top:
            score += 1
        elif mh & top:
            score -= 1
        ph = ((ph << 1) | 1) & full
        mh = (mh << 1) & full
        pv = mh | (~(xv | ph) & full)
        mv = ph & xv
    return score


def levenshtein_similarity(a: str, b: str) -> Fraction:
    return 1 - Fraction(levenshtein(a, b), max(len(a), len(b), 1))
