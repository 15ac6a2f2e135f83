"""Fast (S1) solvers: hand back the plan of the closest remembered instance."""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .memory import CaseMemory, CaseRecord
from .pddl import Instance
from .similarity import encode_set, encode_string, jaccard, levenshtein_similarity
from .strips import Step


class S1Kind(str, enum.Enum):
    JACCARD = "jac"
    LEVENSHTEIN = "lev"
    MIX = "mix"
    RNG = "rng"


@dataclass(frozen=True)
class S1Proposal:
    plan: tuple[Step, ...]
    confidence: Fraction
    source_record: CaseRecord | None = None
    retrieval_time: float = 0.0


def _argmax(records: list[CaseRecord], score: Callable[[CaseRecord], Fraction]):
    best, best_score = None, Fraction(-1)
    for r in records:
        s = score(r)
        # strict comparison keeps the earliest record on ties
        if s > best_score:
            best, best_score = r, s
    return best, best_score


def retrieve(
    mem: CaseMemory,
    inst: Instance,
    kind: S1Kind | str = S1Kind.JACCARD,
    rng_seed: int | str = 0,
) -> S1Proposal:
    kind = S1Kind(kind)
    start = time.perf_counter()
    records = mem.solved_instances(inst.domain_name)
    if not records:
        return S1Proposal((), Fraction(0), None, time.perf_counter() - start)

    query_set = encode_set(inst)
    if kind is S1Kind.JACCARD:
        best, conf = _argmax(records, lambda r: jaccard(query_set, r.formula_set))
    elif kind is S1Kind.LEVENSHTEIN:
        query = encode_string(inst)
        best, conf = _argmax(records, lambda r: levenshtein_similarity(query, r.string_encoding))
    elif kind is S1Kind.MIX:
        query = encode_string(inst)
        best, conf = _argmax(
            records,
            lambda r: max(
                jaccard(query_set, r.formula_set),
                levenshtein_similarity(query, r.string_encoding),
            ),
        )
    else:
        best = random.Random(f"retrieve:{rng_seed}").choice(records)
        conf = jaccard(query_set, best.formula_set)
    return S1Proposal(best.plan, conf, best, time.perf_counter() - start)
