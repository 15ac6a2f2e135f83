"""Fast and slow planning with a metacognitive controller."""

from .blocksworld import gen_blocksworld
from .memory import CaseMemory, CaseRecord, System
from .metacog import Branch, MetaParams, SolveOutcome, Status, solve, solve_s2_only
from .pddl import Atom, Domain, Instance, Literal, parse_domain, parse_instance
from .retrieval import S1Kind, S1Proposal, retrieve
from .search import SearchConfig, Strategy
from .strips import GroundedTask, apply, compute_difficulty, ground, holds
from .validator import correctness, execute

__all__ = [
    "Atom",
    "Branch",
    "CaseMemory",
    "CaseRecord",
    "Domain",
    "GroundedTask",
    "Instance",
    "Literal",
    "MetaParams",
    "S1Kind",
    "S1Proposal",
    "SearchConfig",
    "SolveOutcome",
    "Status",
    "Strategy",
    "System",
    "apply",
    "compute_difficulty",
    "correctness",
    "execute",
    "gen_blocksworld",
    "ground",
    "holds",
    "parse_domain",
    "parse_instance",
    "retrieve",
    "solve",
    "solve_s2_only",
]
