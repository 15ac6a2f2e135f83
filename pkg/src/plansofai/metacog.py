"""Metacognitive arbitration between the fast (S1) and slow (S2) solvers.

:func:`solve` runs the two-stage controller.  The first stage (MC-1) adopts
the S1 proposal straight away when there is enough experience and the
accountability-discounted confidence clears the risk threshold ``T3``.  The
second stage (MC-2) weighs the estimated S2 cost against the remaining time
budget, occasionally explores S1 at random, and otherwise compares the
proposal's correctness with what S2 would buy.

All correctness thresholds are compared as exact fractions.
"""

from __future__ import annotations

import enum
import math
import random
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol

from .memory import CaseMemory, CaseRecord, System
from .pddl import Domain, Instance, domain_to_pddl, instance_to_pddl
from .retrieval import S1Kind, S1Proposal, retrieve
from .search import ExternalPlanner, S2Result, SearchConfig, solve_external
from .search import solve as search_solve
from .strips import GroundedTask, Step, compute_difficulty, ground
from .validator import execute

Clock = Callable[[], float]


class Branch(str, enum.Enum):
    MC1_ADOPT = "MC1-adopt"
    COST_EXCEEDED = "MC2-cost-exceeded"
    EXPLORE = "MC2-explore"
    KEEP_S1 = "MC2-keep-S1"
    S2_WITH_FALLBACK = "MC2-engage-S2-with-fallback"
    S2_NO_FALLBACK = "MC2-engage-S2-no-fallback"
    OPT_OUT = "opt-out"


class Status(str, enum.Enum):
    SOLVED = "solved"
    OPT_OUT = "opt-out"


@dataclass(frozen=True)
class MetaParams:
    A: float = 0.5
    T1: int = 20
    T2: int = 20
    T3: float = 0.6
    epsilon: float = 0.1

    def __post_init__(self):
        for name in ("A", "T3", "epsilon"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        for name in ("T1", "T2"):
            value = getattr(self, name)
            if value < 0 or int(value) != value:
                raise ValueError(f"{name} must be a non-negative integer, got {value}")

    def exact(self, name: str) -> Fraction:
        # via str so that 0.6 means 3/5 rather than its binary approximation
        return Fraction(str(getattr(self, name)))


@dataclass
class MetaTrace:
    K: Fraction = Fraction(0)
    avg_corr: Fraction | None = None
    diff: int | None = None
    est_t: float | None = None
    rem_t: float | None = None
    est_cost: float | None = None
    prob: Fraction | None = None
    draw: float | None = None
    elapsed_s1: float = 0.0
    s2_time: float = 0.0
    s2_outcome: str | None = None
    branch: Branch | None = None
    # the controller's return line, kept when branch ends up as opt-out
    via: Branch | None = None


@dataclass
class SolveOutcome:
    status: Status
    plan: tuple[Step, ...] | None
    correctness: Fraction | None
    system_used: System | None
    trace: MetaTrace
    wall_time: float

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


@dataclass(frozen=True)
class Problem:
    domain: Domain
    instance: Instance
    task: GroundedTask


class S2Solver(Protocol):
    def __call__(self, problem: Problem, deadline: float, cancel: threading.Event | None = None) -> S2Result: ...


@dataclass(frozen=True)
class EmbeddedS2:
    config: SearchConfig = field(default_factory=SearchConfig)

    def __call__(self, problem, deadline, cancel=None):
        return search_solve(problem.task, self.config, cancel=cancel, deadline=deadline)


@dataclass(frozen=True)
class ExternalS2:
    planner: ExternalPlanner

    def __call__(self, problem, deadline, cancel=None):
        return solve_external(
            self.planner,
            domain_to_pddl(problem.domain),
            instance_to_pddl(problem.instance),
            deadline,
            cancel,
        )


@dataclass
class SolveContext:
    """Everything one controller run needs; owned by a single :func:`solve` call."""

    problem: Problem
    tl: float
    params: MetaParams
    memory: CaseMemory
    s2: S2Solver
    clock: Clock
    start: float
    trace: MetaTrace
    cancel: threading.Event | None = None

    def elapsed(self) -> float:
        return self.clock() - self.start

    def remaining(self) -> float:
        return self.tl - self.elapsed()


def _finish(ctx: SolveContext, plan, system: System) -> SolveOutcome:
    trace = execute(ctx.problem.task, plan)
    corr = trace.correctness
    wall = ctx.elapsed()
    ctx.memory.record(
        CaseRecord.from_solution(ctx.problem.instance, plan, trace.satisfied_goals, system, wall)
    )
    return SolveOutcome(Status.SOLVED, tuple(plan), corr, system, ctx.trace, wall)


def _opt_out(ctx: SolveContext) -> SolveOutcome:
    ctx.trace.via = ctx.trace.branch
    ctx.trace.branch = Branch.OPT_OUT
    return SolveOutcome(Status.OPT_OUT, None, None, None, ctx.trace, ctx.elapsed())


def solve_with_s2(fallback: S1Proposal | None, ctx: SolveContext, tl_remaining: float) -> SolveOutcome:
    result = ctx.s2(ctx.problem, max(tl_remaining, 0.0), ctx.cancel)
    ctx.trace.s2_time = result.stats.wall_time
    ctx.trace.s2_outcome = result.outcome.value
    if result.solved and result.stats.wall_time <= max(tl_remaining, 0.0):
        trace = execute(ctx.problem.task, result.plan)
        if trace.satisfied_goals != trace.total_goals:
            raise AssertionError("S2 returned a plan that does not reach the goal")
        return _finish(ctx, result.plan, System.S2)
    if fallback is not None:
        return _finish(ctx, fallback.plan, System.S1)
    return _opt_out(ctx)


def try_s1(proposal: S1Proposal, ctx: SolveContext) -> SolveOutcome:
    corr = execute(ctx.problem.task, proposal.plan).correctness
    if corr >= ctx.params.exact("A"):
        return _finish(ctx, proposal.plan, System.S1)
    return solve_with_s2(None, ctx, ctx.remaining())


def accountability(mem: CaseMemory, domain_name: str, t2: int) -> tuple[Fraction, Fraction | None]:
    """K and the mean S1 correctness it was derived from (None below ``t2`` usages)."""
    s1_records = mem.solved_instances(domain_name, System.S1)
    if len(s1_records) < t2 or not s1_records:
        return Fraction(0), None
    avg = sum((Fraction(r.solved_goals, r.total_goals) for r in s1_records), Fraction(0)) / len(s1_records)
    return 1 - avg, avg


def solve(
    dom: Domain,
    inst: Instance,
    tl: float,
    params: MetaParams | None = None,
    mem: CaseMemory | None = None,
    s1: S1Kind | str | Callable[[CaseMemory, Instance], S1Proposal] = S1Kind.JACCARD,
    rng_seed: int | str = 0,
    *,
    s2: S2Solver | None = None,
    clock: Clock = time.perf_counter,
    task: GroundedTask | None = None,
    cancel: threading.Event | None = None,
) -> SolveOutcome:
    """Solve ``inst`` within ``tl`` seconds, appending the solution to ``mem``.

    ``s1`` is a retrieval kind or any callable returning an
    :class:`S1Proposal`; ``s2`` defaults to the embedded greedy planner.
    """
    if not tl > 0:
        raise ValueError("time limit must be positive")
    params = params or MetaParams()
    mem = mem if mem is not None else CaseMemory()
    start = clock()
    task = task if task is not None else ground(dom, inst)
    trace = MetaTrace()
    ctx = SolveContext(Problem(dom, inst, task), tl, params, mem, s2 or EmbeddedS2(), clock, start, trace, cancel)

    if callable(s1) and not isinstance(s1, str):
        p = s1(mem, inst)
    else:
        p = retrieve(mem, inst, s1, rng_seed)
    cx = Fraction(p.confidence)
    trace.elapsed_s1 = ctx.elapsed()

    A, T3, eps = params.exact("A"), params.exact("T3"), params.exact("epsilon")

    # MC-1
    if len(mem.solved_instances(dom.name)) >= params.T1:
        trace.K, trace.avg_corr = accountability(mem, dom.name, params.T2)
        if cx * (1 - trace.K) >= T3:
            trace.branch = Branch.MC1_ADOPT
            return try_s1(p, ctx)

    # MC-2
    trace.diff = compute_difficulty(inst, dom)
    trace.est_t = mem.avg_t_from_diff(trace.diff)
    trace.rem_t = ctx.remaining()
    if trace.rem_t <= 0:
        trace.est_cost = math.inf
    else:
        trace.est_cost = trace.est_t / trace.rem_t
    if trace.est_cost > 1:
        trace.branch = Branch.COST_EXCEEDED
        return try_s1(p, ctx)

    trace.prob = (1 - T3) * eps
    trace.draw = random.Random(f"explore:{rng_seed}").random()
    if trace.prob >= Fraction(trace.draw):
        trace.branch = Branch.EXPLORE
        return try_s1(p, ctx)

    corr = execute(task, p.plan).correctness
    if corr >= A:
        if 1 - Fraction(trace.est_cost) * (1 - T3) >= corr * (1 - trace.K):
            trace.branch = Branch.S2_WITH_FALLBACK
            return solve_with_s2(p, ctx, ctx.remaining())
        trace.branch = Branch.KEEP_S1
        return _finish(ctx, p.plan, System.S1)
    trace.branch = Branch.S2_NO_FALLBACK
    return solve_with_s2(None, ctx, ctx.remaining())


def solve_s2_only(
    dom: Domain,
    inst: Instance,
    tl: float,
    mem: CaseMemory | None = None,
    *,
    s2: S2Solver | None = None,
    clock: Clock = time.perf_counter,
    task: GroundedTask | None = None,
    cancel: threading.Event | None = None,
) -> SolveOutcome:
    """Baseline without S1: the whole budget goes to S2, no fallback."""
    if not tl > 0:
        raise ValueError("time limit must be positive")
    mem = mem if mem is not None else CaseMemory()
    start = clock()
    task = task if task is not None else ground(dom, inst)
    ctx = SolveContext(Problem(dom, inst, task), tl, MetaParams(), mem, s2 or EmbeddedS2(), clock, start, MetaTrace(), cancel)
    return solve_with_s2(None, ctx, ctx.remaining())
