"""Deadline-bounded forward search over grounded STRIPS tasks.

Two strategies are provided: breadth-first (shortest plans, used as an
oracle and for memory seeding) and greedy best-first with the goal-count
heuristic (the default slow solver).  Both honor a wall-clock deadline and
an optional cooperative cancellation event, checked every
``CHECK_INTERVAL`` expansions.

:func:`solve_external` delegates to a planner executable instead and
re-validates whatever plan it writes.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import json
import os
import shutil
import subprocess
import tempfile
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .pddl import parse_domain, parse_instance
from .strips import GoalLiteral, GroundedTask, State, Step, format_step, ground, parse_plan, to_mask
from .validator import execute

CHECK_INTERVAL = 1024


class Strategy(str, enum.Enum):
    BFS = "bfs-optimal"
    GREEDY = "greedy-best-first"


class Outcome(str, enum.Enum):
    SOLVED = "solved"
    TIMEOUT = "timeout"
    UNSOLVABLE = "unsolvable"
    RESOURCE_LIMIT = "resource-limit"


@dataclass(frozen=True)
class SearchConfig:
    strategy: Strategy = Strategy.GREEDY
    heuristic: str = "goal-count"
    deadline: float = 60.0
    node_limit: int | None = None

    def __post_init__(self):
        if not self.deadline > 0:
            raise ValueError("deadline must be positive")
        if self.heuristic != "goal-count":
            raise ValueError(f"unknown heuristic {self.heuristic!r}")


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    wall_time: float = 0.0


@dataclass
class S2Result:
    outcome: Outcome
    plan: tuple[Step, ...] | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    diagnostic: str = ""

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED


def goal_count_heuristic(s: State, goals: Sequence[GoalLiteral]) -> int:
    return sum(1 for idx, positive in goals if (idx in s) != positive)


def _goal_masks(task: GroundedTask) -> tuple[int, int]:
    pos = neg = 0
    for idx, positive in task.goals:
        if positive:
            pos |= 1 << idx
        else:
            neg |= 1 << idx
    return pos, neg


def _extract(task: GroundedTask, parents: dict, s: int) -> tuple[Step, ...]:
    steps = []
    while True:
        parent, a = parents[s]
        if parent is None:
            break
        steps.append(task.actions[a].step)
        s = parent
    steps.reverse()
    return tuple(steps)


def solve(
    task: GroundedTask,
    cfg: SearchConfig | None = None,
    cancel: threading.Event | None = None,
    deadline: float | None = None,
) -> S2Result:
    """Search for a plan; ``deadline`` overrides ``cfg.deadline`` when given.

    A deadline that is already non-positive yields an immediate Timeout.
    """
    cfg = cfg or SearchConfig()
    budget = cfg.deadline if deadline is None else deadline
    start = time.perf_counter()
    stats = SearchStats()
    if budget <= 0:
        return S2Result(Outcome.TIMEOUT, stats=stats, diagnostic="no time left")
    stop_at = start + budget

    actions = [(a.pre_mask, a.neg_mask, a.add_mask, a.del_mask) for a in task.actions]
    gpos, gneg = _goal_masks(task)
    init = to_mask(task.init)
    parents: dict[int, tuple[int | None, int]] = {init: (None, -1)}

    def h(s: int) -> int:
        return (gpos & ~s).bit_count() + (gneg & s).bit_count()

    greedy = cfg.strategy is Strategy.GREEDY
    counter = itertools.count()
    if greedy:
        frontier: list = [(h(init), next(counter), init)]
        pop = lambda: heapq.heappop(frontier)[2]  # noqa: E731
        push = lambda s: heapq.heappush(frontier, (h(s), next(counter), s))  # noqa: E731
    else:
        queue: deque[int] = deque([init])
        frontier = queue  # type: ignore[assignment]
        pop = queue.popleft
        push = queue.append

    def finish(outcome: Outcome, plan=None, diagnostic: str = "") -> S2Result:
        stats.wall_time = time.perf_counter() - start
        return S2Result(outcome, plan, stats, diagnostic)

    while frontier:
        if stats.expanded % CHECK_INTERVAL == 0:
            if time.perf_counter() >= stop_at:
                return finish(Outcome.TIMEOUT, diagnostic=f"deadline of {budget:.3f}s reached")
            if cancel is not None and cancel.is_set():
                return finish(Outcome.TIMEOUT, diagnostic="cancelled")
        if cfg.node_limit is not None and stats.expanded >= cfg.node_limit:
            return finish(Outcome.RESOURCE_LIMIT, diagnostic=f"node limit {cfg.node_limit} reached")
        s = pop()
        stats.expanded += 1
        if (s & gpos) == gpos and not (s & gneg):
            return finish(Outcome.SOLVED, _extract(task, parents, s))
        for ai, (pre, neg, add, dele) in enumerate(actions):
            if (s & pre) == pre and not (s & neg):
                t = (s & ~dele) | add
                if t not in parents:
                    parents[t] = (s, ai)
                    stats.generated += 1
                    push(t)
    return finish(Outcome.UNSOLVABLE, diagnostic="reachable state space exhausted")


# ---------------------------------------------------------------------------
# external planners
# ---------------------------------------------------------------------------


class ExternalPlannerError(Exception):
    pass


class PlanParseError(ExternalPlannerError):
    pass


@dataclass(frozen=True)
class ExternalPlanner:
    """How to call a planner binary.

    ``args`` may contain ``{domain}``, ``{problem}`` and ``{planfile}``
    placeholders.  The planner must write one ``(name arg...)`` per line to
    the plan file; ``;`` comment lines are ignored.
    """

    executable: str
    args: tuple[str, ...] = ("{domain}", "{problem}", "{planfile}")

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ExternalPlanner":
        data = json.loads(Path(path).read_text())
        if "executable" not in data:
            raise ExternalPlannerError(f"{path}: descriptor lacks 'executable'")
        return cls(data["executable"], tuple(data.get("args", cls.args)))


def solve_external(
    adapter: ExternalPlanner,
    dom_text: str,
    inst_text: str,
    deadline: float,
    cancel: threading.Event | None = None,
) -> S2Result:
    exe = shutil.which(adapter.executable) or (
        adapter.executable if os.access(adapter.executable, os.X_OK) else None
    )
    if exe is None:
        raise ExternalPlannerError(f"planner executable not found: {adapter.executable}")

    start = time.perf_counter()
    stats = SearchStats()
    if deadline <= 0:
        return S2Result(Outcome.TIMEOUT, stats=stats, diagnostic="no time left")

    with tempfile.TemporaryDirectory(prefix="plansofai-") as tmp:
        dpath = os.path.join(tmp, "domain.pddl")
        ppath = os.path.join(tmp, "problem.pddl")
        plan_path = os.path.join(tmp, "plan.txt")
        Path(dpath).write_text(dom_text)
        Path(ppath).write_text(inst_text)
        argv = [exe] + [
            a.format(domain=dpath, problem=ppath, planfile=plan_path) for a in adapter.args
        ]
        err_path = os.path.join(tmp, "stderr.txt")
        with open(err_path, "w") as err:
            proc = subprocess.Popen(argv, stdout=subprocess.DEVNULL, stderr=err, cwd=tmp)
        timed_out = False
        stop_at = start + deadline
        while True:
            try:
                proc.wait(timeout=min(0.05, max(0.0, stop_at - time.perf_counter())))
                break
            except subprocess.TimeoutExpired:
                if time.perf_counter() >= stop_at or (cancel is not None and cancel.is_set()):
                    proc.kill()
                    proc.wait()
                    timed_out = True
                    break
        stats.wall_time = time.perf_counter() - start
        if timed_out:
            return S2Result(Outcome.TIMEOUT, stats=stats, diagnostic="planner killed at deadline")
        stderr = Path(err_path).read_text(errors="replace")[-500:]
        if not os.path.exists(plan_path):
            return S2Result(
                Outcome.UNSOLVABLE,
                stats=stats,
                diagnostic=f"no plan file (exit {proc.returncode}) {stderr.strip()}".strip(),
            )
        try:
            plan = parse_plan(Path(plan_path).read_text())
        except ValueError as exc:
            raise PlanParseError(str(exc)) from exc

    dom = parse_domain(dom_text)
    task = ground(dom, parse_instance(inst_text, dom))
    trace = execute(task, plan)
    if trace.satisfied_goals != trace.total_goals or trace.truncated_at is not None:
        where = (
            f"step {trace.truncated_at.step} {format_step(plan[trace.truncated_at.step])}: "
            f"{trace.truncated_at.reason}"
            if trace.truncated_at
            else f"{trace.satisfied_goals}/{trace.total_goals} goals reached"
        )
        return S2Result(Outcome.UNSOLVABLE, stats=stats, diagnostic=f"invalid plan from planner: {where}")
    return S2Result(Outcome.SOLVED, plan, stats)
