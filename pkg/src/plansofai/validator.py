"""Plan execution and goal-ratio correctness.

Execution stops at the first step that cannot be resolved against the task
(unknown action or object) or whose preconditions fail.  The state reached
by the legal prefix is what gets scored, so every credited goal is reached
by a sound action sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .pddl import EmptyGoalError, Literal
from .strips import GroundedTask, State, apply, first_unsatisfied, holds


@dataclass(frozen=True)
class Truncation:
    step: int
    # None when the step does not name a ground action of the task
    literal: Literal | None

    @property
    def reason(self) -> str:
        if self.literal is None:
            return "unresolvable step"
        return f"precondition {self.literal} fails"


@dataclass(frozen=True)
class ExecutionTrace:
    executed_prefix_length: int
    final_state: State
    truncated_at: Truncation | None
    satisfied_goals: int
    total_goals: int

    @property
    def correctness(self) -> Fraction:
        if self.total_goals == 0:
            raise EmptyGoalError("correctness is undefined without goals")
        return Fraction(self.satisfied_goals, self.total_goals)


def execute(task: GroundedTask, plan: Iterable[Sequence[str]]) -> ExecutionTrace:
    s = task.init
    executed = 0
    truncated = None
    for i, step in enumerate(plan):
        a = task.resolve(tuple(step))
        if a is None:
            truncated = Truncation(i, None)
            break
        violated = first_unsatisfied(task, s, a)
        if violated is not None:
            truncated = Truncation(i, violated)
            break
        s = apply(task, s, a)
        executed += 1
    return ExecutionTrace(executed, s, truncated, holds(s, task.goals), len(task.goals))


def correctness(task: GroundedTask, plan: Iterable[Sequence[str]]) -> Fraction:
    if not task.goals:
        raise EmptyGoalError("correctness is undefined without goals")
    return execute(task, plan).correctness
