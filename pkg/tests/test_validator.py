from fractions import Fraction

import pytest

from plansofai.blocksworld import gen_blocksworld, tower_atoms
from plansofai.pddl import Atom, Literal, make_instance
from plansofai.strips import apply, ground
from plansofai.validator import correctness, execute


def on(x, y):
    return Literal(Atom("on", (x, y)))


def ontable(x):
    return Literal(Atom("ontable", (x,)))


@pytest.fixture
def two(bw):
    inst = make_instance("two", bw, [("a", "block"), ("b", "block")], tower_atoms((("a",), ("b",))), [on("a", "b")])
    return ground(bw, inst)


def test_empty_plan_goal_already_true(bw):
    inst = make_instance("t", bw, [("a", "block")], tower_atoms((("a",),)), [ontable("a")])
    trace = execute(ground(bw, inst), [])
    assert trace.executed_prefix_length == 0
    assert trace.truncated_at is None
    assert trace.satisfied_goals == trace.total_goals == 1


def test_first_step_inapplicable(two):
    trace = execute(two, [("stack", "a", "b"), ("pick-up", "a")])
    assert trace.final_state == two.init
    assert trace.truncated_at.step == 0
    assert trace.truncated_at.literal == Literal(Atom("holding", ("a",)))
    assert trace.executed_prefix_length == 0


def test_canonical_two_block_plan(two):
    trace = execute(two, [("pick-up", "a"), ("stack", "a", "b")])
    assert trace.satisfied_goals == 1
    assert trace.executed_prefix_length == 2
    assert correctness(two, [("pick-up", "a"), ("stack", "a", "b")]) == 1


def test_unresolvable_step_truncates(two):
    trace = execute(two, [("pick-up", "a"), ("stack", "a", "zz")])
    assert trace.truncated_at.step == 1
    assert trace.truncated_at.literal is None
    assert trace.executed_prefix_length == 1


def test_half_correct(bw):
    blocks = [(b, "block") for b in "abcd"]
    inst = make_instance("h", bw, blocks, tower_atoms((("a",), ("b",), ("c",), ("d",))),
                         [ontable("a"), ontable("b"), on("c", "a"), on("d", "b")])
    assert correctness(ground(bw, inst), []) == Fraction(1, 2)


def test_fully_inapplicable_zero(two):
    assert correctness(two, [("unstack", "a", "b")]) == 0


def test_prefix_fold(bw):
    inst = gen_blocksworld(4, 11, bw)
    task = ground(bw, inst)
    plan = [a.step for a in task.actions[:6]] + [("pick-up", "b1"), ("put-down", "b1")]
    trace = execute(task, plan)
    s = task.init
    for step in plan[: trace.executed_prefix_length]:
        s = apply(task, s, task.resolve(step))
    assert s == trace.final_state
    assert (trace.truncated_at is not None) == (trace.executed_prefix_length < len(plan))
