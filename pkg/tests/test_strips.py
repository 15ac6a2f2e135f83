import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plansofai.blocksworld import gen_blocksworld, tower_atoms
from plansofai.pddl import Atom, Literal, make_instance, parse_domain
from plansofai.strips import (
    PreconditionViolation,
    apply,
    applicable,
    compute_difficulty,
    ground,
    holds,
)

import oracles


def two_block(bw, goal=(Literal(Atom("on", ("a", "b"))),)):
    return make_instance(
        "two",
        bw,
        [("a", "block"), ("b", "block")],
        tower_atoms(((("a",), ("b",)))),
        goal,
    )


def test_no_objects_no_actions(bw):
    inst = make_instance("empty", bw, [], [Atom("handempty")], [Literal(Atom("handempty"))])
    assert ground(bw, inst).actions == ()


def test_two_block_ground_counts(bw):
    task = ground(bw, two_block(bw))
    by_name = {}
    for a in task.actions:
        by_name.setdefault(a.name, []).append(a.args)
    # hand enumeration: unary schemas get 2 bindings, binary schemas 2*2
    assert len(by_name["pick-up"]) == 2
    assert len(by_name["put-down"]) == 2
    assert sorted(by_name["stack"]) == [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
    assert len(by_name["unstack"]) == 4
    # stack(a,a) exists but is never applicable from a legal state
    s = apply(task, task.init, task.resolve(("pick-up", "a")))
    assert not applicable(task, s, task.resolve(("stack", "a", "a")))


def test_atom_table_sorted_and_complete(bw):
    task = ground(bw, gen_blocksworld(3, 7, bw))
    assert list(task.atoms) == sorted(task.atoms)
    assert len(task.atoms) == 3 * 3 + 3 * 3 + 1  # on, ontable/clear/holding, handempty
    for a in task.actions:
        for i, _ in a.pre:
            assert i < len(task.atoms)
        assert all(i < len(task.atoms) for i in a.add | a.delete)
    assert all(i < len(task.atoms) for i in task.init)


def test_action_bound(bw):
    for n in (2, 3, 4):
        task = ground(bw, gen_blocksworld(n, 1, bw))
        assert len(task.actions) <= sum(n ** len(a.parameters) for a in bw.actions)


def test_statically_inconsistent_actions_pruned():
    dom = parse_domain(
        """(define (domain d) (:requirements :strips :negative-preconditions)
           (:predicates (p ?x) (q ?x))
           (:action flip :parameters (?x ?y) :precondition (and (p ?x) (not (p ?y))) :effect (q ?x)))"""
    )
    inst = make_instance("i", dom, [("a", "object"), ("b", "object")], [Atom("p", ("a",))],
                         [Literal(Atom("q", ("a",)))])
    task = ground(dom, inst)
    assert sorted(a.args for a in task.actions) == [("a", "b"), ("b", "a")]


def test_apply_identity():
    dom = parse_domain("(define (domain d) (:predicates (p)) (:action noop :parameters () :effect (and)))")
    inst = make_instance("i", dom, [], [Atom("p")], [Literal(Atom("p"))])
    task = ground(dom, inst)
    assert apply(task, task.init, 0) == task.init


def test_apply_pick_up(bw):
    task = ground(bw, two_block(bw))
    s = apply(task, task.init, task.resolve(("pick-up", "a")))
    names = {str(a) for a in task.state_atoms(s)}
    assert names == {"holding(a)", "ontable(b)", "clear(b)"}


def test_apply_violation_names_literal(bw):
    task = ground(bw, two_block(bw))
    with pytest.raises(PreconditionViolation) as err:
        apply(task, task.init, task.resolve(("stack", "a", "b")))
    assert err.value.literal == Literal(Atom("holding", ("a",)))


def test_holds_examples(bw):
    dom = parse_domain("(define (domain d) (:requirements :strips :negative-preconditions) (:predicates (p) (q) (r)))")
    inst = make_instance("i", dom, [], [Atom("p")],
                         [Literal(Atom("p")), Literal(Atom("q"), False), Literal(Atom("r"))])
    task = ground(dom, inst)
    assert holds(task.init, task.goals) == 2
    assert holds(frozenset(), [(task.atom_index[Atom("p")], True), (task.atom_index[Atom("r")], True)]) == 0
    assert holds(task.init, [g for g in task.goals if (g[0] in task.init) == g[1]]) == 2


def test_difficulty(bw):
    inst = make_instance("d", bw, [(f"b{i}", "block") for i in range(4)],
                         [Atom("handempty")],
                         [Literal(Atom("ontable", ("b0",))), Literal(Atom("ontable", ("b1",)))])
    assert compute_difficulty(inst, bw) == 42
    thirteen = gen_blocksworld(13, 0, bw)
    assert compute_difficulty(thirteen, bw) == 10 * 13 + 13
    renamed = make_instance("r", bw, [(f"x{i}", "block") for i in range(4)], [Atom("handempty")],
                            [Literal(Atom("ontable", ("x0",))), Literal(Atom("ontable", ("x1",)))])
    assert compute_difficulty(renamed, bw) == compute_difficulty(inst, bw)


def test_difficulty_thirteen_twelve(bw):
    blocks = [(f"b{i}", "block") for i in range(13)]
    goal = [Literal(Atom("ontable", (f"b{i}",))) for i in range(12)]
    assert compute_difficulty(make_instance("x", bw, blocks, [], goal), bw) == 142


def _reachable(task):
    seen = {task.init}
    frontier = [task.init]
    while frontier:
        s = frontier.pop()
        for a in range(len(task.actions)):
            if applicable(task, s, a):
                t = apply(task, s, a)
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
    return seen


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reachable_matches_configuration_oracle(bw, n):
    inst = gen_blocksworld(n, 3, bw)
    task = ground(bw, inst)
    states = _reachable(task)
    grounded = {frozenset(str(task.atoms[i]) for i in s) for s in states}
    start = oracles.parse_config(inst.init)
    expected = {frozenset(oracles.state_strings(s)) for s in oracles.reachable(start)}
    assert grounded == expected
    hand_empty = [s for s in grounded if "handempty" in s]
    assert len(hand_empty) == len(oracles.configurations([f"b{i}" for i in range(1, n + 1)]))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 4), walk=st.lists(st.integers(0, 10_000), max_size=12))
def test_frame_and_determinism(bw, seed, n, walk):
    task = ground(bw, gen_blocksworld(n, seed, bw))
    s = task.init
    for pick in walk:
        options = [a for a in range(len(task.actions)) if applicable(task, s, a)]
        a = options[pick % len(options)]
        t = apply(task, s, a)
        assert t == apply(task, s, a)
        act = task.actions[a]
        untouched = set(range(len(task.atoms))) - act.add - act.delete
        assert {i for i in untouched if i in s} == {i for i in untouched if i in t}
        s = t


@settings(max_examples=50, deadline=None)
@given(bits=st.lists(st.booleans(), min_size=19, max_size=19), pol=st.lists(st.booleans(), min_size=5, max_size=5))
def test_holds_equals_naive_loop(bw, bits, pol):
    task = ground(bw, gen_blocksworld(3, 0, bw))
    s = frozenset(i for i, b in enumerate(bits) if b)
    goals = [(i * 3, p) for i, p in enumerate(pol)]
    naive = 0
    for idx, positive in goals:
        if positive and idx in s:
            naive += 1
        elif not positive and idx not in s:
            naive += 1
    assert holds(s, goals) == naive
