"""Grounding of typed STRIPS tasks and their state-transition semantics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pddl import Atom, Domain, Instance, Literal

State = frozenset  # frozenset[int] of true atom indices
GoalLiteral = tuple[int, bool]
Step = tuple[str, ...]  # (action name, *arguments)


class PreconditionViolation(Exception):
    def __init__(self, action: str, literal: Literal):
        super().__init__(f"{action}: precondition {literal} does not hold")
        self.action = action
        self.literal = literal


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    # (atom index, polarity) in schema order, used for error reporting
    pre: tuple[GoalLiteral, ...]
    add: frozenset[int]
    delete: frozenset[int]
    pre_mask: int = field(default=0, compare=False, repr=False)
    neg_mask: int = field(default=0, compare=False, repr=False)
    add_mask: int = field(default=0, compare=False, repr=False)
    del_mask: int = field(default=0, compare=False, repr=False)

    @property
    def step(self) -> Step:
        return (self.name, *self.args)

    def __str__(self) -> str:
        return format_step(self.step)


@dataclass(frozen=True)
class GroundedTask:
    atoms: tuple[Atom, ...]
    actions: tuple[GroundAction, ...]
    init: State
    goals: tuple[GoalLiteral, ...]
    atom_index: dict[Atom, int] = field(compare=False, repr=False, default_factory=dict)
    action_index: dict[Step, int] = field(compare=False, repr=False, default_factory=dict)

    def literal(self, lit: GoalLiteral) -> Literal:
        return Literal(self.atoms[lit[0]], lit[1])

    def resolve(self, step: Step) -> int | None:
        return self.action_index.get(tuple(step))

    def state_atoms(self, s: Iterable[int]) -> set[Atom]:
        return {self.atoms[i] for i in s}


def format_step(step: Sequence[str]) -> str:
    return "(" + " ".join(step) + ")"


def parse_step(text: str) -> Step:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"malformed plan step {text!r}")
    parts = text[1:-1].lower().split()
    if not parts:
        raise ValueError(f"empty plan step {text!r}")
    return tuple(parts)


def parse_plan(text: str) -> tuple[Step, ...]:
    """One ``(name arg...)`` per line; blank lines and ``;`` comments ignored."""
    steps = []
    for line in text.splitlines():
        line = line.split(";", 1)[0].strip()
        if line:
            steps.append(parse_step(line))
    return tuple(steps)


def plan_to_text(plan: Iterable[Sequence[str]]) -> str:
    return "".join(format_step(step) + "\n" for step in plan)


def _objects_by_type(dom: Domain, inst: Instance) -> dict[str, list[str]]:
    by_type: dict[str, list[str]] = {t: [] for t in dom.types}
    for name, otype in (*dom.constants, *inst.objects):
        for t in dom.ancestors(otype):
            by_type[t].append(name)
    return by_type


def ground(dom: Domain, inst: Instance) -> GroundedTask:
    by_type = _objects_by_type(dom, inst)
    raw = []
    for schema in dom.actions:
        domains = [by_type.get(t, []) for _, t in schema.parameters]
        variables = [v for v, _ in schema.parameters]
        for binding in itertools.product(*domains):
            sub = dict(zip(variables, binding))

            def inst_atom(a: Atom) -> Atom:
                return Atom(a.predicate, tuple(sub.get(x, x) for x in a.args))

            pre = [Literal(inst_atom(l.atom), l.positive) for l in schema.preconditions]
            pos = {l.atom for l in pre if l.positive}
            neg = {l.atom for l in pre if not l.positive}
            if pos & neg:
                continue
            add = {inst_atom(a) for a in schema.add_effects}
            dele = {inst_atom(a) for a in schema.del_effects} - add
            raw.append((schema.name, tuple(binding), pre, add, dele))
    raw.sort(key=lambda r: (r[0], r[1]))

    universe: set[Atom] = set(inst.init)
    universe.update(l.atom for l in inst.goal)
    for _, _, pre, add, dele in raw:
        universe.update(l.atom for l in pre)
        universe.update(add)
        universe.update(dele)
    atoms = tuple(sorted(universe))
    index = {a: i for i, a in enumerate(atoms)}

    def mask(idx: Iterable[int]) -> int:
        m = 0
        for i in idx:
            m |= 1 << i
        return m

    actions = []
    for name, args, pre, add, dele in raw:
        pre_idx = tuple(dict.fromkeys((index[l.atom], l.positive) for l in pre))
        add_idx = frozenset(index[a] for a in add)
        del_idx = frozenset(index[a] for a in dele)
        actions.append(
            GroundAction(
                name,
                args,
                pre_idx,
                add_idx,
                del_idx,
                pre_mask=mask(i for i, p in pre_idx if p),
                neg_mask=mask(i for i, p in pre_idx if not p),
                add_mask=mask(add_idx),
                del_mask=mask(del_idx),
            )
        )
    return GroundedTask(
        atoms=atoms,
        actions=tuple(actions),
        init=frozenset(index[a] for a in inst.init),
        goals=tuple((index[l.atom], l.positive) for l in inst.goal),
        atom_index=index,
        action_index={a.step: i for i, a in enumerate(actions)},
    )


def first_unsatisfied(task: GroundedTask, s: State, a: int) -> Literal | None:
    for idx, positive in task.actions[a].pre:
        if (idx in s) != positive:
            return task.literal((idx, positive))
    return None


def applicable(task: GroundedTask, s: State, a: int) -> bool:
    return first_unsatisfied(task, s, a) is None


def apply(task: GroundedTask, s: State, a: int) -> State:
    action = task.actions[a]
    violated = first_unsatisfied(task, s, a)
    if violated is not None:
        raise PreconditionViolation(str(action), violated)
    return (s - action.delete) | action.add


def holds(s: State, goals: Iterable[GoalLiteral]) -> int:
    return sum(1 for idx, positive in goals if (idx in s) == positive)


def to_mask(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << i
    return m


def from_mask(m: int) -> State:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def compute_difficulty(inst: Instance, dom: Domain | None = None) -> int:
    """Count-based difficulty bucket: 10 per object plus 1 per goal literal."""
    return 10 * len(inst.objects) + len(inst.goal)
