"""Independent reference implementations used to check the package.

Nothing here imports the grounder, the planner or the validator: the
Blocks-World oracle works on tower configurations directly and the plan
re-executor interprets action schemas over plain atom sets.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import permutations


# --- Blocks-World over tower configurations -------------------------------

# state: (frozenset of towers, held block or None); towers are bottom-to-top tuples


def configurations(blocks):
    """Every way to arrange ``blocks`` into unordered sets of ordered towers."""
    blocks = tuple(blocks)
    if not blocks:
        return {frozenset()}
    first, rest = blocks[0], blocks[1:]
    out = set()
    # choose which other blocks share first's tower, in every order
    n = len(rest)
    for mask in range(1 << n):
        mates = [rest[i] for i in range(n) if mask & (1 << i)]
        others = [rest[i] for i in range(n) if not mask & (1 << i)]
        for tower in set(permutations([first] + mates)):
            for sub in configurations(others):
                out.add(sub | {tower})
    return out


def successors(state):
    towers, held = state
    if held is None:
        for t in towers:
            rest = towers - {t}
            top = t[-1]
            if len(t) == 1:
                yield ("pick-up", top), (rest, top)
            else:
                yield ("unstack", top, t[-2]), (rest | {t[:-1]}, top)
    else:
        yield ("put-down", held), (towers | {(held,)}, None)
        for t in towers:
            yield ("stack", held, t[-1]), ((towers - {t}) | {t + (held,)}, None)


def state_strings(state):
    towers, held = state
    atoms = set()
    if held is None:
        atoms.add("handempty")
    else:
        atoms.add(f"holding({held})")
    for t in towers:
        atoms.add(f"ontable({t[0]})")
        atoms.add(f"clear({t[-1]})")
        for below, above in zip(t, t[1:]):
            atoms.add(f"on({above},{below})")
    return atoms


def reachable(state):
    seen = {state}
    queue = deque([state])
    while queue:
        s = queue.popleft()
        for _, t in successors(s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def shortest_plan_length(state, goal_strings):
    """BFS over configurations; goal_strings are positive atoms like ``on(a,b)``."""
    goal = set(goal_strings)
    seen = {state}
    queue = deque([(state, 0)])
    while queue:
        s, d = queue.popleft()
        if goal <= state_strings(s):
            return d
        for _, t in successors(s):
            if t not in seen:
                seen.add(t)
                queue.append((t, d + 1))
    return None


def parse_config(init_atoms):
    """Recover (towers, held) from atom objects with .predicate/.args."""
    on = {}
    table = []
    held = None
    for a in init_atoms:
        if a.predicate == "on":
            on[a.args[1]] = a.args[0]
        elif a.predicate == "ontable":
            table.append(a.args[0])
        elif a.predicate == "holding":
            held = a.args[0]
    towers = set()
    for base in table:
        t = [base]
        while t[-1] in on:
            t.append(on[t[-1]])
        towers.add(tuple(t))
    return frozenset(towers), held


# --- schema-level plan re-execution ----------------------------------------


def naive_execute(dom, inst, plan):
    """Return (executed steps, satisfied goals) by interpreting schemas directly."""
    objects = {name for name, _ in inst.objects} | {name for name, _ in dom.constants}
    state = {(a.predicate, a.args) for a in inst.init}
    schemas = {a.name: a for a in dom.actions}
    executed = 0
    for step in plan:
        name, args = step[0], tuple(step[1:])
        schema = schemas.get(name)
        if schema is None or len(args) != len(schema.parameters) or not set(args) <= objects:
            break
        binding = {var: val for (var, _), val in zip(schema.parameters, args)}
        ok_types = True
        for (var, ptype), val in zip(schema.parameters, args):
            otype = dict(inst.objects).get(val) or dict(dom.constants).get(val)
            chain = []
            while otype is not None:
                chain.append(otype)
                otype = dom.types.get(otype)
            if ptype not in chain:
                ok_types = False
        if not ok_types:
            break

        def sub(atom):
            return (atom.predicate, tuple(binding.get(x, x) for x in atom.args))

        if not all((sub(l.atom) in state) == l.positive for l in schema.preconditions):
            break
        adds = {sub(a) for a in schema.add_effects}
        dels = {sub(a) for a in schema.del_effects}
        state = (state - dels) | adds
        executed += 1
    satisfied = sum(
        1 for lit in inst.goal if ((lit.atom.predicate, lit.atom.args) in state) == lit.positive
    )
    return executed, satisfied


# --- edit distance ---------------------------------------------------------


def recursive_levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return d(len(a), len(b))
