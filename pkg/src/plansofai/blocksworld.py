"""The four-operator Blocks-World domain and a random instance generator."""

from __future__ import annotations

import random

from .pddl import Atom, Domain, Instance, Literal, make_instance, parse_domain

DOMAIN_PDDL = """\
(define (domain blocksworld)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block))

  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))

  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))

  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))

  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
"""

Towers = tuple[tuple[str, ...], ...]  # each tower listed bottom to top


def domain() -> Domain:
    return parse_domain(DOMAIN_PDDL)


def block_names(n: int) -> list[str]:
    return [f"b{i}" for i in range(1, n + 1)]


def random_towers(blocks: list[str], rng: random.Random) -> Towers:
    """Shuffle the blocks, then cut the sequence into towers at random gaps."""
    order = list(blocks)
    rng.shuffle(order)
    towers, current = [], [order[0]]
    for b in order[1:]:
        if rng.random() < 0.5:
            towers.append(tuple(current))
            current = [b]
        else:
            current.append(b)
    towers.append(tuple(current))
    return tuple(sorted(towers))


def tower_atoms(towers: Towers) -> set[Atom]:
    """Full state atoms (hand empty) for a configuration."""
    atoms = {Atom("handempty")}
    for tower in towers:
        atoms.add(Atom("ontable", (tower[0],)))
        for below, above in zip(tower, tower[1:]):
            atoms.add(Atom("on", (above, below)))
        atoms.add(Atom("clear", (tower[-1],)))
    return atoms


def tower_goal(towers: Towers) -> list[Literal]:
    """Placement of every block, as on/ontable literals sorted by block."""
    goal = []
    for tower in towers:
        goal.append(Literal(Atom("ontable", (tower[0],))))
        for below, above in zip(tower, tower[1:]):
            goal.append(Literal(Atom("on", (above, below))))
    return sorted(goal, key=lambda lit: (lit.atom.args[0], lit.atom))


def gen_blocksworld(
    n_blocks: int, seed: int | str, dom: Domain | None = None, name: str | None = None
) -> Instance:
    if n_blocks < 2:
        raise ValueError("need at least two blocks")
    dom = dom or domain()
    rng = random.Random(f"bw:{n_blocks}:{seed}")
    blocks = block_names(n_blocks)
    init = random_towers(blocks, rng)
    goal = random_towers(blocks, rng)
    return make_instance(
        name or f"bw-{n_blocks}-{seed}",
        dom,
        [(b, "block") for b in blocks],
        tower_atoms(init),
        tower_goal(goal),
    )
