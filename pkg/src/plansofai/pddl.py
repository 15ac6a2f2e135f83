"""Reader and writer for the typed STRIPS subset of PDDL.

Supported requirements are ``:strips``, ``:typing`` and
``:negative-preconditions``.  Anything else (conditional effects,
quantifiers, disjunctive preconditions, equality, costs) is rejected with
:class:`UnsupportedRequirementError` instead of being silently dropped.

PDDL is case-insensitive; all names are lower-cased on read.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

ROOT_TYPE = "object"

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":negative-preconditions"})
_UNSUPPORTED_KEYWORDS = frozenset(
    {"or", "imply", "exists", "forall", "when", "=", "increase", "decrease", "either"}
)


class PDDLError(Exception):
    """Base class for everything the reader can reject."""


class PDDLSyntaxError(PDDLError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnsupportedRequirementError(PDDLError):
    pass


class UndeclaredObjectError(PDDLError):
    pass


class UndeclaredPredicateError(PDDLError):
    pass


class UnknownTypeError(PDDLError):
    pass


class ArityMismatchError(PDDLError):
    pass


class TypeMismatchError(PDDLError):
    pass


class DuplicateNameError(PDDLError):
    pass


class EmptyGoalError(PDDLError):
    pass


class Atom(NamedTuple):
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(self.args)})"

    def to_pddl(self) -> str:
        return "(" + " ".join((self.predicate, *self.args)) + ")"


class Literal(NamedTuple):
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not({self.atom})"

    def to_pddl(self) -> str:
        return self.atom.to_pddl() if self.positive else f"(not {self.atom.to_pddl()})"


TypedName = tuple[str, str]


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[TypedName, ...]
    preconditions: tuple[Literal, ...]
    add_effects: tuple[Atom, ...]
    del_effects: tuple[Atom, ...]


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: tuple[str, ...]
    # child type -> parent type; the root type maps to None
    types: dict[str, str | None]
    predicates: dict[str, tuple[TypedName, ...]]
    actions: tuple[ActionSchema, ...]
    constants: tuple[TypedName, ...] = ()

    def ancestors(self, type_name: str) -> list[str]:
        chain = []
        t: str | None = type_name
        while t is not None:
            chain.append(t)
            t = self.types.get(t)
        return chain

    def is_subtype(self, child: str, parent: str) -> bool:
        return parent in self.ancestors(child)

    def action(self, name: str) -> ActionSchema:
        for schema in self.actions:
            if schema.name == name:
                return schema
        raise KeyError(name)


@dataclass(frozen=True)
class Instance:
    name: str
    domain_name: str
    objects: tuple[TypedName, ...]
    init: frozenset[Atom]
    goal: tuple[Literal, ...]

    @property
    def object_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.objects)

    @property
    def tot_goals(self) -> int:
        return len(self.goal)


# ---------------------------------------------------------------------------
# s-expression reading
# ---------------------------------------------------------------------------


class _Token(str):
    line: int
    col: int


class _SList(list):
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            tok = _Token(ch)
            tok.line, tok.col = line, col
            tokens.append(tok)
            i += 1
            col += 1
            continue
        start, start_col = i, col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        tok = _Token(text[start:i].lower())
        tok.line, tok.col = line, start_col
        tokens.append(tok)
    return tokens


def _read_sexpr(text: str) -> _SList:
    tokens = _tokenize(text)
    if not tokens:
        raise PDDLSyntaxError("empty document", 1, 1)
    stack: list[_SList] = []
    root: _SList | None = None
    for tok in tokens:
        if tok == "(":
            node = _SList()
            node.line, node.col = tok.line, tok.col
            if stack:
                stack[-1].append(node)
            elif root is not None:
                raise PDDLSyntaxError("content after top-level expression", tok.line, tok.col)
            else:
                root = node
            stack.append(node)
        elif tok == ")":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.col)
            stack.pop()
        else:
            if not stack:
                raise PDDLSyntaxError(f"unexpected token {tok!r} outside expression", tok.line, tok.col)
            stack[-1].append(tok)
    if stack:
        open_node = stack[-1]
        raise PDDLSyntaxError("unclosed '('", open_node.line, open_node.col)
    assert root is not None
    return root


def _pos(node) -> tuple[int, int]:
    return getattr(node, "line", 0), getattr(node, "col", 0)


def _expect_list(node, what: str) -> _SList:
    if not isinstance(node, list):
        raise PDDLSyntaxError(f"expected {what}, found {node!r}", *_pos(node))
    return node


def _expect_name(node, what: str) -> str:
    if isinstance(node, list) or node.startswith("?") or node.startswith(":"):
        raise PDDLSyntaxError(f"expected {what}", *_pos(node))
    return str(node)


def _typed_list(items: Sequence, variables: bool) -> list[TypedName]:
    """Parse ``a b - t c - u d`` into [(a, t), (b, t), (c, u), (d, object)]."""
    out: list[TypedName] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, list):
            if item and item[0] == "either":
                raise UnsupportedRequirementError("'either' types are outside the supported subset")
            raise PDDLSyntaxError("unexpected list in typed list", *_pos(item))
        if item == "-":
            if i + 1 >= len(items) or not pending:
                raise PDDLSyntaxError("dangling '-' in typed list", *_pos(item))
            type_node = items[i + 1]
            if isinstance(type_node, list):
                if type_node and type_node[0] == "either":
                    raise UnsupportedRequirementError("'either' types are outside the supported subset")
                raise PDDLSyntaxError("expected type name", *_pos(type_node))
            out.extend((name, str(type_node)) for name in pending)
            pending = []
            i += 2
            continue
        if variables and not item.startswith("?"):
            raise PDDLSyntaxError(f"expected variable, found {item!r}", *_pos(item))
        pending.append(str(item))
        i += 1
    out.extend((name, ROOT_TYPE) for name in pending)
    return out


def _sections(body: Sequence) -> dict[str, _SList]:
    sections: dict[str, _SList] = {}
    for node in body:
        node = _expect_list(node, "section")
        if not node or isinstance(node[0], list):
            raise PDDLSyntaxError("malformed section", *_pos(node))
        key = str(node[0])
        if key == ":action":
            sections.setdefault(":action", _SList()).append(node)
        else:
            if key in sections:
                raise DuplicateNameError(f"section {key} declared twice")
            sections[key] = node
    return sections


# ---------------------------------------------------------------------------
# domain
# ---------------------------------------------------------------------------


def parse_domain(text: str) -> Domain:
    root = _read_sexpr(text)
    if len(root) < 2 or root[0] != "define":
        raise PDDLSyntaxError("expected (define ...)", *_pos(root))
    header = _expect_list(root[1], "(domain <name>)")
    if len(header) != 2 or header[0] != "domain":
        raise PDDLSyntaxError("expected (domain <name>)", *_pos(header))
    name = _expect_name(header[1], "domain name")
    sections = _sections(root[2:])
    known = {":requirements", ":types", ":constants", ":predicates", ":action"}
    for key, node in sections.items():
        if key not in known:
            raise UnsupportedRequirementError(f"section {key} is outside the supported subset")

    requirements: tuple[str, ...] = (":strips",)
    if ":requirements" in sections:
        requirements = tuple(str(r) for r in sections[":requirements"][1:])
        for req in requirements:
            if req not in SUPPORTED_REQUIREMENTS:
                raise UnsupportedRequirementError(f"unsupported requirement {req}")
    negative_ok = ":negative-preconditions" in requirements

    types: dict[str, str | None] = {ROOT_TYPE: None}
    if ":types" in sections:
        for child, parent in _typed_list(sections[":types"][1:], variables=False):
            if child == ROOT_TYPE:
                continue
            if child in types and types[child] != parent:
                raise DuplicateNameError(f"type {child} declared with two parents")
            types[child] = parent
        for child, parent in list(types.items()):
            if parent is not None and parent not in types:
                # an undeclared parent is an implicit child of the root
                types[parent] = ROOT_TYPE
        for t in types:
            seen = set()
            cur: str | None = t
            while cur is not None:
                if cur in seen:
                    raise PDDLError(f"cyclic type hierarchy at {t}")
                seen.add(cur)
                cur = types[cur]

    def check_type(t: str) -> str:
        if t not in types:
            raise UnknownTypeError(f"unknown type {t}")
        return t

    constants: list[TypedName] = []
    if ":constants" in sections:
        for cname, ctype in _typed_list(sections[":constants"][1:], variables=False):
            constants.append((cname, check_type(ctype)))

    predicates: dict[str, tuple[TypedName, ...]] = {}
    if ":predicates" in sections:
        for node in sections[":predicates"][1:]:
            node = _expect_list(node, "predicate declaration")
            pname = _expect_name(node[0], "predicate name") if node else None
            if pname is None:
                raise PDDLSyntaxError("empty predicate declaration", *_pos(node))
            if pname in predicates:
                raise DuplicateNameError(f"predicate {pname} declared twice")
            params = _typed_list(node[1:], variables=True)
            predicates[pname] = tuple((v, check_type(t)) for v, t in params)

    const_types = dict(constants)
    actions: list[ActionSchema] = []
    for node in sections.get(":action", []):
        schema = _parse_action(node, predicates, types, const_types, negative_ok)
        if any(a.name == schema.name for a in actions):
            raise DuplicateNameError(f"action {schema.name} declared twice")
        actions.append(schema)

    return Domain(
        name=name,
        requirements=requirements,
        types=types,
        predicates=predicates,
        actions=tuple(actions),
        constants=tuple(constants),
    )


def _parse_action(node, predicates, types, const_types, negative_ok) -> ActionSchema:
    if len(node) < 2:
        raise PDDLSyntaxError("action without a name", *_pos(node))
    name = _expect_name(node[1], "action name")
    params: list[TypedName] = []
    pre: list[Literal] = []
    add: list[Atom] = []
    dele: list[Atom] = []
    i = 2
    while i < len(node):
        key = node[i]
        if isinstance(key, list) or i + 1 >= len(node):
            raise PDDLSyntaxError("expected :keyword value pair in action", *_pos(key))
        value = node[i + 1]
        if key == ":parameters":
            params = _typed_list(_expect_list(value, "parameter list"), variables=True)
            for _, t in params:
                if t not in types:
                    raise UnknownTypeError(f"unknown type {t} in action {name}")
        elif key == ":precondition":
            pre = _conjunction(value, allow_negative=True)
            if not negative_ok and any(not lit.positive for lit in pre):
                raise UnsupportedRequirementError(
                    f"negative precondition in {name} requires :negative-preconditions"
                )
        elif key == ":effect":
            for lit in _conjunction(value, allow_negative=True):
                (add if lit.positive else dele).append(lit.atom)
        else:
            raise UnsupportedRequirementError(f"action field {key} is outside the supported subset")
        i += 2

    scope = dict(params)
    if len(scope) != len(params):
        raise DuplicateNameError(f"repeated parameter in action {name}")
    for atom in [lit.atom for lit in pre] + add + dele:
        _check_atom(atom, predicates, types, {**const_types, **scope}, f"action {name}")
    return ActionSchema(name, tuple(params), tuple(pre), tuple(add), tuple(dele))


def _conjunction(node, allow_negative: bool) -> list[Literal]:
    if not isinstance(node, list):
        raise PDDLSyntaxError("expected formula", *_pos(node))
    if not node:
        return []
    head = node[0]
    if head == "and":
        out: list[Literal] = []
        for sub in node[1:]:
            out.extend(_conjunction(sub, allow_negative))
        return out
    if head == "not":
        if len(node) != 2 or not isinstance(node[1], list):
            raise PDDLSyntaxError("malformed (not ...)", *_pos(node))
        inner = node[1]
        if inner and inner[0] in _UNSUPPORTED_KEYWORDS | {"and", "not"}:
            raise UnsupportedRequirementError(f"(not ({inner[0]} ...)) is outside the supported subset")
        (lit,) = _conjunction(inner, allow_negative)
        return [Literal(lit.atom, False)]
    if isinstance(head, list):
        raise PDDLSyntaxError("expected predicate name", *_pos(node))
    if head in _UNSUPPORTED_KEYWORDS:
        raise UnsupportedRequirementError(f"'{head}' is outside the supported subset")
    args = []
    for arg in node[1:]:
        if isinstance(arg, list):
            raise PDDLSyntaxError("nested term in atom", *_pos(arg))
        args.append(str(arg))
    return [Literal(Atom(str(head), tuple(args)), True)]


def _check_atom(atom: Atom, predicates, types, scope: dict[str, str], where: str) -> None:
    if atom.predicate not in predicates:
        raise UndeclaredPredicateError(f"undeclared predicate {atom.predicate} in {where}")
    signature = predicates[atom.predicate]
    if len(signature) != len(atom.args):
        raise ArityMismatchError(
            f"{atom.predicate} expects {len(signature)} arguments, got {len(atom.args)} in {where}"
        )
    for arg, (_, expected) in zip(atom.args, signature):
        if arg not in scope:
            if arg.startswith("?"):
                raise PDDLError(f"free variable {arg} in {where}")
            raise UndeclaredObjectError(f"undeclared object {arg} in {where}")
        actual = scope[arg]
        chain = []
        t: str | None = actual
        while t is not None:
            chain.append(t)
            t = types.get(t)
        if expected not in chain:
            raise TypeMismatchError(f"{arg} of type {actual} is not a {expected} in {where}")


# ---------------------------------------------------------------------------
# instance
# ---------------------------------------------------------------------------


def parse_instance(text: str, dom: Domain) -> Instance:
    root = _read_sexpr(text)
    if len(root) < 2 or root[0] != "define":
        raise PDDLSyntaxError("expected (define ...)", *_pos(root))
    header = _expect_list(root[1], "(problem <name>)")
    if len(header) != 2 or header[0] != "problem":
        raise PDDLSyntaxError("expected (problem <name>)", *_pos(header))
    name = _expect_name(header[1], "problem name")
    sections = _sections(root[2:])
    for key in sections:
        if key not in {":domain", ":objects", ":init", ":goal", ":requirements"}:
            raise UnsupportedRequirementError(f"section {key} is outside the supported subset")
    if ":domain" not in sections or len(sections[":domain"]) != 2:
        raise PDDLSyntaxError("missing (:domain <name>)", *_pos(root))
    domain_name = str(sections[":domain"][1])
    if domain_name != dom.name:
        raise PDDLError(f"problem targets domain {domain_name}, not {dom.name}")

    objects: list[TypedName] = []
    if ":objects" in sections:
        objects = _typed_list(sections[":objects"][1:], variables=False)
    scope: dict[str, str] = dict(dom.constants)
    for oname, otype in objects:
        if otype not in dom.types:
            raise UnknownTypeError(f"unknown type {otype} for object {oname}")
        if oname in scope:
            raise DuplicateNameError(f"object {oname} declared twice")
        scope[oname] = otype

    init: set[Atom] = set()
    for node in sections.get(":init", _SList())[1:]:
        lits = _conjunction(_expect_list(node, "init atom"), allow_negative=False)
        for lit in lits:
            if not lit.positive:
                raise PDDLSyntaxError("negative literal in :init", *_pos(node))
            _check_atom(lit.atom, dom.predicates, dom.types, scope, "init")
            init.add(lit.atom)

    if ":goal" not in sections or len(sections[":goal"]) != 2:
        raise EmptyGoalError(f"problem {name} has no goal")
    goal: list[Literal] = []
    for lit in _conjunction(sections[":goal"][1], allow_negative=True):
        _check_atom(lit.atom, dom.predicates, dom.types, scope, "goal")
        if lit not in goal:
            goal.append(lit)
    if not goal:
        raise EmptyGoalError(f"problem {name} has an empty goal")

    return make_instance(name, dom, objects, init, goal)


def make_instance(
    name: str,
    dom: Domain,
    objects: Iterable[TypedName],
    init: Iterable[Atom],
    goal: Iterable[Literal],
) -> Instance:
    """Build an Instance programmatically, with the same checks the reader applies."""
    objects = tuple(objects)
    scope = {**dict(dom.constants), **dict(objects)}
    init = frozenset(init)
    goal = tuple(dict.fromkeys(goal))
    for atom in init:
        _check_atom(atom, dom.predicates, dom.types, scope, "init")
    for lit in goal:
        _check_atom(lit.atom, dom.predicates, dom.types, scope, "goal")
    if not goal:
        raise EmptyGoalError(f"problem {name} has an empty goal")
    return Instance(name, dom.name, objects, init, goal)


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------


def _typed_text(items: Sequence[TypedName]) -> str:
    return " ".join(f"{n} - {t}" for n, t in items)


def domain_to_pddl(dom: Domain) -> str:
    lines = [f"(define (domain {dom.name})", f"  (:requirements {' '.join(dom.requirements)})"]
    declared = [(t, p) for t, p in dom.types.items() if p is not None]
    if declared:
        lines.append(f"  (:types {_typed_text(declared)})")
    if dom.constants:
        lines.append(f"  (:constants {_typed_text(dom.constants)})")
    preds = " ".join(
        "(" + " ".join([p, _typed_text(sig)]).strip() + ")" for p, sig in dom.predicates.items()
    )
    lines.append(f"  (:predicates {preds})")
    for a in dom.actions:
        pre = " ".join(lit.to_pddl() for lit in a.preconditions)
        eff = " ".join(
            [atom.to_pddl() for atom in a.add_effects]
            + [f"(not {atom.to_pddl()})" for atom in a.del_effects]
        )
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({_typed_text(a.parameters)})")
        lines.append(f"    :precondition (and {pre})")
        lines.append(f"    :effect (and {eff}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def instance_to_pddl(inst: Instance) -> str:
    init = " ".join(a.to_pddl() for a in sorted(inst.init))
    goal = " ".join(lit.to_pddl() for lit in inst.goal)
    return (
        f"(define (problem {inst.name})\n"
        f"  (:domain {inst.domain_name})\n"
        f"  (:objects {_typed_text(inst.objects)})\n"
        f"  (:init {init})\n"
        f"  (:goal (and {goal})))\n"
    )
