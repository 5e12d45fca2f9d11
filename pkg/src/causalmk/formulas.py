"""AST, parser, and printer for the hybrid modal causal language.

Two syntactic categories share one node hierarchy:

* *events*: atoms, boolean connectives, and modalities, but no interventions;
* *causal formulas*: events closed under ``!``, ``&``, ``box``/``cbox`` and
  intervention prefixes ``[X@w := v, ...] body`` whose body is an event.

Derived operators normalize into core constructors at construction / parse
time: ``dia(a) == !box(!a)``, ``cdia(a) == !cbox(!a)``, ``a | b == !(!a & !b)``,
``a -> b == !(a & !b)``, ``false == !true``.

Concrete syntax
---------------
::

    atom      :=  NAME "=" INT  |  NAME "@" NAME "=" INT
    unary     :=  "!" unary | "box" "(" formula ")" | "dia" "(" formula ")"
                | "cbox" "(" formula ")" | "cdia" "(" formula ")"
                | "true" | "false" | atom | "(" formula ")"
                | "[" [ NAME "@" NAME ":=" INT {"," ...} ] "]" unary
    conj      :=  unary { "&" unary }
    disj      :=  conj { "|" conj }
    formula   :=  disj [ "->" formula ]

Precedence ``! > & > | > ->``; an intervention prefix binds like ``!``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import DanglingRefError, FormulaSyntaxError, NestedInterventionError

Pair = tuple[str, str]  # (variable, world)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    """The constant true."""


@dataclass(frozen=True)
class LocalAtom:
    """``X=x``: variable X takes value x at the evaluation world."""

    var: str
    value: int


@dataclass(frozen=True)
class GlobalAtom:
    """``X@w=x``: variable X takes value x at world w, wherever evaluated."""

    var: str
    world: str
    value: int


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    """Truth at every successor of the evaluation world."""

    body: "Formula"


@dataclass(frozen=True)
class ConvBox:
    """Truth at every predecessor of the evaluation world (converse relation)."""

    body: "Formula"


@dataclass(frozen=True)
class InterventionFormula:
    """``[Y1@w1 := v1, ...] body`` with an event body."""

    assignments: tuple[tuple[Pair, int], ...]
    body: "Formula"


Formula = Union[Top, LocalAtom, GlobalAtom, Not, And, Box, ConvBox, InterventionFormula]

TRUE = Top()
FALSE = Not(TRUE)


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Dia(body: Formula) -> Formula:
    return Not(Box(Not(body)))


def ConvDia(body: Formula) -> Formula:
    return Not(ConvBox(Not(body)))


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of ``parts``; ``true`` when empty."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def is_event(formula: Formula) -> bool:
    """True when the formula contains no intervention prefix."""
    if isinstance(formula, (Top, LocalAtom, GlobalAtom)):
        return True
    if isinstance(formula, (Not, Box, ConvBox)):
        return is_event(formula.body)
    if isinstance(formula, And):
        return is_event(formula.left) and is_event(formula.right)
    return False


# ---------------------------------------------------------------------------
# Event evaluation and static support
# ---------------------------------------------------------------------------

def eval_event(
    formula: Formula,
    world: str,
    values: Mapping[Pair, int],
    successors: Callable[[str], Iterable[str]],
    predecessors: Callable[[str], Iterable[str]],
) -> bool:
    """Evaluate an event against a (possibly partial) valuation.

    An atom whose (variable, world) pair is missing from ``values`` raises
    DanglingRefError; an atom whose value merely never occurs is just false.
    """
    if isinstance(formula, Top):
        return True
    if isinstance(formula, LocalAtom):
        key = (formula.var, world)
        if key not in values:
            raise DanglingRefError(f"unknown pair {formula.var}@{world}")
        return values[key] == formula.value
    if isinstance(formula, GlobalAtom):
        key = (formula.var, formula.world)
        if key not in values:
            raise DanglingRefError(f"unknown pair {formula.var}@{formula.world}")
        return values[key] == formula.value
    if isinstance(formula, Not):
        return not eval_event(formula.body, world, values, successors, predecessors)
    if isinstance(formula, And):
        return eval_event(formula.left, world, values, successors, predecessors) and \
            eval_event(formula.right, world, values, successors, predecessors)
    if isinstance(formula, Box):
        return all(
            eval_event(formula.body, w2, values, successors, predecessors)
            for w2 in successors(world)
        )
    if isinstance(formula, ConvBox):
        return all(
            eval_event(formula.body, w2, values, successors, predecessors)
            for w2 in predecessors(world)
        )
    raise TypeError(f"not an event: {formula!r}")


def event_support(
    formula: Formula,
    world: str,
    successors: Callable[[str], Iterable[str]],
    predecessors: Callable[[str], Iterable[str]],
) -> frozenset[Pair]:
    """All (variable, world) pairs an event can read when evaluated at ``world``."""
    if isinstance(formula, Top):
        return frozenset()
    if isinstance(formula, LocalAtom):
        return frozenset({(formula.var, world)})
    if isinstance(formula, GlobalAtom):
        return frozenset({(formula.var, formula.world)})
    if isinstance(formula, Not):
        return event_support(formula.body, world, successors, predecessors)
    if isinstance(formula, And):
        return event_support(formula.left, world, successors, predecessors) | \
            event_support(formula.right, world, successors, predecessors)
    if isinstance(formula, Box):
        out: frozenset[Pair] = frozenset()
        for w2 in successors(world):
            out |= event_support(formula.body, w2, successors, predecessors)
        return out
    if isinstance(formula, ConvBox):
        out = frozenset()
        for w2 in predecessors(world):
            out |= event_support(formula.body, w2, successors, predecessors)
        return out
    raise TypeError(f"not an event: {formula!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<assign>:=)"
    r"|(?P<sym>[()\[\]=@!&|,])"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<int>-?\d+)"
)

_KEYWORDS = {"box", "dia", "cbox", "cdia", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.next()
        if text != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def fail(self, message: str):
        _, text, pos = self.peek()
        raise FormulaSyntaxError(message, pos)

    # formula := disj ('->' formula)?     right-associative
    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[1] == "|":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek()[1] == "&":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "!":
            self.next()
            return Not(self.unary())
        if text == "[":
            return self.intervention()
        if text == "(":
            self.next()
            out = self.formula()
            self.expect(")")
            return out
        if kind == "name":
            if text in ("box", "dia", "cbox", "cdia"):
                self.next()
                self.expect("(")
                body = self.formula()
                self.expect(")")
                return {"box": Box, "dia": Dia, "cbox": ConvBox, "cdia": ConvDia}[text](body)
            if text == "true":
                self.next()
                return TRUE
            if text == "false":
                self.next()
                return FALSE
            return self.atom()
        self.fail(f"expected a formula, found {text or 'end of input'!r}")

    def atom(self) -> Formula:
        kind, var, pos = self.next()
        if kind != "name" or var in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable name, found {var!r}", pos)
        world = None
        if self.peek()[1] == "@":
            self.next()
            wkind, world, wpos = self.next()
            if wkind != "name":
                raise FormulaSyntaxError(f"expected a world name, found {world!r}", wpos)
        self.expect("=")
        vkind, vtext, vpos = self.next()
        if vkind != "int":
            raise FormulaSyntaxError(f"expected an integer value, found {vtext!r}", vpos)
        value = int(vtext)
        if world is None:
            return LocalAtom(var, value)
        return GlobalAtom(var, world, value)

    def intervention(self) -> Formula:
        _, _, open_pos = self.next()  # '['
        assignments: list[tuple[Pair, int]] = []
        seen: set[Pair] = set()
        if self.peek()[1] != "]":
            while True:
                kind, var, pos = self.next()
                if kind != "name" or var in _KEYWORDS:
                    raise FormulaSyntaxError(f"expected a variable name, found {var!r}", pos)
                self.expect("@")
                wkind, world, wpos = self.next()
                if wkind != "name":
                    raise FormulaSyntaxError(f"expected a world name, found {world!r}", wpos)
                self.expect(":=")
                vkind, vtext, vpos = self.next()
                if vkind != "int":
                    raise FormulaSyntaxError(f"expected an integer value, found {vtext!r}", vpos)
                target = (var, world)
                if target in seen:
                    raise FormulaSyntaxError(f"duplicate intervention target {var}@{world}", pos)
                seen.add(target)
                assignments.append((target, int(vtext)))
                if self.peek()[1] == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        body = self.unary()
        if not is_event(body):
            raise NestedInterventionError("intervention bodies must be intervention-free", open_pos)
        return InterventionFormula(tuple(assignments), body)


def parse(text: str) -> Formula:
    """Parse a causal formula; raises FormulaSyntaxError with a byte offset."""
    parser = _Parser(text)
    out = parser.formula()
    kind, tok, pos = parser.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"unexpected trailing input {tok!r}", pos)
    return out


def parse_event(text: str) -> Formula:
    """Parse an event: a formula with no intervention prefix anywhere."""
    out = parse(text)
    if not is_event(out):
        raise FormulaSyntaxError("interventions are not allowed in events", 0)
    return out


def parse_conjunction(text: str) -> tuple[tuple[Pair, int], ...]:
    """Parse ``X@w=v & Y@w'=v' & ...`` into an ordered assignment list.

    Used for cause candidates, which must name their worlds explicitly.
    """
    out = parse(text)
    parts: list[tuple[Pair, int]] = []

    def flatten(f: Formula):
        if isinstance(f, And):
            flatten(f.left)
            flatten(f.right)
        elif isinstance(f, GlobalAtom):
            parts.append(((f.var, f.world), f.value))
        else:
            raise FormulaSyntaxError(
                "expected a conjunction of world-indexed atoms like p@w0=1", 0)

    flatten(out)
    seen = set()
    for (pair, _) in parts:
        if pair in seen:
            raise FormulaSyntaxError(f"duplicate conjunct target {pair[0]}@{pair[1]}", 0)
        seen.add(pair)
    return tuple(parts)


def parse_local_conjunction(text: str) -> tuple[tuple[str, int], ...]:
    """Parse ``X=v & Y=v' & ...`` into (variable, value) pairs (no worlds)."""
    out = parse(text)
    parts: list[tuple[str, int]] = []

    def flatten(f: Formula):
        if isinstance(f, And):
            flatten(f.left)
            flatten(f.right)
        elif isinstance(f, LocalAtom):
            parts.append((f.var, f.value))
        else:
            raise FormulaSyntaxError("expected a conjunction of atoms like A=1", 0)

    flatten(out)
    seen = set()
    for var, _ in parts:
        if var in seen:
            raise FormulaSyntaxError(f"duplicate conjunct variable {var}", 0)
        seen.add(var)
    return tuple(parts)


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def format_formula(formula: Formula) -> str:
    """Canonical text; ``parse(format_formula(f)) == f`` for every AST."""
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, LocalAtom):
        return f"{formula.var}={formula.value}"
    if isinstance(formula, GlobalAtom):
        return f"{formula.var}@{formula.world}={formula.value}"
    if isinstance(formula, Not):
        body = formula.body
        if isinstance(body, Top):
            return "false"
        if isinstance(body, Box) and isinstance(body.body, Not):
            return f"dia({format_formula(body.body.body)})"
        if isinstance(body, ConvBox) and isinstance(body.body, Not):
            return f"cdia({format_formula(body.body.body)})"
        return f"!{format_formula(body)}"
    if isinstance(formula, And):
        return f"({format_formula(formula.left)} & {format_formula(formula.right)})"
    if isinstance(formula, Box):
        return f"box({format_formula(formula.body)})"
    if isinstance(formula, ConvBox):
        return f"cbox({format_formula(formula.body)})"
    if isinstance(formula, InterventionFormula):
        targets = ", ".join(f"{v}@{w} := {x}" for ((v, w), x) in formula.assignments)
        return f"[{targets}] {format_formula(formula.body)}"
    raise TypeError(f"not a formula: {formula!r}")


def format_conjunction(assignments: Iterable[tuple[Pair, int]]) -> str:
    return " & ".join(f"{v}@{w}={x}" for ((v, w), x) in assignments)
