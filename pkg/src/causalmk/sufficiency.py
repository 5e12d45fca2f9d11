"""Sufficient causality over a space of contexts.

A classical (single-world) model plus a finite list of contexts and a
"nearby" relation between them form a ContextSpace.  Sufficiency of a
conjunction for an event is checked with:

* SC1: the conjunction and the event hold in the actual context;
* SC2: some conjunct is part of an actual cause in the actual context;
* SC3: intervening the conjunction in makes the event true in every listed
  context (``global`` scope) or in every nearby context (``local`` scope);
* minimality over strict sub-conjunctions.

The space lifts to a causal Kripke model whose worlds are the contexts and
whose relation is the nearby relation; local SC3 is then exactly a boxed
intervention formula at the actual context's world.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import formulas
from .causes import Budget, part_of_cause
from .errors import DanglingRefError, RangeError
from .formulas import And, Box, ConvBox, Formula, GlobalAtom, InterventionFormula, LocalAtom, Not, Top
from .model import (Context, FormulaEquation, Model, TableEquation, build_model,
                    evaluate_with, signature)
from .semantics import Setting, satisfies

ClassicalConjunction = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class ContextSpace:
    """A single-world base model, named contexts on it, and a nearby relation.

    ``nearby`` is stored reflexively closed unless ``reflexive=False`` was
    given to :func:`make_context_space`.
    """

    base: Model
    names: tuple[str, ...]
    contexts: Mapping[str, Context]
    nearby: frozenset[tuple[str, str]]

    @property
    def base_world(self) -> str:
        return self.base.worlds[0]

    def setting(self, name: str) -> Setting:
        if name not in self.contexts:
            raise DanglingRefError(f"unknown context {name}")
        return Setting(self.base, self.contexts[name])


def make_context_space(base: Model, contexts: Sequence[tuple[str, Context]],
                       nearby: Iterable[tuple[str, str]] = (),
                       reflexive: bool = True) -> ContextSpace:
    if len(base.worlds) != 1 or base.relation:
        raise RangeError("the base model must have a single world and an empty relation")
    names = tuple(name for name, _ in contexts)
    if len(set(names)) != len(names):
        raise RangeError("context names must be distinct")
    by_name = {name: ctx for name, ctx in contexts}
    assignments = [tuple(sorted(ctx.values.items())) for _, ctx in contexts]
    if len(set(assignments)) != len(assignments):
        raise RangeError("contexts must be pairwise distinct")
    closed = set()
    for (a, b) in nearby:
        if a not in by_name or b not in by_name:
            raise DanglingRefError(f"nearby pair ({a}, {b}) names an unknown context")
        closed.add((a, b))
    if reflexive:
        closed.update((n, n) for n in names)
    return ContextSpace(base, names, by_name, frozenset(closed))


def hamming_pairs(contexts: Sequence[tuple[str, Context]], k: int) -> frozenset[tuple[str, str]]:
    """Ordered pairs of contexts whose exogenous assignments differ in at most
    ``k`` positions (self-pairs included: distance zero)."""
    out = set()
    for (name_a, ctx_a), (name_b, ctx_b) in itertools.product(contexts, repeat=2):
        keys = set(ctx_a.values) | set(ctx_b.values)
        distance = sum(ctx_a.values.get(key) != ctx_b.values.get(key) for key in keys)
        if distance <= k:
            out.add((name_a, name_b))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

def _modality_free(formula: Formula) -> bool:
    if isinstance(formula, (Top, LocalAtom)):
        return True
    if isinstance(formula, GlobalAtom):
        return False
    if isinstance(formula, Not):
        return _modality_free(formula.body)
    if isinstance(formula, And):
        return _modality_free(formula.left) and _modality_free(formula.right)
    if isinstance(formula, (Box, ConvBox, InterventionFormula)):
        return False
    return False


def lift_to_kripke(space: ContextSpace) -> tuple[Model, Context]:
    """The causal Kripke model whose worlds are the listed contexts.

    Equations are copied per world (they must be world-agnostic: local atoms
    only, no modalities), the relation is the nearby relation, and the lifted
    context gives every world the exogenous values that identify it.
    """
    base = space.base
    bw = space.base_world
    worlds = space.names
    sig = base.signature
    ranges = {(v, name): sig.ranges[(v, bw)]
              for v in (sig.exogenous | sig.endogenous) for name in worlds}
    lifted_sig = signature(sig.exogenous, sig.endogenous, ranges)

    equations = {}
    for (var, _), eq in base.equations.items():
        for name in worlds:
            if isinstance(eq, TableEquation):
                remapped = tuple((v, name) for (v, _) in eq.parents)
                equations[(var, name)] = TableEquation(remapped, eq.table)
            else:
                if not _modality_free(eq.formula):
                    raise RangeError(
                        f"cannot lift equation for {var}: only local, modality-free "
                        f"formulas copy across contexts")
                equations[(var, name)] = FormulaEquation(eq.formula)

    lifted = build_model(lifted_sig, worlds, space.nearby, equations)
    values = {}
    for name in worlds:
        for (u, _), value in space.contexts[name].values.items():
            values[(u, name)] = value
    return lifted, Context(values)


def lifted_sc3_formula(space: ContextSpace, conjunction: ClassicalConjunction,
                       event: Formula) -> Formula:
    """``box([X1@u1 := x1, ...] event)`` over every context world."""
    assignments = tuple(
        ((var, name), value)
        for (var, value) in conjunction for name in space.names)
    return Box(InterventionFormula(assignments, event))


# ---------------------------------------------------------------------------
# Sufficiency verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SufficiencyVerdict:
    holds: bool
    scope: str
    definition: str
    conjunction: ClassicalConjunction
    sc1: bool | None = None
    sc2: bool | None = None
    sc3: bool | None = None
    minimal: bool | None = None
    failure: str | None = None


def _normalize_conjunction(base: Model, conjunction) -> ClassicalConjunction:
    conj = tuple((str(v), int(x)) for (v, x) in conjunction)
    if not conj:
        raise ValueError("a conjunction must be nonempty")
    names = [v for v, _ in conj]
    if len(set(names)) != len(names):
        raise ValueError("conjunction variables must be distinct")
    bw = base.worlds[0]
    for v, x in conj:
        if v not in base.signature.endogenous:
            raise DanglingRefError(f"conjunct variable {v} is not endogenous")
        if x not in base.range_of((v, bw)):
            raise RangeError(f"conjunct value {x} out of range for {v}")
    return conj


def _sc3(space: ContextSpace, names: Iterable[str],
         conjunction: ClassicalConjunction, event: Formula) -> bool:
    bw = space.base_world
    clamps = {(v, bw): x for v, x in conjunction}
    for name in names:
        values = evaluate_with(space.base, space.contexts[name], clamps)
        if not formulas.eval_event(event, bw, values,
                                   space.base.successors, space.base.predecessors):
            return False
    return True


def is_sufficient_cause(space: ContextSpace, context_name: str, conjunction,
                        event: Formula, scope: str = "global",
                        definition: str = "updated",
                        budget: Budget | None = None) -> SufficiencyVerdict:
    """SC1-SC3 plus minimality for a conjunction, in the named actual context.

    ``scope`` picks the SC3 quantification domain: every listed context
    (``global``) or the contexts nearby the actual one (``local``).
    """
    if scope not in ("global", "local"):
        raise ValueError(f"scope must be 'global' or 'local', got {scope!r}")
    conj = _normalize_conjunction(space.base, conjunction)
    setting = space.setting(context_name)
    bw = space.base_world

    def sc1(c: ClassicalConjunction) -> bool:
        return satisfies(setting, bw, event) and all(
            setting.valuation[(v, bw)] == x for v, x in c)

    def sc2(c: ClassicalConjunction) -> bool:
        return any(
            part_of_cause(setting, bw, ((v, bw), x), event, definition, budget=budget)
            for v, x in c)

    def sc3(c: ClassicalConjunction) -> bool:
        if scope == "global":
            domain = space.names
        else:
            domain = [b for (a, b) in space.nearby if a == context_name]
        return _sc3(space, domain, c, event)

    verdict = dict(scope=scope, definition=definition, conjunction=conj)
    if not sc1(conj):
        return SufficiencyVerdict(holds=False, sc1=False,
                                  failure="SC1: conjunction or event not actual", **verdict)
    if not sc2(conj):
        return SufficiencyVerdict(holds=False, sc1=True, sc2=False,
                                  failure="SC2: no conjunct is part of a cause", **verdict)
    if not sc3(conj):
        return SufficiencyVerdict(holds=False, sc1=True, sc2=True, sc3=False,
                                  failure="SC3: some context escapes the intervention",
                                  **verdict)
    for size in range(1, len(conj)):
        for sub in itertools.combinations(conj, size):
            if sc2(sub) and sc3(sub):
                return SufficiencyVerdict(
                    holds=False, sc1=True, sc2=True, sc3=True, minimal=False,
                    failure=f"minimality: {sub} already suffices", **verdict)
    return SufficiencyVerdict(holds=True, sc1=True, sc2=True, sc3=True, minimal=True,
                              **verdict)
