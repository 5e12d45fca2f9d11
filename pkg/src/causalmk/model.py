"""Causal Kripke models: signature, structural equations, contexts, interventions.

A model couples a finite world set and accessibility relation with one
structural equation per endogenous (variable, world) pair.  Equations are
declared over an explicit parent set, which keeps tables finite and makes the
dependency graph available for cycle checking and for the evaluation order.

All types are immutable after construction; every operation returns new
objects, so models can be shared freely across threads.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from . import formulas
from .errors import CycleError, DanglingRefError, RangeError
from .formulas import Formula, Pair


@dataclass(frozen=True)
class Signature:
    """Variable inventory and per-(variable, world) finite ranges."""

    exogenous: frozenset[str]
    endogenous: frozenset[str]
    ranges: Mapping[Pair, tuple[int, ...]]

    def range_of(self, pair: Pair) -> tuple[int, ...]:
        try:
            return self.ranges[pair]
        except KeyError:
            raise DanglingRefError(f"no range declared for {pair[0]}@{pair[1]}") from None


def signature(exogenous: Iterable[str], endogenous: Iterable[str],
              ranges: Mapping[Pair, Iterable[int]]) -> Signature:
    exo = frozenset(exogenous)
    endo = frozenset(endogenous)
    overlap = exo & endo
    if overlap:
        raise RangeError(f"variables cannot be both exogenous and endogenous: {sorted(overlap)}")
    normalized = {}
    for pair, values in ranges.items():
        values = tuple(sorted(set(values)))
        if not values:
            raise RangeError(f"empty range for {pair[0]}@{pair[1]}")
        normalized[pair] = values
    return Signature(exo, endo, normalized)


@dataclass(frozen=True)
class TableEquation:
    """Explicit finite map from parent assignments (in parent order) to a value."""

    parents: tuple[Pair, ...]
    table: Mapping[tuple[int, ...], int]


@dataclass(frozen=True)
class FormulaEquation:
    """An event formula evaluated at the target's world; target range must be {0, 1}."""

    formula: Formula


Equation = Union[TableEquation, FormulaEquation]


def constant(value: int) -> TableEquation:
    return TableEquation((), {(): value})


@dataclass(frozen=True)
class Context:
    """Total assignment of exogenous (variable, world) pairs."""

    values: Mapping[Pair, int]


@dataclass(frozen=True)
class Intervention:
    """Ordered assignment of endogenous (variable, world) pairs; may be empty."""

    assignments: tuple[tuple[Pair, int], ...]

    def __post_init__(self):
        targets = [pair for pair, _ in self.assignments]
        if len(set(targets)) != len(targets):
            raise ValueError("intervention targets must be pairwise distinct")

    @property
    def targets(self) -> tuple[Pair, ...]:
        return tuple(pair for pair, _ in self.assignments)


@dataclass(frozen=True)
class Valuation:
    """Derived total assignment of every (variable, world) pair under a context."""

    values: Mapping[Pair, int]
    endogenous: frozenset[str] = frozenset()

    def __getitem__(self, pair: Pair) -> int:
        try:
            return self.values[pair]
        except KeyError:
            raise DanglingRefError(f"unknown pair {pair[0]}@{pair[1]}") from None

    def __contains__(self, pair: Pair) -> bool:
        return pair in self.values

    def trueset(self, world: str) -> frozenset[str]:
        """Endogenous variables set to 1 at ``world`` (handy for binary models)."""
        return frozenset(
            v for (v, w), x in self.values.items()
            if w == world and x == 1 and v in self.endogenous)


@dataclass(frozen=True)
class Model:
    signature: Signature
    worlds: tuple[str, ...]
    relation: frozenset[tuple[str, str]]
    equations: Mapping[Pair, Equation]
    # Derived by build_model:
    order: tuple[Pair, ...] = field(default=(), compare=False)
    declared_parents: Mapping[Pair, tuple[Pair, ...]] = field(default_factory=dict, compare=False)
    successor_map: Mapping[str, tuple[str, ...]] = field(default_factory=dict, compare=False)
    predecessor_map: Mapping[str, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def successors(self, world: str) -> tuple[str, ...]:
        return self.successor_map.get(world, ())

    def predecessors(self, world: str) -> tuple[str, ...]:
        return self.predecessor_map.get(world, ())

    @property
    def endogenous_pairs(self) -> tuple[Pair, ...]:
        return self.order

    def range_of(self, pair: Pair) -> tuple[int, ...]:
        return self.signature.range_of(pair)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _adjacency(worlds, relation, forward: bool) -> dict[str, tuple[str, ...]]:
    out: dict[str, list[str]] = {w: [] for w in worlds}
    for (a, b) in sorted(relation):
        if forward:
            out[a].append(b)
        else:
            out[b].append(a)
    return {w: tuple(ws) for w, ws in out.items()}


def build_model(sig: Signature, worlds: Iterable[str],
                relation: Iterable[tuple[str, str]],
                equations: Mapping[Pair, Equation]) -> Model:
    """Validate and assemble a model; rejects cyclic dependency graphs.

    Raises CycleError, RangeError, or DanglingRefError.
    """
    worlds = tuple(worlds)
    if not worlds:
        raise DanglingRefError("a model needs at least one world")
    if len(set(worlds)) != len(worlds):
        raise DanglingRefError("duplicate world ids")
    world_set = set(worlds)
    relation = frozenset(relation)
    for (a, b) in relation:
        if a not in world_set or b not in world_set:
            raise DanglingRefError(f"relation edge ({a}, {b}) names an unknown world")

    all_vars = sig.exogenous | sig.endogenous
    for var in all_vars:
        for w in worlds:
            if (var, w) not in sig.ranges:
                raise RangeError(f"no range declared for {var}@{w}")
    for (var, w) in sig.ranges:
        if var not in all_vars or w not in world_set:
            raise DanglingRefError(f"range declared for unknown pair {var}@{w}")

    endo_pairs = {(v, w) for v in sig.endogenous for w in worlds}
    missing = endo_pairs - set(equations)
    if missing:
        v, w = sorted(missing)[0]
        raise DanglingRefError(f"no equation for endogenous pair {v}@{w}")
    extra = set(equations) - endo_pairs
    if extra:
        v, w = sorted(extra)[0]
        raise DanglingRefError(f"equation given for non-endogenous pair {v}@{w}")

    succ = _adjacency(worlds, relation, forward=True)
    pred = _adjacency(worlds, relation, forward=False)

    declared: dict[Pair, tuple[Pair, ...]] = {}
    for pair, eq in equations.items():
        target_range = sig.range_of(pair)
        if isinstance(eq, TableEquation):
            parents = eq.parents
            if len(set(parents)) != len(parents):
                raise RangeError(f"equation for {pair[0]}@{pair[1]} repeats a parent")
            rows = itertools.product(*(sig.range_of(p) for p in parents))
            for row in rows:
                if row not in eq.table:
                    raise RangeError(
                        f"table for {pair[0]}@{pair[1]} is missing row {row}")
            for row, out in eq.table.items():
                for value, parent in zip(row, parents):
                    if value not in sig.range_of(parent):
                        raise RangeError(
                            f"table key for {pair[0]}@{pair[1]} has out-of-range "
                            f"value {value} for {parent[0]}@{parent[1]}")
                if out not in target_range:
                    raise RangeError(
                        f"table for {pair[0]}@{pair[1]} produces out-of-range value {out}")
        elif isinstance(eq, FormulaEquation):
            if tuple(target_range) != (0, 1):
                raise RangeError(
                    f"formula equation for {pair[0]}@{pair[1]} needs range {{0, 1}}, "
                    f"got {target_range}")
            if not formulas.is_event(eq.formula):
                raise RangeError(
                    f"equation for {pair[0]}@{pair[1]} must be intervention-free")
            parents = tuple(sorted(formulas.event_support(
                eq.formula, pair[1], lambda w: succ.get(w, ()), lambda w: pred.get(w, ()))))
        else:
            raise TypeError(f"unknown equation kind for {pair}: {eq!r}")
        for parent in parents:
            if parent == pair:
                raise CycleError(f"{pair[0]}@{pair[1]} depends on itself", [pair, pair])
            if parent[0] not in all_vars or parent[1] not in world_set:
                raise DanglingRefError(
                    f"equation for {pair[0]}@{pair[1]} references unknown pair "
                    f"{parent[0]}@{parent[1]}")
        declared[pair] = parents

    order = _topological_order(endo_pairs, declared, sig.endogenous)

    return Model(
        signature=sig,
        worlds=worlds,
        relation=relation,
        equations=dict(equations),
        order=order,
        declared_parents=declared,
        successor_map=succ,
        predecessor_map=pred,
    )


def _topological_order(endo_pairs, declared, endogenous) -> tuple[Pair, ...]:
    """Kahn's algorithm; ties broken by (world, variable) for reproducible traces."""
    dependents: dict[Pair, list[Pair]] = {p: [] for p in endo_pairs}
    indegree: dict[Pair, int] = {p: 0 for p in endo_pairs}
    for pair, parents in declared.items():
        for parent in parents:
            if parent[0] in endogenous:
                dependents[parent].append(pair)
                indegree[pair] += 1
    ready = [(w, v) for (v, w) in endo_pairs if indegree[(v, w)] == 0]
    heapq.heapify(ready)
    order: list[Pair] = []
    while ready:
        w, v = heapq.heappop(ready)
        order.append((v, w))
        for child in dependents[(v, w)]:
            indegree[child] -= 1
            if indegree[child] == 0:
                heapq.heappush(ready, (child[1], child[0]))
    if len(order) != len(endo_pairs):
        cycle = _find_cycle({p for p in endo_pairs if p not in set(order)}, declared, endogenous)
        pretty = " -> ".join(f"{v}@{w}" for (v, w) in cycle)
        raise CycleError(f"cyclic structural dependencies: {pretty}", cycle)
    return tuple(order)


def _find_cycle(remaining, declared, endogenous) -> list[Pair]:
    start = sorted(remaining)[0]
    seen: list[Pair] = []
    node = start
    while node not in seen:
        seen.append(node)
        node = next(p for p in declared[node]
                    if p[0] in endogenous and p in remaining)
    return seen[seen.index(node):] + [node]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _check_context(model: Model, context: Context) -> None:
    exo_pairs = {(u, w) for u in model.signature.exogenous for w in model.worlds}
    for pair in exo_pairs:
        if pair not in context.values:
            raise DanglingRefError(f"context missing exogenous pair {pair[0]}@{pair[1]}")
        if context.values[pair] not in model.range_of(pair):
            raise RangeError(
                f"context value {context.values[pair]} out of range for {pair[0]}@{pair[1]}")
    for pair in context.values:
        if pair not in exo_pairs:
            raise DanglingRefError(f"context sets non-exogenous pair {pair[0]}@{pair[1]}")


def evaluate_with(model: Model, context: Context,
                  clamps: Mapping[Pair, int] | None = None) -> dict[Pair, int]:
    """Valuation values with some endogenous pairs clamped to constants.

    Clamping a pair is equivalent to intervening on it; this avoids building
    a new model per intervention in search loops.
    """
    values: dict[Pair, int] = dict(context.values)
    clamps = clamps or {}
    succ = model.successors
    pred = model.predecessors
    for pair in model.order:
        if pair in clamps:
            values[pair] = clamps[pair]
            continue
        eq = model.equations[pair]
        if isinstance(eq, TableEquation):
            key = tuple(values[p] for p in eq.parents)
            values[pair] = eq.table[key]
        else:
            values[pair] = int(formulas.eval_event(eq.formula, pair[1], values, succ, pred))
    return values


def evaluate(model: Model, context: Context) -> Valuation:
    """The unique valuation determined by the context (parents precede children)."""
    _check_context(model, context)
    return Valuation(evaluate_with(model, context), model.signature.endogenous)


def intervene(model: Model, intervention: Intervention) -> Model:
    """A new model with targeted equations replaced by constants.

    Worlds and relation are unchanged; the original model is untouched.
    """
    equations = dict(model.equations)
    declared = dict(model.declared_parents)
    for pair, value in intervention.assignments:
        if pair[0] not in model.signature.endogenous or pair[1] not in set(model.worlds):
            raise DanglingRefError(
                f"intervention target {pair[0]}@{pair[1]} is not an endogenous pair")
        if value not in model.range_of(pair):
            raise RangeError(
                f"intervention value {value} out of range for {pair[0]}@{pair[1]}")
        equations[pair] = constant(value)
        declared[pair] = ()
    # Removing edges keeps any existing topological order valid.
    return Model(
        signature=model.signature,
        worlds=model.worlds,
        relation=model.relation,
        equations=equations,
        order=model.order,
        declared_parents=declared,
        successor_map=model.successor_map,
        predecessor_map=model.predecessor_map,
    )


def parents(model: Model, pair: Pair) -> frozenset[Pair]:
    """Pairs the equation for ``pair`` genuinely depends on.

    Brute-forces the declared parent set: a declared parent is genuine when two
    assignments differing only there give different outputs.
    """
    if pair not in model.equations:
        raise DanglingRefError(f"{pair[0]}@{pair[1]} is not an endogenous pair")
    eq = model.equations[pair]
    declared = model.declared_parents[pair]

    def output(assignment: dict[Pair, int]) -> int:
        if isinstance(eq, TableEquation):
            return eq.table[tuple(assignment[p] for p in eq.parents)]
        return int(formulas.eval_event(
            eq.formula, pair[1], assignment, model.successors, model.predecessors))

    genuine = set()
    ranges = [model.range_of(p) for p in declared]
    for i, parent in enumerate(declared):
        rest = [r for j, r in enumerate(ranges) if j != i]
        others = [p for j, p in enumerate(declared) if j != i]
        for combo in itertools.product(*rest):
            assignment = dict(zip(others, combo))
            outputs = set()
            for value in ranges[i]:
                assignment[parent] = value
                outputs.add(output(assignment))
            if len(outputs) > 1:
                genuine.add(parent)
                break
    return frozenset(genuine)
