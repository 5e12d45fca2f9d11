"""Deciding and enumerating actual causes in causal Kripke settings.

Three definitions are supported, differing in their counterfactual clause:

* ``original``: AC2a (some contingency setting breaks the event) plus AC2b-o
  (restoring any part of the untouched variables to actual values keeps it);
* ``updated``: AC2a plus AC2b-u, which additionally quantifies over subsets of
  the contingency set;
* ``modified``: a single clause where the contingency set is frozen at its
  actual values.

AC1 (actuality) and AC3 (minimality over strict sub-conjunctions) are shared.

Witness search walks contingency sets by increasing cardinality, settings in
lexicographic order, and reports the first witness found.  The search space is
restricted, without loss of generality, to the event's *relevant cone*: the
(variable, world) pairs the event can read, closed under equation parents.
Clamping a pair outside the cone can never change the event's truth value, so
a passing witness restricted to the cone still passes every clause; witnesses
and verdicts are identical to those of a full-space search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import formulas
from .errors import DanglingRefError, RangeError, SearchBudgetExceeded
from .formulas import Formula, Pair
from .model import Model, evaluate_with
from .semantics import Setting, satisfies

DEFINITIONS = ("original", "updated", "modified")

# Full exhaustive search is the default up to this many endogenous pairs;
# larger models must be given explicit caps.
DEFAULT_EXHAUSTIVE_LIMIT = 16

Conjunction = tuple[tuple[Pair, int], ...]


@dataclass
class Budget:
    """Caps on the witness search; ``None`` means unlimited."""

    max_evaluations: int | None = None
    max_contingency: int | None = None
    spent: int = 0

    def spend(self) -> None:
        self.spent += 1
        if self.max_evaluations is not None and self.spent > self.max_evaluations:
            raise SearchBudgetExceeded(
                f"evaluation budget of {self.max_evaluations} exhausted", spent=self.spent)


@dataclass(frozen=True)
class Witness:
    """Evidence for the counterfactual clause of a cause verdict.

    ``contingency`` is the clamped set with its values; ``alternative`` the
    candidate's counterfactual setting, aligned with the candidate order.  For
    the original and updated definitions ``restored`` lists the untouched
    pairs with their actual values (the complement partition).
    """

    contingency: tuple[tuple[Pair, int], ...]
    alternative: tuple[int, ...]
    restored: tuple[tuple[Pair, int], ...] | None = None


@dataclass(frozen=True)
class CauseVerdict:
    """Per-clause outcome; ``holds`` is None when the search was inconclusive."""

    holds: bool | None
    definition: str
    candidate: Conjunction
    ac1: bool | None = None
    ac2: bool | None = None
    ac3: bool | None = None
    witness: Witness | None = None
    ac3_violator: Conjunction | None = None
    failure: str | None = None
    searched: int = 0


class _Search:
    """Shared state for one cause query: model, actual values, cone, budget."""

    def __init__(self, setting: Setting, world: str, event: Formula, budget: Budget | None):
        if not formulas.is_event(event):
            raise ValueError("cause queries take an event (no interventions)")
        if world not in setting.model.successor_map:
            raise DanglingRefError(f"unknown world {world}")
        self.setting = setting
        self.model = setting.model
        self.world = world
        self.event = event
        self.budget = _effective_budget(setting.model, budget)
        self.actual = setting.valuation.values
        self.cone = relevant_cone(setting.model, event, world)

    def event_holds(self, clamps: dict[Pair, int]) -> bool:
        self.budget.spend()
        values = evaluate_with(self.model, self.setting.context, clamps)
        return formulas.eval_event(
            self.event, self.world, values, self.model.successors, self.model.predecessors)

    # -- counterfactual clauses ---------------------------------------------

    def ac2a(self, candidate: Conjunction, alternative: Sequence[int],
             contingency: dict[Pair, int]) -> bool:
        clamps = dict(contingency)
        for (pair, _), alt in zip(candidate, alternative):
            clamps[pair] = alt
        return not self.event_holds(clamps)

    def ac2b_original(self, candidate: Conjunction, contingency: dict[Pair, int]) -> bool:
        base = dict(contingency)
        for pair, value in candidate:
            base[pair] = value
        for zsub in self._restore_subsets(candidate, contingency):
            clamps = dict(base)
            clamps.update(zsub)
            if not self.event_holds(clamps):
                return False
        return True

    def ac2b_updated(self, candidate: Conjunction, contingency: dict[Pair, int]) -> bool:
        npairs = sorted(contingency)
        base = {pair: value for pair, value in candidate}
        for nsize in range(len(npairs) + 1):
            for nsub in itertools.combinations(npairs, nsize):
                for zsub in self._restore_subsets(candidate, contingency):
                    clamps = dict(base)
                    clamps.update((p, contingency[p]) for p in nsub)
                    clamps.update(zsub)
                    if not self.event_holds(clamps):
                        return False
        return True

    def _restore_subsets(self, candidate: Conjunction, contingency: dict[Pair, int]):
        """Clamp-to-actual patterns for the untouched pairs.

        Only cone members can change the event's truth, so quantifying over
        subsets of the cone part is equivalent to the full complement.
        """
        taken = {pair for pair, _ in candidate} | set(contingency)
        zdomain = sorted(self.cone - taken)
        for size in range(len(zdomain) + 1):
            for zsub in itertools.combinations(zdomain, size):
                yield {p: self.actual[p] for p in zsub}

    # -- witness search ------------------------------------------------------

    def find_witness(self, candidate: Conjunction, definition: str) -> tuple[Witness | None, bool]:
        """First witness in (cardinality, lexicographic) order, plus a
        truncation flag when a contingency cap cut the enumeration short."""
        cand_pairs = [pair for pair, _ in candidate]
        domain = sorted(self.cone - set(cand_pairs))
        cap = len(domain)
        truncated = False
        if self.budget.max_contingency is not None and self.budget.max_contingency < cap:
            cap = self.budget.max_contingency
            truncated = True
        alt_space = list(itertools.product(*(self.model.range_of(p) for p in cand_pairs)))
        for size in range(cap + 1):
            for nbar in itertools.combinations(domain, size):
                for nvals in self._contingency_settings(nbar, definition):
                    contingency = dict(zip(nbar, nvals))
                    for alternative in alt_space:
                        if not self.ac2a(candidate, alternative, contingency):
                            continue
                        if definition == "original" and not self.ac2b_original(candidate, contingency):
                            continue
                        if definition == "updated" and not self.ac2b_updated(candidate, contingency):
                            continue
                        return self._witness(candidate, nbar, nvals, alternative, definition), truncated
        return None, truncated

    def _contingency_settings(self, nbar: tuple[Pair, ...], definition: str):
        if definition == "modified":
            yield tuple(self.actual[p] for p in nbar)
        else:
            yield from itertools.product(*(self.model.range_of(p) for p in nbar))

    def _witness(self, candidate, nbar, nvals, alternative, definition) -> Witness:
        restored = None
        if definition in ("original", "updated"):
            taken = {pair for pair, _ in candidate} | set(nbar)
            restored = tuple(
                (p, self.actual[p])
                for p in sorted(set(self.model.order) - taken))
        return Witness(tuple(zip(nbar, nvals)), tuple(alternative), restored)


def _effective_budget(model: Model, budget: Budget | None) -> Budget:
    if budget is not None:
        return budget
    if len(model.order) > DEFAULT_EXHAUSTIVE_LIMIT:
        raise SearchBudgetExceeded(
            f"model has {len(model.order)} endogenous pairs "
            f"(> {DEFAULT_EXHAUSTIVE_LIMIT}); pass an explicit Budget")
    return Budget()


def relevant_cone(model: Model, event: Formula, world: str) -> frozenset[Pair]:
    """Endogenous pairs whose value can influence the event at ``world``:
    the event's support closed under declared equation parents."""
    seen = set(formulas.event_support(
        event, world, model.successors, model.predecessors))
    stack = list(seen)
    while stack:
        pair = stack.pop()
        for parent in model.declared_parents.get(pair, ()):
            if parent not in seen:
                seen.add(parent)
                stack.append(parent)
    endo = model.signature.endogenous
    return frozenset(p for p in seen if p[0] in endo)


def _normalize_candidate(model: Model, candidate: Iterable[tuple[Pair, int]]) -> Conjunction:
    cand = tuple(((str(v), str(w)), int(x)) for ((v, w), x) in candidate)
    if not cand:
        raise ValueError("a candidate conjunction must be nonempty")
    pairs = [pair for pair, _ in cand]
    if len(set(pairs)) != len(pairs):
        raise ValueError("candidate targets must be pairwise distinct")
    worlds = set(model.worlds)
    for (v, w), x in cand:
        if v not in model.signature.endogenous or w not in worlds:
            raise DanglingRefError(f"candidate target {v}@{w} is not an endogenous pair")
        if x not in model.range_of((v, w)):
            raise RangeError(f"candidate value {x} out of range for {v}@{w}")
    return cand


def _check_definition(definition: str) -> None:
    if definition not in DEFINITIONS:
        raise ValueError(f"unknown definition {definition!r}; expected one of {DEFINITIONS}")


# ---------------------------------------------------------------------------
# Single-clause checks
# ---------------------------------------------------------------------------

def check_ac1(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
              event: Formula) -> bool:
    """The event holds at ``world`` and every conjunct holds its actual value."""
    cand = _normalize_candidate(setting.model, candidate)
    if not formulas.is_event(event):
        raise ValueError("cause queries take an event (no interventions)")
    if not satisfies(setting, world, event):
        return False
    return all(setting.valuation[pair] == value for pair, value in cand)


def check_ac2a(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
               event: Formula, witness: Witness) -> bool:
    """One intervened query: the witness's settings falsify the event."""
    cand = _normalize_candidate(setting.model, candidate)
    search = _Search(setting, world, event, Budget())
    return search.ac2a(cand, witness.alternative, dict(witness.contingency))


def check_ac2b_original(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
                        event: Formula, witness: Witness) -> bool:
    """With the candidate held at its given values and the contingency at the
    witness values, restoring any subset of the rest to actual values keeps
    the event true."""
    cand = _normalize_candidate(setting.model, candidate)
    search = _Search(setting, world, event, Budget())
    return search.ac2b_original(cand, dict(witness.contingency))


def check_ac2b_updated(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
                       event: Formula, witness: Witness) -> bool:
    """As the original clause, but quantifying also over contingency subsets."""
    cand = _normalize_candidate(setting.model, candidate)
    search = _Search(setting, world, event, Budget())
    return search.ac2b_updated(cand, dict(witness.contingency))


def check_ac2a_modified(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
                        event: Formula, contingency: Iterable[Pair],
                        alternative: Sequence[int]) -> bool:
    """The contingency pairs are frozen at their actual values; the candidate's
    alternative setting must falsify the event."""
    cand = _normalize_candidate(setting.model, candidate)
    search = _Search(setting, world, event, Budget())
    pairs = list(contingency)
    taken = {pair for pair, _ in cand}
    for pair in pairs:
        if pair in taken:
            raise ValueError(f"contingency pair {pair[0]}@{pair[1]} overlaps the candidate")
    frozen = {p: setting.valuation[p] for p in pairs}
    return search.ac2a(cand, tuple(alternative), frozen)


# ---------------------------------------------------------------------------
# Full verdicts
# ---------------------------------------------------------------------------

def is_cause(setting: Setting, world: str, candidate: Iterable[tuple[Pair, int]],
             event: Formula, definition: str, budget: Budget | None = None) -> CauseVerdict:
    """Full AC1 / AC2 / AC3 verdict with a witness or failing-clause evidence.

    Raises SearchBudgetExceeded (carrying an inconclusive verdict) rather than
    ever reporting a truncated search as a definite "no".
    """
    _check_definition(definition)
    cand = _normalize_candidate(setting.model, candidate)
    search = _Search(setting, world, event, budget)

    if not check_ac1(setting, world, cand, event):
        return CauseVerdict(
            holds=False, definition=definition, candidate=cand, ac1=False,
            failure="AC1: the event or a conjunct does not hold at its world",
            searched=search.budget.spent)

    witness, truncated = search.find_witness(cand, definition)
    if witness is None:
        if truncated:
            raise SearchBudgetExceeded(
                "contingency cap hit before any witness was found",
                verdict=CauseVerdict(
                    holds=None, definition=definition, candidate=cand, ac1=True,
                    ac2=None, failure="inconclusive: contingency search truncated",
                    searched=search.budget.spent),
                spent=search.budget.spent)
        return CauseVerdict(
            holds=False, definition=definition, candidate=cand, ac1=True, ac2=False,
            failure=f"AC2: no witness found (exhaustive search, "
                    f"{search.budget.spent} interventions tried)",
            searched=search.budget.spent)

    violator, ac3_uncertain = _ac3_violator(search, cand, definition)
    if violator is not None:
        return CauseVerdict(
            holds=False, definition=definition, candidate=cand, ac1=True, ac2=True,
            ac3=False, witness=witness, ac3_violator=violator,
            failure="AC3: a strict sub-conjunction already satisfies AC1 and AC2",
            searched=search.budget.spent)
    if ac3_uncertain:
        raise SearchBudgetExceeded(
            "contingency cap hit while checking minimality",
            verdict=CauseVerdict(
                holds=None, definition=definition, candidate=cand, ac1=True, ac2=True,
                ac3=None, witness=witness,
                failure="inconclusive: minimality search truncated",
                searched=search.budget.spent),
            spent=search.budget.spent)
    return CauseVerdict(
        holds=True, definition=definition, candidate=cand, ac1=True, ac2=True,
        ac3=True, witness=witness, searched=search.budget.spent)


def _ac3_violator(search: _Search, cand: Conjunction, definition: str):
    """A strict nonempty sub-conjunction passing AC1+AC2, if any.

    AC1 holds for every sub-conjunction once it holds for the candidate, so
    only the counterfactual clause needs re-checking.
    """
    uncertain = False
    for size in range(1, len(cand)):
        for sub in itertools.combinations(cand, size):
            witness, truncated = search.find_witness(tuple(sub), definition)
            if witness is not None:
                return tuple(sub), False
            if truncated:
                uncertain = True
    return None, uncertain


def find_causes(setting: Setting, world: str, event: Formula, definition: str,
                max_conjuncts: int, budget: Budget | None = None) -> list[Conjunction]:
    """All causes with at most ``max_conjuncts`` conjuncts, in size-then-
    lexicographic order.

    Candidates take their actual values (anything else fails AC1) and range
    over the event's relevant cone minus the pairs the event reads directly:
    clamp-the-event-itself candidates are degenerate and never enumerated,
    and pairs outside the cone provably never satisfy AC2 and AC3 together.
    """
    _check_definition(definition)
    if max_conjuncts < 1:
        raise ValueError("max_conjuncts must be at least 1")
    search = _Search(setting, world, event, budget)
    if not satisfies(setting, world, event):
        return []
    support = set(formulas.event_support(
        event, world, setting.model.successors, setting.model.predecessors))
    universe = sorted(search.cone - support)
    actual = setting.valuation.values

    results: list[Conjunction] = []
    passing: list[frozenset[Pair]] = []
    for size in range(1, min(max_conjuncts, len(universe)) + 1):
        for pairs in itertools.combinations(universe, size):
            pair_set = frozenset(pairs)
            if any(prior < pair_set for prior in passing):
                continue  # a strict sub-conjunction already passed AC2
            cand = tuple((p, actual[p]) for p in pairs)
            witness, truncated = search.find_witness(cand, definition)
            if witness is not None:
                passing.append(pair_set)
                results.append(cand)
            elif truncated:
                raise SearchBudgetExceeded(
                    "contingency cap hit while enumerating causes",
                    spent=search.budget.spent)
    return results


def part_of_cause(setting: Setting, world: str, atom: tuple[Pair, int], event: Formula,
                  definition: str, max_conjuncts: int | None = None,
                  budget: Budget | None = None) -> bool:
    """True when the atom is a conjunct of some cause.

    Completeness is relative to ``max_conjuncts`` (default: exhaustive over
    the candidate universe).
    """
    pair, value = atom
    _normalize_candidate(setting.model, [(pair, value)])
    if setting.valuation[pair] != value:
        return False  # AC1 fails for any conjunction containing the atom
    if max_conjuncts is None:
        max_conjuncts = max(1, len(setting.model.order))
    causes = find_causes(setting, world, event, definition, max_conjuncts, budget)
    return any((pair, value) in cause for cause in causes)


def possibility_is_cause(setting: Setting, world: str, var: str, value: int,
                         event: Formula, budget: Budget | None = None) -> bool:
    """The possibility of ``var=value``: the conjunction of ``(var, w')=value``
    over successors where it actually holds, checked as a modified-definition
    cause.  False when no successor qualifies (empty conjunctions are not
    causes)."""
    successors = setting.model.successors(world)
    qualifying = [w2 for w2 in successors
                  if setting.valuation[(var, w2)] == value]
    if not qualifying:
        return False
    candidate = tuple(((var, w2), value) for w2 in qualifying)
    return bool(is_cause(setting, world, candidate, event, "modified", budget).holds)


def certainty_is_cause(setting: Setting, world: str, var: str, value: int,
                       event: Formula, budget: Budget | None = None) -> bool:
    """The certainty of ``var=value``: ``(var, w')=value`` must be a
    modified-definition cause at every successor ``w'``; false when the world
    has no successors."""
    successors = setting.model.successors(world)
    if not successors:
        return False
    return all(
        bool(is_cause(setting, world, (((var, w2), value),), event, "modified", budget).holds)
        for w2 in successors)


def modal_cause_check(setting: Setting, world: str, modality: str,
                      candidate: Iterable[tuple[Pair, int]], event: Formula,
                      definition: str, budget: Budget | None = None) -> bool:
    """``dia``: the candidate is a cause at some successor; ``box``: at all."""
    if modality not in ("box", "dia"):
        raise ValueError(f"modality must be 'box' or 'dia', got {modality!r}")
    cand = _normalize_candidate(setting.model, candidate)
    successors = setting.model.successors(world)
    verdicts = (
        bool(is_cause(setting, w2, cand, event, definition, budget).holds)
        for w2 in successors)
    return any(verdicts) if modality == "dia" else all(verdicts)
