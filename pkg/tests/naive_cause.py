"""Reference Kripke cause search over the full (variable, world) space.

Mirrors the documented search order (contingency sets by increasing
cardinality, settings lexicographic) but enumerates all of V x W and the full
restore-subset families, with none of the engine's relevant-cone reductions.
Used to cross-check that those reductions never change a verdict or the first
witness found.
"""

import itertools

from causalmk.formulas import eval_event
from causalmk.model import evaluate_with


def _event_holds(setting, world, event, clamps):
    values = evaluate_with(setting.model, setting.context, clamps)
    return eval_event(event, world, values,
                      setting.model.successors, setting.model.predecessors)


def _subsets(items):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def _ac2b_original(setting, world, candidate, event, contingency):
    actual = setting.valuation.values
    taken = {p for p, _ in candidate} | set(contingency)
    zdomain = sorted(set(setting.model.order) - taken)
    base = dict(contingency)
    base.update(candidate)
    for zsub in _subsets(zdomain):
        clamps = dict(base)
        clamps.update((p, actual[p]) for p in zsub)
        if not _event_holds(setting, world, event, clamps):
            return False
    return True


def _ac2b_updated(setting, world, candidate, event, contingency):
    actual = setting.valuation.values
    taken = {p for p, _ in candidate} | set(contingency)
    zdomain = sorted(set(setting.model.order) - taken)
    npairs = sorted(contingency)
    for nsub in _subsets(npairs):
        for zsub in _subsets(zdomain):
            clamps = dict(candidate)
            clamps.update((p, contingency[p]) for p in nsub)
            clamps.update((p, actual[p]) for p in zsub)
            if not _event_holds(setting, world, event, clamps):
                return False
    return True


def find_witness(setting, world, candidate, event, definition):
    model = setting.model
    actual = setting.valuation.values
    cand_pairs = [p for p, _ in candidate]
    domain = sorted(set(model.order) - set(cand_pairs))
    alt_space = list(itertools.product(*(model.range_of(p) for p in cand_pairs)))
    for size in range(len(domain) + 1):
        for nbar in itertools.combinations(domain, size):
            if definition == "modified":
                settings = [tuple(actual[p] for p in nbar)]
            else:
                settings = itertools.product(*(model.range_of(p) for p in nbar))
            for nvals in settings:
                contingency = dict(zip(nbar, nvals))
                for alt in alt_space:
                    clamps = dict(contingency)
                    clamps.update(zip(cand_pairs, alt))
                    if _event_holds(setting, world, event, clamps):
                        continue
                    if definition == "original" and not _ac2b_original(
                            setting, world, dict(candidate), event, contingency):
                        continue
                    if definition == "updated" and not _ac2b_updated(
                            setting, world, dict(candidate), event, contingency):
                        continue
                    return tuple(zip(nbar, nvals)), alt
    return None


def is_cause(setting, world, candidate, event, definition):
    candidate = tuple(candidate)
    if not _event_holds(setting, world, event, {}):
        return False
    if any(setting.valuation.values[p] != v for p, v in candidate):
        return False
    if find_witness(setting, world, candidate, event, definition) is None:
        return False
    for size in range(1, len(candidate)):
        for sub in itertools.combinations(candidate, size):
            if find_witness(setting, world, sub, event, definition) is not None:
                return False
    return True
