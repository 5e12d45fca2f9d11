"""The satisfaction relation for causal formulas at a world of a setting."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formulas
from .errors import DanglingRefError
from .formulas import (And, Box, ConvBox, Formula, GlobalAtom, InterventionFormula,
                       LocalAtom, Not, Top)
from .model import Context, Intervention, Model, Valuation, evaluate, intervene


@dataclass(frozen=True)
class Setting:
    """A model plus a context, with the derived valuation cached."""

    model: Model
    context: Context
    valuation: Valuation = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "valuation", evaluate(self.model, self.context))


def satisfies(setting: Setting, world: str, formula: Formula) -> bool:
    """Truth of ``formula`` at ``world``.

    World-indexed atoms are independent of the evaluation world; an
    intervention prefix re-evaluates its body in the surgically altered model
    under the same context.
    """
    if world not in setting.model.successor_map:
        raise DanglingRefError(f"unknown world {world}")
    return _sat(setting, world, formula)


def _sat(setting: Setting, world: str, formula: Formula) -> bool:
    if isinstance(formula, Top):
        return True
    if isinstance(formula, LocalAtom):
        return setting.valuation[(formula.var, world)] == formula.value
    if isinstance(formula, GlobalAtom):
        return setting.valuation[(formula.var, formula.world)] == formula.value
    if isinstance(formula, Not):
        return not _sat(setting, world, formula.body)
    if isinstance(formula, And):
        return _sat(setting, world, formula.left) and _sat(setting, world, formula.right)
    if isinstance(formula, Box):
        return all(_sat(setting, w2, formula.body) for w2 in setting.model.successors(world))
    if isinstance(formula, ConvBox):
        return all(_sat(setting, w2, formula.body) for w2 in setting.model.predecessors(world))
    if isinstance(formula, InterventionFormula):
        altered = intervene(setting.model, Intervention(formula.assignments))
        return _sat(Setting(altered, setting.context), world, formula.body)
    raise TypeError(f"not a formula: {formula!r}")


def valid_in_model(setting: Setting, formula: Formula) -> bool:
    """Truth at every world of the setting."""
    return all(satisfies(setting, world, formula) for world in setting.model.worlds)


def satisfies_text(setting: Setting, world: str, text: str) -> bool:
    """Convenience wrapper: parse then check."""
    return satisfies(setting, world, formulas.parse(text))
