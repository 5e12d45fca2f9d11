"""Model-level validity fuzzing for the modal causality axiom schemes.

Five schemes are checked by direct evaluation on concrete models:

* K-distribution:        box(p -> q) -> (box(p) -> box(q))
* Necessitation-closure: if phi holds at every world, so does box(phi)
* DiaAxiom:              [Y := y] dia(a)  <->  dia([Y := y] a)
* BoxAxiom:              [Y := y] box(a)  <->  box([Y := y] a)
* GAxiom:                [Y := y] X@w=x  ->  box([Y := y] X@w=x)

A deliberately invalid variant of the G scheme over world-local atoms is also
provided; it must produce counterexamples, which guards the whole suite
against vacuous passes.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formulas import (And, Box, ConvBox, Dia, Formula, GlobalAtom, Implies,
                       InterventionFormula, LocalAtom, Not, format_formula)
from .model import Context, Model, Pair, TableEquation, build_model, signature
from .semantics import Setting, satisfies, valid_in_model


class SchemeId(enum.Enum):
    K = "K-distribution"
    NECESSITATION = "Necessitation-closure"
    DIA = "DiaAxiom"
    BOX = "BoxAxiom"
    G = "GAxiom"


@dataclass(frozen=True)
class ModelGenSpec:
    """Parameters for deterministic random model generation."""

    seed: int
    worlds: tuple[int, int] = (1, 3)
    endogenous: tuple[int, int] = (1, 3)
    exogenous: tuple[int, int] = (1, 2)
    edge_prob: float = 0.4
    max_parents: int = 3


@dataclass(frozen=True)
class Counterexample:
    scheme: SchemeId
    world: str
    instance: str


def generate_model(spec: ModelGenSpec) -> tuple[Model, Context]:
    """A random recursive binary model plus a context, deterministic in the seed.

    Equations are random truth tables over parents drawn from exogenous pairs
    and endogenous pairs earlier in a shuffled order, so the dependency graph
    is acyclic by construction.
    """
    rng = random.Random(spec.seed)
    n_worlds = rng.randint(*spec.worlds)
    n_endo = rng.randint(*spec.endogenous)
    n_exo = rng.randint(*spec.exogenous)
    worlds = tuple(f"w{i}" for i in range(n_worlds))
    endo = [f"x{i}" for i in range(n_endo)]
    exo = [f"u{i}" for i in range(n_exo)]
    relation = {(a, b) for a in worlds for b in worlds if rng.random() < spec.edge_prob}
    ranges = {(v, w): (0, 1) for v in endo + exo for w in worlds}
    sig = signature(exo, endo, ranges)

    endo_pairs = [(v, w) for v in endo for w in worlds]
    rng.shuffle(endo_pairs)
    available: list[Pair] = [(u, w) for u in exo for w in worlds]
    equations = {}
    for pair in endo_pairs:
        k = rng.randint(0, min(spec.max_parents, len(available)))
        parents = tuple(sorted(rng.sample(available, k)))
        table = {row: rng.randint(0, 1)
                 for row in itertools.product((0, 1), repeat=len(parents))}
        equations[pair] = TableEquation(parents, table)
        available.append(pair)

    context = Context({(u, w): rng.randint(0, 1) for u in exo for w in worlds})
    return build_model(sig, worlds, relation, equations), context


# ---------------------------------------------------------------------------
# Instance sampling
# ---------------------------------------------------------------------------

def random_event(rng: random.Random, model: Model, depth: int = 4) -> Formula:
    """A random event over the model's variables; depth caps the connectives."""
    choices = ["local", "global"]
    if depth > 0:
        choices += ["not", "and", "box", "dia", "cbox"]
    kind = rng.choice(choices)
    if kind in ("local", "global"):
        var = rng.choice(sorted(model.signature.endogenous | model.signature.exogenous))
        world = rng.choice(model.worlds)
        value = rng.choice(model.range_of((var, world)))
        if kind == "local":
            return LocalAtom(var, value)
        return GlobalAtom(var, world, value)
    if kind == "not":
        return Not(random_event(rng, model, depth - 1))
    if kind == "and":
        return And(random_event(rng, model, depth - 1), random_event(rng, model, depth - 1))
    if kind == "box":
        return Box(random_event(rng, model, depth - 1))
    if kind == "dia":
        return Dia(random_event(rng, model, depth - 1))
    return ConvBox(random_event(rng, model, depth - 1))


def random_intervention(rng: random.Random, model: Model,
                        max_targets: int = 2) -> tuple[tuple[Pair, int], ...]:
    """A random (possibly empty) assignment of endogenous pairs."""
    pairs = sorted(model.order)
    k = rng.randint(0, min(max_targets, len(pairs)))
    targets = sorted(rng.sample(pairs, k))
    return tuple((p, rng.choice(model.range_of(p))) for p in targets)


def _random_causal(rng: random.Random, model: Model) -> Formula:
    event = random_event(rng, model, depth=3)
    if rng.random() < 0.5:
        return InterventionFormula(random_intervention(rng, model), event)
    return event


def sample_instances(rng: random.Random, model: Model, scheme: SchemeId,
                     count: int) -> list[tuple]:
    out = []
    for _ in range(count):
        if scheme is SchemeId.K:
            out.append((_random_causal(rng, model), _random_causal(rng, model)))
        elif scheme is SchemeId.NECESSITATION:
            out.append((_random_causal(rng, model),))
        elif scheme in (SchemeId.DIA, SchemeId.BOX):
            out.append((random_intervention(rng, model), random_event(rng, model, depth=3)))
        else:  # GAxiom
            var = rng.choice(sorted(model.signature.endogenous | model.signature.exogenous))
            world = rng.choice(model.worlds)
            atom = GlobalAtom(var, world, rng.choice(model.range_of((var, world))))
            out.append((random_intervention(rng, model), atom))
    return out


# ---------------------------------------------------------------------------
# Scheme evaluation
# ---------------------------------------------------------------------------

def check_scheme(model: Model, context: Context, scheme: SchemeId,
                 instances: Iterable[tuple]) -> Counterexample | None:
    """Evaluate each sampled instance at every world; first failure or None."""
    setting = Setting(model, context)
    for instance in instances:
        if scheme is SchemeId.K:
            phi, psi = instance
            formula = Implies(Box(Implies(phi, psi)), Implies(Box(phi), Box(psi)))
            bad = _falsifying_world(setting, formula)
            if bad is not None:
                return Counterexample(scheme, bad, format_formula(formula))
        elif scheme is SchemeId.NECESSITATION:
            (phi,) = instance
            if valid_in_model(setting, phi) and not valid_in_model(setting, Box(phi)):
                bad = _falsifying_world(setting, Box(phi))
                return Counterexample(scheme, bad, format_formula(Box(phi)))
        elif scheme in (SchemeId.DIA, SchemeId.BOX):
            iv, alpha = instance
            wrap = Dia if scheme is SchemeId.DIA else Box
            lhs = InterventionFormula(iv, wrap(alpha))
            rhs = wrap(InterventionFormula(iv, alpha))
            for world in model.worlds:
                if satisfies(setting, world, lhs) != satisfies(setting, world, rhs):
                    return Counterexample(
                        scheme, world,
                        f"{format_formula(lhs)}  <->  {format_formula(rhs)}")
        else:  # GAxiom
            iv, atom = instance
            formula = Implies(InterventionFormula(iv, atom),
                              Box(InterventionFormula(iv, atom)))
            bad = _falsifying_world(setting, formula)
            if bad is not None:
                return Counterexample(scheme, bad, format_formula(formula))
    return None


def _falsifying_world(setting: Setting, formula: Formula) -> str | None:
    for world in setting.model.worlds:
        if not satisfies(setting, world, formula):
            return world
    return None


def pseudo_g_local_counterexample(model: Model, context: Context,
                                  instances: Iterable[tuple]) -> Counterexample | None:
    """The (invalid) G variant over world-local atoms: [Y := y] X=x -> box([Y := y] X=x).

    Used as a mutation check: a healthy evaluator finds counterexamples on
    models where X varies across related worlds.
    """
    setting = Setting(model, context)
    for iv, atom in instances:
        local = LocalAtom(atom.var, atom.value)
        formula = Implies(InterventionFormula(iv, local),
                          Box(InterventionFormula(iv, local)))
        bad = _falsifying_world(setting, formula)
        if bad is not None:
            return Counterexample(SchemeId.G, bad, format_formula(formula))
    return None


@dataclass(frozen=True)
class SuiteReport:
    models: int
    instances_per_scheme: int
    counterexamples: tuple[Counterexample, ...]
    mutation_counterexamples: int

    @property
    def passed(self) -> bool:
        return not self.counterexamples and self.mutation_counterexamples > 0


def run_suite(n_models: int, instances_per_scheme: int, seed: int = 0,
              gen: ModelGenSpec | None = None, mutation_check: bool = True) -> SuiteReport:
    """Fuzz all five schemes across generated models.

    Any counterexample to a real scheme is a defect.  The pseudo-G mutation is
    expected to fail somewhere; its counterexample count is reported so a
    vacuously passing setup is detectable.
    """
    found: list[Counterexample] = []
    mutation_hits = 0
    for i in range(n_models):
        spec = ModelGenSpec(seed=seed + i) if gen is None else \
            ModelGenSpec(seed=seed + i, worlds=gen.worlds, endogenous=gen.endogenous,
                         exogenous=gen.exogenous, edge_prob=gen.edge_prob,
                         max_parents=gen.max_parents)
        model, context = generate_model(spec)
        rng = random.Random(spec.seed ^ 0x5EED)
        for scheme in SchemeId:
            instances = sample_instances(rng, model, scheme, instances_per_scheme)
            bad = check_scheme(model, context, scheme, instances)
            if bad is not None:
                found.append(bad)
        if mutation_check:
            instances = sample_instances(rng, model, SchemeId.G, instances_per_scheme)
            if pseudo_g_local_counterexample(model, context, instances) is not None:
                mutation_hits += 1
    return SuiteReport(n_models, instances_per_scheme, tuple(found), mutation_hits)
