import random

from causalmk.axioms import (ModelGenSpec, SchemeId, check_scheme, generate_model,
                             pseudo_g_local_counterexample, run_suite, sample_instances)
from causalmk.formulas import parse_event
from causalmk.model import Context, FormulaEquation, build_model, signature
from causalmk.semantics import Setting, valid_in_model


class TestGeneration:
    def test_deterministic_in_seed(self):
        spec = ModelGenSpec(seed=1, worlds=(2, 2), endogenous=(2, 2))
        first = generate_model(spec)
        second = generate_model(spec)
        assert first == second

    def test_exogenous_only_model(self):
        model, context = generate_model(ModelGenSpec(seed=3, endogenous=(0, 0)))
        assert not model.equations
        assert dict(Setting(model, context).valuation.values) == dict(context.values)

    def test_zero_edge_probability_validates_all_boxes(self):
        model, context = generate_model(ModelGenSpec(seed=9, edge_prob=0.0,
                                                     worlds=(2, 3)))
        assert model.relation == frozenset()
        setting = Setting(model, context)
        assert valid_in_model(setting, parse_event("box(false)"))

    def test_generated_models_build(self):
        for seed in range(50):
            model, context = generate_model(ModelGenSpec(seed=seed))
            Setting(model, context)  # evaluates without errors


class TestSchemes:
    def test_all_schemes_hold_on_umbrella(self, umbrella):
        rng = random.Random(0)
        for scheme in SchemeId:
            count = 100 if scheme is SchemeId.DIA else 40
            instances = sample_instances(rng, umbrella.model, scheme, count)
            assert check_scheme(umbrella.model, umbrella.context,
                                scheme, instances) is None

    def test_g_axiom_with_global_atoms_never_fails(self):
        rng = random.Random(4)
        for seed in range(30):
            model, context = generate_model(ModelGenSpec(seed=seed))
            instances = sample_instances(rng, model, SchemeId.G, 20)
            assert check_scheme(model, context, SchemeId.G, instances) is None

    def test_pseudo_g_local_atom_variant_fails_somewhere(self):
        # X copies the exogenous variable, which differs across two related
        # worlds, so [](X=x) holds at one world but not at its successor.
        ranges = {(v, w): (0, 1) for v in ("U", "X") for w in ("w0", "w1")}
        model = build_model(
            signature(["U"], ["X"], ranges), ("w0", "w1"), [("w0", "w1")],
            {("X", "w0"): FormulaEquation(parse_event("U=1")),
             ("X", "w1"): FormulaEquation(parse_event("U=1"))})
        context = Context({("U", "w0"): 1, ("U", "w1"): 0})
        from causalmk.formulas import GlobalAtom
        instances = [((), GlobalAtom("X", "w0", 1))]
        bad = pseudo_g_local_counterexample(model, context, instances)
        assert bad is not None and bad.world == "w0"

    def test_suite_quick_run(self):
        report = run_suite(n_models=40, instances_per_scheme=10, seed=11)
        assert report.counterexamples == ()
        assert report.mutation_counterexamples >= 1
        assert report.passed
