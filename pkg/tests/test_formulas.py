import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalmk.errors import FormulaSyntaxError, NestedInterventionError
from causalmk.formulas import (FALSE, TRUE, And, Box, ConvBox, ConvDia, Dia,
                               GlobalAtom, Implies, InterventionFormula, LocalAtom,
                               Not, Or, Top, format_formula, is_event, parse,
                               parse_conjunction, parse_event,
                               parse_local_conjunction)


class TestParse:
    def test_box_conjunction(self):
        assert parse("box(p=1 & r=1)") == Box(And(LocalAtom("p", 1), LocalAtom("r", 1)))

    def test_intervention_prefix(self):
        assert parse("[p@w3 := 0] !(q=1)") == InterventionFormula(
            ((("p", "w3"), 0),), Not(LocalAtom("q", 1)))

    def test_nested_intervention_rejected(self):
        with pytest.raises(NestedInterventionError):
            parse("[x@w := 0][y@w := 1] p=1")

    def test_empty_intervention(self):
        assert parse("[] p=1") == InterventionFormula((), LocalAtom("p", 1))

    def test_global_atom(self):
        assert parse("p@w3=1") == GlobalAtom("p", "w3", 1)

    def test_constants(self):
        assert parse("true") == TRUE
        assert parse("false") == FALSE

    def test_derived_operators_expand(self):
        assert parse("dia(p=1)") == Not(Box(Not(LocalAtom("p", 1))))
        assert parse("p=1 | q=0") == Not(And(Not(LocalAtom("p", 1)), Not(LocalAtom("q", 0))))
        assert parse("p=1 -> q=0") == Not(And(LocalAtom("p", 1), Not(LocalAtom("q", 0))))
        assert parse("cdia(p=1)") == Not(ConvBox(Not(LocalAtom("p", 1))))

    def test_precedence(self):
        # ! binds tighter than &, which binds tighter than |, then ->
        assert parse("!p=1 & q=1") == And(Not(LocalAtom("p", 1)), LocalAtom("q", 1))
        assert parse("a=1 | b=1 & c=1") == Or(LocalAtom("a", 1),
                                              And(LocalAtom("b", 1), LocalAtom("c", 1)))
        assert parse("a=1 -> b=1 -> c=1") == Implies(
            LocalAtom("a", 1), Implies(LocalAtom("b", 1), LocalAtom("c", 1)))

    def test_intervention_binds_like_negation(self):
        out = parse("[x@w := 0] p=1 & q=1")
        assert out == And(InterventionFormula(((("x", "w"), 0),), LocalAtom("p", 1)),
                          LocalAtom("q", 1))

    def test_negative_values(self):
        assert parse("p=-2") == LocalAtom("p", -2)

    def test_syntax_error_carries_offset(self):
        with pytest.raises(FormulaSyntaxError) as err:
            parse("box(p=1")
        assert err.value.offset == 7
        with pytest.raises(FormulaSyntaxError) as err:
            parse("p=1 $ q=1")
        assert err.value.offset == 4

    def test_trailing_input_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse("p=1 q=1")

    def test_duplicate_intervention_target(self):
        with pytest.raises(FormulaSyntaxError):
            parse("[x@w := 0, x@w := 1] p=1")

    def test_keywords_are_not_variables(self):
        with pytest.raises(FormulaSyntaxError):
            parse("box=1")

    def test_parse_event_rejects_interventions(self):
        with pytest.raises(FormulaSyntaxError):
            parse_event("[x@w := 0] p=1")
        assert parse_event("box(p=1)") == Box(LocalAtom("p", 1))


class TestPrint:
    def test_examples(self):
        assert format_formula(Box(LocalAtom("p", 1))) == "box(p=1)"
        assert format_formula(GlobalAtom("p", "w3", 1)) == "p@w3=1"
        assert format_formula(Dia(TRUE)) == "dia(true)"
        assert format_formula(FALSE) == "false"

    def test_intervention(self):
        f = InterventionFormula(((("p", "w3"), 0),), Not(LocalAtom("q", 1)))
        assert format_formula(f) == "[p@w3 := 0] !q=1"

    def test_and_parenthesized(self):
        assert format_formula(And(LocalAtom("p", 1), LocalAtom("q", 0))) == "(p=1 & q=0)"


class TestConjunctions:
    def test_parse_conjunction(self):
        assert parse_conjunction("p1@w1=1 & p2@w1=1") == (
            (("p1", "w1"), 1), (("p2", "w1"), 1))

    def test_conjunction_requires_worlds(self):
        with pytest.raises(FormulaSyntaxError):
            parse_conjunction("p=1")

    def test_conjunction_rejects_duplicates(self):
        with pytest.raises(FormulaSyntaxError):
            parse_conjunction("p@w1=1 & p@w1=0")

    def test_local_conjunction(self):
        assert parse_local_conjunction("A=1 & B=0") == (("A", 1), ("B", 0))
        with pytest.raises(FormulaSyntaxError):
            parse_local_conjunction("A@u=1")


# --- round-trip property -----------------------------------------------------

_names = st.sampled_from(["p", "q", "r1", "x_y"])
_worlds = st.sampled_from(["w0", "w1", "ww2"])
_values = st.integers(min_value=-3, max_value=3)

_atoms = st.one_of(
    st.just(TRUE),
    st.builds(LocalAtom, _names, _values),
    st.builds(GlobalAtom, _names, _worlds, _values),
)

_events = st.recursive(
    _atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Box, sub),
        st.builds(ConvBox, sub),
    ),
    max_leaves=12,
)


def _assignments(pairs_with_values):
    dedup = {}
    for pair, value in pairs_with_values:
        dedup[pair] = value
    return tuple(dedup.items())


_interventions = st.lists(
    st.tuples(st.tuples(_names, _worlds), _values), max_size=3).map(_assignments)

_causal = st.recursive(
    st.one_of(_events, st.builds(InterventionFormula, _interventions, _events)),
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Box, sub),
        st.builds(ConvBox, sub),
    ),
    max_leaves=8,
)


@given(_causal)
def test_parse_print_round_trip(formula):
    assert parse(format_formula(formula)) == formula


@given(_events)
def test_derived_equivalences(event):
    assert Dia(event) == Not(Box(Not(event)))
    assert Or(event, event) == Not(And(Not(event), Not(event)))
    assert ConvDia(event) == Not(ConvBox(Not(event)))
    assert is_event(event)


def test_event_flag_on_interventions():
    assert not is_event(parse("[x@w := 0] p=1"))
    assert not is_event(And(parse("[x@w := 0] p=1"), TRUE))
    assert is_event(parse("box(dia(p=1 & !q=0))"))
