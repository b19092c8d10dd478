import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deon.errors import EmptySet, FormulaSyntaxError, UnknownVariable, VocabularyError
from deon.logic import (
    FALSE,
    TRUE,
    And,
    FormulaClass,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    Vocabulary,
    classify_formula,
    describe,
    models_of,
    parse_formula,
    pretty,
    strongest_conjunction,
)
from deon.metric import IndexFamily, Variant, interval

PQ = Vocabulary(("p", "q"))
PQR = Vocabulary(("p", "q", "r"))


class TestVocabulary:
    def test_bitstrings_are_leftmost_first(self):
        m = PQR.parse_model("110")
        assert PQR.format(m) == "110"
        assert models_of(parse_formula("p & q & ~r"), PQR) == {m}

    @pytest.mark.parametrize("names", [(), ("p", "p"), ("1x",), ("T",), tuple(f"v{i}" for i in range(25))])
    def test_rejects_bad_names(self, names):
        with pytest.raises(VocabularyError):
            Vocabulary(names)

    def test_bad_bitstring(self):
        with pytest.raises(VocabularyError):
            PQ.parse_model("1")


class TestParse:
    def test_conjunction(self):
        assert parse_formula("p & ~q", PQ) == And((Var("p"), Not(Var("q"))))

    def test_disjunction(self):
        assert parse_formula("p | ~q", PQ) == Or((Var("p"), Not(Var("q"))))

    def test_incomplete_input_reports_offset(self):
        with pytest.raises(FormulaSyntaxError) as err:
            parse_formula("p &", PQ)
        assert err.value.position == 3

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable) as err:
            parse_formula("p & z", PQ)
        assert err.value.name == "z"

    def test_precedence_and_associativity(self):
        assert parse_formula("p -> q -> p") == Implies(Var("p"), Implies(Var("q"), Var("p")))
        assert parse_formula("p <-> q <-> p") == Iff(Var("p"), Iff(Var("q"), Var("p")))
        assert parse_formula("~p & q | p") == Or((And((Not(Var("p")), Var("q"))), Var("p")))
        assert parse_formula("p & q & p") == And((Var("p"), Var("q"), Var("p")))

    def test_unicode_aliases(self):
        assert parse_formula("¬p ∧ q → p ∨ q ↔ p") == parse_formula("~p & q -> p | q <-> p")

    @pytest.mark.parametrize("text", ["", "()", "p q", "p &&", "(p", "p)"])
    def test_syntax_errors(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text, PQ)


class TestModels:
    def test_ross_formula(self):
        assert models_of(parse_formula("p | ~q", PQ), PQ) == PQ.models("11", "10", "00")

    def test_constants(self):
        ambient = PQ.models("01", "10")
        assert models_of(parse_formula("T"), PQ, ambient) == ambient
        assert models_of(parse_formula("p & ~p"), PQ, ambient) == frozenset()


class TestStrongestConjunction:
    def test_shared_literals(self):
        f = strongest_conjunction(PQR.models("110", "100"), PQR)
        assert f == And((Var("p"), Not(Var("r"))))

    def test_whole_universe_is_top(self):
        assert strongest_conjunction(PQ.universe(), PQ) == TRUE

    def test_singleton(self):
        assert strongest_conjunction(PQ.models("11"), PQ) == And((Var("p"), Var("q")))

    def test_empty_is_an_error(self):
        with pytest.raises(EmptySet):
            strongest_conjunction(frozenset(), PQ)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_interval_equals_conjunction_models(self, n):
        vocab = Vocabulary(tuple("pqrs"[:n]))
        fam = IndexFamily.variables(vocab)
        universe = vocab.universe()
        for x, y in itertools.product(sorted(universe), repeat=2):
            expected = interval(x, y, universe, Variant.SET, fam)
            assert models_of(strongest_conjunction({x, y}, vocab), vocab) == expected


class TestClassify:
    @pytest.mark.parametrize("text, cls", [
        ("p & ~q", FormulaClass.IN_L_AND),
        ("~(p & q)", FormulaClass.GENERAL),
        ("p & q | ~p & ~q", FormulaClass.IN_L_OR_AND),
        ("p & ~p", FormulaClass.GENERAL),
        ("T", FormulaClass.IN_L_AND),
        ("p -> q", FormulaClass.GENERAL),
    ])
    def test_examples(self, text, cls):
        assert classify_formula(parse_formula(text, PQ)) is cls


def test_describe_renders_exact_model_sets():
    for mask in range(1 << 8):
        ms = frozenset(m for m in range(8) if mask >> m & 1)
        assert models_of(describe(ms, PQR), PQR) == ms
    assert pretty(describe(PQ.models("01", "10", "11"), PQ)) == "p | q"
    assert describe(frozenset(), PQ) == FALSE


# --- properties --------------------------------------------------------------------

NAMES = ("p", "q", "r")
VOCAB = Vocabulary(NAMES)


def formulas():
    atoms = st.one_of(st.sampled_from([Var(n) for n in NAMES]), st.sampled_from([TRUE, FALSE]))

    def extend(children):
        pairs = st.lists(children, min_size=2, max_size=3).map(tuple)
        return st.one_of(
            children.map(Not),
            pairs.map(And),
            pairs.map(Or),
            st.tuples(children, children).map(lambda t: Implies(*t)),
            st.tuples(children, children).map(lambda t: Iff(*t)),
        )

    return st.recursive(atoms, extend, max_leaves=10)


def _flatten(f):
    """Nested same-operator chains print as one chain, so compare up to flattening."""
    if isinstance(f, (And, Or)):
        args = []
        for a in f.args:
            a = _flatten(a)
            args.extend(a.args if type(a) is type(f) else (a,))
        return type(f)(tuple(args))
    if isinstance(f, Not):
        return Not(_flatten(f.arg))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_flatten(f.left), _flatten(f.right))
    return f


@settings(max_examples=300, deadline=None)
@given(formulas(), st.booleans())
def test_pretty_round_trip(f, unicode):
    assert _flatten(parse_formula(pretty(f, unicode), VOCAB)) == _flatten(f)


@settings(max_examples=200, deadline=None)
@given(formulas(), formulas(), st.sets(st.integers(0, 7)))
def test_models_of_distributes(f, g, ambient):
    ambient = frozenset(ambient)
    mf, mg = models_of(f, VOCAB, ambient), models_of(g, VOCAB, ambient)
    assert models_of(And((f, g)), VOCAB, ambient) == mf & mg
    assert models_of(Or((f, g)), VOCAB, ambient) == mf | mg
    assert models_of(Not(f), VOCAB, ambient) == ambient - mf
