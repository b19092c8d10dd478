import itertools
import random

import pytest

from deon.errors import EmptyUniverse, PreconditionViolation, VocabularyError
from deon.lab.golden import assassin
from deon.lab.systems import random_system
from deon.logic import Vocabulary, models_of, parse_formula
from deon.metric import IndexFamily, Variant
from deon.obligations import ObligationSystem
from deon.quality import (
    Comparison,
    ExplicitQuality,
    best_elements,
    better_than_set,
    ceteris_paribus_improving,
    closure_violations,
    compare,
    is_downward_closed,
    locally_better,
    softly_locally_better,
)
from deon.size import Fraction

SET, COUNT = Variant.SET, Variant.COUNT


def atomic(names, *universe):
    vocab = Vocabulary(tuple(names))
    return vocab, ObligationSystem.atomic(vocab, vocab.models(*universe) if universe else None)


class TestCompare:
    def test_set(self):
        vocab, sys = atomic("pqr")
        assert compare(vocab.parse_model("001"), vocab.parse_model("000"), sys.quality()) is Comparison.BETTER
        vocab, sys = atomic("pqrs")
        assert compare(vocab.parse_model("1000"), vocab.parse_model("0100"), sys.quality()) is Comparison.INCOMPARABLE

    def test_explicit_assassin(self):
        vocab, _, q = assassin()
        assert compare(vocab.parse_model("11"), vocab.parse_model("10"), q) is Comparison.BETTER
        assert compare(vocab.parse_model("00"), vocab.parse_model("11"), q) is Comparison.BETTER

    def test_count_is_total(self):
        vocab, sys = atomic("pqr")
        q = sys.quality(COUNT)
        assert all(compare(x, y, q) is not Comparison.INCOMPARABLE for x, y in itertools.product(range(8), repeat=2))

    def test_explicit_pairs_and_cycles(self):
        q = ExplicitQuality.from_pairs([(0, 1), (1, 2)])
        assert q.lt(0, 2) and compare(2, 3, q) is Comparison.INCOMPARABLE
        with pytest.raises(VocabularyError):
            ExplicitQuality.from_pairs([(0, 1), (1, 0)])

    def test_explicit_layers_are_equivalence_classes(self):
        q = ExplicitQuality.from_layers([{0, 1}, {2}])
        assert compare(0, 1, q) is Comparison.EQUIV and compare(1, 2, q) is Comparison.BETTER


class TestBest:
    def test_dependent_2(self):
        vocab, sys = atomic("pqrs", "1000", "0100", "1111")
        assert best_elements(sys.restriction, sys.quality()) == vocab.models("1111")

    def test_dependent_1(self):
        vocab, sys = atomic("pq", "10", "01")
        assert best_elements(sys.restriction, sys.quality()) == vocab.models("10", "01")

    def test_independent(self):
        vocab, sys = atomic("pqr")
        assert best_elements(sys.restriction, sys.quality()) == vocab.models("111")

    def test_brute_force_oracle(self):
        for seed in range(50):
            sys = random_system(3, 3, 0.5, seed)
            q = sys.quality()
            oracle = {x for x in sys.restriction
                      if not any(sys.family.coords(y) != sys.family.coords(x)
                                 and sys.family.coords(y) & sys.family.coords(x) == sys.family.coords(x)
                                 for y in sys.restriction)}
            assert best_elements(sys.restriction, q) == oracle

    def test_empty(self):
        with pytest.raises(EmptyUniverse):
            best_elements(set(), ExplicitQuality.from_pairs([]))


class TestClosure:
    def test_dependent_1(self):
        vocab, sys = atomic("pq", "10", "01")
        assert is_downward_closed(vocab.models("10"), sys.restriction, sys.quality())

    def test_ross(self):
        vocab, sys = atomic("pq")
        ross = models_of(parse_formula("p | ~q", vocab), vocab)
        check = is_downward_closed(ross, sys.restriction, sys.quality())
        assert not check and check.witness == (vocab.parse_model("01"), vocab.parse_model("00"))

    def test_whole_set(self):
        vocab, sys = atomic("pq")
        assert is_downward_closed(sys.restriction, sys.restriction, sys.quality())

    def test_precondition(self):
        vocab, sys = atomic("pq", "10")
        with pytest.raises(PreconditionViolation):
            is_downward_closed({0}, sys.restriction, sys.quality())

    def test_assassin_violations(self):
        vocab, _, q = assassin()
        no_offer = models_of(parse_formula("~o", vocab), vocab)
        # oracle: every ordered pair of the four models
        pairs = {(a, b) for a in range(4) for b in range(4) if b in no_offer and a not in no_offer and q.leq(a, b)}
        assert closure_violations(no_offer, vocab.universe(), q) == pairs
        assert pairs == {(vocab.parse_model("01"), vocab.parse_model("10")),
                         (vocab.parse_model("11"), vocab.parse_model("10"))}


class TestLocal:
    def test_better_than_set(self):
        vocab, sys = atomic("pqrs", "0000", "0001", "0010", "1110")
        q, fam = sys.quality(COUNT), sys.family
        assert better_than_set(vocab.parse_model("0010"), vocab.models("0000"), q, COUNT, fam)
        assert not better_than_set(vocab.parse_model("0000"), vocab.models("0001"), q, COUNT, fam)
        assert better_than_set(0, set(), q, COUNT, fam)

    def test_not_global(self):
        vocab, sys = atomic("pqrs", "1111", "1110", "0010", "0000")
        xs = vocab.models("0010", "1111")
        ys = sys.restriction - xs
        assert locally_better(xs, ys, sys.quality(COUNT), COUNT, sys.family)
        assert not locally_better(xs, ys, sys.quality(SET), SET, sys.family)

    def test_dependent_2(self):
        vocab, sys = atomic("pqrs", "1000", "0100", "1111")
        check = locally_better(vocab.models("1000", "1111"), vocab.models("0100"), sys.quality(), SET, sys.family)
        assert not check
        assert check.witness == (vocab.parse_model("1000"), vocab.parse_model("0100"))

    def test_cp(self):
        vocab, sys = atomic("pqrs", "1111", "1110", "0010", "0000")
        assert ceteris_paribus_improving(vocab.models("0010", "1111"), sys.restriction, sys.quality(COUNT),
                                         COUNT, sys.family)
        assert ceteris_paribus_improving(sys.restriction, sys.restriction, sys.quality(), SET, sys.family)
        vocab, sys = atomic("pqrs", "1000", "0100", "1111")
        assert not ceteris_paribus_improving(vocab.models("1000", "1111"), sys.restriction, sys.quality(),
                                             SET, sys.family)


class TestSoftLocal:
    def test_assassin_one_exception_per_side(self):
        vocab, _, q = assassin()
        fam = IndexFamily.variables(vocab)
        xs = models_of(parse_formula("~o", vocab), vocab)
        ys = vocab.universe() - xs
        assert not locally_better(xs, ys, q, SET, fam)
        soft = softly_locally_better(xs, ys, q, SET, fam, Fraction(0.5))
        assert soft and soft.exceptions == vocab.models("10", "11")
        assert not softly_locally_better(xs, ys, q, SET, fam, Fraction(0.0))

    def test_strict_implies_soft_and_zero_budget_degenerates(self):
        rng = random.Random(5)
        for seed in range(100):
            sys = random_system(3, 3, 0.5, seed)
            xs = frozenset(m for m in sys.restriction if rng.random() < 0.5)
            ys = sys.restriction - xs
            for v in Variant:
                strict = locally_better(xs, ys, sys.quality(v), v, sys.family).ok
                assert softly_locally_better(xs, ys, sys.quality(v), v, sys.family, Fraction(0.0)).ok == strict
                if strict:
                    assert softly_locally_better(xs, ys, sys.quality(v), v, sys.family, Fraction(0.3)).ok
