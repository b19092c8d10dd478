import pytest

from deon.errors import NonPrincipal, PreconditionViolation, SizeUndefined
from deon.size import Fraction, Generator, Preferential, is_big, is_small, pair_size, product_is_big, soft_forall

X = frozenset(range(8))


class TestIsBig:
    @pytest.mark.parametrize("size", [Fraction(0.0), Fraction(0.5), Generator(frozenset({1})),
                                      Preferential.from_pairs([(0, 1)])])
    def test_whole_set_is_big(self, size):
        assert is_big(X, X, size)

    def test_principal(self):
        size = Generator(frozenset({3}))
        assert is_big({3}, X, size)
        assert not is_big(set(), X, size)

    def test_fraction(self):
        assert is_big(set(range(6)), X, Fraction(0.25))
        assert not is_big(set(range(5)), X, Fraction(0.25))
        # exact arithmetic: 0.29 * 100 is 29, not 28.999...
        assert Fraction(0.29).budget(100) == 29

    def test_fraction_monotone_in_epsilon(self):
        part = set(range(5))
        results = [is_big(part, X, Fraction(e / 10)) for e in range(10)]
        assert results == sorted(results)

    def test_preferential_mu(self):
        size = Preferential.from_pairs([(0, 1), (0, 2)])
        assert size.mu(frozenset({0, 1, 2})) == {0}
        assert size.mu(frozenset({1, 2})) == {1, 2}

    def test_errors(self):
        with pytest.raises(SizeUndefined):
            Fraction(1.0)
        with pytest.raises(SizeUndefined):
            is_big(X, X, None)
        with pytest.raises(PreconditionViolation):
            is_big({99}, X, Fraction(0.1))

    def test_small_is_complement_of_big(self):
        size = Fraction(0.25)
        assert is_small({0, 1}, X, size)
        assert not is_small({0, 1, 2}, X, size)


class TestProduct:
    def setup_method(self):
        self.left, self.right = frozenset({0, 1, 2}), frozenset({"a", "b"})
        self.s1 = Preferential.from_pairs([(0, 1), (0, 2)])
        self.s2 = Generator(frozenset({"a"}))

    def test_full_and_generator(self):
        full = {(x, y) for x in self.left for y in self.right}
        assert product_is_big(full, self.left, self.right, self.s1, self.s2)
        assert product_is_big({(0, "a")}, self.left, self.right, self.s1, self.s2)

    def test_missing_generator_pair(self):
        s1 = Generator(frozenset({0, 1}))
        assert not product_is_big({(0, "a")}, self.left, self.right, s1, self.s2)

    def test_budgets_are_not_principal(self):
        with pytest.raises(NonPrincipal):
            product_is_big({(0, "a")}, self.left, self.right, Fraction(0.1), self.s2)

    def test_pair_size_lifts_principal_sizes(self):
        lifted = pair_size(self.s2, {"a", "b"}, {"a", "b"})
        pairs = frozenset((x, y) for x in "ab" for y in "ab")
        assert lifted.mu(pairs) == {("a", "a")}
        assert pair_size(Fraction(0.1), X, X) == Fraction(0.1)


class TestSoftForall:
    def test_always_true(self):
        check = soft_forall(X, lambda x: True, Fraction(0.0))
        assert check and check.exceptions == frozenset()

    def test_zero_budget_is_strict(self):
        assert not soft_forall(X, lambda x: x != 3, Fraction(0.0))

    def test_exceptions_reported(self):
        check = soft_forall(X, lambda x: x != 3, Fraction(0.125))
        assert check and check.exceptions == {3}
