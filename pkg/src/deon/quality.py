"""Quality preorders on models and the properties built on them.

Smaller means better: ``q.lt(x, y)`` reads "x is strictly better than y".
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .check import PASS, Check
from .errors import EmptyUniverse, PreconditionViolation, VocabularyError
from .metric import IndexFamily, Variant, closest


class Comparison(enum.Enum):
    BETTER = "better"
    EQUIV = "equiv"
    WORSE = "worse"
    INCOMPARABLE = "incomparable"


class QualityRelation:
    kind = "abstract"

    def leq(self, x: int, y: int) -> bool:
        raise NotImplementedError

    def lt(self, x: int, y: int) -> bool:
        return self.leq(x, y) and not self.leq(y, x)

    def equiv(self, x: int, y: int) -> bool:
        return self.leq(x, y) and self.leq(y, x)

    def compare(self, x: int, y: int) -> Comparison:
        a, b = self.leq(x, y), self.leq(y, x)
        if a and b:
            return Comparison.EQUIV
        if a:
            return Comparison.BETTER
        if b:
            return Comparison.WORSE
        return Comparison.INCOMPARABLE


class ProfileQuality(QualityRelation):
    """Quality derived from obligation profiles, by inclusion (SET) or by count (COUNT)."""

    def __init__(self, fam: IndexFamily, variant: Variant = Variant.SET):
        self.fam = fam
        self.variant = variant
        self.kind = f"derived_{variant.value}"

    def leq(self, x, y):
        a, b = self.fam.coords(x), self.fam.coords(y)
        if self.variant is Variant.SET:
            return b & ~a == 0
        return b.bit_count() <= a.bit_count()

    def lt(self, x, y):
        a, b = self.fam.coords(x), self.fam.coords(y)
        if self.variant is Variant.SET:
            return a != b and b & a == b
        return b.bit_count() < a.bit_count()


class ExplicitQuality(QualityRelation):
    """A user-supplied order.

    Either ranked layers (best first, a total preorder on the listed models) or
    a strict relation given as pairs ``(better, worse)`` and closed under
    transitivity.  Unlisted models are comparable only to themselves.
    """

    kind = "explicit"

    def __init__(self, strict: Iterable[tuple[int, int]], layers: Sequence[Iterable[int]] | None = None):
        self.layers = None if layers is None else tuple(frozenset(layer) for layer in layers)
        self.strict = _transitive_closure(set(strict))
        for a, b in self.strict:
            if a == b:
                raise VocabularyError(f"explicit order has a cycle through {a}")
        self._equiv = {}
        if self.layers is not None:
            for layer in self.layers:
                for m in layer:
                    self._equiv[m] = layer

    @classmethod
    def from_layers(cls, layers: Sequence[Iterable[int]]) -> ExplicitQuality:
        layers = [frozenset(layer) for layer in layers]
        seen = set()
        for layer in layers:
            if seen & layer:
                raise VocabularyError("explicit layers must be disjoint")
            seen |= layer
        strict = {(a, b) for i, upper in enumerate(layers) for lower in layers[i + 1:] for a in upper for b in lower}
        return cls(strict, layers)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> ExplicitQuality:
        return cls(pairs)

    def leq(self, x, y):
        return x == y or (x, y) in self.strict or y in self._equiv.get(x, ())

    def lt(self, x, y):
        return (x, y) in self.strict


def _transitive_closure(pairs: set) -> frozenset:
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    closure = set()
    for start in list(succ):
        stack, seen = list(succ[start]), set()
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(succ.get(b, ()))
        closure.update((start, b) for b in seen)
    return frozenset(closure)


def compare(x: int, y: int, q: QualityRelation) -> Comparison:
    return q.compare(x, y)


def best_elements(universe: Iterable[int], q: QualityRelation) -> frozenset[int]:
    universe = frozenset(universe)
    if not universe:
        raise EmptyUniverse("best elements of an empty set")
    return frozenset(x for x in universe if not any(q.lt(y, x) for y in universe))


def is_downward_closed(xs: Iterable[int], universe: Iterable[int], q: QualityRelation) -> Check:
    """Closed iff every y ≼ x with x ∈ X lies in X; witness ``(y, x)`` otherwise."""
    xs, universe = frozenset(xs), frozenset(universe)
    if not xs <= universe:
        raise PreconditionViolation("X must be a subset of the universe")
    outside = sorted(universe - xs)
    for x in sorted(xs):
        for y in outside:
            if q.leq(y, x):
                return Check(False, (y, x))
    return PASS


def closure_violations(xs, universe, q) -> frozenset[tuple[int, int]]:
    """All ordered pairs (a, b) in U′ × U′ with a ≼ b, b ∈ X and a ∉ X."""
    xs, universe = frozenset(xs), frozenset(universe)
    return frozenset((a, b) for b in xs for a in universe - xs if q.leq(a, b))


def downward_closure(xs, universe, q) -> frozenset[int]:
    xs = frozenset(xs)
    return frozenset(y for y in universe if y in xs or any(q.leq(y, x) for x in xs))


def better_than_set(x: int, ys: Iterable[int], q: QualityRelation, variant: Variant, fam: IndexFamily) -> bool:
    """x ≺ Y: every member of Y closest to x is strictly worse than x (vacuous for Y = ∅)."""
    return all(q.lt(x, y) for y in closest(x, ys, variant, fam))


def set_better_than(xs: Iterable[int], y: int, q: QualityRelation, variant: Variant, fam: IndexFamily) -> bool:
    """X ≺ y: every member of X closest to y is strictly better than y."""
    return all(q.lt(x, y) for x in closest(y, xs, variant, fam))


def local_exceptions(xs, ys, q, variant, fam) -> tuple[frozenset[int], frozenset[int]]:
    """Members of X failing x ≺ Y, and members of Y failing X ≺ y."""
    xs, ys = frozenset(xs), frozenset(ys)
    bad_x = frozenset(x for x in xs if not better_than_set(x, ys, q, variant, fam))
    bad_y = frozenset(y for y in ys if not set_better_than(xs, y, q, variant, fam))
    return bad_x, bad_y


def locally_better(xs: Iterable[int], ys: Iterable[int], q: QualityRelation,
                   variant: Variant, fam: IndexFamily) -> Check:
    """X ≺_l Y.  The witness is ``(failing element, closest blocker)``."""
    xs, ys = frozenset(xs), frozenset(ys)
    for x in sorted(xs):
        for y in sorted(closest(x, ys, variant, fam)):
            if not q.lt(x, y):
                return Check(False, (x, y))
    for y in sorted(ys):
        for x in sorted(closest(y, xs, variant, fam)):
            if not q.lt(x, y):
                return Check(False, (y, x))
    return PASS


def softly_locally_better(xs, ys, q, variant, fam, size) -> Check:
    """X ≪_l Y: the exceptions on each side are small in that side.

    ``exceptions`` holds the union of both exception sets.
    """
    from .size import soft_forall

    xs, ys = frozenset(xs), frozenset(ys)
    bad_x, bad_y = local_exceptions(xs, ys, q, variant, fam)
    left = soft_forall(xs, lambda x: x not in bad_x, size)
    right = soft_forall(ys, lambda y: y not in bad_y, size)
    ok = left.ok and right.ok
    return Check(ok, None if ok else (sorted(bad_x), sorted(bad_y)), bad_x | bad_y)


def ceteris_paribus_improving(xs, universe, q, variant, fam) -> Check:
    """X ≺_l (U′ − X)."""
    xs, universe = frozenset(xs), frozenset(universe)
    if not xs <= universe:
        raise PreconditionViolation("X must be a subset of the universe")
    return locally_better(xs, universe - xs, q, variant, fam)
