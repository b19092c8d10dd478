"""Notions of big and small subsets, and the soft quantifier ∇.

Principal specs (:class:`Preferential`, :class:`Generator`) describe a filter
``{B ⊆ X : μ(X) ⊆ B}``.  :class:`Fraction` is an exception budget: a subset is
small when it has at most ``⌊ε·|X|⌋`` members.  Budgets are not principal
filters and cannot be multiplied with :func:`product_is_big`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as _Q
from typing import Callable, Collection, Hashable, Iterable

from .check import Check
from .errors import NonPrincipal, PreconditionViolation, SizeUndefined


class SizeSpec:
    principal = False

    def is_big(self, part: frozenset, whole: frozenset) -> bool:
        raise NotImplementedError


class PrincipalSize(SizeSpec):
    principal = True

    def mu(self, whole: frozenset) -> frozenset:
        raise NotImplementedError

    def is_big(self, part, whole):
        return self.mu(whole) <= part


@dataclass(frozen=True)
class Fraction(SizeSpec):
    epsilon: float

    def __post_init__(self):
        if not 0 <= self.epsilon < 1:
            raise SizeUndefined(f"epsilon must lie in [0, 1), got {self.epsilon}")

    def budget(self, n: int) -> int:
        # exact decimal arithmetic: 0.29 * 100 must give 29, not 28
        return math.floor(_Q(repr(self.epsilon)) * n)

    def is_big(self, part, whole):
        return len(whole - part) <= self.budget(len(whole))


@dataclass(frozen=True)
class Preferential(PrincipalSize):
    """μ(X) = minimal elements of X under a strict relation ``less(a, b)``."""

    less: Callable[[Hashable, Hashable], bool]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> Preferential:
        pairs = frozenset(pairs)
        return cls(lambda a, b: (a, b) in pairs)

    def mu(self, whole):
        return frozenset(x for x in whole if not any(self.less(y, x) for y in whole if y != x))


@dataclass(frozen=True)
class Generator(PrincipalSize):
    """μ(X) = ideal ∩ X for a fixed, extensionally given ideal set."""

    ideal: frozenset

    def mu(self, whole):
        return frozenset(self.ideal) & whole


@dataclass(frozen=True)
class ProductSize(PrincipalSize):
    """Size on a set of pairs drawn from ``left × right``, generated by μ(left) × μ(right)."""

    first: PrincipalSize
    second: PrincipalSize
    left: frozenset
    right: frozenset

    def mu(self, whole):
        a, b = self.first.mu(self.left), self.second.mu(self.right)
        return frozenset(pair for pair in whole if pair[0] in a and pair[1] in b)


def _require(size):
    if not isinstance(size, SizeSpec):
        raise SizeUndefined(f"no notion of size given (got {size!r})")


def is_big(part: Iterable, whole: Iterable, size: SizeSpec) -> bool:
    _require(size)
    part, whole = frozenset(part), frozenset(whole)
    if not part <= whole:
        raise PreconditionViolation("a big subset must be a subset")
    return size.is_big(part, whole)


def is_small(part: Iterable, whole: Iterable, size: SizeSpec) -> bool:
    part, whole = frozenset(part), frozenset(whole)
    return is_big(whole - part, whole, size)


def product_is_big(pairs: Iterable[tuple], left: Collection, right: Collection,
                   size: SizeSpec, size_right: SizeSpec) -> bool:
    _require(size)
    _require(size_right)
    if not (size.principal and size_right.principal):
        raise NonPrincipal("products are defined for principal filters only")
    pairs, left, right = frozenset(pairs), frozenset(left), frozenset(right)
    if any(a not in left or b not in right for a, b in pairs):
        raise PreconditionViolation("pairs must lie in left × right")
    mu_left, mu_right = size.mu(left), size_right.mu(right)
    return all((a, b) in pairs for a in mu_left for b in mu_right)


def pair_size(size: SizeSpec, left: Iterable, right: Iterable) -> SizeSpec:
    """The size to use on a pair carrier inside ``left × right``."""
    _require(size)
    if size.principal:
        return ProductSize(size, size, frozenset(left), frozenset(right))
    return size


def soft_forall(carrier: Iterable, pred: Callable[[object], bool], size: SizeSpec) -> Check:
    """∇x ∈ carrier. pred(x): the satisfying members form a big subset."""
    _require(size)
    carrier = frozenset(carrier)
    exceptions = frozenset(x for x in carrier if not pred(x))
    ok = size.is_big(carrier - exceptions, carrier)
    return Check(ok, None if ok else exceptions, exceptions)
