"""Hamming distances, betweenness, closest elements and neighbourhoods.

Distances are computed on coordinate bitmasks.  An :class:`IndexFamily` maps
a model to its coordinates: over variables the model itself, over an
obligation family the bitmask of obligations the model belongs to.  The set
distance is then ``a ^ b`` and the counting distance its popcount.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionViolation
from .logic import Vocabulary


class Variant(enum.Enum):
    SET = "set"
    COUNT = "count"


@dataclass(frozen=True)
class IndexFamily:
    """Coordinates of models: either the variables or an obligation family.

    ``table[m]`` holds the coordinate bitmask of model ``m``; ``table is None``
    means the identity (the variables case).
    """

    labels: tuple[str, ...]
    table: tuple[int, ...] | None = None
    kind: str = "variables"

    @classmethod
    def variables(cls, vocab: Vocabulary) -> IndexFamily:
        return cls(vocab.names)

    @classmethod
    def obligations(cls, names: Sequence[str], sets: Sequence[Iterable[int]], n_vars: int) -> IndexFamily:
        table = [0] * (1 << n_vars)
        for i, members in enumerate(sets):
            bit = 1 << i
            for m in members:
                table[m] |= bit
        return cls(tuple(names), tuple(table), "obligations")

    def coords(self, m: int) -> int:
        return m if self.table is None else self.table[m]

    def labels_of(self, mask: int) -> frozenset[str]:
        return frozenset(label for i, label in enumerate(self.labels) if mask >> i & 1)


def profile(x: int, fam: IndexFamily) -> frozenset[str]:
    """Names of the obligations that contain ``x``."""
    return fam.labels_of(fam.coords(x))


def dist_mask(x: int, y: int, fam: IndexFamily) -> int:
    return fam.coords(x) ^ fam.coords(y)


def dist_set(x: int, y: int, fam: IndexFamily) -> frozenset[str]:
    return fam.labels_of(dist_mask(x, y, fam))


def dist_count(x: int, y: int, fam: IndexFamily) -> int:
    return dist_mask(x, y, fam).bit_count()


def strictly_less(a: int, b: int, variant: Variant) -> bool:
    """Strict comparison of two distance masks (proper subset, or smaller count)."""
    if variant is Variant.SET:
        return a != b and a & b == a
    return a.bit_count() < b.bit_count()


def between(x: int, y: int, z: int, variant: Variant, fam: IndexFamily) -> bool:
    """⟨x, y, z⟩: the distance from x to z splits additively through y."""
    xy, yz, xz = dist_mask(x, y, fam), dist_mask(y, z, fam), dist_mask(x, z, fam)
    if variant is Variant.SET:
        return xz == xy | yz
    return xz.bit_count() == xy.bit_count() + yz.bit_count()


def interval(x: int, z: int, ambient: Iterable[int], variant: Variant, fam: IndexFamily) -> frozenset[int]:
    cx, cz = fam.coords(x), fam.coords(z)
    xz = cx ^ cz
    out = []
    if variant is Variant.SET:
        for y in ambient:
            cy = fam.coords(y)
            if (cx ^ cy) | (cy ^ cz) == xz:
                out.append(y)
    else:
        k = xz.bit_count()
        for y in ambient:
            cy = fam.coords(y)
            if (cx ^ cy).bit_count() + (cy ^ cz).bit_count() == k:
                out.append(y)
    return frozenset(out)


def closest(x: int, xs: Iterable[int], variant: Variant, fam: IndexFamily) -> frozenset[int]:
    """x ∥ X: members of ``xs`` with no strictly closer member.

    Ties are all kept, so the result is empty only when ``xs`` is.
    """
    cx = fam.coords(x)
    dists = {y: cx ^ fam.coords(y) for y in xs}
    if variant is Variant.COUNT:
        if not dists:
            return frozenset()
        best = min(d.bit_count() for d in dists.values())
        return frozenset(y for y, d in dists.items() if d.bit_count() == best)
    masks = set(dists.values())
    minimal = {a for a in masks if not any(b != a and b & a == b for b in masks)}
    return frozenset(y for y, d in dists.items() if d in minimal)


def _check_nested(inner, outer, ambient):
    if not inner <= outer:
        raise PreconditionViolation("X must be a subset of Y")
    if not outer <= ambient:
        raise PreconditionViolation("Y must be a subset of the ambient set")


def is_neighbourhood(ys: Iterable[int], xs: Iterable[int], ambient: Iterable[int],
                     variant: Variant, fam: IndexFamily) -> bool:
    """Does Y contain [x, y] ∩ U′ for every y ∈ Y and every x ∈ y ∥ X?"""
    ys, xs, ambient = frozenset(ys), frozenset(xs), frozenset(ambient)
    _check_nested(xs, ys, ambient)
    return _neighbourhood_failure(ys, xs, ambient, variant, fam, None) is None


def is_improving_neighbourhood(ys, xs, ambient, variant: Variant, fam: IndexFamily, quality) -> bool:
    """As :func:`is_neighbourhood`, but x ranges over the closest members of X that are ≼ y."""
    ys, xs, ambient = frozenset(ys), frozenset(xs), frozenset(ambient)
    _check_nested(xs, ys, ambient)
    return _neighbourhood_failure(ys, xs, ambient, variant, fam, quality) is None


def neighbourhood_pairs(ys, xs, variant, fam, quality=None):
    """The (y, x) pairs a neighbourhood check quantifies over, in canonical order."""
    pairs = []
    for y in sorted(ys):
        candidates = xs if quality is None else [x for x in xs if quality.leq(x, y)]
        for x in sorted(closest(y, candidates, variant, fam)):
            pairs.append((y, x))
    return pairs


def _neighbourhood_failure(ys, xs, ambient, variant, fam, quality):
    for y, x in neighbourhood_pairs(ys, xs, variant, fam, quality):
        escaped = interval(x, y, ambient, variant, fam) - ys
        if escaped:
            return y, x, min(escaped)
    return None


def neighbourhood_failure(ys, xs, ambient, variant, fam, quality=None):
    """First (y, x, escaping model) that breaks the (improving) neighbourhood law, or None."""
    ys, xs, ambient = frozenset(ys), frozenset(xs), frozenset(ambient)
    _check_nested(xs, ys, ambient)
    return _neighbourhood_failure(ys, xs, ambient, variant, fam, quality)
