"""Per-system caches of the predicates the claims are stated in."""

from __future__ import annotations

from functools import cached_property

from ..metric import Variant, neighbourhood_failure
from ..obligations import ObligationSystem, in_D_O, is_independent, is_ui
from ..quality import best_elements, ceteris_paribus_improving, is_downward_closed

SET, COUNT = Variant.SET, Variant.COUNT


class Context:
    """One obligation system with its restricted universe, plus memoised facts."""

    def __init__(self, sys: ObligationSystem):
        self.sys = sys
        self.universe = sys.restriction
        self.fam = sys.family
        self.q = {SET: sys.quality(SET), COUNT: sys.quality(COUNT)}
        self._props = {}
        self._shrunk = {}

    @cached_property
    def best(self):
        return {v: best_elements(self.universe, self.q[v]) for v in Variant}

    @cached_property
    def independent(self) -> bool:
        return is_independent(self.sys).ok

    @cached_property
    def injective(self) -> bool:
        coords = [self.fam.coords(m) for m in self.universe]
        return len(set(coords)) == len(coords)

    @cached_property
    def full(self) -> Context:
        """Context over the whole universe U."""
        if self.universe == self.sys.universe:
            return self
        return Context(self.sys.with_restriction(self.sys.universe))

    def props(self, xs: frozenset) -> Props:
        p = self._props.get(xs)
        if p is None:
            p = self._props[xs] = Props(self, xs)
        return p

    def shrink(self, m: int) -> Context | None:
        """Context for U′ − {m}; None when that would be empty."""
        if m not in self._shrunk:
            rest = self.universe - {m}
            self._shrunk[m] = Context(self.sys.with_restriction(rest)) if rest else None
        return self._shrunk[m]


class Props:
    """Lazily computed properties of one candidate X in one context."""

    def __init__(self, ctx: Context, xs: frozenset):
        self.ctx = ctx
        self.xs = xs

    @property
    def nonempty(self):
        return bool(self.xs)

    def closed(self, v=SET) -> bool:
        return self._memo(("closed", v), lambda: is_downward_closed(self.xs, self.ctx.universe, self.ctx.q[v]).ok)

    def has_best(self, v=SET) -> bool:
        return self.ctx.best[v] <= self.xs

    def cp(self, v=SET) -> bool:
        return self._memo(("cp", v), lambda: ceteris_paribus_improving(
            self.xs, self.ctx.universe, self.ctx.q[v], v, self.ctx.fam).ok)

    def nbhd(self, v=SET) -> bool:
        """Neighbourhood of the best elements (requires containing them)."""
        return self.has_best(v) and self._memo(("nbhd", v), lambda: neighbourhood_failure(
            self.xs, self.ctx.best[v], self.ctx.universe, v, self.ctx.fam) is None)

    def impr(self, v=SET) -> bool:
        """Improving neighbourhood of the best elements (requires containing them)."""
        return self.has_best(v) and self._memo(("impr", v), lambda: neighbourhood_failure(
            self.xs, self.ctx.best[v], self.ctx.universe, v, self.ctx.fam, self.ctx.q[v]) is None)

    @property
    def ui(self) -> bool:
        return self._memo("ui", lambda: is_ui(self.xs, self.ctx.sys).ok)

    @property
    def D(self) -> bool:
        return self._memo("D", lambda: in_D_O(self.xs, self.ctx.sys).ok)

    def _memo(self, key, fn):
        cache = self.__dict__.setdefault("_cache", {})
        if key not in cache:
            cache[key] = fn()
        return cache[key]
