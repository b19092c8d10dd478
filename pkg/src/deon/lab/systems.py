"""Random and exhaustive families of obligation systems."""

from __future__ import annotations

import random
from typing import Iterator

from ..errors import BadParameters
from ..logic import Vocabulary, set_key
from ..metric import Variant
from ..obligations import ObligationSystem
from ..quality import downward_closure

LETTERS = "pqrstuvw"


def vocabulary(n: int) -> Vocabulary:
    return Vocabulary(tuple(LETTERS[:n]))


def random_system(n_vars: int, n_obl: int, density: float, seed: int) -> ObligationSystem:
    """A reproducible system with ``n_obl`` arbitrary obligations over ``n_vars`` variables.

    Obligations keep each model with probability ``density`` and may come out
    empty or full.  U′ keeps each model with a per-system probability drawn
    from [0.3, 1] and is never empty.
    """
    if not 1 <= n_vars <= len(LETTERS):
        raise BadParameters(f"n_vars must lie in 1..{len(LETTERS)}")
    if not 0 <= n_obl <= 8:
        raise BadParameters("n_obl must lie in 0..8")
    if not 0 < density < 1:
        raise BadParameters("density must lie strictly between 0 and 1")
    rng = random.Random(f"system:{n_vars}:{n_obl}:{density!r}:{seed}")
    vocab = vocabulary(n_vars)
    models = range(1 << n_vars)
    sets = [frozenset(m for m in models if rng.random() < density) for _ in range(n_obl)]
    keep = rng.uniform(0.3, 1.0)
    restriction = {m for m in models if rng.random() < keep}
    if not restriction:
        restriction.add(rng.randrange(1 << n_vars))
    names = tuple(f"O{i + 1}" for i in range(n_obl))
    return ObligationSystem(vocab, names, sets, frozenset(restriction))


def atomic_systems(max_vars: int = 3, min_vars: int = 1) -> list[ObligationSystem]:
    """Every atomic-obligation system with n ≤ max_vars and every nonempty U′.

    Ordered by (|U′|, number of obligations, U′ as bitstrings) so that the
    first counterexample met is a minimal one.
    """
    out = []
    for n in range(min_vars, max_vars + 1):
        vocab = vocabulary(n)
        base = ObligationSystem.atomic(vocab)
        size = 1 << n
        for mask in range(1, 1 << size):
            restriction = frozenset(m for m in range(size) if mask >> m & 1)
            out.append(base.with_restriction(restriction))
    out.sort(key=system_key)
    return out


def system_key(sys: ObligationSystem) -> tuple:
    return (len(sys.restriction), len(sys.names), sys.vocab.n, set_key(sys.vocab, sys.restriction)[1])


def all_subsets(universe: frozenset) -> Iterator[frozenset]:
    elems = sorted(universe)
    for mask in range(1 << len(elems)):
        yield frozenset(e for i, e in enumerate(elems) if mask >> i & 1)


def sampled_subsets(ctx, rng: random.Random) -> list[frozenset]:
    """A handful of candidate X for one random system.

    Random subsets are rarely closed, so closures (with and without the best
    elements) are added to exercise claims whose hypothesis is closure.
    """
    universe = sorted(ctx.universe)
    raw = frozenset(m for m in universe if rng.random() < 0.5)
    seed = frozenset(rng.sample(universe, k=min(len(universe), rng.randint(1, 2))))
    out = {
        raw,
        downward_closure(raw, ctx.universe, ctx.q[Variant.SET]),
        downward_closure(seed, ctx.universe, ctx.q[Variant.SET]),
        downward_closure(seed | ctx.best[Variant.SET], ctx.universe, ctx.q[Variant.SET]),
        downward_closure(seed, ctx.universe, ctx.q[Variant.COUNT]),
    }
    return sorted(out, key=lambda s: set_key(ctx.sys.vocab, s))


def random_systems(count: int, seed: int, max_vars: int = 4, max_obl: int = 4) -> Iterator[tuple[ObligationSystem, random.Random]]:
    for i in range(count):
        rng = random.Random(f"population:{seed}:{i}")
        n = rng.randint(1, max_vars)
        k = rng.randint(0, max_obl)
        density = rng.choice((0.25, 0.5, 0.75))
        yield random_system(n, k, density, rng.randrange(2 ** 31)), rng
