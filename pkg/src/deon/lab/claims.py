"""The registry of checkable claims.

Each claim is evaluated at one of four levels:

* ``set``: once per (system, candidate X); ``check(props)`` returns ``True``
  when the claim holds and ``False`` or a detail dict when it does not.
* ``restriction``: once per system (U′ fixed); ``check(ctx)`` returns ``None``
  or a detail dict describing the violation.
* ``family``: once per obligation family, over the whole universe.
* ``global``: once, independent of any system.

Golden fixtures live in :mod:`deon.lab.golden`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from ..logic import models_of, strongest_conjunction
from ..metric import IndexFamily, Variant, between, dist_mask, interval, is_neighbourhood
from ..obligations import ObligationOptions, check_hard_obligation, derive_obligations, is_classical_consequence
from ..quality import Comparison
from ..size import Preferential, product_is_big
from .context import COUNT, SET
from .systems import all_subsets

LATTICE_LIMIT = 8
THEOREM = "theorem"
REFUTABLE = "refutable"


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    status: str
    level: str
    check: Callable
    independent_only: bool = False
    max_universe: int | None = None  # restriction level: skip larger U′ (enumerates all subsets)


REGISTRY: dict[str, Claim] = {}


def claim(id, statement, status=THEOREM, level="set", independent_only=False, max_universe=None):
    def register(fn):
        REGISTRY[id] = Claim(id, statement, status, level, fn, independent_only, max_universe)
        return fn
    return register


def implies(a: bool, b: bool) -> bool:
    return not a or b


# --- distances and betweenness (family level) ---------------------------------------


def _families(ctx):
    return (ctx.fam, IndexFamily.variables(ctx.sys.vocab))


@claim("distance-laws", "set and counting distances: identity, symmetry, triangle law; "
       "over obligations the set distance is the symmetric difference of profiles", level="family")
def _distance_laws(ctx):
    universe = sorted(ctx.sys.universe)
    for fam in _families(ctx):
        for x, y in itertools.product(universe, repeat=2):
            dxy = dist_mask(x, y, fam)
            if dist_mask(x, x, fam) or dxy != dist_mask(y, x, fam):
                return {"x": x, "y": y}
            if fam is ctx.fam and dxy != ctx.fam.coords(x) ^ ctx.fam.coords(y):
                return {"x": x, "y": y}
            for z in universe:
                dxz, dyz = dist_mask(x, z, fam), dist_mask(y, z, fam)
                if dxz & ~(dxy | dyz) or dxz.bit_count() > dxy.bit_count() + dyz.bit_count():
                    return {"x": x, "y": y, "z": z}
    return None


@claim("between-symmetric", "⟨x,y,z⟩ holds iff ⟨z,y,x⟩ holds, both variants", level="family")
def _between_symmetric(ctx):
    universe = sorted(ctx.sys.universe)
    for fam in _families(ctx):
        for v in Variant:
            for x, z in itertools.combinations(universe, 2):
                for y in universe:
                    if between(x, y, z, v, fam) != between(z, y, x, v, fam):
                        return {"x": x, "y": y, "z": z, "variant": v.value}
    return None


def _agreement_box(a, c, n):
    """Models agreeing with a wherever a and c agree."""
    agree = ~(a ^ c) & ((1 << n) - 1)
    return frozenset(m for m in range(1 << n) if (m ^ a) & agree == 0)


@claim("between-box", "over variables both intervals equal the agreement box of the endpoints, "
       "and members of the box split the distance into disjoint parts", level="family")
def _between_box(ctx):
    n = ctx.sys.vocab.n
    fam = IndexFamily.variables(ctx.sys.vocab)
    universe = ctx.sys.universe
    for a, c in itertools.product(sorted(universe), repeat=2):
        box = _agreement_box(a, c, n)
        if interval(a, c, universe, SET, fam) != box or interval(a, c, universe, COUNT, fam) != box:
            return {"x": a, "z": c}
        for b in box:
            if dist_mask(a, b, fam) & dist_mask(b, c, fam):
                return {"x": a, "y": b, "z": c}
    return None


@claim("interval-is-strongest-conjunction", "[x,y] is the model set of the strongest literal conjunction "
       "true in x and y", level="family")
def _interval_formula(ctx):
    vocab = ctx.sys.vocab
    fam = IndexFamily.variables(vocab)
    universe = ctx.sys.universe
    for x, y in itertools.product(sorted(universe), repeat=2):
        if models_of(strongest_conjunction({x, y}, vocab), vocab) != interval(x, y, universe, SET, fam):
            return {"x": x, "y": y}
    return None


@claim("quality-distance", "for ≼_s: x ≼ y gives d(x,y) = 𝒪(x) − 𝒪(y); chains a ≺ b ≺ c have incomparable "
       "steps and b ∈ [a,c]; incomparable x, x′ below y are at incomparable distances; "
       "members of [x,z] lie between x and z in quality", level="family")
def _quality_distance(ctx):
    q, fam = ctx.q[SET], ctx.fam
    universe = sorted(ctx.sys.universe)
    prof = fam.coords
    for x, y in itertools.product(universe, repeat=2):
        if q.leq(x, y) and dist_mask(x, y, fam) != prof(x) & ~prof(y):
            return {"part": "difference", "x": x, "y": y}
    for a, b, c in itertools.product(universe, repeat=3):
        if q.lt(a, b) and q.lt(b, c):
            ab, bc = dist_mask(a, b, fam), dist_mask(b, c, fam)
            if ab & bc in (ab, bc):
                return {"part": "incomparable-steps", "a": a, "b": b, "c": c}
            if dist_mask(a, c, fam) != ab | bc or not between(a, b, c, SET, fam):
                return {"part": "additive", "a": a, "b": b, "c": c}
        x, x2, y = a, b, c
        if q.lt(x, y) and q.lt(x2, y) and q.compare(x, x2) is Comparison.INCOMPARABLE:
            d1, d2 = dist_mask(x, y, fam), dist_mask(x2, y, fam)
            if d1 & d2 in (d1, d2):
                return {"part": "incomparable-distances", "x": x, "x2": x2, "y": y}
        x, y, z = a, b, c
        if q.lt(x, z) and between(x, y, z, SET, fam) and not (q.leq(x, y) and q.leq(y, z)):
            return {"part": "interval-order", "x": x, "y": y, "z": z}
    return None


@claim("count-comparable", "under counting quality any two models are comparable", level="family")
def _count_comparable(ctx):
    q = ctx.q[COUNT]
    for x, y in itertools.product(sorted(ctx.sys.universe), repeat=2):
        if q.compare(x, y) is Comparison.INCOMPARABLE:
            return {"x": x, "y": y}
    return None


# --- closure -------------------------------------------------------------------------


@claim("subset-closure", "closure is inherited by smaller universes and composes through closed intermediates")
def _subset_closure(P):
    ctx = P.ctx
    for v in Variant:
        if not P.closed(v):
            continue
        for m in sorted(ctx.universe - P.xs):
            smaller = ctx.shrink(m)
            if smaller is not None and not smaller.props(P.xs).closed(v):
                return {"variant": v.value, "removed": m}
        full = ctx.full
        if full.props(ctx.universe).closed(v) and not full.props(P.xs).closed(v):
            return {"variant": v.value, "part": "compose"}
    return True


def _lattice_check(universe, members):
    """Members (as frozensets) closed under pairwise union and intersection?"""
    members = set(members)
    for a, b in itertools.combinations(sorted(members, key=sorted), 2):
        if a | b not in members or a & b not in members:
            return {"a": sorted(a), "b": sorted(b)}
    return None


@claim("closed-lattice", "unions and intersections of closed sets are closed", level="restriction",
       max_universe=LATTICE_LIMIT)
def _closed_lattice(ctx):
    for v in Variant:
        closed = [xs for xs in all_subsets(ctx.universe) if ctx.props(xs).closed(v)]
        bad = _lattice_check(ctx.universe, closed)
        if bad:
            return dict(bad, variant=v.value)
    return None


@claim("ui-lattice", "unions and intersections of (ui) sets are (ui)", level="restriction",
       max_universe=LATTICE_LIMIT)
def _ui_lattice(ctx):
    return _lattice_check(ctx.universe, [xs for xs in all_subsets(ctx.universe) if ctx.props(xs).ui])


@claim("relativization-closed", "a closed set stays closed when the universe shrinks")
def _relativization_closed(P):
    for v in Variant:
        if P.closed(v):
            for m in sorted(P.ctx.universe):
                smaller = P.ctx.shrink(m)
                if smaller is not None and not smaller.props(P.xs - {m}).closed(v):
                    return {"variant": v.value, "removed": m}
    return True


# --- local and global properties -----------------------------------------------------


@claim("general-obligation", "a nonempty ceteris paribus improving set contains every optimal point")
def _general_obligation(P):
    return all(implies(P.nonempty and P.cp(v), P.has_best(v)) for v in Variant)


@claim("local-implies-closed", "set variant: ceteris paribus improving implies closed")
def _local_implies_closed(P):
    return implies(P.cp(SET), P.closed(SET))


@claim("count-closed", "counting variant: closed implies ceteris paribus improving")
def _count_closed(P):
    return implies(P.closed(COUNT), P.cp(COUNT))


@claim("neighbourhood-trivial", "with injective coordinates, X and U′ are neighbourhoods of X in U′")
def _neighbourhood_trivial(P):
    ctx = P.ctx
    if not ctx.injective:
        return True
    return all(is_neighbourhood(P.xs, P.xs, ctx.universe, v, ctx.fam)
               and is_neighbourhood(ctx.universe, P.xs, ctx.universe, v, ctx.fam) for v in Variant)


@claim("neighbourhood-lattice", "neighbourhoods of the best elements are closed under union and intersection",
       level="restriction", max_universe=LATTICE_LIMIT)
def _neighbourhood_lattice(ctx):
    for v in Variant:
        best = ctx.best[v]
        hoods = [best | extra for extra in all_subsets(ctx.universe - best)
                 if is_neighbourhood(best | extra, best, ctx.universe, v, ctx.fam)]
        bad = _lattice_check(ctx.universe, hoods)
        if bad:
            return dict(bad, variant=v.value)
    return None


@claim("closed-implies-ui", "set variant: a nonempty closed set is (ui)")
def _closed_ui(P):
    return implies(P.nonempty and P.closed(SET), P.ui)


@claim("closed+best-implies-improving-neighbourhood",
       "set variant: a closed set containing the best elements is an improving neighbourhood of them")
def _closed_best_impr(P):
    return implies(P.closed(SET) and P.has_best(SET), P.impr(SET))


@claim("local-implies-best", "set variant: a nonempty ceteris paribus improving set contains the best elements")
def _local_best(P):
    return implies(P.nonempty and P.cp(SET), P.has_best(SET))


@claim("ui-implies-closed", "(ui) implies closed")
def _ui_closed(P):
    return implies(P.ui, P.closed(SET))


@claim("D-implies-closed", "membership in 𝒟(𝒪) implies closed")
def _d_closed(P):
    return implies(P.D, P.closed(SET))


@claim("D-implies-best", "a nonempty member of 𝒟(𝒪) contains the best elements")
def _d_best(P):
    return implies(P.nonempty and P.D, P.has_best(SET))


@claim("improving-neighbourhood-implies-closed", "an improving neighbourhood of the best elements is closed "
       "and contains them")
def _impr_closed(P):
    return implies(P.impr(SET), P.closed(SET) and P.has_best(SET))


@claim("independent-closed-properties", "independent systems, set variant: a nonempty closed set contains the "
       "best elements, is ceteris paribus improving, (ui), in 𝒟(𝒪), and a (improving) neighbourhood of the best",
       independent_only=True)
def _independent_closed(P):
    if not (P.nonempty and P.closed(SET)):
        return True
    failing = [name for name, ok in (("best", P.has_best(SET)), ("cp", P.cp(SET)), ("ui", P.ui),
                                      ("D", P.D), ("nbhd", P.nbhd(SET)), ("impr", P.impr(SET))) if not ok]
    return {"failing": failing} if failing else True


@claim("independent-converse", "independent systems: ceteris paribus improving, (ui), 𝒟(𝒪) and "
       "(improving) neighbourhood of the best each imply closed", independent_only=True)
def _independent_converse(P):
    closed = P.closed(SET)
    failing = [name for name, ok in (("cp", P.cp(SET)), ("ui", P.ui), ("D", P.D),
                                      ("nbhd", P.nbhd(SET)), ("impr", P.impr(SET))) if ok and not closed]
    return {"failing": failing} if failing else True


@claim("garbage-in", "independent systems: every basic obligation is a derived obligation", level="restriction",
       independent_only=True)
def _garbage_in(ctx):
    options = ObligationOptions(require_nontrivial=False)
    for name, members in zip(ctx.sys.names, ctx.sys.sets):
        if not check_hard_obligation(members & ctx.universe, ctx.sys, options=options).accept:
            return {"obligation": name}
    return None


@claim("derived-are-consequences", "independent systems: every derived obligation is a classical consequence "
       "of the basic ones", level="restriction", independent_only=True, max_universe=16)
def _derived_consequences(ctx):
    for xs, _ in derive_obligations(ctx.sys, options=ObligationOptions(require_nontrivial=False)):
        if not is_classical_consequence(xs, ctx.sys):
            return {"X": sorted(xs)}
    return None


# --- sizes ---------------------------------------------------------------------------


def _relations(k):
    """Every strict relation on range(k) given by its off-diagonal pairs."""
    pairs = [(a, b) for a in range(k) for b in range(k) if a != b]
    for mask in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)


def _preorder_size(rel):
    """Size from a relation read as ≼ (plus identity): μ = elements with nothing strictly below."""
    return Preferential(lambda a, b: (a, b) in rel and (b, a) not in rel)


@claim("product-size", "the product filter of two preferential sizes is generated by the componentwise product "
       "order; varying the second generator per first component gives the same filter", level="global")
def _product_size(_ctx=None):
    carriers = [frozenset(range(k)) for k in (1, 2, 3)]
    sizes = [(c, rel) for c in carriers for rel in _relations(len(c))]
    for (left, rel1), (right, rel2) in itertools.product(sizes, repeat=2):
        s1, s2 = _preorder_size(rel1), _preorder_size(rel2)
        pairs = frozenset(itertools.product(left, right))

        def prod_leq(a, b):
            return (a[0] == b[0] or (a[0], b[0]) in rel1) and (a[1] == b[1] or (a[1], b[1]) in rel2)

        product = Preferential(lambda a, b: prod_leq(a, b) and not prod_leq(b, a))
        generator = product.mu(pairs)
        if generator != frozenset(itertools.product(s1.mu(left), s2.mu(right))):
            return {"rel1": sorted(rel1), "rel2": sorted(rel2)}
        for drop in [None, *sorted(generator)]:
            candidate = generator - {drop} if drop is not None else generator
            if product.is_big(candidate, pairs) != product_is_big(candidate, left, right, s1, s2):
                return {"rel1": sorted(rel1), "rel2": sorted(rel2), "dropped": drop}
        # per-component generators: any A′_a ⊇ μ(X′) yields the same filter
        mu_left, mu_right = s1.mu(left), s2.mu(right)
        extras = sorted(right - mu_right)
        for a in mu_left:
            for extra in extras:
                varied = {(x, y) for x in mu_left for y in mu_right} | {(a, extra)}
                if not product_is_big(varied, left, right, s1, s2):
                    return {"rel1": sorted(rel1), "rel2": sorted(rel2), "varied": True}
    return None


# --- refutable claims ---------------------------------------------------------------------


@claim("closed-implies-contains-best", "set variant: a nonempty closed set contains the best elements", REFUTABLE)
def _r_closed_best(P):
    return implies(P.nonempty and P.closed(SET), P.has_best(SET))


@claim("closed-implies-cp-set", "set variant: a closed set containing the best elements is ceteris paribus "
       "improving", REFUTABLE)
def _r_closed_cp(P):
    return implies(P.closed(SET) and P.has_best(SET), P.cp(SET))


@claim("closed+best-implies-neighbourhood", "set variant: a closed set containing the best elements is a "
       "neighbourhood of them", REFUTABLE)
def _r_closed_nbhd(P):
    return implies(P.closed(SET) and P.has_best(SET), P.nbhd(SET))


@claim("closed+best-implies-D", "set variant: a closed set containing the best elements is in 𝒟(𝒪)", REFUTABLE)
def _r_closed_d(P):
    return implies(P.closed(SET) and P.has_best(SET), P.D)


@claim("ui-implies-contains-best", "a nonempty (ui) set contains the best elements", REFUTABLE)
def _r_ui_best(P):
    return implies(P.nonempty and P.ui, P.has_best(SET))


@claim("cp-count-implies-improving-neighbourhood", "counting variant: a nonempty ceteris paribus improving set "
       "is an improving neighbourhood of the best elements", REFUTABLE)
def _r_cp_count_impr(P):
    return implies(P.nonempty and P.cp(COUNT), P.impr(COUNT))


def _shrinks(P, before, after):
    """Remove one model from U′ (and X); the property must survive as long as X stays nonempty."""
    if not (P.nonempty and before(P)):
        return True
    for m in sorted(P.ctx.universe):
        smaller = P.ctx.shrink(m)
        if smaller is not None and P.xs - {m} and not after(smaller.props(P.xs - {m})):
            return {"removed": m}
    return True


@claim("relativization-best", "containing the best elements survives shrinking the universe", REFUTABLE)
def _r_rel_best(P):
    return _shrinks(P, lambda p: p.has_best(SET), lambda p: p.has_best(SET))


@claim("relativization-D", "membership in 𝒟(𝒪) survives shrinking the universe", REFUTABLE)
def _r_rel_d(P):
    return _shrinks(P, lambda p: p.D, lambda p: p.D)


@claim("relativization-cp", "ceteris paribus improvement survives shrinking the universe", REFUTABLE)
def _r_rel_cp(P):
    return _shrinks(P, lambda p: p.cp(SET), lambda p: p.cp(SET))


def ordered_claims(ids=None) -> list[Claim]:
    from .golden import FIXTURES

    claims = list(REGISTRY.values()) + list(FIXTURES.values())
    if ids is not None:
        wanted = set(ids)
        claims = [c for c in claims if c.id in wanted]
    return sorted(claims, key=lambda c: c.id)


__all__ = ["Claim", "REGISTRY", "THEOREM", "REFUTABLE", "ordered_claims"]
