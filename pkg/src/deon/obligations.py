"""Obligation systems, their global properties, and derived obligations."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .check import PASS, Check
from .errors import BadParameters, LimitExceeded, PreconditionViolation, VocabularyError
from .logic import Formula, Vocabulary, models_of, parse_formula, set_key
from .metric import IndexFamily, Variant, interval, neighbourhood_failure, neighbourhood_pairs
from .quality import (
    ProfileQuality,
    QualityRelation,
    best_elements,
    ceteris_paribus_improving,
    is_downward_closed,
    softly_locally_better,
)
from .size import SizeSpec, pair_size, soft_forall

MAX_DELTA_OBLIGATIONS = 12
MAX_DERIVE_UNIVERSE = 20


@dataclass(frozen=True)
class ObligationSystem:
    vocab: Vocabulary
    names: tuple[str, ...]
    sets: tuple[frozenset[int], ...]
    restriction: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        object.__setattr__(self, "restriction", frozenset(self.restriction))
        if len(self.names) != len(self.sets):
            raise VocabularyError("one set per obligation name")
        if len(set(self.names)) != len(self.names):
            raise VocabularyError(f"duplicate obligation names in {self.names}")
        if not self.restriction:
            raise VocabularyError("the restricted universe must be nonempty")
        top = 1 << self.vocab.n
        for s in (self.restriction, *self.sets):
            if any(not 0 <= m < top for m in s):
                raise VocabularyError("model outside the universe")

    @classmethod
    def atomic(cls, vocab: Vocabulary, restriction: Iterable[int] | None = None) -> ObligationSystem:
        """One obligation per variable: the models making it true."""
        universe = vocab.universe()
        sets = [frozenset(m for m in universe if m >> i & 1) for i in range(vocab.n)]
        return cls(vocab, vocab.names, sets, universe if restriction is None else restriction)

    @classmethod
    def from_formulas(cls, vocab: Vocabulary, obligations: Mapping[str, str | Formula],
                      restriction: Iterable[int] | str | Formula | None = None) -> ObligationSystem:
        """Obligations are evaluated over the full universe; ``restriction`` may be a formula."""
        sets = []
        for text in obligations.values():
            f = parse_formula(text, vocab) if isinstance(text, str) else text
            sets.append(models_of(f, vocab))
        if restriction is None:
            restriction = vocab.universe()
        elif isinstance(restriction, (str, Formula)):
            f = parse_formula(restriction, vocab) if isinstance(restriction, str) else restriction
            restriction = models_of(f, vocab)
        return cls(vocab, tuple(obligations), sets, restriction)

    @property
    def universe(self) -> frozenset[int]:
        return self.vocab.universe()

    @cached_property
    def family(self) -> IndexFamily:
        return IndexFamily.obligations(self.names, self.sets, self.vocab.n)

    def profile_mask(self, m: int) -> int:
        return self.family.coords(m)

    def quality(self, variant: Variant = Variant.SET) -> ProfileQuality:
        return ProfileQuality(self.family, variant)

    def best(self, variant: Variant = Variant.SET) -> frozenset[int]:
        return best_elements(self.restriction, self.quality(variant))

    def with_restriction(self, restriction: Iterable[int]) -> ObligationSystem:
        new = replace(self, restriction=frozenset(restriction))
        if "family" in self.__dict__:
            new.__dict__["family"] = self.family
        return new

    def intersection_all(self) -> frozenset[int]:
        """∩𝒪, with the empty family giving the whole universe."""
        out = self.universe
        for s in self.sets:
            out &= s
        return out


# --- δ-assignments ------------------------------------------------------------


@dataclass(frozen=True)
class DeltaAssignment:
    """A 0/1 value for each obligation in a subfamily."""

    values: Mapping[str, int]

    def masks(self, sys: ObligationSystem) -> tuple[int, int]:
        dom = val = 0
        for name, v in self.values.items():
            bit = 1 << sys.names.index(name)
            dom |= bit
            if v:
                val |= bit
        return dom, val

    @classmethod
    def from_masks(cls, sys: ObligationSystem, dom: int, val: int) -> DeltaAssignment:
        return cls({name: int(bool(val >> i & 1)) for i, name in enumerate(sys.names) if dom >> i & 1})

    def __hash__(self):
        return hash(tuple(sorted(self.values.items())))


def satisfies_delta(m: int, delta: DeltaAssignment, sys: ObligationSystem) -> bool:
    dom, val = delta.masks(sys)
    return sys.profile_mask(m) & dom == val


def is_independent(sys: ObligationSystem) -> Check:
    """Every full 0/1 assignment to 𝒪 is realised by some model of U′."""
    k = len(sys.names)
    present = {sys.profile_mask(m) for m in sys.restriction}
    full = (1 << k) - 1
    for val in range(full, -1, -1):
        if val not in present:
            return Check(False, DeltaAssignment.from_masks(sys, full, val))
    return PASS


def is_ui(xs: Iterable[int], sys: ObligationSystem) -> Check:
    """Is X a union of intersections of obligations, relativised to U′?

    Decided through the canonical candidate ∪_{m∈X} ∩𝒪(m) ∩ U′, which always
    contains X and equals X exactly when X is (ui).  On success the witness is
    the family of profiles used; on failure a pair (extra model, generator).
    """
    xs = frozenset(xs)
    _require_subset(xs, sys)
    family = []
    for m in sorted(xs):
        pm = sys.profile_mask(m)
        for extra in sorted(sys.restriction - xs):
            if sys.profile_mask(extra) & pm == pm:
                return Check(False, (extra, m))
        family.append(sys.family.labels_of(pm))
    return Check(True, family)


def in_D_O(xs: Iterable[int], sys: ObligationSystem) -> Check:
    """Membership in 𝒟(𝒪); m, m′ and m″ range over U′.

    Witness on failure: ``(δ, m, m′)`` with m ∈ X, m′ ∉ X both satisfying δ
    and no m″ ∈ X satisfying δ strictly better than m′.
    """
    xs = frozenset(xs)
    _require_subset(xs, sys)
    k = len(sys.names)
    if k > MAX_DELTA_OBLIGATIONS:
        raise BadParameters(f"𝒟(𝒪) is checked for at most {MAX_DELTA_OBLIGATIONS} obligations")
    inside = sorted({sys.profile_mask(m) for m in xs})
    outside = {}
    for m in sorted(sys.restriction - xs):
        outside.setdefault(sys.profile_mask(m), m)
    first_in = {}
    for m in sorted(xs):
        first_in.setdefault(sys.profile_mask(m), m)
    for dom in range(1 << k):
        # enumerate val ⊆ dom
        val = dom
        while True:
            ins = [p for p in inside if p & dom == val]
            if ins:
                for p_out, m_out in sorted(outside.items(), key=lambda kv: kv[1]):
                    if p_out & dom != val:
                        continue
                    if not any(p != p_out and p & p_out == p_out for p in ins):
                        return Check(False, (DeltaAssignment.from_masks(sys, dom, val), first_in[ins[0]], m_out))
            if val == 0:
                break
            val = (val - 1) & dom
    return PASS


def delta_failure(xs: Iterable[int], sys: ObligationSystem, delta: DeltaAssignment) -> Check:
    """Does this one δ refute membership of X in 𝒟(𝒪)?

    ``ok`` is True when δ is harmless.  Otherwise the witness is ``(m, m′)``:
    m ∈ X and m′ ∈ U′ − X satisfy δ and no member of X satisfying δ is
    strictly better than m′.
    """
    xs = frozenset(xs)
    _require_subset(xs, sys)
    dom, val = delta.masks(sys)
    inside = [m for m in sorted(xs) if sys.profile_mask(m) & dom == val]
    if not inside:
        return PASS
    for m_out in sorted(sys.restriction - xs):
        p_out = sys.profile_mask(m_out)
        if p_out & dom != val:
            continue
        if not any(sys.profile_mask(m) != p_out and sys.profile_mask(m) & p_out == p_out for m in inside):
            return Check(False, (inside[0], m_out))
    return PASS


def is_classical_consequence(xs: Iterable[int], sys: ObligationSystem) -> bool:
    xs = frozenset(xs)
    _require_subset(xs, sys)
    return sys.intersection_all() & sys.restriction <= xs


def _require_subset(xs, sys):
    if not xs <= sys.restriction:
        raise PreconditionViolation("candidate must be a subset of the restricted universe")


# --- hard and soft obligations ---------------------------------------------------


@dataclass(frozen=True)
class ObligationOptions:
    variant: Variant = Variant.SET
    require_cp: bool = False
    require_nontrivial: bool = True


@dataclass
class ObligationVerdict:
    criteria: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)
    info: dict[str, object] = field(default_factory=dict)

    @property
    def accept(self) -> bool:
        return all(self.criteria.values())

    def __bool__(self):
        return self.accept


def _setup(sys, q, options, fam):
    options = options or ObligationOptions()
    q = q or sys.quality(options.variant)
    fam = fam or sys.family
    return options, q, fam


def check_hard_obligation(xs: Iterable[int], sys: ObligationSystem, q: QualityRelation | None = None,
                          options: ObligationOptions | None = None, fam: IndexFamily | None = None) -> ObligationVerdict:
    """Evaluate X against the hard-obligation criteria.

    Always: contains every best element of U′, downward closed, improving
    neighbourhood of the best elements.  Optionally: ceteris paribus improving
    and nontrivial (neither empty nor U′).  Whether X is (ui) is reported in
    ``info`` only.
    """
    xs = frozenset(xs)
    _require_subset(xs, sys)
    options, q, fam = _setup(sys, q, options, fam)
    universe = sys.restriction
    best = best_elements(universe, q)
    criteria, witnesses = {}, {}

    missing = best - xs
    criteria["contains_ideal"] = not missing
    if missing:
        witnesses["contains_ideal"] = min(missing)

    closed = is_downward_closed(xs, universe, q)
    criteria["downward_closed"] = closed.ok
    if not closed:
        witnesses["downward_closed"] = closed.witness

    if missing:
        criteria["improving_neighbourhood"] = False
        witnesses["improving_neighbourhood"] = ("missing", min(missing))
    else:
        failure = neighbourhood_failure(xs, best, universe, options.variant, fam, q)
        criteria["improving_neighbourhood"] = failure is None
        if failure is not None:
            witnesses["improving_neighbourhood"] = failure

    if options.require_cp:
        cp = ceteris_paribus_improving(xs, universe, q, options.variant, fam)
        criteria["ceteris_paribus"] = cp.ok
        if not cp:
            witnesses["ceteris_paribus"] = cp.witness

    if options.require_nontrivial:
        criteria["nontrivial"] = bool(xs) and xs != universe

    info = {}
    if isinstance(q, ProfileQuality):
        info["ui"] = is_ui(xs, sys).ok
    return ObligationVerdict(criteria, witnesses, info)


def check_soft_obligation(xs: Iterable[int], sys: ObligationSystem, q: QualityRelation | None,
                          size: SizeSpec, options: ObligationOptions | None = None,
                          pairs: SizeSpec | None = None, fam: IndexFamily | None = None) -> ObligationVerdict:
    """Soft variant: each universal condition only has to hold almost everywhere.

    ``size`` measures subsets of models (ideal cases, the two sides of ≪_l);
    ``pairs`` measures sets of pairs and defaults to ``size`` lifted to the
    product.  Every criterion reports its exception set in ``info``.
    """
    xs = frozenset(xs)
    _require_subset(xs, sys)
    options, q, fam = _setup(sys, q, options, fam)
    universe = sys.restriction
    best = best_elements(universe, q)
    criteria, witnesses, info = {}, {}, {}

    ideal = soft_forall(best, lambda b: b in xs, size)
    criteria["contains_ideal"] = ideal.ok
    info["contains_ideal"] = ideal.exceptions

    closure_pairs = frozenset((a, b) for a in universe for b in universe)
    closure = soft_forall(
        closure_pairs,
        lambda ab: not (ab[1] in xs and ab[0] not in xs and q.leq(ab[0], ab[1])),
        pairs or pair_size(size, universe, universe),
    )
    criteria["downward_closed"] = closure.ok
    info["downward_closed"] = closure.exceptions

    # y also ranges over missing best elements: each contributes the pair (b, b),
    # whose interval {b} escapes X, so a zero budget reproduces the hard verdict
    nbhd_pairs = frozenset(neighbourhood_pairs(xs | best, best, options.variant, fam, q))
    nbhd = soft_forall(
        nbhd_pairs,
        lambda yx: interval(yx[1], yx[0], universe, options.variant, fam) <= xs,
        pairs or pair_size(size, xs | best, best),
    )
    criteria["improving_neighbourhood"] = nbhd.ok
    info["improving_neighbourhood"] = nbhd.exceptions

    if options.require_cp:
        cp = softly_locally_better(xs, universe - xs, q, options.variant, fam, size)
        criteria["ceteris_paribus"] = cp.ok
        info["ceteris_paribus"] = cp.exceptions

    if options.require_nontrivial:
        criteria["nontrivial"] = bool(xs) and xs != universe

    for name, ok in criteria.items():
        if not ok and name in info:
            witnesses[name] = info[name]
    return ObligationVerdict(criteria, witnesses, info)


# --- derivation ------------------------------------------------------------------


def downsets(universe: Iterable[int], q: QualityRelation, containing: Iterable[int] = ()) -> list[frozenset[int]]:
    """Every ≼-downward-closed subset of ``universe`` that includes ``containing``."""
    elems = sorted(universe)
    index = {m: i for i, m in enumerate(elems)}
    down = []
    for x in elems:
        mask = 0
        for y in elems:
            if q.leq(y, x):
                mask |= 1 << index[y]
        down.append(mask)
    start = 0
    for m in containing:
        start |= down[index[m]]
    seen = {start}
    stack = [start]
    while stack:
        d = stack.pop()
        for i in range(len(elems)):
            if not d >> i & 1:
                nd = d | down[i]
                if nd not in seen:
                    seen.add(nd)
                    stack.append(nd)
    return [frozenset(elems[i] for i in range(len(elems)) if d >> i & 1) for d in seen]


def derive_obligations(sys: ObligationSystem, q: QualityRelation | None = None,
                       options: ObligationOptions | None = None, limit: int | None = None,
                       fam: IndexFamily | None = None) -> Iterator[tuple[frozenset[int], ObligationVerdict]]:
    """Yield every accepted hard obligation X ⊆ U′ in canonical order.

    Only downward-closed supersets of the best elements are examined: both
    are required criteria, so nothing acceptable is skipped.  Raises
    :class:`LimitExceeded` when more than ``limit`` sets would be emitted.
    """
    options, q, fam = _setup(sys, q, options, fam)
    if len(sys.restriction) > MAX_DERIVE_UNIVERSE:
        raise PreconditionViolation(f"exhaustive derivation needs |U′| ≤ {MAX_DERIVE_UNIVERSE}")
    best = best_elements(sys.restriction, q)
    candidates = sorted(downsets(sys.restriction, q, best), key=lambda s: set_key(sys.vocab, s))
    emitted = 0
    for xs in candidates:
        verdict = check_hard_obligation(xs, sys, q, options, fam)
        if verdict.accept:
            if limit is not None and emitted >= limit:
                raise LimitExceeded(limit)
            emitted += 1
            yield xs, verdict
