"""Worked examples reproduced exactly.

Each fixture computes a small JSON-able dict; the suite compares its canonical
serialisation byte for byte with the hand-written expectation stored in
``golden.json``.
"""

from __future__ import annotations

import json
from importlib import resources

from ..logic import Vocabulary, classify_formula, models_of, parse_formula
from ..metric import IndexFamily, Variant, closest, dist_count, dist_set, interval, neighbourhood_failure
from ..obligations import (
    DeltaAssignment,
    ObligationSystem,
    check_hard_obligation,
    check_soft_obligation,
    delta_failure,
    in_D_O,
    is_ui,
    satisfies_delta,
)
from ..quality import (
    ExplicitQuality,
    better_than_set,
    ceteris_paribus_improving,
    closure_violations,
    is_downward_closed,
    locally_better,
)
from ..size import Fraction
from .claims import REFUTABLE, Claim

SET, COUNT = Variant.SET, Variant.COUNT
FIXTURES: dict[str, Claim] = {}


def fixture(id, statement):
    def register(fn):
        FIXTURES[id] = Claim(id, statement, "golden", "fixture", fn)
        return fn
    return register


def load_expected() -> dict:
    text = resources.files("deon.lab").joinpath("golden.json").read_text(encoding="utf-8")
    return json.loads(text)


def canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _atomic(names, *universe):
    vocab = Vocabulary(tuple(names))
    restriction = vocab.models(*universe) if universe else None
    return vocab, ObligationSystem.atomic(vocab, restriction)


def _fmt(vocab, ms):
    return vocab.format_set(ms)


@fixture("example-count", "counting distances break betweenness along a quality chain")
def _count():
    vocab, sys = _atomic("pqr")
    x, y, z = vocab.parse_model("001"), vocab.parse_model("110"), vocab.parse_model("000")
    fam, qc, qs = sys.family, sys.quality(COUNT), sys.quality(SET)
    return {
        "d_c(x,y)": dist_count(x, y, fam),
        "d_c(x,z)": dist_count(x, z, fam),
        "d_c(z,y)": dist_count(z, y, fam),
        "chain y<x<z (count)": qc.lt(y, x) and qc.lt(x, z),
        "x in [y,z]_c": x in interval(y, z, sys.universe, COUNT, fam),
        "profile(x)": sorted(fam.labels_of(fam.coords(x))),
        "profile(y)": sorted(fam.labels_of(fam.coords(y))),
        "x vs z (set)": qs.compare(x, z).value,
    }


@fixture("example-dependent-1", "a closed set can miss a best element")
def _dependent_1():
    vocab, sys = _atomic("pq", "10", "01")
    xs = vocab.models("10")
    return {
        "best": _fmt(vocab, sys.best()),
        "X closed": is_downward_closed(xs, sys.restriction, sys.quality()).ok,
        "X contains best": sys.best() <= xs,
        "X is ui": is_ui(xs, sys).ok,
    }


@fixture("example-dependent-2", "closed with the best elements, yet not locally better and not in 𝒟(𝒪)")
def _dependent_2():
    vocab, sys = _atomic("pqrs", "1000", "0100", "1111")
    x, y, x2 = (vocab.parse_model(b) for b in ("1000", "0100", "1111"))
    xs = frozenset({x, x2})
    q, fam = sys.quality(), sys.family
    delta = DeltaAssignment({"r": 0, "s": 0})
    return {
        "best": _fmt(vocab, sys.best()),
        "X closed": is_downward_closed(xs, sys.restriction, q).ok,
        "x vs y": q.compare(x, y).value,
        "d_s(x,y)": sorted(dist_set(x, y, fam)),
        "d_s(x',y)": sorted(dist_set(x2, y, fam)),
        "closest to y in X": _fmt(vocab, closest(y, xs, SET, fam)),
        "X <_l,s CX": ceteris_paribus_improving(xs, sys.restriction, q, SET, fam).ok,
        "x,y satisfy delta": satisfies_delta(x, delta, sys) and satisfies_delta(y, delta, sys),
        "x' satisfies delta": satisfies_delta(x2, delta, sys),
        "delta r=s=0 refutes D(O)": not delta_failure(xs, sys, delta).ok,
        "X in D(O)": in_D_O(xs, sys).ok,
    }


@fixture("example-dependent-3", "closed with the best elements, yet not a neighbourhood of them")
def _dependent_3():
    vocab, sys = _atomic("pqrstu", "110111", "011100", "101000", "100000", "110000")
    x, x1, x2, y, z = (vocab.parse_model(b) for b in ("110111", "011100", "101000", "100000", "110000"))
    xs = frozenset({x, x1, x2, z})
    fam, best = sys.family, sys.best()
    return {
        "best": _fmt(vocab, best),
        "d_s(z,x)": sorted(dist_set(z, x, fam)),
        "d_s(z,x')": sorted(dist_set(z, x1, fam)),
        "d_s(z,x'')": sorted(dist_set(z, x2, fam)),
        "d_s(z,y)": sorted(dist_set(z, y, fam)),
        "d_s(y,x'')": sorted(dist_set(y, x2, fam)),
        "[z,x'']_s": _fmt(vocab, interval(z, x2, sys.restriction, SET, fam)),
        "X closed": is_downward_closed(xs, sys.restriction, sys.quality()).ok,
        "X neighbourhood of best": neighbourhood_failure(xs, best, sys.restriction, SET, fam) is None,
        "X improving neighbourhood of best":
            neighbourhood_failure(xs, best, sys.restriction, SET, fam, sys.quality()) is None,
    }


@fixture("example-not-global", "counting local betterness without closure; the set variant collapses")
def _not_global():
    vocab, sys = _atomic("pqrs", "1111", "1110", "0010", "0000")
    x2, y2, x, y = (vocab.parse_model(b) for b in ("1111", "1110", "0010", "0000"))
    xs = frozenset({x, x2})
    fam, qc, qs = sys.family, sys.quality(COUNT), sys.quality(SET)
    shrunk = sys.with_restriction(sys.restriction - {y})
    return {
        "quality (count)": {vocab.format(m): fam.coords(m).bit_count() for m in sorted(sys.restriction)},
        "d_c(x',y')": dist_count(x2, y2, fam),
        "d_c(x,y)": dist_count(x, y, fam),
        "d_c(x,y')": dist_count(x, y2, fam),
        "X <_l,c CX": ceteris_paribus_improving(xs, sys.restriction, qc, COUNT, fam).ok,
        "X closed (count)": is_downward_closed(xs, sys.restriction, qc).ok,
        "chain x'<y'<x<y (set)": qs.lt(x2, y2) and qs.lt(y2, x) and qs.lt(x, y),
        "X <_l,s CX": ceteris_paribus_improving(xs, sys.restriction, qs, SET, fam).ok,
        "X improving neighbourhood (count)":
            sys.best(COUNT) <= xs and neighbourhood_failure(xs, sys.best(COUNT), sys.restriction, COUNT, fam, qc) is None,
        "y' in [x',x]_c": y2 in interval(x2, x, sys.restriction, COUNT, fam),
        "without y: X <_l,c CX": ceteris_paribus_improving(xs, shrunk.restriction, qc, COUNT, fam).ok,
    }


@fixture("example-h-n-local", "improving neighbourhood under counting, yet not locally better")
def _h_n_local():
    vocab, sys = _atomic("pqrs", "0000", "0001", "0010", "1110")
    a, b, c, d = (vocab.parse_model(s) for s in ("0000", "0001", "0010", "1110"))
    xs = frozenset({a, c, d})
    fam, q = sys.family, sys.quality(COUNT)
    return {
        "best (count)": _fmt(vocab, sys.best(COUNT)),
        "[a,d]_c": _fmt(vocab, interval(a, d, sys.restriction, COUNT, fam)),
        "X improving neighbourhood (count)":
            neighbourhood_failure(xs, sys.best(COUNT), sys.restriction, COUNT, fam, q) is None,
        "b < a": q.lt(b, a),
        "a < CX": better_than_set(a, sys.restriction - xs, q, COUNT, fam),
        "X <_l,c CX": locally_better(xs, sys.restriction - xs, q, COUNT, fam).ok,
    }


@fixture("ross-derivable", "the disjunctive weakening p ∨ ¬q of p is not a derived obligation")
def _burnt_letter():
    vocab, sys = _atomic("pq")
    ross = models_of(parse_formula("p | ~q", vocab), vocab)
    verdict = check_hard_obligation(ross, sys)
    witness = verdict.witnesses.get("downward_closed")
    return {
        "R": _fmt(vocab, ross),
        "R class": classify_formula(parse_formula("p | ~q", vocab)).value,
        "R closed": verdict.criteria["downward_closed"],
        "closure witness": [vocab.format(m) for m in witness] if witness else None,
        "R derived": verdict.accept,
        "p derived": check_hard_obligation(models_of(parse_formula("p", vocab), vocab), sys).accept,
    }


@fixture("example-ross-paradox", "post the letter, water the plants: no license to post or not water")
def _ross_paradox():
    vocab = Vocabulary(("post", "water"))
    sys = ObligationSystem.atomic(vocab)
    verdicts = {}
    for text in ("post", "water", "post & water", "post | water", "post | ~water"):
        verdicts[text] = check_hard_obligation(models_of(parse_formula(text, vocab), vocab), sys).accept
    return verdicts


@fixture("example-3-obligations", "one obligation met is not better than two others met")
def _three_obligations():
    vocab, sys = _atomic("pqr")
    one, two = vocab.parse_model("100"), vocab.parse_model("011")
    return {
        "set": sys.quality(SET).compare(one, two).value,
        "count": sys.quality(COUNT).compare(one, two).value,
    }


def assassin():
    vocab = Vocabulary(("k", "o"))
    ranking = ExplicitQuality.from_layers([vocab.models(b) for b in ("00", "01", "11", "10")])
    sys = ObligationSystem.from_formulas(vocab, {"no_kill": "~k", "no_offer": "~o", "offer_if_kill": "k -> o"})
    return vocab, sys, ranking


@fixture("example-considerate-assassin", "not offering is not closed under the assassin's ranking, "
         "but holds softly")
def _assassin():
    vocab, sys, q = assassin()
    fam = IndexFamily.variables(vocab)
    no_offer = models_of(parse_formula("~o", vocab), vocab)
    ko, k_no = vocab.parse_model("11"), vocab.parse_model("10")
    hard = check_hard_obligation(no_offer, sys, q, fam=fam)
    soft = {}
    for budget in (1, 2):
        verdict = check_soft_obligation(no_offer, sys, q, Fraction(0.0), pairs=Fraction(budget / 16), fam=fam)
        soft[str(budget)] = verdict.accept
    return {
        "best": _fmt(vocab, frozenset(m for m in sys.universe if not any(q.lt(n, m) for n in sys.universe))),
        "ko vs k~o": q.compare(ko, k_no).value,
        "~o closed": hard.criteria["downward_closed"],
        "closure violations": sorted([vocab.format(a), vocab.format(b)]
                                     for a, b in closure_violations(no_offer, sys.universe, q)),
        "~o soft-accepted by pair budget": soft,
    }


@fixture("example-library", "do not pour water on books, except when they burn")
def _library():
    vocab = Vocabulary(("fire", "water"))
    q = ExplicitQuality.from_layers([vocab.models(b) for b in ("00", "11", "10", "01")])
    sys = ObligationSystem.from_formulas(vocab, {"dry": "~water", "extinguish": "fire -> water"})
    fam = IndexFamily.variables(vocab)
    dry = models_of(parse_formula("~water", vocab), vocab)
    hard = check_hard_obligation(dry, sys, q, fam=fam)
    soft = check_soft_obligation(dry, sys, q, Fraction(0.0), pairs=Fraction(1 / 16), fam=fam)
    return {
        "~water hard": hard.accept,
        "closure violations": sorted([vocab.format(a), vocab.format(b)]
                                     for a, b in closure_violations(dry, sys.universe, q)),
        "~water soft (one pair allowed)": soft.accept,
    }


assert all(c.status != REFUTABLE for c in FIXTURES.values())
