"""Running the claim registry: the full suite and targeted counterexample search."""

from __future__ import annotations

import itertools
import json
import logging
import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from ..errors import BadParameters, BudgetExhausted, ClaimFailure
from ..io import render, system_to_dict
from ..obligations import ObligationSystem
from .claims import REFUTABLE, THEOREM, Claim, ordered_claims
from .context import Context
from .golden import canonical, load_expected
from .systems import LETTERS, all_subsets, atomic_systems, random_systems, sampled_subsets, system_key, vocabulary

log = logging.getLogger(__name__)

DEFAULT_SEED = 1
RANDOM_SYSTEMS = 1000
EXHAUSTIVE_VARS = 3
DEFAULT_BUDGET = 100_000
EXHAUSTIVE_LIMIT = 1 << 20
KEEP = 3  # counterexamples kept per claim


@dataclass
class SearchReport:
    claim: str
    status: str
    level: str
    instances: int = 0
    counterexamples: list = field(default_factory=list)
    seed: int = DEFAULT_SEED
    coverage: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        if self.status == REFUTABLE:
            return bool(self.counterexamples)
        return not self.counterexamples

    def to_json(self) -> dict:
        """Report as a JSON object.  Timing is left out so reruns compare equal."""
        return {
            "claim": self.claim,
            "status": self.status,
            "level": self.level,
            "instances": self.instances,
            "counterexamples": self.counterexamples,
            "seed": self.seed,
            "ok": self.ok,
            "coverage": dict(sorted(self.coverage.items())),
        }


def reports_to_jsonl(reports: Iterable[SearchReport]) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True, ensure_ascii=False) + "\n" for r in reports)


# --- instances ---------------------------------------------------------------------


@dataclass
class Instance:
    """One system plus the candidate sets to try on it."""

    space: str
    ctx: Context
    subsets: list
    family: bool  # evaluate family-level claims here


def _with_shared_full(systems: Iterable[ObligationSystem]) -> Iterator[Context]:
    fulls = {}
    for sys in systems:
        ctx = Context(sys)
        key = (sys.vocab.names, sys.names, sys.sets)
        if key not in fulls:
            fulls[key] = ctx.full
        ctx.__dict__["full"] = fulls[key]
        yield ctx


def exhaustive_instances(max_vars=EXHAUSTIVE_VARS, min_vars=1) -> Iterator[Instance]:
    for ctx in _with_shared_full(atomic_systems(max_vars, min_vars)):
        yield Instance("exhaustive", ctx, list(all_subsets(ctx.universe)), ctx.universe == ctx.sys.universe)


def random_instances(count=RANDOM_SYSTEMS, seed=DEFAULT_SEED) -> Iterator[Instance]:
    for sys, rng in random_systems(count, seed):
        ctx = Context(sys)
        yield Instance("random", ctx, sampled_subsets(ctx, rng), True)


def _counterexample(inst: Instance, xs, detail) -> dict:
    vocab = inst.ctx.sys.vocab
    system = system_to_dict(inst.ctx.sys)
    del system["quality"]  # claims name their own variant
    out = {"space": inst.space, "system": system}
    if xs is not None:
        out["X"] = vocab.format_set(xs)
    if isinstance(detail, dict):
        out["detail"] = render(detail, vocab)
    return out


def _minimality(cex: dict) -> tuple:
    system = cex["system"]
    universe = system.get("universe")
    size = len(universe) if universe is not None else 1 << len(system["variables"])
    return (size, len(system["obligations"]), json.dumps(cex, sort_keys=True))


class _Tally:
    def __init__(self, claim: Claim, seed: int, keep: int = KEEP):
        self.claim = claim
        self.report = SearchReport(claim.id, claim.status, claim.level, seed=seed)
        self.coverage = Counter()
        self.keep = keep

    @property
    def done(self) -> bool:
        return len(self.report.counterexamples) >= self.keep

    def visit(self, inst: Instance, budget: int | None = None) -> int:
        """Evaluate the claim on one instance; returns the number of checks made."""
        claim, ctx = self.claim, inst.ctx
        if self.done:
            return 0
        if claim.level == "family" and not inst.family:
            return 0
        if claim.independent_only and not ctx.independent:
            return 0
        if claim.max_universe is not None and len(ctx.universe) > claim.max_universe:
            self.coverage[f"{inst.space}-skipped"] += 1
            return 0
        start = time.perf_counter()
        made = 0
        if claim.level == "set":
            for xs in inst.subsets:
                if budget is not None and made >= budget:
                    break
                made += 1
                verdict = claim.check(ctx.props(xs))
                if verdict is not True:
                    self.report.counterexamples.append(_counterexample(inst, xs, verdict))
                    if self.done:
                        break
        else:
            made = 1
            detail = claim.check(ctx)
            if detail is not None:
                self.report.counterexamples.append(_counterexample(inst, None, detail))
        self.coverage[inst.space] += made
        self.report.instances += made
        self.report.elapsed += time.perf_counter() - start
        return made

    def finish(self) -> SearchReport:
        self.report.coverage = dict(self.coverage)
        return self.report


def _run_single(claim: Claim, seed: int) -> SearchReport:
    start = time.perf_counter()
    report = SearchReport(claim.id, claim.status, claim.level, instances=1, seed=seed)
    if claim.level == "fixture":
        expected = load_expected().get(claim.id)
        actual = claim.check()
        if expected is None or canonical(actual) != canonical(expected):
            report.counterexamples.append({"expected": expected, "actual": actual})
    else:
        detail = claim.check()
        if detail is not None:
            report.counterexamples.append({"detail": detail})
    report.coverage = {claim.level: 1}
    report.elapsed = time.perf_counter() - start
    return report


def _evaluate(claims: list[Claim], seed: int, random_count: int) -> list[SearchReport]:
    single = [c for c in claims if c.level in ("fixture", "global")]
    tallies = [_Tally(c, seed) for c in claims if c.level not in ("fixture", "global")]
    reports = [_run_single(c, seed) for c in single]
    if tallies:
        # one pass over the instance spaces; the per-system caches are shared by all claims
        for inst in itertools.chain(exhaustive_instances(), random_instances(random_count, seed)):
            for tally in tallies:
                tally.visit(inst)
        reports += [t.finish() for t in tallies]
    return reports


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DEON_THREADS", "1")))
    except ValueError:
        return 1


def _worker(ids, seed, random_count):
    return _evaluate(ordered_claims(ids), seed, random_count)


def run_paper_suite(ids: Iterable[str] | None = None, seed: int = DEFAULT_SEED,
                    random_count: int = RANDOM_SYSTEMS, threads: int | None = None,
                    strict: bool = False) -> list[SearchReport]:
    """Evaluate every registered claim (or the given ids) and return reports sorted by id.

    Theorems and refutable claims run over all atomic systems with at most
    three variables (every nonempty U′, every X ⊆ U′) and then over
    ``random_count`` seeded random systems.  With ``strict`` a
    :class:`ClaimFailure` is raised if any claim misses its expected status.
    """
    claims = ordered_claims(ids)
    if ids is not None:
        unknown = set(ids) - {c.id for c in claims}
        if unknown:
            raise BadParameters(f"unknown claim: {', '.join(sorted(unknown))}")
    threads = threads or _threads()
    if threads > 1 and len(claims) > 1:
        # shard claims by id; each shard re-enumerates the spaces deterministically
        shards = [[c.id for c in claims[i::threads]] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_worker, shards, [seed] * threads, [random_count] * threads)
            reports = [r for part in parts for r in part]
    else:
        reports = _evaluate(claims, seed, random_count)
    reports.sort(key=lambda r: r.claim)
    for r in reports:
        log.info("%s: %d instances %s, %d counterexamples", r.claim, r.instances, r.coverage, len(r.counterexamples))
    if strict:
        failed = [r for r in reports if not r.ok]
        if failed:
            raise ClaimFailure("; ".join(_failure_line(r) for r in failed))
    return reports


def _failure_line(r: SearchReport) -> str:
    if r.status == REFUTABLE:
        return f"{r.claim}: no counterexample in {r.instances} instances"
    return f"{r.claim}: {json.dumps(r.counterexamples[0], sort_keys=True)}"


# --- targeted search ---------------------------------------------------------------


def _atomic_space_size(n: int, level: str) -> int:
    return (3 ** (1 << n) - 1) if level == "set" else (1 << (1 << n)) - 1


def _sampled_atomic(n: int, rng: random.Random) -> Iterator[Instance]:
    vocab = vocabulary(n)
    base = ObligationSystem.atomic(vocab)
    top = 1 << n
    full = Context(base)
    while True:
        size = rng.randint(1, min(top, 10))
        universe = frozenset(rng.sample(range(top), size))
        ctx = Context(base.with_restriction(universe))
        ctx.__dict__["full"] = full
        yield Instance("sampled", ctx, list(all_subsets(universe)), universe == base.universe)


def _arbitrary_systems(n: int, k: int) -> list[ObligationSystem]:
    vocab = vocabulary(n)
    top = 1 << n
    subsets = [frozenset(m for m in range(top) if mask >> m & 1) for mask in range(1 << top)]
    names = tuple(f"O{i + 1}" for i in range(k))
    out = []
    for sets in itertools.product(subsets, repeat=k):
        for universe in subsets[1:]:
            out.append(ObligationSystem(vocab, names, sets, universe))
    out.sort(key=system_key)
    return out


def _sampled_arbitrary(n, k, rng: random.Random) -> Iterator[Instance]:
    from .systems import random_system

    while True:
        nn = n or rng.randint(1, 4)
        kk = rng.randint(0, 4) if k is None else k
        sys = random_system(nn, kk, rng.choice((0.25, 0.5, 0.75)), rng.randrange(2 ** 31))
        ctx = Context(sys)
        subsets = list(all_subsets(ctx.universe)) if len(ctx.universe) <= 8 else sampled_subsets(ctx, rng)
        yield Instance("sampled", ctx, subsets, True)


def _search_space(claim: Claim, seed: int, n_vars: int | None, n_obl: int | None):
    """Instances for a search, plus whether they are enumerated exhaustively in minimal order."""
    rng = random.Random(f"search:{claim.id}:{seed}:{n_vars}:{n_obl}")
    if n_vars is None and n_obl is None:
        return itertools.chain(exhaustive_instances(), random_instances(10 ** 9, seed)), True
    if n_vars is not None and not 1 <= n_vars <= len(LETTERS):
        raise BadParameters(f"--vars must lie in 1..{len(LETTERS)}")
    if n_obl is not None and not 0 <= n_obl <= 8:
        raise BadParameters("--obligations must lie in 0..8")
    if n_obl is None:
        if _atomic_space_size(n_vars, claim.level) <= EXHAUSTIVE_LIMIT:
            return exhaustive_instances(n_vars, n_vars), True
        return _sampled_atomic(n_vars, rng), False
    if n_vars is not None:
        top = 1 << n_vars
        size = (1 << (top * n_obl)) * (3 ** top if claim.level == "set" else 1 << top)
        if size <= EXHAUSTIVE_LIMIT:
            systems = _arbitrary_systems(n_vars, n_obl)
            return (Instance("exhaustive", ctx, list(all_subsets(ctx.universe)), ctx.universe == ctx.sys.universe)
                    for ctx in _with_shared_full(systems)), True
    return _sampled_arbitrary(n_vars, n_obl, rng), False


def search_counterexample(claim: Claim | str, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                          n_vars: int | None = None, n_obl: int | None = None) -> SearchReport:
    """Look for counterexamples to one claim within ``budget`` checks.

    Without ``n_vars``/``n_obl`` the search walks the atomic systems with at
    most three variables in minimal order, then seeded random systems.  A
    given configuration is enumerated exhaustively when it has at most 2^20
    cases and sampled otherwise.  Counterexamples come minimal first (fewest
    models in U′, then fewest obligations).  A refutable claim with no
    counterexample raises :class:`BudgetExhausted`; the report is attached.
    """
    if isinstance(claim, str):
        found = ordered_claims([claim])
        if not found:
            raise BadParameters(f"unknown claim: {claim}")
        claim = found[0]
    if budget < 1:
        raise BadParameters("budget must be positive")
    if claim.level in ("fixture", "global"):
        return _run_single(claim, seed)
    instances, ordered = _search_space(claim, seed, n_vars, n_obl)
    tally = _Tally(claim, seed)
    used = 0
    for inst in instances:
        if used >= budget or tally.done:
            break
        used += max(1, tally.visit(inst, budget - used))
    report = tally.finish()
    if not ordered:
        report.counterexamples.sort(key=_minimality)
    if claim.status == REFUTABLE and not report.counterexamples:
        exc = BudgetExhausted(f"{claim.id}: no counterexample in {report.instances} instances")
        exc.report = report
        raise exc
    return report


__all__ = ["SearchReport", "run_paper_suite", "search_counterexample", "reports_to_jsonl", "THEOREM", "REFUTABLE"]
