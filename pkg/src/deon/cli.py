"""Command-line front end.

Exit codes: 0 accept / claim outcome as expected, 1 reject / claim failure,
2 usage, input or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys

from .errors import BudgetExhausted, DeonError, LimitExceeded
from .io import load_system, render, verdict_to_dict
from .logic import Vocabulary, describe, models_of, parse_formula, pretty
from .metric import Variant, interval, neighbourhood_pairs
from .obligations import ObligationOptions, check_hard_obligation, check_soft_obligation, derive_obligations
from .quality import best_elements, closure_violations

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
_BITLIST = re.compile(r"^\s*[01]+(\s*,\s*[01]+)*\s*$")


class UsageError(Exception):
    pass


def _out(text=""):
    sys.stdout.write(text + "\n")


def _err(text):
    sys.stderr.write(f"deon: {text}\n")


# --- shared setup --------------------------------------------------------------------


def _candidate(text: str, sf):
    """Formula (evaluated over U, then cut down to U′) or bitstrings: "10,11" or a JSON list."""
    vocab, sys_ = sf.system.vocab, sf.system
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            bits = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"candidate: invalid bitstring list ({exc.msg})") from exc
    elif _BITLIST.match(stripped):
        bits = [b.strip() for b in stripped.split(",")]
    else:
        return models_of(parse_formula(text, vocab), vocab) & sys_.restriction
    if not isinstance(bits, list):
        raise UsageError("candidate: expected a list of bitstrings")
    models = set()
    for b in bits:
        if not isinstance(b, str) or len(b) != vocab.n or set(b) - {"0", "1"}:
            raise UsageError(f"candidate: {b!r} is not a bitstring of width {vocab.n}")
        models.add(vocab.parse_model(b))
    outside = models - sys_.restriction
    if outside:
        raise UsageError(f"candidate: {vocab.format(min(outside))} lies outside the restricted universe")
    return frozenset(models)


def _setup(args):
    sf = load_system(args.system)
    variant = Variant(args.variant) if args.variant else sf.variant
    if sf.explicit:
        q = sf.quality_relation()
    else:
        q = sf.system.quality(variant)
    options = ObligationOptions(variant=variant, require_cp=args.cp, require_nontrivial=not args.allow_trivial)
    return sf, q, options


def _fmt_pair(vocab, q, a, b):
    return f"{vocab.format(a)} {'≺' if q.lt(a, b) else '≼'} {vocab.format(b)}"


def _witness_text(name, w, vocab, q):
    if w is None:
        return ""
    if name == "contains_ideal":
        return f"ideal {vocab.format(w)} missing"
    if name == "downward_closed":
        if isinstance(w, tuple):
            return _fmt_pair(vocab, q, *w)
        return "exceptions: " + ", ".join(_fmt_pair(vocab, q, a, b) for a, b in sorted(w))
    if name == "improving_neighbourhood":
        if isinstance(w, tuple) and w and w[0] == "missing":
            return f"ideal {vocab.format(w[1])} missing"
        if isinstance(w, tuple):
            y, x, out = w
            return f"{vocab.format(out)} ∈ [{vocab.format(x)},{vocab.format(y)}] lies outside"
        return "exceptions: " + ", ".join(f"({vocab.format(y)},{vocab.format(x)})" for y, x in sorted(w))
    if name == "ceteris_paribus":
        if isinstance(w, tuple) and len(w) == 2 and all(isinstance(v, int) for v in w):
            return f"{vocab.format(w[0])} vs closest {vocab.format(w[1])} is not an improvement"
        return json.dumps(render(w, vocab), ensure_ascii=False)
    return json.dumps(render(w, vocab), ensure_ascii=False)


def _verdict(args, sf, q, options, xs):
    fam = sf.family()
    if args.soft:
        size = sf.size
        if args.epsilon is not None:
            from .size import Fraction

            size = Fraction(args.epsilon)
        if size is None:
            raise UsageError("--soft needs a size: give --epsilon or a 'size' entry in the system file")
        return "soft", check_soft_obligation(xs, sf.system, q, size, options, pairs=sf.pair_size, fam=fam)
    return "hard", check_hard_obligation(xs, sf.system, q, options, fam=fam)


# --- commands ------------------------------------------------------------------------


def cmd_check(args, explain=False) -> int:
    sf, q, options = _setup(args)
    vocab = sf.system.vocab
    xs = _candidate(args.candidate, sf)
    mode, verdict = _verdict(args, sf, q, options, xs)
    if args.json:
        out = verdict_to_dict(xs, verdict, vocab, mode)
        out["formula"] = pretty(describe(xs, vocab))
        if explain:
            out["explain"] = _explain_data(sf, q, options, xs)
        _out(json.dumps(out, ensure_ascii=False, sort_keys=True))
    else:
        _out(f"candidate: {pretty(describe(xs, vocab), unicode=True)}  {{{', '.join(vocab.format_set(xs))}}}")
        for name, ok in verdict.criteria.items():
            note = "" if ok else _witness_text(name, verdict.witnesses.get(name), vocab, q)
            _out(f"  {name:<24} {'yes' if ok else 'NO '}  {note}".rstrip())
        for name, value in verdict.info.items():
            if isinstance(value, bool):
                _out(f"  ({name}: {'yes' if value else 'no'})")
        if explain:
            _print_explain(_explain_data(sf, q, options, xs))
        _out(f"verdict: {'accept' if verdict.accept else 'reject'}")
    return EXIT_OK if verdict.accept else EXIT_FAIL


def _explain_data(sf, q, options, xs):
    """Everything the criteria look at, in bitstring form."""
    sys_, vocab = sf.system, sf.system.vocab
    universe, fam = sys_.restriction, sf.family()
    best = best_elements(universe, q)
    pairs = neighbourhood_pairs(xs, best & xs, options.variant, fam, q)
    return {
        "universe": vocab.format_set(universe),
        "best": vocab.format_set(best),
        "closure_violations": sorted([vocab.format(a), vocab.format(b)] for a, b in closure_violations(xs, universe, q)),
        "neighbourhood": [
            {"y": vocab.format(y), "ideal": vocab.format(x),
             "interval": vocab.format_set(interval(x, y, universe, options.variant, fam)),
             "escapes": vocab.format_set(interval(x, y, universe, options.variant, fam) - xs)}
            for y, x in pairs
        ],
    }


def _print_explain(data):
    _out(f"universe: {' '.join(data['universe'])}")
    _out(f"best:     {' '.join(data['best'])}")
    if data["closure_violations"]:
        _out("closure violations (a ≼ b, b in X, a not in X):")
        for a, b in data["closure_violations"]:
            _out(f"  {a} ≼ {b}")
    _out("neighbourhood pairs (y, closest ideal not worse, interval):")
    for row in data["neighbourhood"]:
        tail = f"  escapes: {' '.join(row['escapes'])}" if row["escapes"] else ""
        _out(f"  {row['y']} -> {row['ideal']}  [{' '.join(row['interval'])}]{tail}")


def cmd_derive(args) -> int:
    sf, q, options = _setup(args)
    if args.limit is not None and args.limit < 0:
        raise UsageError("--limit must be nonnegative")
    vocab = sf.system.vocab
    found, truncated = [], False
    try:
        for xs, _ in derive_obligations(sf.system, q, options, limit=args.limit, fam=sf.family()):
            found.append(xs)
            if not args.json:
                _out(f"{{{', '.join(vocab.format_set(xs))}}}  {pretty(describe(xs, vocab), unicode=True)}")
    except LimitExceeded:
        truncated = True
    if args.json:
        _out(json.dumps({
            "sets": [{"models": vocab.format_set(xs), "formula": pretty(describe(xs, vocab))} for xs in found],
            "count": len(found),
            "truncated": truncated,
            "limit": args.limit,
        }, ensure_ascii=False, sort_keys=True))
    else:
        if truncated:
            _out(f"limit of {args.limit} reached; output truncated")
        _out(f"{len(found)} derived obligation{'s' if len(found) != 1 else ''}")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .lab.suite import reports_to_jsonl, run_paper_suite

    reports = run_paper_suite(args.claim or None, seed=args.seed, random_count=args.random)
    if args.json:
        sys.stdout.write(reports_to_jsonl(reports))
    else:
        for r in reports:
            mark = "ok  " if r.ok else "FAIL"
            found = f"{len(r.counterexamples)} counterexample{'s' if len(r.counterexamples) != 1 else ''}"
            _out(f"{mark} {r.claim:<46} {r.status:<9} {r.instances:>6} instances  {found}")
            if not r.ok and r.counterexamples:
                _out("     " + json.dumps(r.counterexamples[0], ensure_ascii=False, sort_keys=True))
        failed = sum(not r.ok for r in reports)
        _out(f"{len(reports)} claims, {failed} failed")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_search(args) -> int:
    from .lab.claims import ordered_claims
    from .lab.suite import search_counterexample

    found = ordered_claims([args.claim])
    if not found:
        raise UsageError(f"unknown claim: {args.claim}")
    claim = found[0]
    try:
        report = search_counterexample(claim, budget=args.budget, seed=args.seed,
                                       n_vars=args.vars, n_obl=args.obligations)
    except BudgetExhausted as exc:
        report = exc.report
    if args.json:
        _out(json.dumps(report.to_json(), ensure_ascii=False, sort_keys=True))
    elif report.counterexamples:
        _out(f"{claim.id}: counterexample ({report.instances} instances checked)")
        _print_counterexample(report.counterexamples[0])
    else:
        _out(f"{claim.id}: no counterexample ({report.instances} instances checked)")
    return EXIT_OK if report.ok else EXIT_FAIL


def _print_counterexample(cex):
    system = cex.get("system")
    if system is None:
        _out("  " + json.dumps(cex, ensure_ascii=False, sort_keys=True))
        return
    vocab = Vocabulary(tuple(system["variables"]))
    _out(f"  variables:   {' '.join(vocab.names)}")
    for name, bits in system["obligations"].items():
        _out(f"  obligation   {name} = {pretty(describe(vocab.models(*bits), vocab), unicode=True)}")
    universe = system.get("universe", vocab.format_set(vocab.universe()))
    _out(f"  universe:    {' '.join(universe)}")
    if "X" in cex:
        _out(f"  X:           {' '.join(cex['X']) or '∅'}")
    if "detail" in cex:
        _out(f"  detail:      {json.dumps(cex['detail'], ensure_ascii=False, sort_keys=True)}")


# --- parser --------------------------------------------------------------------------


def _obligation_flags(p):
    p.add_argument("--variant", choices=[v.value for v in Variant], default=None,
                   help="distance and quality variant (default: from the system file)")
    p.add_argument("--cp", action="store_true", help="also require ceteris paribus improvement")
    p.add_argument("--allow-trivial", action="store_true", help="accept X = U′ and X = ∅")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deon", description="Check and derive obligations over finite models.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("check", "check one candidate obligation"),
                            ("explain", "check with a full dump of what the criteria looked at")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system", help="system file (JSON)")
        p.add_argument("candidate", help='formula, or bitstrings such as "10,11"')
        _obligation_flags(p)
        p.add_argument("--soft", action="store_true", help="soft obligation: conditions hold almost everywhere")
        p.add_argument("--epsilon", type=float, default=None, help="exception budget for --soft")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("derive", help="list every derived obligation")
    p.add_argument("system")
    _obligation_flags(p)
    p.add_argument("--limit", type=int, default=None, help="stop after this many sets")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-paper", help="run the claim registry")
    p.add_argument("--claim", action="append", help="run only this claim (repeatable)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--random", type=int, default=1000, help="number of random systems")
    p.add_argument("--json", action="store_true", help="JSON lines, one object per claim")

    p = sub.add_parser("search", help="search for a counterexample to one claim")
    p.add_argument("claim")
    p.add_argument("--vars", type=int, default=None)
    p.add_argument("--obligations", type=int, default=None, help="number of arbitrary obligations")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--json", action="store_true")
    return parser


COMMANDS = {
    "check": cmd_check,
    "explain": lambda a: cmd_check(a, explain=True),
    "derive": cmd_derive,
    "verify-paper": cmd_verify_paper,
    "search": cmd_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DeonError) as exc:
        _err(str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
