"""Propositional vocabulary, formulas and models.

A model over a vocabulary of ``n`` variables is a plain ``int`` whose bit ``i``
is the truth value of variable ``i``.  Model sets are ``frozenset`` objects of
such ints.  The canonical text form of a model is a bitstring in vocabulary
order, leftmost character for the first variable, so ``"110"`` over
``(p, q, r)`` makes ``p`` and ``q`` true and ``r`` false.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import (
    EmptySet,
    FormulaSyntaxError,
    UnknownVariable,
    VocabularyError,
)

MAX_VARIABLES = 24
RESERVED = frozenset({"T", "F"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Vocabulary:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise VocabularyError("vocabulary needs at least one variable")
        if len(names) > MAX_VARIABLES:
            raise VocabularyError(f"at most {MAX_VARIABLES} variables supported, got {len(names)}")
        if len(set(names)) != len(names):
            raise VocabularyError(f"duplicate variable names in {names}")
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name) or name in RESERVED:
                raise VocabularyError(f"bad variable name {name!r}")

    @property
    def n(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def universe(self) -> frozenset[int]:
        return frozenset(range(1 << self.n))

    def format(self, m: int) -> str:
        return "".join("1" if m >> i & 1 else "0" for i in range(self.n))

    def parse_model(self, bits: str) -> int:
        if len(bits) != self.n or set(bits) - {"0", "1"}:
            raise VocabularyError(f"{bits!r} is not a {self.n}-bit model")
        return sum(1 << i for i, c in enumerate(bits) if c == "1")

    def models(self, *bitstrings: str) -> frozenset[int]:
        return frozenset(self.parse_model(b) for b in bitstrings)

    def format_set(self, ms: Iterable[int]) -> list[str]:
        return sorted(self.format(m) for m in ms)


def set_key(vocab: Vocabulary, ms: Iterable[int]) -> tuple:
    """Canonical order for model sets: cardinality, then sorted bitstrings."""
    strs = vocab.format_set(ms)
    return (len(strs), tuple(strs))


# --- formulas ---------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands")


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


TRUE = Const(True)
FALSE = Const(False)


def variables(f: Formula) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return variables(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(variables(a) for a in f.args))
    return variables(f.left) | variables(f.right)


# --- parser -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><->|->|[~&|()¬∧∨→↔]|⊤|⊥))"
)
_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), start))
        elif m.group("op") in ("⊤", "⊥"):
            tokens.append(("ident", "T" if m.group("op") == "⊤" else "F", start))
        else:
            op = m.group("op")
            tokens.append(("op", _ALIASES.get(op, op), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, vocab):
        self.text = text
        self.vocab = vocab
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return FormulaSyntaxError(message, self.text, tok[2])

    def parse(self):
        f = self.iff()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def iff(self):
        left = self.implies()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self):
        args = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self):
        args = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        kind, value, pos = self.take()
        if value == "~":
            return Not(self.unary())
        if value == "(":
            f = self.iff()
            if self.peek()[1] != ")":
                raise self.error("expected ')'")
            self.take()
            return f
        if kind == "ident":
            if value == "T":
                return TRUE
            if value == "F":
                return FALSE
            if self.vocab is not None and value not in self.vocab.names:
                raise UnknownVariable(value, pos)
            return Var(value)
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of input", self.text, pos)
        raise FormulaSyntaxError(f"unexpected {value!r}", self.text, pos)


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse ``text`` into a formula.

    Operators by falling precedence: ``~``, ``&``, ``|``, ``->``, ``<->``.
    ``->`` and ``<->`` associate to the right; an unparenthesised chain of
    ``&`` (or ``|``) becomes one n-ary node.  Unicode connectives are accepted.
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", text, 0)
    return _Parser(text, vocab).parse()


# --- printing ---------------------------------------------------------------

_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _level(f):
    return _LEVEL.get(type(f), 6)


def pretty(f: Formula, unicode: bool = False) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    ops = {"~": "¬", "&": " ∧ ", "|": " ∨ ", "->": " → ", "<->": " ↔ "} if unicode else {
        "~": "~", "&": " & ", "|": " | ", "->": " -> ", "<->": " <-> "}

    def wrap(g, needs):
        s = go(g)
        return f"({s})" if needs else s

    def go(g):
        if isinstance(g, Const):
            return ("⊤" if g.value else "⊥") if unicode else ("T" if g.value else "F")
        if isinstance(g, Var):
            return g.name
        if isinstance(g, Not):
            return ops["~"] + wrap(g.arg, _level(g.arg) < 5)
        if isinstance(g, And):
            return ops["&"].join(wrap(a, _level(a) <= 4) for a in g.args)
        if isinstance(g, Or):
            return ops["|"].join(wrap(a, _level(a) <= 3) for a in g.args)
        if isinstance(g, Implies):
            return wrap(g.left, _level(g.left) <= 2) + ops["->"] + wrap(g.right, _level(g.right) < 2)
        return wrap(g.left, _level(g.left) <= 1) + ops["<->"] + go(g.right)

    return go(f)


# --- semantics --------------------------------------------------------------


def compile_formula(f: Formula, vocab: Vocabulary) -> Callable[[int], bool]:
    """Return a predicate on models; unknown variables raise here, not later."""
    if isinstance(f, Const):
        v = f.value
        return lambda m: v
    if isinstance(f, Var):
        bit = 1 << vocab.index(f.name)
        return lambda m: bool(m & bit)
    if isinstance(f, Not):
        g = compile_formula(f.arg, vocab)
        return lambda m: not g(m)
    if isinstance(f, And):
        gs = [compile_formula(a, vocab) for a in f.args]
        return lambda m: all(g(m) for g in gs)
    if isinstance(f, Or):
        gs = [compile_formula(a, vocab) for a in f.args]
        return lambda m: any(g(m) for g in gs)
    left, right = compile_formula(f.left, vocab), compile_formula(f.right, vocab)
    if isinstance(f, Implies):
        return lambda m: not left(m) or right(m)
    return lambda m: left(m) == right(m)


def models_of(f: Formula, vocab: Vocabulary, ambient: Iterable[int] | None = None) -> frozenset[int]:
    """Members of ``ambient`` (default: every model) satisfying ``f``."""
    sat = compile_formula(f, vocab)
    if ambient is None:
        ambient = range(1 << vocab.n)
    return frozenset(m for m in ambient if sat(m))


def strongest_conjunction(ms: Iterable[int], vocab: Vocabulary) -> Formula:
    """The conjunction of all literals that are constant across ``ms``."""
    ms = list(ms)
    if not ms:
        raise EmptySet("strongest conjunction of the empty model set is undefined")
    all_true = all_false = (1 << vocab.n) - 1
    for m in ms:
        all_true &= m
        all_false &= ~m
    literals = []
    for i, name in enumerate(vocab.names):
        if all_true >> i & 1:
            literals.append(Var(name))
        elif all_false >> i & 1:
            literals.append(Not(Var(name)))
    if not literals:
        return TRUE
    return literals[0] if len(literals) == 1 else And(tuple(literals))


class FormulaClass(enum.Enum):
    IN_L_AND = "L_and"
    IN_L_OR_AND = "L_or_and"
    GENERAL = "general"


def _literal(f):
    if isinstance(f, Var):
        return f.name, True
    if isinstance(f, Not) and isinstance(f.arg, Var):
        return f.arg.name, False
    return None


def _is_consistent_conjunction(f) -> bool:
    if f == TRUE:
        return True
    parts = f.args if isinstance(f, And) else (f,)
    seen = {}
    for part in parts:
        lit = _literal(part)
        if lit is None:
            return False
        name, sign = lit
        if seen.setdefault(name, sign) != sign:
            return False
    return True


def classify_formula(f: Formula) -> FormulaClass:
    """Syntactic membership in the consistent-conjunction classes; no normalisation."""
    if _is_consistent_conjunction(f):
        return FormulaClass.IN_L_AND
    if isinstance(f, Or) and all(_is_consistent_conjunction(a) for a in f.args):
        return FormulaClass.IN_L_OR_AND
    return FormulaClass.GENERAL


def describe(ms: Iterable[int], vocab: Vocabulary) -> Formula:
    """A readable formula with exactly the models ``ms``: a disjunction of φ_M blocks.

    Greedily covers ``ms`` with the largest subcubes it contains, which gives
    short renderings such as ``p | q`` for the three models of a disjunction.
    """
    target = frozenset(ms)
    if not target:
        return FALSE
    if len(target) == 1 << vocab.n:
        return TRUE
    cubes = _maximal_cubes(target, vocab.n)
    uncovered = set(target)
    chosen = []
    while uncovered:
        best = max(cubes, key=lambda c: (len(c[2] & uncovered), len(c[2]), -c[0], -c[1]))
        chosen.append(best)
        uncovered -= best[2]
    terms = [strongest_conjunction(c[2], vocab) for c in sorted(chosen, key=lambda c: (-len(c[2]), c[0], c[1]))]
    return terms[0] if len(terms) == 1 else Or(tuple(terms))


def _maximal_cubes(target, n) -> list[tuple[int, int, frozenset[int]]]:
    # cube = (fixed-bit mask, values on the mask); enumerate all cubes inside target
    cubes = []
    full = (1 << n) - 1
    for mask in range(1 << n):
        free = full & ~mask
        free_bits = [1 << i for i in range(n) if free >> i & 1]
        seen_values = set()
        for m in target:
            value = m & mask
            if value in seen_values:
                continue
            seen_values.add(value)
            members = frozenset(_expand(value, free_bits))
            if members <= target:
                cubes.append((mask, value, members))
    maximal = []
    for mask, value, members in cubes:
        fixed = [1 << i for i in range(n) if mask >> i & 1]
        # maximal iff no fixed bit can be freed without leaving target
        if not any(all(m ^ b in target for m in members) for b in fixed):
            maximal.append((mask, value, members))
    return maximal


def _expand(base, free_bits) -> Iterator[int]:
    out = [base]
    for b in free_bits:
        out += [m | b for m in out]
    return iter(out)
