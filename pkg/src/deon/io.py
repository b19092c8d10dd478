"""System files and JSON rendering of verdicts.

A system file is a JSON object::

    {
      "variables": ["p", "q"],
      "universe": "p | q",                      # optional: formula or bitstrings
      "obligations": {"O1": "p", "O2": ["01", "11"]},
      "quality": "set",                         # "set" | "count" | {"explicit": [[...], ...]}
      "size": {"epsilon": 0.1},                 # optional: {"epsilon": e} | {"ideal": [...]}
      "distance": "obligations"                 # optional: "obligations" | "variables"
    }

``size`` may carry a nested ``"pairs"`` spec of the same form, used for the
pair-valued criteria of soft obligations.  Bitstrings list variables left to
right.  Formulas are evaluated over the whole universe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DeonError, SystemFileError
from .logic import Vocabulary, models_of, parse_formula
from .metric import IndexFamily, Variant
from .obligations import DeltaAssignment, ObligationSystem, ObligationVerdict
from .quality import ExplicitQuality, QualityRelation
from .size import Fraction, Generator, SizeSpec

DISTANCES = ("obligations", "variables")


@dataclass(frozen=True)
class SystemFile:
    system: ObligationSystem
    quality: str | tuple[frozenset[int], ...] = "set"
    size: SizeSpec | None = None
    pair_size: SizeSpec | None = None
    distance: str | None = None

    @property
    def variant(self) -> Variant:
        return Variant.COUNT if self.quality == "count" else Variant.SET

    @property
    def explicit(self) -> bool:
        return not isinstance(self.quality, str)

    def quality_relation(self) -> QualityRelation:
        if self.explicit:
            return ExplicitQuality.from_layers(self.quality)
        return self.system.quality(self.variant)

    def family(self) -> IndexFamily:
        """Explicit rankings measure distance over variables unless told otherwise."""
        distance = self.distance or ("variables" if self.explicit else "obligations")
        if distance == "variables":
            return IndexFamily.variables(self.system.vocab)
        return self.system.family


# --- loading -----------------------------------------------------------------------


def _bitstrings(vocab, value, where):
    if not isinstance(value, list):
        raise SystemFileError(f"{where}: expected a formula or a list of bitstrings")
    out = set()
    for bits in value:
        if not isinstance(bits, str) or len(bits) != vocab.n or set(bits) - {"0", "1"}:
            raise SystemFileError(f"{where}: {bits!r} is not a bitstring of width {vocab.n}")
        out.add(vocab.parse_model(bits))
    return frozenset(out)


def _model_set(vocab, value, where):
    if isinstance(value, str):
        try:
            return models_of(parse_formula(value, vocab), vocab)
        except DeonError as exc:
            raise SystemFileError(f"{where}: {exc}") from exc
    return _bitstrings(vocab, value, where)


def _size(vocab, value, where="size"):
    if not isinstance(value, dict):
        raise SystemFileError(f"{where}: expected an object")
    keys = set(value) - {"pairs"}
    try:
        if keys == {"epsilon"}:
            eps = value["epsilon"]
            if isinstance(eps, bool) or not isinstance(eps, (int, float)):
                raise SystemFileError(f"{where}: epsilon must be a number")
            return Fraction(float(eps))
        if keys == {"ideal"}:
            return Generator(_model_set(vocab, value["ideal"], f"{where}.ideal"))
    except DeonError as exc:
        raise SystemFileError(f"{where}: {exc}") from exc
    raise SystemFileError(f"{where}: expected exactly one of 'epsilon' or 'ideal'")


def system_from_dict(data: dict) -> SystemFile:
    if not isinstance(data, dict):
        raise SystemFileError("a system file holds a JSON object")
    unknown = set(data) - {"variables", "universe", "obligations", "quality", "size", "distance"}
    if unknown:
        raise SystemFileError(f"unknown keys: {', '.join(sorted(unknown))}")
    names = data.get("variables")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise SystemFileError("'variables' must be a list of names")
    try:
        vocab = Vocabulary(tuple(names))
    except DeonError as exc:
        raise SystemFileError(str(exc)) from exc

    universe = vocab.universe()
    if "universe" in data:
        universe = _model_set(vocab, data["universe"], "universe")
        if not universe:
            raise SystemFileError("universe: the restricted universe is empty")

    obligations = data.get("obligations", {})
    if not isinstance(obligations, dict):
        raise SystemFileError("'obligations' must map names to formulas or bitstring lists")
    sets = [_model_set(vocab, v, f"obligations.{k}") for k, v in obligations.items()]
    try:
        system = ObligationSystem(vocab, tuple(obligations), sets, universe)
    except DeonError as exc:
        raise SystemFileError(str(exc)) from exc

    quality = data.get("quality", "set")
    if isinstance(quality, dict):
        if set(quality) != {"explicit"} or not isinstance(quality["explicit"], list):
            raise SystemFileError("quality: expected {\"explicit\": [[bitstrings], ...]}")
        layers = tuple(_bitstrings(vocab, layer, f"quality.explicit[{i}]")
                       for i, layer in enumerate(quality["explicit"]))
        seen = set()
        for layer in layers:
            if seen & layer:
                raise SystemFileError("quality: explicit layers overlap")
            if not layer <= universe:
                raise SystemFileError("quality: explicit layers must lie inside the universe")
            seen |= layer
        quality = layers
    elif quality not in ("set", "count"):
        raise SystemFileError("quality: expected \"set\", \"count\" or an explicit ranking")

    size = pairs = None
    if data.get("size") is not None:
        size = _size(vocab, data["size"])
        if "pairs" in data["size"]:
            pairs = _size(vocab, data["size"]["pairs"], "size.pairs")

    distance = data.get("distance")
    if distance is not None and distance not in DISTANCES:
        raise SystemFileError(f"distance: expected one of {DISTANCES}")
    return SystemFile(system, quality, size, pairs, distance)


def load_system(path: str | Path) -> SystemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from exc
    return system_from_dict(data)


# --- dumping -----------------------------------------------------------------------


def _size_to_dict(vocab, size):
    if isinstance(size, Fraction):
        return {"epsilon": size.epsilon}
    if isinstance(size, Generator):
        return {"ideal": vocab.format_set(size.ideal)}
    raise SystemFileError(f"{type(size).__name__} has no file form")


def system_to_dict(sf: SystemFile | ObligationSystem) -> dict:
    """Plain JSON form; every model set is written as a sorted bitstring list."""
    if isinstance(sf, ObligationSystem):
        sf = SystemFile(sf)
    sys, vocab = sf.system, sf.system.vocab
    out = {"variables": list(vocab.names)}
    if sys.restriction != sys.universe:
        out["universe"] = vocab.format_set(sys.restriction)
    out["obligations"] = {name: vocab.format_set(s) for name, s in zip(sys.names, sys.sets)}
    out["quality"] = ({"explicit": [vocab.format_set(layer) for layer in sf.quality]}
                      if sf.explicit else sf.quality)
    if sf.size is not None:
        out["size"] = _size_to_dict(vocab, sf.size)
        if sf.pair_size is not None:
            out["size"]["pairs"] = _size_to_dict(vocab, sf.pair_size)
    if sf.distance is not None:
        out["distance"] = sf.distance
    return out


def dump_system(sf: SystemFile | ObligationSystem, path: str | Path | None = None) -> str:
    text = json.dumps(system_to_dict(sf), indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def render(obj, vocab: Vocabulary):
    """JSON-able copy of a witness in which every model appears as a bitstring."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return vocab.format(obj)
    if isinstance(obj, DeltaAssignment):
        return dict(sorted(obj.values.items()))
    if isinstance(obj, dict):
        return {str(k): render(v, vocab) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((render(x, vocab) for x in obj), key=lambda v: json.dumps(v))
    if isinstance(obj, (list, tuple)):
        return [render(x, vocab) for x in obj]
    return str(obj)


def verdict_to_dict(xs, verdict: ObligationVerdict, vocab: Vocabulary, mode: str = "hard") -> dict:
    return {
        "mode": mode,
        "candidate": vocab.format_set(xs),
        "accept": verdict.accept,
        "criteria": dict(verdict.criteria),
        "witnesses": render(verdict.witnesses, vocab),
        "info": render(verdict.info, vocab),
    }


_BITS = {"type": "string", "pattern": "^[01]+$"}
_BITSET = {"type": "array", "items": _BITS}

VERDICT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "verdict",
    "type": "object",
    "required": ["mode", "candidate", "accept", "criteria", "witnesses", "info"],
    "properties": {
        "mode": {"enum": ["hard", "soft"]},
        "candidate": _BITSET,
        "accept": {"type": "boolean"},
        "criteria": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "witnesses": {"type": "object"},
        "info": {"type": "object"},
        "formula": {"type": "string"},
    },
}

DERIVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "derived obligations",
    "type": "object",
    "required": ["sets", "count", "truncated"],
    "properties": {
        "sets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["models", "formula"],
                "properties": {"models": _BITSET, "formula": {"type": "string"}},
            },
        },
        "count": {"type": "integer", "minimum": 0},
        "truncated": {"type": "boolean"},
        "limit": {"type": ["integer", "null"]},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "claim report (one per line)",
    "type": "object",
    "required": ["claim", "status", "level", "instances", "counterexamples", "seed", "ok", "coverage"],
    "properties": {
        "claim": {"type": "string"},
        "status": {"enum": ["theorem", "refutable", "golden"]},
        "level": {"enum": ["set", "restriction", "family", "global", "fixture"]},
        "instances": {"type": "integer", "minimum": 0},
        "counterexamples": {"type": "array", "items": {"type": "object"}},
        "seed": {"type": "integer"},
        "ok": {"type": "boolean"},
        "coverage": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}
