import json
from pathlib import Path

import jsonschema
import pytest

from deon.errors import SystemFileError
from deon.io import (
    DERIVE_SCHEMA,
    VERDICT_SCHEMA,
    SystemFile,
    dump_system,
    load_system,
    render,
    system_from_dict,
    system_to_dict,
    verdict_to_dict,
)
from deon.lab.systems import random_system
from deon.logic import Vocabulary
from deon.obligations import DeltaAssignment, check_hard_obligation
from deon.size import Fraction, Generator

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


@pytest.mark.parametrize("path", sorted(SYSTEMS.glob("*.json")), ids=lambda p: p.stem)
def test_bundled_systems_round_trip(path):
    sf = load_system(path)
    again = system_from_dict(json.loads(dump_system(sf)))
    assert again == sf
    assert system_to_dict(again) == system_to_dict(sf)


def test_random_systems_round_trip():
    for seed in range(50):
        sys = random_system(3, 3, 0.5, seed)
        assert system_from_dict(system_to_dict(sys)).system == sys


def test_formulas_and_bitstrings_agree():
    a = system_from_dict({"variables": ["p", "q"], "obligations": {"O": "p | q"}})
    b = system_from_dict({"variables": ["p", "q"], "obligations": {"O": ["01", "10", "11"]}})
    assert a.system == b.system


def test_assassin_file():
    sf = load_system(SYSTEMS / "assassin.json")
    assert sf.explicit and sf.distance == "variables"
    assert sf.size == Fraction(0.0) and sf.pair_size == Fraction(0.0625)
    q = sf.quality_relation()
    vocab = sf.system.vocab
    assert q.lt(vocab.parse_model("11"), vocab.parse_model("10"))


def test_size_forms():
    sf = system_from_dict({"variables": ["p"], "size": {"ideal": ["1"]}})
    assert sf.size == Generator(frozenset({1}))


@pytest.mark.parametrize("data, fragment", [
    ([], "JSON object"),
    ({"variables": ["p"], "colour": 1}, "unknown keys"),
    ({"variables": "p"}, "'variables'"),
    ({"variables": ["p", "p"]}, "p"),
    ({"variables": ["p"], "universe": []}, "empty"),
    ({"variables": ["p"], "obligations": {"A": "q"}}, "obligations.A"),
    ({"variables": ["p"], "obligations": {"A": ["11"]}}, "width"),
    ({"variables": ["p"], "quality": "best"}, "quality"),
    ({"variables": ["p"], "quality": {"explicit": [["0"], ["0"]]}}, "overlap"),
    ({"variables": ["p"], "size": {"epsilon": 1.5}}, "size"),
    ({"variables": ["p"], "size": {"epsilon": 0.1, "ideal": ["1"]}}, "exactly one"),
    ({"variables": ["p"], "distance": "euclid"}, "distance"),
])
def test_bad_files(data, fragment):
    with pytest.raises(SystemFileError) as err:
        system_from_dict(data)
    assert fragment in str(err.value)


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(SystemFileError):
        load_system(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(SystemFileError, match="invalid JSON"):
        load_system(bad)


def test_render():
    vocab = Vocabulary(("p", "q"))
    assert render((1, 2), vocab) == ["10", "01"]
    assert render({True: frozenset({3, 0})}, vocab) == {"True": ["00", "11"]}
    assert render(DeltaAssignment({"q": 0, "p": 1}), vocab) == {"p": 1, "q": 0}
    assert render(True, vocab) is True


def test_verdict_json_validates():
    sf = load_system(SYSTEMS / "ross.json")
    vocab = sf.system.vocab
    for bits in ("11", "10,11", "00,10,11"):
        xs = vocab.models(*bits.split(","))
        out = verdict_to_dict(xs, check_hard_obligation(xs, sf.system), vocab)
        jsonschema.validate(json.loads(json.dumps(out)), VERDICT_SCHEMA)


def test_schemas_are_valid():
    for schema in (VERDICT_SCHEMA, DERIVE_SCHEMA):
        jsonschema.Draft202012Validator.check_schema(schema)


def test_plain_system_dumps():
    vocab = Vocabulary(("p",))
    sf = SystemFile(system_from_dict({"variables": ["p"], "universe": ["1"]}).system)
    assert system_to_dict(sf) == {"variables": ["p"], "universe": ["1"], "obligations": {}, "quality": "set"}
    assert vocab.names == ("p",)
