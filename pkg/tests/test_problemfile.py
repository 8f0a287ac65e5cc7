import json
from pathlib import Path

import pytest

from liexmod.catalog import sl2
from liexmod.exactlin import GF, QQ
from liexmod.liealg import check_jacobi
from liexmod.problemfile import ProblemError, canonicalize, dumps, load, loads, parse_ring

PROBLEMS = sorted((Path(__file__).resolve().parent.parent / "problems").glob("*.json"))

MINIMAL = """{
  "ring": "Q",
  "algebras": {"sl2": {"basis": ["h", "e", "f"],
                       "brackets": {"[h,e]": {"e": "2"}, "[f,h]": {"f": "2"}, "[e,f]": {"h": 1}}}},
  "actions": {"ad": {"actor": "sl2", "target": "sl2", "conjugation": true}},
  "tasks": [{"op": "check", "kind": "jacobi", "args": ["sl2"]}]
}"""


@pytest.mark.parametrize("path", PROBLEMS, ids=lambda p: p.name)
def test_shipped_files_are_canonical(path):
    text = path.read_text()
    p = load(path, validate=False)
    assert dumps(p) == text


@pytest.mark.parametrize("path", PROBLEMS, ids=lambda p: p.name)
def test_roundtrip_is_stable(path):
    once = dumps(load(path, validate=False))
    assert dumps(loads(once, validate=False)) == once


def test_minimal_document():
    p = loads(MINIMAL)
    s = p.algebra("sl2")
    assert s.table == sl2().table
    assert p.action("ad").matrices[1] == s.ad(s.unit("e"))
    assert p.tasks == [{"op": "check", "kind": "jacobi", "args": ["sl2"]}]


def test_canonicalize_normalizes_bracket_order_and_scalars():
    out = json.loads(canonicalize(MINIMAL))
    br = out["algebras"]["sl2"]["brackets"]
    assert br["[h,f]"] == {"f": "-2"}
    assert br["[e,f]"] == {"h": "1"}
    assert out["actions"]["ad"]["conjugation"] is True
    assert canonicalize(canonicalize(MINIMAL)) == canonicalize(MINIMAL)


def test_ring_override():
    p = loads(MINIMAL, ring="F5")
    assert p.field == GF(5)
    assert check_jacobi(p.algebra("sl2")) is None
    assert json.loads(dumps(p))["modulus"] == 5


def test_prime_field_document():
    doc = json.loads(MINIMAL)
    doc.update(ring="Fp", modulus=7)
    p = loads(json.dumps(doc))
    assert p.field == GF(7)


@pytest.mark.parametrize("spec,p", [("F7", 7), ("Fp:11", 11), ("GF(13)", 13)])
def test_parse_ring(spec, p):
    assert parse_ring(spec) == GF(p)
    assert parse_ring("Q") is QQ


def _mutate(fn):
    doc = json.loads(MINIMAL)
    fn(doc)
    return json.dumps(doc)


@pytest.mark.parametrize(
    "mutation,location",
    [
        (lambda d: d.update(extra=1), ""),
        (lambda d: d.update(ring="Z"), "ring"),
        (lambda d: d.update(ring="Fp", modulus=8), "modulus"),
        (lambda d: d["algebras"]["sl2"]["brackets"].update({"[h,q]": {"e": "1"}}), "algebras.sl2.brackets"),
        (lambda d: d["algebras"]["sl2"]["brackets"].update({"[h,e]": {"e": "x"}}), "algebras.sl2.brackets.[h,e].e"),
        (lambda d: d["algebras"]["sl2"]["brackets"].update({"[h,e]": {"e": 1.5}}), "algebras.sl2.brackets.[h,e].e"),
        (lambda d: d["actions"]["ad"].update(actor="nope"), "actions.ad.actor"),
        (lambda d: d["tasks"].append({"op": "fly"}), "tasks[1].op"),
        (lambda d: d["tasks"].append({"op": "peiffer", "aMN": "ad", "aNM": "ad", "oracle_class": 1}), "tasks[1].oracle_class"),
        (lambda d: d["tasks"].append({"op": "check", "kind": "odd", "args": []}), "tasks[1].kind"),
    ],
)
def test_error_locations(mutation, location):
    with pytest.raises(ProblemError) as exc:
        loads(_mutate(mutation))
    assert exc.value.location.startswith(location)


def test_json_syntax_error_location():
    with pytest.raises(ProblemError) as exc:
        loads('{"ring": "Q",\n "algebras": }')
    assert exc.value.location == "line 2 column 14"


def test_validation_rejects_non_lie():
    bad = _mutate(lambda d: d["algebras"]["sl2"]["brackets"].update({"[h,e]": {"e": "3"}}))
    with pytest.raises(ProblemError) as exc:
        loads(bad)
    assert exc.value.location == "algebras.sl2"
    # the same document loads when validation is off
    assert loads(bad, validate=False).algebra("sl2").dim == 3
