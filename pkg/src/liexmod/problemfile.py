"""Problem files: JSON documents naming algebras, actions, maps, crossed modules and tasks.

Scalars are written as strings ("3/2", "-1") so they stay exact.  A minimal
file::

    {
      "ring": "Q",
      "algebras": {"sl2": {"basis": ["h", "e", "f"],
                           "brackets": {"[h,e]": {"e": "2"}, "[h,f]": {"f": "-2"}, "[e,f]": {"h": "1"}}}},
      "actions": {"ad": {"actor": "sl2", "target": "sl2", "conjugation": true}},
      "tasks": [{"op": "check", "kind": "jacobi", "args": ["sl2"]}]
    }

Brackets list each unordered pair at most once; ``[b,a]`` is accepted and
stored as ``-[a,b]``.  Action matrices are row-major and keyed by the actor
basis element they represent; missing keys mean the zero matrix.  Morphism
matrices are row-major of shape (dim codomain) x (dim domain).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .actions import Action, check_action, conjugation
from .exactlin import QQ, Field, Matrix, PrimeField
from .liealg import LieAlgebra, LinearMap, check_jacobi
from .xmod import CrossedModule, XModMorphism


class ProblemError(ValueError):
    """Malformed input; ``location`` is a dotted path into the document."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
        self.message = message


def parse_ring(spec) -> Field:
    """'Q', 'F7', 'Fp:7', 'GF(7)' or a mapping {"ring": "Fp", "modulus": 7}."""
    if isinstance(spec, Field):
        return spec
    text = str(spec).strip()
    if text in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:F|Fp:|GF\()(\d+)\)?", text)
    if m:
        return PrimeField(int(m.group(1)))
    raise ValueError(f"unknown ring {text!r}")


def ring_name(f: Field) -> dict:
    if isinstance(f, PrimeField):
        return {"ring": "Fp", "modulus": f.p}
    return {"ring": "Q"}


@dataclass
class Problem:
    field: Field
    algebras: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    crossed_modules: dict = field(default_factory=dict)
    xmod_morphisms: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    # source shorthands kept for serialization
    conjugation_actions: set = field(default_factory=set)

    def algebra(self, name: str, where: str = "") -> LieAlgebra:
        return _lookup(self.algebras, name, where, "algebra")

    def action(self, name: str, where: str = "") -> Action:
        return _lookup(self.actions, name, where, "action")

    def morphism(self, name: str, where: str = "") -> LinearMap:
        return _lookup(self.morphisms, name, where, "morphism")

    def xmod(self, name: str, where: str = "") -> CrossedModule:
        return _lookup(self.crossed_modules, name, where, "crossed module")

    def xmod_morphism(self, name: str, where: str = "") -> XModMorphism:
        return _lookup(self.xmod_morphisms, name, where, "crossed-module morphism")


def _lookup(table: dict, name, where: str, what: str):
    try:
        return table[name]
    except (KeyError, TypeError):
        raise ProblemError(where, f"unknown {what} {name!r}") from None


# -- parsing -----------------------------------------------------------------

_BRACKET_KEY = re.compile(r"\s*\[\s*([^,\[\]\s]+)\s*,\s*([^,\[\]\s]+)\s*\]\s*")


def _expect(cond: bool, where: str, msg: str):
    if not cond:
        raise ProblemError(where, msg)


def _scalar(f: Field, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ProblemError(where, f"scalars must be strings or integers, got {x!r}")
    try:
        return f(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ProblemError(where, str(exc)) from None


def _matrix(f: Field, rows, nrows: int, ncols: int, where: str) -> Matrix:
    _expect(isinstance(rows, list) and len(rows) == nrows, where, f"expected {nrows} rows")
    out = []
    for i, r in enumerate(rows):
        _expect(isinstance(r, list) and len(r) == ncols, f"{where}[{i}]", f"expected {ncols} entries")
        out.append(tuple(_scalar(f, x, f"{where}[{i}][{j}]") for j, x in enumerate(r)))
    return Matrix(f, tuple(out), ncols)


def _keys(obj: dict, where: str, allowed: set, required: set = frozenset()):
    _expect(isinstance(obj, dict), where, "expected an object")
    extra = set(obj) - allowed
    _expect(not extra, where, f"unexpected keys {sorted(extra)}")
    missing = set(required) - set(obj)
    _expect(not missing, where, f"missing keys {sorted(missing)}")


def validate(p: Problem) -> None:
    """Raise ProblemError unless every algebra is a Lie algebra and every action an action."""
    for name, a in p.algebras.items():
        w = check_jacobi(a)
        _expect(w is None, f"algebras.{name}", f"not a Lie algebra: {w}")
    for name, a in p.actions.items():
        w = check_action(a)
        _expect(w is None, f"actions.{name}", f"not an action: {w}")


def _parse_algebra(f: Field, name: str, obj, where: str) -> LieAlgebra:
    _keys(obj, where, {"basis", "brackets"}, {"basis"})
    basis = obj["basis"]
    _expect(isinstance(basis, list) and all(isinstance(b, str) and b for b in basis), f"{where}.basis", "expected a list of names")
    _expect(len(set(basis)) == len(basis), f"{where}.basis", "basis names must be distinct")
    index = {b: i for i, b in enumerate(basis)}
    sparse: dict = {}
    brackets = obj.get("brackets", {})
    _expect(isinstance(brackets, dict), f"{where}.brackets", "expected an object")
    for key, val in brackets.items():
        w = f"{where}.brackets.{key}"
        m = _BRACKET_KEY.fullmatch(key)
        _expect(m is not None, w, "bracket keys look like [a,b]")
        a, b = m.groups()
        _expect(a in index and b in index, w, "unknown basis element")
        i, j = index[a], index[b]
        _expect(i != j, w, "[x,x] is always 0 and may not be given")
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        _expect((i, j) not in sparse, w, "pair given twice")
        _expect(isinstance(val, dict), w, "expected {basis: coefficient}")
        vec = {}
        for c, x in val.items():
            _expect(c in index, f"{w}.{c}", "unknown basis element")
            x = _scalar(f, x, f"{w}.{c}")
            if x:
                vec[index[c]] = sign * x
        sparse[(i, j)] = vec
    full = {}
    for (i, j), v in sparse.items():
        if v:
            full[(i, j)] = v
            full[(j, i)] = {k: -x for k, x in v.items()}
    return LieAlgebra.from_sparse(name, basis, full, f)


def _parse_action(p: Problem, name: str, obj, where: str) -> Action:
    _keys(obj, where, {"actor", "target", "matrices", "conjugation"}, {"actor", "target"})
    P = p.algebra(obj["actor"], f"{where}.actor")
    M = p.algebra(obj["target"], f"{where}.target")
    if obj.get("conjugation"):
        _expect(P is M, where, "conjugation needs actor == target")
        _expect("matrices" not in obj, where, "give either conjugation or matrices")
        p.conjugation_actions.add(name)
        return conjugation(M)
    mats = obj.get("matrices", {})
    _expect(isinstance(mats, dict), f"{where}.matrices", "expected {actor basis element: matrix}")
    for k in mats:
        _expect(k in P.basis, f"{where}.matrices.{k}", f"not a basis element of {P.name}")
    out = []
    for b in P.basis:
        if b in mats:
            out.append(_matrix(p.field, mats[b], M.dim, M.dim, f"{where}.matrices.{b}"))
        else:
            out.append(Matrix.zero(p.field, M.dim, M.dim))
    return Action(P, M, tuple(out))


def _parse_morphism(p: Problem, obj, where: str) -> LinearMap:
    _keys(obj, where, {"domain", "codomain", "matrix"}, {"domain", "codomain", "matrix"})
    A = p.algebra(obj["domain"], f"{where}.domain")
    B = p.algebra(obj["codomain"], f"{where}.codomain")
    return LinearMap(A, B, _matrix(p.field, obj["matrix"], B.dim, A.dim, f"{where}.matrix"))


def _parse_xmod(p: Problem, name: str, obj, where: str) -> CrossedModule:
    _keys(obj, where, {"top", "base", "boundary", "action"}, {"top", "base", "boundary", "action"})
    M = p.algebra(obj["top"], f"{where}.top")
    L = p.algebra(obj["base"], f"{where}.base")
    mu = p.morphism(obj["boundary"], f"{where}.boundary")
    psi = p.action(obj["action"], f"{where}.action")
    _expect(mu.domain is M and mu.codomain is L, f"{where}.boundary", f"must map {M.name} to {L.name}")
    _expect(psi.actor is L and psi.target is M, f"{where}.action", f"must be an action of {L.name} on {M.name}")
    return CrossedModule(M, L, mu, psi, name)


def _parse_xmod_morphism(p: Problem, obj, where: str) -> XModMorphism:
    _keys(obj, where, {"source", "target", "map"}, {"source", "target", "map"})
    s = p.xmod(obj["source"], f"{where}.source")
    t = p.xmod(obj["target"], f"{where}.target")
    f = p.morphism(obj["map"], f"{where}.map")
    _expect(s.base is t.base, where, "source and target must share the base")
    _expect(f.domain is s.top and f.codomain is t.top, f"{where}.map", f"must map {s.top.name} to {t.top.name}")
    return XModMorphism(s, t, f, LinearMap.identity(s.base))


TASK_FIELDS = {
    "normalize": ({"expr"}, {"pin"}),
    "check": ({"kind", "args"}, set()),
    "peiffer": ({"aMN", "aNM"}, {"oracle_class"}),
    "xmod_coproduct": ({"XM", "XN"}, {"XZ", "zM", "zN"}),
}


def _parse_task(obj, where: str) -> dict:
    _expect(isinstance(obj, dict) and "op" in obj, where, "tasks need an 'op'")
    op = obj["op"]
    _expect(op in TASK_FIELDS, f"{where}.op", f"unknown op {op!r}")
    req, opt = TASK_FIELDS[op]
    _keys(obj, where, req | opt | {"op"}, req)
    if op == "check":
        _expect(obj["kind"] in ("compatible", "xmod", "action", "jacobi"), f"{where}.kind", "unknown check")
        _expect(isinstance(obj["args"], list), f"{where}.args", "expected a list of names")
    if op == "peiffer" and "oracle_class" in obj:
        c = obj["oracle_class"]
        _expect(isinstance(c, int) and not isinstance(c, bool) and c >= 2, f"{where}.oracle_class", "expected an integer >= 2")
    if op == "xmod_coproduct":
        given = {"XZ", "zM", "zN"} & set(obj)
        _expect(not given or len(given) == 3, where, "XZ, zM and zN go together")
    return dict(obj)


def loads(text: str, ring: Field | str | None = None, validate: bool = True) -> Problem:
    """Parse a problem document.

    ``ring`` overrides the document's ring.  With ``validate`` every algebra
    must satisfy Jacobi and every action the action axioms; the ``check``
    command turns this off so a failing structure can be reported instead.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_document(doc, ring, validate)


def load(path, ring: Field | str | None = None, validate: bool = True) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), ring, validate)


def from_document(doc: Any, ring=None, validate: bool = True) -> Problem:
    _keys(doc, "", {"ring", "modulus", "algebras", "actions", "morphisms", "crossed_modules", "xmod_morphisms", "tasks"})
    if ring is not None:
        f = parse_ring(ring)
    else:
        r = doc.get("ring", "Q")
        if r == "Fp":
            mod = doc.get("modulus")
            _expect(isinstance(mod, int) and not isinstance(mod, bool), "modulus", "Fp needs an integer modulus")
            try:
                f = PrimeField(mod)
            except ValueError as exc:
                raise ProblemError("modulus", str(exc)) from None
        else:
            _expect("modulus" not in doc, "modulus", "modulus only goes with ring Fp")
            try:
                f = parse_ring(r)
            except ValueError as exc:
                raise ProblemError("ring", str(exc)) from None
    p = Problem(f)
    for sect in ("algebras", "actions", "morphisms", "crossed_modules", "xmod_morphisms"):
        _expect(isinstance(doc.get(sect, {}), dict), sect, "expected an object")
    for name, obj in doc.get("algebras", {}).items():
        where = f"algebras.{name}"
        a = _parse_algebra(f, name, obj, where)
        if validate:
            w = check_jacobi(a)
            _expect(w is None, where, f"not a Lie algebra: {w}")
        p.algebras[name] = a
    for name, obj in doc.get("actions", {}).items():
        where = f"actions.{name}"
        a = _parse_action(p, name, obj, where)
        if validate:
            w = check_action(a)
            _expect(w is None, where, f"not an action: {w}")
        p.actions[name] = a
    for name, obj in doc.get("morphisms", {}).items():
        p.morphisms[name] = _parse_morphism(p, obj, f"morphisms.{name}")
    for name, obj in doc.get("crossed_modules", {}).items():
        p.crossed_modules[name] = _parse_xmod(p, name, obj, f"crossed_modules.{name}")
    for name, obj in doc.get("xmod_morphisms", {}).items():
        p.xmod_morphisms[name] = _parse_xmod_morphism(p, obj, f"xmod_morphisms.{name}")
    tasks = doc.get("tasks", [])
    _expect(isinstance(tasks, list), "tasks", "expected a list")
    p.tasks = [_parse_task(t, f"tasks[{i}]") for i, t in enumerate(tasks)]
    return p


# -- serialization -----------------------------------------------------------


def _fmt_matrix(f: Field, m: Matrix) -> list:
    return [[f.format(x) for x in row] for row in m.rows]


def _name_of(table: dict, obj) -> str:
    for k, v in table.items():
        if v is obj:
            return k
    raise KeyError(obj)


def to_document(p: Problem) -> dict:
    f = p.field
    doc: dict = dict(ring_name(f))
    algs = {}
    for name, a in p.algebras.items():
        br = {}
        for i in range(a.dim):
            for j in range(i + 1, a.dim):
                v = {a.basis[k]: f.format(x) for k, x in enumerate(a.table[i][j]) if x}
                if v:
                    br[f"[{a.basis[i]},{a.basis[j]}]"] = v
        entry: dict = {"basis": list(a.basis)}
        if br:
            entry["brackets"] = br
        algs[name] = entry
    doc["algebras"] = algs
    if p.actions:
        acts = {}
        for name, a in p.actions.items():
            entry = {"actor": _name_of(p.algebras, a.actor), "target": _name_of(p.algebras, a.target)}
            if name in p.conjugation_actions:
                entry["conjugation"] = True
            else:
                entry["matrices"] = {a.actor.basis[i]: _fmt_matrix(f, m) for i, m in enumerate(a.matrices) if not m.is_zero()}
            acts[name] = entry
        doc["actions"] = acts
    if p.morphisms:
        doc["morphisms"] = {
            name: {"domain": _name_of(p.algebras, g.domain), "codomain": _name_of(p.algebras, g.codomain), "matrix": _fmt_matrix(f, g.matrix)}
            for name, g in p.morphisms.items()
        }
    if p.crossed_modules:
        doc["crossed_modules"] = {
            name: {
                "top": _name_of(p.algebras, x.top),
                "base": _name_of(p.algebras, x.base),
                "boundary": _name_of(p.morphisms, x.boundary),
                "action": _name_of(p.actions, x.action),
            }
            for name, x in p.crossed_modules.items()
        }
    if p.xmod_morphisms:
        doc["xmod_morphisms"] = {
            name: {
                "source": _name_of(p.crossed_modules, z.source),
                "target": _name_of(p.crossed_modules, z.target),
                "map": _name_of(p.morphisms, z.top),
            }
            for name, z in p.xmod_morphisms.items()
        }
    if p.tasks:
        doc["tasks"] = [dict(t) for t in p.tasks]
    return doc


def dumps(p: Problem) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_document(p), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def canonicalize(text: str) -> str:
    return dumps(loads(text, validate=False))
