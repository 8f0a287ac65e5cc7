"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when a mathematical check
fails, 2 when the input is malformed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .actions import check_action, check_compatible
from .copro import oracle_agrees, peiffer_oracle, peiffer_saturate
from .exactlin import QQ, Field, Matrix
from .freelie import Letter, ParseError, format_words, normalize, normalize_pinned, parse_expr
from .liealg import LieAlgebra, Witness, check_jacobi
from .problemfile import Problem, ProblemError, load, parse_ring, validate
from .xmod import (
    TriangleFailure,
    WellDefinednessFailure,
    check_xmod,
    induced_actions,
    xmod_coproduct,
    xmod_coproduct_mediator,
    xmod_morphism_failures,
)

OK, FAILED, MALFORMED = 0, 1, 2


@dataclass
class Report:
    command: str
    status: int = OK
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def fail(self):
        self.status = max(self.status, FAILED)

    def say(self, *lines: str):
        self.lines.extend(lines)


def _matrix_lines(m: Matrix, indent: str = "  ") -> list[str]:
    if m.nrows == 0 or m.ncols == 0:
        return [f"{indent}({m.nrows}x{m.ncols} empty)"]
    cells = m.formatted()
    width = max(len(c) for row in cells for c in row)
    return [indent + "[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells]


def _matrix_data(m: Matrix) -> list:
    return [[m.field.format(x) for x in row] for row in m.rows]


def _vector(a: LieAlgebra, v) -> str:
    return a.format_vector(v)


def _table_lines(a: LieAlgebra) -> list[str]:
    out = []
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            if any(a.table[i][j]):
                out.append(f"  [{a.basis[i]},{a.basis[j]}] = {_vector(a, a.table[i][j])}")
    return out or ["  abelian"]


def _table_data(a: LieAlgebra) -> dict:
    out = {}
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            if any(a.table[i][j]):
                out[f"[{a.basis[i]},{a.basis[j]}]"] = {a.basis[k]: a.field.format(x) for k, x in enumerate(a.table[i][j]) if x}
    return out


def _witness_data(w: Witness | None):
    if w is None:
        return None
    d = {"family": w.family, "at": list(w.names)}
    if w.defect is not None:
        d["defect"] = [str(x) for x in w.defect]
    return d


# -- commands ----------------------------------------------------------------


def cmd_normalize(expr: str, pin: str | None = None, ring: Field = QQ) -> Report:
    r = Report("normalize")
    e = parse_expr(expr, ring)
    words = normalize_pinned(e, Letter(pin)) if pin else normalize(e)
    out = format_words(words, ring)
    r.say(out)
    r.data = {"input": expr, "pin": pin, "output": out}
    return r


def cmd_check(p: Problem, kind: str, names: Sequence[str]) -> Report:
    r = Report("check")
    r.data = {"kind": kind, "args": list(names)}
    arity = {"jacobi": 1, "action": 1, "xmod": 1, "compatible": 2}
    if kind not in arity:
        raise ProblemError("check", f"unknown check {kind!r}")
    if len(names) != arity[kind]:
        raise ProblemError("check", f"{kind} takes {arity[kind]} name(s)")
    if kind == "jacobi":
        w = check_jacobi(p.algebra(names[0], "check"))
    elif kind == "action":
        w = check_action(p.action(names[0], "check"))
    elif kind == "xmod":
        w = check_xmod(p.xmod(names[0], "check"))
    else:
        a, b = p.action(names[0], "check"), p.action(names[1], "check")
        if a.actor is not b.target or a.target is not b.actor:
            raise ProblemError("check", f"{names[0]} and {names[1]} are not mutual actions")
        w = check_compatible(a, b)
    label = f"{kind} {' '.join(names)}"
    if w is None:
        r.say(f"{label}: ok")
    else:
        r.fail()
        r.say(f"{label}: FAILED, {w}")
        if w.defect is not None:
            r.say(f"  defect: ({', '.join(str(x) for x in w.defect)})")
    r.data["ok"] = w is None
    r.data["witness"] = _witness_data(w)
    return r


def cmd_peiffer(p: Problem, aMN_name: str, aNM_name: str, oracle_class: int | None = None, max_class: int = 5) -> Report:
    r = Report("peiffer")
    aMN, aNM = p.action(aMN_name, "peiffer"), p.action(aNM_name, "peiffer")
    if aMN.actor is not aNM.target or aMN.target is not aNM.actor:
        raise ProblemError("peiffer", f"{aMN_name} and {aNM_name} are not mutual actions")
    M, N = aMN.actor, aMN.target
    res = peiffer_saturate(M, N, aMN, aNM)
    cw = check_compatible(aMN, aNM)
    red, C = res.reduction, res.carrier
    r.say(f"peiffer product of {M.name} and {N.name}")
    r.say(f"compatible: {'yes' if cw is None else 'no, ' + str(cw)}")
    r.say(f"W: dim {res.W.dim}")
    r.say(*(f"  {_vector(red, v)}" for v in res.W.vectors))
    r.say(f"carrier: dim {C.dim}, basis {', '.join(C.basis) if C.dim else '(none)'}")
    r.say(*_table_lines(C))
    r.say("l_M:", *_matrix_lines(res.l_M.matrix))
    r.say("l_N:", *_matrix_lines(res.l_N.matrix))
    r.data = {
        "M": M.name,
        "N": N.name,
        "compatible": cw is None,
        "compatibility_witness": _witness_data(cw),
        "W": [[str(x) for x in v] for v in res.W.vectors],
        "carrier": {"basis": list(C.basis), "brackets": _table_data(C)},
        "l_M": _matrix_data(res.l_M.matrix),
        "l_N": _matrix_data(res.l_N.matrix),
    }
    if oracle_class is not None:
        if oracle_class > max_class:
            raise ProblemError("peiffer", f"oracle class {oracle_class} exceeds the maximum class {max_class}")
        v = peiffer_oracle(M, N, aMN, aNM, max_class=max_class, start=oracle_class)
        dims = " ".join(f"c={t.c}:{t.dimension}{'' if t.concentrated else '*'}" for t in v.runs)
        r.say(f"oracle runs: {dims}")
        if v.stabilized:
            agree = oracle_agrees(res, v.final)
            r.say(f"oracle stabilized at class {v.stable_class}, agreement: {'yes' if agree else 'NO'}")
            if not agree:
                r.fail()
        else:
            agree = False
            r.say(f"oracle inconclusive up to class {max_class}")
            r.fail()
        r.data["oracle"] = {
            "runs": [{"class": t.c, "dimension": t.dimension, "profile": list(t.profile)} for t in v.runs],
            "stabilized": v.stabilized,
            "agrees": agree,
        }
    return r


def cmd_xmod_coproduct(p: Problem, xm_name: str, xn_name: str, xz_name=None, zm_name=None, zn_name=None) -> Report:
    r = Report("xmod-coproduct")
    xm, xn = p.xmod(xm_name, "xmod-coproduct"), p.xmod(xn_name, "xmod-coproduct")
    if xm.base is not xn.base:
        raise ProblemError("xmod-coproduct", f"{xm_name} and {xn_name} have different bases")
    r.data = {"XM": xm_name, "XN": xn_name}
    for name, x in ((xm_name, xm), (xn_name, xn)):
        w = check_xmod(x)
        if w is not None:
            r.fail()
            r.say(f"{name} is not a crossed module: {w}")
            r.data["invalid_input"] = {"name": name, "witness": _witness_data(w)}
            return r
    aMN, aNM = induced_actions(xm, xn)
    cw = check_compatible(aMN, aNM)
    cp = xmod_coproduct(xm, xn)
    x, res = cp.xmod, cp.peiffer
    C = res.carrier
    r.say(f"coproduct of {xm_name} and {xn_name} over {xm.base.name}")
    r.say(f"induced actions compatible: {'yes' if cw is None else 'no, ' + str(cw)}")
    r.say(f"carrier: dim {C.dim}, basis {', '.join(C.basis) if C.dim else '(none)'}")
    r.say(*_table_lines(C))
    r.say("l_M:", *_matrix_lines(res.l_M.matrix))
    r.say("l_N:", *_matrix_lines(res.l_N.matrix))
    r.say("boundary:", *_matrix_lines(x.boundary.matrix))
    for i, m in enumerate(x.action.matrices):
        r.say(f"action of {xm.base.basis[i]}:", *_matrix_lines(m))
    w = check_xmod(x)
    r.say(f"crossed module: {'ok' if w is None else 'FAILED, ' + str(w)}")
    if cw is not None or w is not None:
        r.fail()
    r.data.update(
        {
            "compatible": cw is None,
            "carrier": {"basis": list(C.basis), "brackets": _table_data(C)},
            "l_M": _matrix_data(res.l_M.matrix),
            "l_N": _matrix_data(res.l_N.matrix),
            "boundary": _matrix_data(x.boundary.matrix),
            "action": {xm.base.basis[i]: _matrix_data(m) for i, m in enumerate(x.action.matrices)},
            "xmod_ok": w is None,
            "xmod_witness": _witness_data(w),
        }
    )
    if xz_name is not None:
        xz = p.xmod(xz_name, "xmod-coproduct")
        zM, zN = p.xmod_morphism(zm_name, "xmod-coproduct"), p.xmod_morphism(zn_name, "xmod-coproduct")
        if zM.source is not xm or zN.source is not xn or zM.target is not xz or zN.target is not xz:
            raise ProblemError("xmod-coproduct", "zM and zN must go from XM and XN to XZ")
        med: dict = {"XZ": xz_name}
        for name, z in ((zm_name, zM), (zn_name, zN)):
            fs = xmod_morphism_failures(z)
            if fs:
                r.fail()
                r.say(f"{name} is not a crossed-module morphism: {fs[0]}")
                med["invalid_input"] = {"name": name, "witness": _witness_data(fs[0])}
                r.data["mediator"] = med
                return r
        try:
            m = xmod_coproduct_mediator(cp, xz, zM, zN)
        except (WellDefinednessFailure, TriangleFailure) as exc:
            r.fail()
            r.say(f"mediator: FAILED, {exc}")
            med["error"] = str(exc)
            r.data["mediator"] = med
            return r
        r.say(f"mediator to {xz_name}:", *_matrix_lines(m.morphism.top.matrix))
        r.say("triangles: ok")
        r.say(f"unique: {'yes' if m.unique else 'no'}")
        r.say(f"morphism: {'ok' if not m.failures else 'FAILED, ' + str(m.failures[0])}")
        if m.failures or not m.unique:
            r.fail()
        med.update(
            {
                "matrix": _matrix_data(m.morphism.top.matrix),
                "triangles": True,
                "unique": m.unique,
                "morphism_ok": not m.failures,
            }
        )
        r.data["mediator"] = med
    return r


def run_task(p: Problem, task: dict, max_class: int) -> Report:
    op = task["op"]
    if op == "normalize":
        return cmd_normalize(task["expr"], task.get("pin"), p.field)
    if op == "check":
        return cmd_check(p, task["kind"], task["args"])
    if op == "peiffer":
        return cmd_peiffer(p, task["aMN"], task["aNM"], task.get("oracle_class"), max_class)
    return cmd_xmod_coproduct(p, task["XM"], task["XN"], task.get("XZ"), task.get("zM"), task.get("zN"))


# -- driver ------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="coefficient field: Q or F<p> (overrides the file)")
    common.add_argument("--max-class", type=int, default=5, help="largest truncation class for the oracle (default 5)")
    common.add_argument("--format", choices=("text", "machine"), default="text", help="report format")

    ap = argparse.ArgumentParser(prog="liexmod", description="Exact computations with Lie algebras, actions and crossed modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="rewrite a bracket expression into right-nested words")
    s.add_argument("expr")
    s.add_argument("--pin", help="letter every output word must end in")

    s = sub.add_parser("check", parents=[common], help="run one check from a problem file")
    s.add_argument("file")
    s.add_argument("kind", choices=("compatible", "xmod", "action", "jacobi"))
    s.add_argument("names", nargs="+")

    s = sub.add_parser("peiffer", parents=[common], help="Peiffer product of two mutual actions")
    s.add_argument("file")
    s.add_argument("aMN", help="action of M on N")
    s.add_argument("aNM", help="action of N on M")
    s.add_argument("--oracle-class", type=int, help="cross-check with the truncation oracle from this class on")

    s = sub.add_parser("xmod-coproduct", parents=[common], help="coproduct of two crossed modules over one base")
    s.add_argument("file")
    s.add_argument("XM")
    s.add_argument("XN")
    s.add_argument("--target", dest="XZ", help="crossed module to map into")
    s.add_argument("--zM", help="crossed-module morphism XM -> XZ")
    s.add_argument("--zN", help="crossed-module morphism XN -> XZ")

    s = sub.add_parser("run", parents=[common], help="run every task listed in a problem file")
    s.add_argument("file")
    return ap


def _emit(reports: list[Report], fmt: str, out) -> None:
    if fmt == "machine":
        payload = [dict(command=r.command, status=r.status, **r.data) for r in reports]
        out.write(json.dumps(payload if len(payload) != 1 else payload[0], indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write("\n\n".join("\n".join(r.lines) for r in reports) + "\n")


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(argv)
    try:
        ring = parse_ring(args.ring) if args.ring else None
        if args.max_class < 2:
            raise ProblemError("--max-class", "must be at least 2")
        if args.command == "normalize":
            reports = [cmd_normalize(args.expr, args.pin, ring or QQ)]
        else:
            # check and run report broken structures instead of refusing them
            p = load(args.file, ring, validate=args.command not in ("check", "run"))
            if args.command == "check":
                reports = [cmd_check(p, args.kind, args.names)]
            elif args.command == "peiffer":
                reports = [cmd_peiffer(p, args.aMN, args.aNM, args.oracle_class, args.max_class)]
            elif args.command == "xmod-coproduct":
                given = [x is not None for x in (args.XZ, args.zM, args.zN)]
                if any(given) and not all(given):
                    raise ProblemError("xmod-coproduct", "--target, --zM and --zN go together")
                reports = [cmd_xmod_coproduct(p, args.XM, args.XN, args.XZ, args.zM, args.zN)]
            else:
                if not p.tasks:
                    raise ProblemError("tasks", "the file lists no tasks")
                if any(t["op"] in ("peiffer", "xmod_coproduct") for t in p.tasks):
                    validate(p)
                reports = [run_task(p, t, args.max_class) for t in p.tasks]
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return MALFORMED
    except (ProblemError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return MALFORMED
    _emit(reports, args.format, out)
    return max(r.status for r in reports)


if __name__ == "__main__":
    sys.exit(main())
