"""Crossed modules of Lie algebras and the coproduct of two crossed modules over L.

A crossed module is a morphism mu: M -> L with an action of L on M such that

* mu(l.m) = [l, mu(m)]            (equivariance)
* mu(m).m' = [m, m']              (the Peiffer identity)

Two crossed modules over the same L induce mutual actions of M and N on each
other through L.  Their coproduct lives on the Peiffer product M⋈N.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import Action, check_action, check_compatible
from .copro import PeifferResult, peiffer_saturate
from .exactlin import Matrix, block_diagonal, is_zero, rank, vadd, vsub
from .liealg import LieAlgebra, LinearMap, Witness, check_morphism


@dataclass(frozen=True, eq=False)
class CrossedModule:
    top: LieAlgebra
    base: LieAlgebra
    boundary: LinearMap
    action: Action
    name: str = ""

    def __post_init__(self):
        b, a = self.boundary, self.action
        if b.domain.dim != self.top.dim or b.codomain.dim != self.base.dim:
            raise ValueError("boundary does not map top to base")
        if a.actor.dim != self.base.dim or a.target.dim != self.top.dim:
            raise ValueError("action is not an action of the base on the top")

    def __repr__(self):
        return f"CrossedModule({self.name or self.top.name + '->' + self.base.name})"


def xmod_failures(x: CrossedModule) -> list[Witness]:
    """Every failing family, at most one witness per family."""
    out = []
    w = check_morphism(x.boundary)
    if w is not None:
        out.append(Witness("boundary-morphism", w.indices, w.names, w.defect))
    w = check_action(x.action)
    if w is not None:
        out.append(w)
    w = _equivariance(x)
    if w is not None:
        out.append(w)
    w = _peiffer(x)
    if w is not None:
        out.append(w)
    return out


def check_xmod(x: CrossedModule) -> Witness | None:
    """The first failure in the order boundary, action, equivariance, Peiffer."""
    fs = xmod_failures(x)
    return fs[0] if fs else None


def _equivariance(x: CrossedModule) -> Witness | None:
    L, M, mu = x.base, x.top, x.boundary
    for i in range(L.dim):
        l = L.unit(i)
        for j in range(M.dim):
            m = M.unit(j)
            d = vsub(mu(x.action.act(l, m)), L.bracket(l, mu(m)))
            if not is_zero(d):
                return Witness("equivariance", (i, j), (L.basis[i], M.basis[j]), d)
    return None


def _peiffer(x: CrossedModule) -> Witness | None:
    M, mu = x.top, x.boundary
    for i in range(M.dim):
        m = M.unit(i)
        for j in range(M.dim):
            d = vsub(x.action.act(mu(m), M.unit(j)), M.table[i][j])
            if not is_zero(d):
                return Witness("peiffer", (i, j), (M.basis[i], M.basis[j]), d)
    return None


@dataclass(frozen=True, eq=False)
class XModMorphism:
    source: CrossedModule
    target: CrossedModule
    top: LinearMap
    base: LinearMap


def xmod_morphism_failures(f: XModMorphism) -> list[Witness]:
    s, t = f.source, f.target
    out = []
    for fam, g in (("top-morphism", f.top), ("base-morphism", f.base)):
        w = check_morphism(g)
        if w is not None:
            out.append(Witness(fam, w.indices, w.names, w.defect))
    for j in range(s.top.dim):
        m = s.top.unit(j)
        d = vsub(t.boundary(f.top(m)), f.base(s.boundary(m)))
        if not is_zero(d):
            out.append(Witness("square", (j,), (s.top.basis[j],), d))
            break
    done = False
    for i in range(s.base.dim):
        l = s.base.unit(i)
        for j in range(s.top.dim):
            m = s.top.unit(j)
            d = vsub(f.top(s.action.act(l, m)), t.action.act(f.base(l), f.top(m)))
            if not is_zero(d):
                out.append(Witness("action-equivariance", (i, j), (s.base.basis[i], s.top.basis[j]), d))
                done = True
                break
        if done:
            break
    return out


def check_xmod_morphism(f: XModMorphism) -> Witness | None:
    fs = xmod_morphism_failures(f)
    return fs[0] if fs else None


def identity_morphism(x: CrossedModule) -> XModMorphism:
    return XModMorphism(x, x, LinearMap.identity(x.top), LinearMap.identity(x.base))


# -- from crossed modules to mutual actions and back -------------------------


def _same_base(xm: CrossedModule, xn: CrossedModule) -> LieAlgebra:
    if xm.base is not xn.base and not xm.base.same_structure(xn.base):
        raise ValueError("crossed modules live over different bases")
    return xm.base


def induced_actions(xm: CrossedModule, xn: CrossedModule) -> tuple[Action, Action]:
    """M acts on N through mu, and N on M through nu."""
    _same_base(xm, xn)
    aMN = Action(xm.top, xn.top, tuple(xn.action.rho(xm.boundary(xm.top.unit(i))) for i in range(xm.top.dim)))
    aNM = Action(xn.top, xm.top, tuple(xm.action.rho(xn.boundary(xn.top.unit(j))) for j in range(xn.top.dim)))
    return aMN, aNM


def carrier_actions(p: PeifferResult) -> tuple[Action, Action]:
    """M⋈N acting on M by (m,n).m' = [m,m'] + n.m' and on N by (m,n).n' = [n,n'] + m.n'.

    The matrices come from the lifts of the carrier basis; whether the result
    is independent of the lift is checked separately.
    """
    return _carrier_action(p, "M"), _carrier_action(p, "N")


def _lifted_rho(p: PeifferResult, u, side: str) -> Matrix:
    m, n = p.split(u)
    if side == "M":
        return p.M.ad(m) + p.aNM.rho(n)
    return p.N.ad(n) + p.aMN.rho(m)


def _carrier_action(p: PeifferResult, side: str) -> Action:
    sec = p.W.section_matrix()
    mats = tuple(_lifted_rho(p, sec.column(k), side) for k in range(p.carrier.dim))
    target = p.M if side == "M" else p.N
    return Action(p.carrier, target, mats)


def _well_defined(p: PeifferResult, side: str) -> Witness | None:
    target = p.M if side == "M" else p.N
    for r, w in enumerate(p.W.vectors):
        mat = _lifted_rho(p, w, side)
        if not mat.is_zero():
            for k in range(target.dim):
                col = mat.column(k)
                if not is_zero(col):
                    return Witness("action_well_defined", (r, k), (f"W_{r}", target.basis[k]), col)
    return None


@dataclass(frozen=True, eq=False)
class PeifferXMods:
    peiffer: PeifferResult
    xm: CrossedModule  # l_M: M -> M⋈N
    xn: CrossedModule  # l_N: N -> M⋈N
    failures: dict  # "M"/"N" -> list of Witness

    @property
    def passed(self) -> bool:
        return not self.failures["M"] and not self.failures["N"]


def peiffer_xmods(p: PeifferResult) -> PeifferXMods:
    """l_M and l_N with the carrier actions, and everything that fails about them.

    Never raises on a failed axiom; an action that depends on the chosen lift
    is reported as ``action_well_defined``.
    """
    aM, aN = carrier_actions(p)
    xm = CrossedModule(p.M, p.carrier, p.l_M, aM, f"{p.M.name}->{p.carrier.name}")
    xn = CrossedModule(p.N, p.carrier, p.l_N, aN, f"{p.N.name}->{p.carrier.name}")
    failures = {}
    for side, x in (("M", xm), ("N", xn)):
        fs = []
        w = _well_defined(p, side)
        if w is not None:
            fs.append(w)
        fs.extend(xmod_failures(x))
        failures[side] = fs
    return PeifferXMods(p, xm, xn, failures)


@dataclass(frozen=True)
class RoundtripReport:
    compatible: bool
    compatibility_witness: Witness | None
    xmods_pass: bool
    failures: dict
    recovered: bool

    @property
    def agrees(self) -> bool:
        """Compatibility holds exactly when both Peiffer crossed modules pass and give back the actions."""
        return self.compatible == (self.xmods_pass and self.recovered)


def theorem_roundtrip(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action) -> RoundtripReport:
    cw = check_compatible(aMN, aNM)
    p = peiffer_saturate(M, N, aMN, aNM)
    px = peiffer_xmods(p)
    recovered = False
    if px.passed:
        bMN, bNM = induced_actions(px.xm, px.xn)
        recovered = bMN == aMN and bNM == aNM
    return RoundtripReport(cw is None, cw, px.passed, px.failures, recovered)


# -- the coproduct -----------------------------------------------------------


class RestrictionFailure(ValueError):
    def __init__(self, message: str, witness: Witness):
        super().__init__(message)
        self.witness = witness


class WellDefinednessFailure(ValueError):
    def __init__(self, message: str, witness: Witness):
        super().__init__(message)
        self.witness = witness


class TriangleFailure(ValueError):
    def __init__(self, message: str, witness: Witness):
        super().__init__(message)
        self.witness = witness


def action_on_peiffer(L: LieAlgebra, rM: Action, rN: Action, p: PeifferResult) -> Action:
    """L acting on M⋈N by l.(m,n) = (l.m, l.n).

    Raises RestrictionFailure if the action does not preserve W or does not
    kill the Peiffer relations.
    """
    qm, sec = p.W.quotient_matrix(), p.W.section_matrix()
    mats = []
    for i in range(L.dim):
        D = block_diagonal(rM.matrices[i], rN.matrices[i])
        for r, w in enumerate(p.W.vectors):
            if not p.W.contains(D.apply(w)):
                raise RestrictionFailure(f"{L.basis[i]} moves W_{r} out of W", Witness("restriction", (i, r), (L.basis[i], f"W_{r}"), D.apply(w)))
        mats.append(qm @ D @ sec)
    a = Action(L, p.carrier, tuple(mats))
    C = p.carrier
    for i in range(L.dim):
        l = L.unit(i)
        for j in range(p.M.dim):
            m = p.M.unit(j)
            for k in range(p.N.dim):
                n = p.N.unit(k)
                # l acting on the relation n.m - [n, m], seen in the carrier
                lhs = p.l_M(rM.act(l, p.aNM.act(n, m)))
                rhs = vadd(C.bracket(p.l_N(rN.act(l, n)), p.l_M(m)), C.bracket(p.l_N(n), p.l_M(rM.act(l, m))))
                d = vsub(lhs, rhs)
                if not is_zero(d):
                    names = (L.basis[i], p.M.basis[j], p.N.basis[k])
                    raise RestrictionFailure(
                        f"{names[0]} does not kill the relation at ({names[2]}, {names[1]})",
                        Witness("K-generator", (i, j, k), names, d),
                    )
    return a


def copair_xmod(xm: CrossedModule, xn: CrossedModule, p: PeifferResult | None = None) -> CrossedModule:
    """M⋈N -> L, (m, n) -> mu(m) + nu(n), with L acting componentwise."""
    L = _same_base(xm, xn)
    if p is None:
        p = peiffer_saturate(xm.top, xn.top, *induced_actions(xm, xn))
    B = xm.boundary.matrix.hstack(xn.boundary.matrix)
    for r, w in enumerate(p.W.vectors):
        v = B.apply(w)
        if not is_zero(v):
            raise WellDefinednessFailure(f"boundary does not vanish on W_{r}", Witness("boundary-on-W", (r,), (f"W_{r}",), v))
    boundary = LinearMap(p.carrier, L, B @ p.W.section_matrix())
    action = action_on_peiffer(L, xm.action, xn.action, p)
    return CrossedModule(p.carrier, L, boundary, action, f"{xm.top.name}*{xn.top.name}->{L.name}")


@dataclass(frozen=True, eq=False)
class XModCoproduct:
    peiffer: PeifferResult
    xmod: CrossedModule
    iota_M: XModMorphism
    iota_N: XModMorphism


def xmod_coproduct(xm: CrossedModule, xn: CrossedModule) -> XModCoproduct:
    aMN, aNM = induced_actions(xm, xn)
    p = peiffer_saturate(xm.top, xn.top, aMN, aNM)
    x = copair_xmod(xm, xn, p)
    idL = LinearMap.identity(x.base)
    return XModCoproduct(p, x, XModMorphism(xm, x, p.l_M, idL), XModMorphism(xn, x, p.l_N, idL))


@dataclass(frozen=True, eq=False)
class Mediator:
    morphism: XModMorphism
    unique: bool
    failures: list  # failed crossed-module-morphism families


def xmod_coproduct_mediator(cp: XModCoproduct, target: CrossedModule, zM: XModMorphism, zN: XModMorphism) -> Mediator:
    """The morphism M⋈N -> Z restricting to zM and zN."""
    p = cp.peiffer
    if zM.base != zN.base:
        raise ValueError("the two morphisms disagree on the base")
    Z = zM.top.codomain
    S = zM.top.matrix.hstack(zN.top.matrix)
    for r, w in enumerate(p.W.vectors):
        v = S.apply(w)
        if not is_zero(v):
            raise WellDefinednessFailure(
                f"zM + zN does not vanish on W_{r}", Witness("mediator-on-W", (r,), (f"W_{r}",), v)
            )
    top = LinearMap(p.carrier, Z, S @ p.W.section_matrix())
    for side, l, z in (("M", p.l_M, zM.top), ("N", p.l_N, zN.top)):
        if top.compose(l) != z:
            raise TriangleFailure(f"triangle through {side} does not commute", Witness("triangle", (), (side,), None))
    imgs = [p.l_M(p.M.unit(i)) for i in range(p.M.dim)] + [p.l_N(p.N.unit(j)) for j in range(p.N.dim)]
    spans = (rank(Matrix.from_columns(p.carrier.field, imgs, p.carrier.dim)) if imgs else 0) == p.carrier.dim
    f = XModMorphism(cp.xmod, target, top, zM.base)
    return Mediator(f, spans, xmod_morphism_failures(f))


__all__ = [
    "CrossedModule",
    "Mediator",
    "PeifferXMods",
    "RestrictionFailure",
    "RoundtripReport",
    "TriangleFailure",
    "WellDefinednessFailure",
    "XModCoproduct",
    "XModMorphism",
    "action_on_peiffer",
    "carrier_actions",
    "check_xmod",
    "check_xmod_morphism",
    "copair_xmod",
    "identity_morphism",
    "induced_actions",
    "peiffer_xmods",
    "theorem_roundtrip",
    "xmod_coproduct",
    "xmod_coproduct_mediator",
    "xmod_failures",
    "xmod_morphism_failures",
]
