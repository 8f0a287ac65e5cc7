"""Fixed test instances and seeded random generators of mutual actions."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .actions import Action, conjugation
from .catalog import abelian, aff2, heisenberg, sl2
from .exactlin import QQ, Field, Matrix, Subspace, kernel, rref
from .liealg import LieAlgebra, LinearMap, subalgebra_inclusion, zero_algebra
from .xmod import CrossedModule, XModMorphism, induced_actions


@dataclass(frozen=True, eq=False)
class ActionPair:
    name: str
    M: LieAlgebra
    N: LieAlgebra
    aMN: Action
    aNM: Action

    def astuple(self):
        return self.M, self.N, self.aMN, self.aNM


def zero_pair(M: LieAlgebra, N: LieAlgebra) -> ActionPair:
    return ActionPair(f"zero({M.name},{N.name})", M, N, Action.zero(M, N), Action.zero(N, M))


def conjugation_pair(L: LieAlgebra) -> ActionPair:
    """M = N = L acting on each other by conjugation."""
    c = conjugation(L)
    return ActionPair(f"conj({L.name})", L, L, c, c)


def collapsing_pair(field: Field = QQ) -> ActionPair:
    """1-dim M and N with m.n = n and n.m = 0; compatible, and n dies in M⋈N."""
    M, N = abelian(1, field, "M", "m"), abelian(1, field, "N", "n")
    one = Matrix.identity(field, 1)
    return ActionPair("collapsing", M, N, Action(M, N, (one,)), Action.zero(N, M))


def incompatible_pair(field: Field = QQ) -> ActionPair:
    """M = aff2, N = span{n}; n acts on M as ad(e1), M acts trivially on N."""
    M, N = aff2(field, "M"), abelian(1, field, "N", "n")
    return ActionPair("incompatible", M, N, Action.zero(M, N), Action(N, M, (M.ad(M.unit("e1")),)))


def corpus_pairs(field: Field = QQ) -> list[ActionPair]:
    a, h, s = aff2(field), heisenberg(field), sl2(field)
    return [
        zero_pair(abelian(1, field), a),
        zero_pair(a, h),
        zero_pair(h, s),
        conjugation_pair(a),
        conjugation_pair(h),
        conjugation_pair(s),
        collapsing_pair(field),
        incompatible_pair(field),
    ]


# -- crossed modules ----------------------------------------------------------


def identity_xmod(L: LieAlgebra) -> CrossedModule:
    return CrossedModule(L, L, LinearMap.identity(L), conjugation(L), f"id({L.name})")


def zero_xmod(L: LieAlgebra) -> CrossedModule:
    Z = zero_algebra("0", L.field)
    return CrossedModule(Z, L, LinearMap.zero(Z, L), Action.zero(L, Z), f"0->{L.name}")


def ideal_xmod(L: LieAlgebra, vectors, names, name: str, boundary_zero: bool = False) -> CrossedModule:
    """An ideal I of L with its inclusion (or the zero map) and the conjugation action."""
    I, inc = subalgebra_inclusion(L, vectors, names, name)
    # restrict ad(l) to I through the inclusion
    mats = []
    sec = _left_inverse(inc)
    for i in range(L.dim):
        mats.append(sec @ L.ad(L.unit(i)) @ inc.matrix)
    mu = LinearMap.zero(I, L) if boundary_zero else inc
    return CrossedModule(I, L, mu, Action(L, I, tuple(mats)), f"{name}->{L.name}")


def _left_inverse(inc: LinearMap) -> Matrix:
    """A matrix s with s @ inc = 1, picked on pivot rows."""
    m = inc.matrix
    _, piv = rref(m.transpose())
    rows = [m.rows[p] for p in piv]
    sq = Matrix(m.field, tuple(rows), m.ncols)
    inv = _inverse(sq)
    sel = Matrix.from_rows(m.field, [[m.field.one if c == p else m.field.zero for c in range(m.nrows)] for p in piv], m.nrows)
    return inv @ sel


def _inverse(a: Matrix) -> Matrix:
    n = a.nrows
    aug = a.hstack(Matrix.identity(a.field, n))
    r, piv = rref(aug)
    if piv[:n] != tuple(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(a.field, tuple(row[n:] for row in r.rows), n)


def broken_xmod(field: Field = QQ) -> CrossedModule:
    """aff2 over a 1-dim base with zero boundary and zero action: the Peiffer identity fails."""
    M, L = aff2(field), abelian(1, field, "L", "l")
    return CrossedModule(M, L, LinearMap.zero(M, L), Action.zero(L, M), "broken")


def central_xmod(L: LieAlgebra) -> CrossedModule:
    """span{z} in the Heisenberg algebra with the zero boundary; valid since z is central."""
    return ideal_xmod(L, [L.unit("z")], ["z"], "Z", boundary_zero=True)


def collapsing_xmods(field: Field = QQ) -> tuple[CrossedModule, CrossedModule]:
    """Two crossed modules over span{l} inducing the collapsing pair."""
    L = abelian(1, field, "L", "l")
    M, N = abelian(1, field, "M", "m"), abelian(1, field, "N", "n")
    one = Matrix.identity(field, 1)
    xm = CrossedModule(M, L, LinearMap.from_images(M, L, [L.unit(0)]), Action.zero(L, M), "m->l")
    xn = CrossedModule(N, L, LinearMap.zero(N, L), Action(L, N, (one,)), "n->l(0)")
    return xm, xn


@dataclass(frozen=True, eq=False)
class XModPair:
    name: str
    xm: CrossedModule
    xn: CrossedModule


def corpus_xmod_pairs(field: Field = QQ) -> list[XModPair]:
    """Crossed modules over a common base, all valid."""
    s, h, a = sl2(field), heisenberg(field), aff2(field)
    hz = ideal_xmod(h, [h.unit("z")], ["z"], "Z")
    ae = ideal_xmod(a, [a.unit("e2")], ["e2"], "E")
    cm, cn = collapsing_xmods(field)
    return [
        XModPair("sl2 id/id", identity_xmod(s), identity_xmod(s)),
        XModPair("sl2 id/0", identity_xmod(s), zero_xmod(s)),
        XModPair("heis center/id", hz, identity_xmod(h)),
        XModPair("heis center/central0", hz, central_xmod(h)),
        XModPair("heis id/id", identity_xmod(h), identity_xmod(h)),
        XModPair("aff ideal/id", ae, identity_xmod(a)),
        XModPair("aff ideal/ideal", ae, ae),
        XModPair("ab1 collapsing", cm, cn),
    ]


@dataclass(frozen=True, eq=False)
class MediatorCase:
    name: str
    pair: XModPair
    target: CrossedModule | None  # None means the coproduct itself
    zM: XModMorphism | None
    zN: XModMorphism | None


def mediator_cases(field: Field = QQ) -> list[MediatorCase]:
    """Valid (XZ, zM, zN) for each corpus pair: the self target and the base L -> L."""
    out = []
    for p in corpus_xmod_pairs(field):
        out.append(MediatorCase(p.name + " / self", p, None, None, None))
        L = p.xm.base
        idL = identity_xmod(L)
        one = LinearMap.identity(L)
        zM = XModMorphism(p.xm, idL, p.xm.boundary, one)
        zN = XModMorphism(p.xn, idL, p.xn.boundary, one)
        out.append(MediatorCase(p.name + " / base", p, idL, zM, zN))
    return out


# -- random instances --------------------------------------------------------


def derivations(M: LieAlgebra) -> list[Matrix]:
    """A basis of Der(M) as matrices (columns are images of basis vectors)."""
    n = M.dim
    f = M.field
    if n == 0:
        return []
    # unknown D[r][c] at index r*n + c; equations D[x_i,x_j] - [D x_i, x_j] - [x_i, D x_j] = 0
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for r in range(n):
                eq = [f.zero] * (n * n)
                for k, x in enumerate(M.table[i][j]):
                    if x:
                        eq[r * n + k] += x
                for k in range(n):
                    # [D x_i, x_j]_r = sum_k D[k][i] [x_k, x_j]_r
                    eq[k * n + i] -= M.table[k][j][r]
                    eq[k * n + j] -= M.table[i][k][r]
                rows.append(eq)
    if not rows:
        rows = [[f.zero] * (n * n)]
    ker = kernel(Matrix.from_rows(f, rows, n * n))
    return [Matrix(f, tuple(tuple(v[r * n + c] for c in range(n)) for r in range(n)), n) for v in ker.vectors]


def _abelian_functional(N: LieAlgebra, rng: random.Random) -> list:
    """Random small-integer functional on N vanishing on [N, N]."""
    f = N.field
    derived = [v for row in N.table for v in row]
    ann = kernel(Matrix.from_rows(f, derived, N.dim)) if N.dim else None
    if ann is None or ann.dim == 0:
        return [f.zero] * N.dim
    coeffs = [rng.randint(-2, 2) for _ in range(ann.dim)]
    return [sum((c * v[k] for c, v in zip(coeffs, ann.vectors)), f.zero) for k in range(N.dim)]


def random_action(P: LieAlgebra, M: LieAlgebra, rng: random.Random) -> Action:
    """p.m = phi(p) D(m) with phi a character of P and D a derivation of M."""
    ders = derivations(M)
    f = M.field
    D = Matrix.zero(f, M.dim, M.dim)
    for d in ders:
        D = D + d.scale(f(rng.randint(-2, 2)))
    phi = _abelian_functional(P, rng)
    return Action(P, M, tuple(D.scale(x) for x in phi))


def _small_algebras(field: Field) -> list[LieAlgebra]:
    return [
        abelian(1, field, "A1", "u"),
        abelian(2, field, "A2", "u"),
        aff2(field, "aff"),
        heisenberg(field, "heis"),
        sl2(field, "sl2"),
        abelian(3, field, "A3", "u"),
    ]


def random_action_pair(rng: random.Random, field: Field = QQ) -> ActionPair:
    """Either two independent random actions, or the pair induced by two random crossed modules."""
    algs = _small_algebras(field)
    if rng.random() < 0.5:
        M, N = rng.choice(algs), rng.choice(algs)
        return ActionPair("random", M, N, random_action(M, N, rng), random_action(N, M, rng))
    xm, xn = _random_xmod_pair(rng, field)
    aMN, aNM = induced_actions(xm, xn)
    return ActionPair("random-induced", xm.top, xn.top, aMN, aNM)


def _random_xmod_pair(rng: random.Random, field: Field) -> tuple[CrossedModule, CrossedModule]:
    L = rng.choice(_small_algebras(field))
    return _random_xmod(L, rng), _random_xmod(L, rng)


def _random_xmod(L: LieAlgebra, rng: random.Random) -> CrossedModule:
    kind = rng.randrange(3)
    if kind == 0:
        return identity_xmod(L)
    if kind == 1:
        return zero_xmod(L)
    f = L.field
    derived = [v for row in L.table for v in row if any(v)]
    D = Subspace.span(f, L.dim, derived)
    vecs = list(D.vectors)
    # any subspace containing [L, L] is an ideal
    for _ in range(rng.randrange(L.dim - D.dim + 1)):
        vecs.append(tuple(f(rng.randint(-2, 2)) for _ in range(L.dim)))
    S = Subspace.span(f, L.dim, vecs)
    if S.dim == 0:
        return zero_xmod(L)
    return ideal_xmod(L, list(S.vectors), [f"i{k + 1}" for k in range(S.dim)], "I")


def random_action_pairs(count: int, seed: int = 0, field: Field = QQ) -> list[ActionPair]:
    rng = random.Random(seed)
    return [random_action_pair(rng, field) for _ in range(count)]
