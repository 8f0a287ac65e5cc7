"""Free products truncated by degree, the flat object P♭M, and Peiffer products.

Two independent routes compute the Peiffer product M⋈N of mutually acting
algebras:

* :func:`peiffer_saturate` works on M⊕N directly.  Every mixed bracket
  collapses to degree one, so M⋈N is a quotient of M⊕N by the smallest
  subspace W that makes the induced bracket a Lie bracket.
* :func:`peiffer_truncated` builds the free product inside a truncated free
  Lie algebra and quotients by the ideal generated by the structure
  relations and the Peiffer relations.  It never sets a bracket to zero for
  being too long; it only refuses to form brackets past class c, so the
  collapse it finds in degree one is always genuine and grows with c.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .actions import Action, ActionEnvironment, MixedWord, check_action, evaluate_word
from .exactlin import EchelonBasis, Matrix, Subspace, Vector, kernel, saturate, to_dense, vadd, vsub, is_zero
from .freelie import Bracket, HallAlgebra, Letter
from .liealg import LieAlgebra, LinearMap, Witness, check_jacobi, direct_sum, inclusions, quotient_by_ideal


class ActionAxiomError(ValueError):
    def __init__(self, which: str, witness: Witness):
        super().__init__(f"{which} is not an action: {witness}")
        self.witness = witness


def _hall_letters(algs: Sequence[tuple[str, LieAlgebra]]) -> list[Letter]:
    return [Letter(b, tag) for tag, a in algs for b in a.basis]


class TruncatedCoproduct:
    """The free product of algebras, modelled up to bracket degree c.

    The ambient space is the class-c truncation V of the free Lie algebra on
    the union of the bases.  ``relations`` is the subspace R generated by the
    structure relations ``[x, y] - (their bracket in the algebra)`` of each
    factor and any ``extra`` relations, closed under bracketing with letters
    whenever the result stays within degree c.  The quotient V/R is the
    truncated coproduct.  Its bracket is only defined for classes whose
    degrees add up to at most c.
    """

    def __init__(self, factors: Sequence[tuple[str, LieAlgebra]], c: int, extra=()):
        if c < 2:
            raise ValueError("truncation class must be at least 2")
        self.factors = list(factors)
        self.c = c
        self.field = factors[0][1].field
        self.letters = _hall_letters(self.factors)
        self.hall = HallAlgebra(self.letters, c, self.field)
        deg = self.hall.degrees
        self.order = sorted(range(self.hall.dim), key=lambda k: (-deg[k], k))
        self.offsets = {}
        pos = 0
        for tag, a in self.factors:
            self.offsets[tag] = pos
            pos += a.dim
        seeds = []
        for tag, a in self.factors:
            off = self.offsets[tag]
            for i in range(a.dim):
                for j in range(i + 1, a.dim):
                    rel = dict(self.hall.bracket_basis(off + i, off + j))
                    for k, x in enumerate(a.table[i][j]):
                        if x:
                            rel[off + k] = rel.get(off + k, 0) - x
                    seeds.append(rel)
        seeds.extend(extra(self) if callable(extra) else extra)
        self.relations = self._close(seeds)

    @property
    def ambient_dim(self) -> int:
        return self.hall.dim

    def degree_of(self, v: dict) -> int:
        return max((self.hall.degrees[k] for k in v), default=0)

    def ad_letter(self, x: int, v: dict) -> dict:
        out: dict = {}
        for k, a in v.items():
            for kk, b in self.hall.bracket_basis(x, k).items():
                out[kk] = out.get(kk, 0) + a * b
        return {k: a for k, a in out.items() if a}

    def _close(self, seeds: Sequence[dict], base: EchelonBasis | None = None) -> EchelonBasis:
        eb = EchelonBasis(self.field, self.hall.dim, self.order)
        if base is not None:
            eb.rows = {p: dict(r) for p, r in base.rows.items()}
        queue = []
        for s in seeds:
            row = eb.add({k: self.field(x) for k, x in s.items()})
            if row is not None:
                queue.append(row)
        nletters = len(self.letters)
        while queue:
            row = queue.pop()
            if self.degree_of(row) > self.c - 1:
                continue
            for x in range(nletters):
                new = eb.add(self.ad_letter(x, row))
                if new is not None:
                    queue.append(new)
        return eb

    def ideal_closure(self, seeds: Sequence[dict]) -> EchelonBasis:
        """Relations plus ``seeds``, closed under degree-respecting letter brackets.

        Existing relation rows are already closed, so only the new rows are
        bracketed.
        """
        return self._close(seeds, self.relations)

    @property
    def dimension(self) -> int:
        return self.hall.dim - len(self.relations)

    def free_columns(self) -> list[int]:
        piv = set(self.relations.rows)
        deg = self.hall.degrees
        return sorted((k for k in range(self.hall.dim) if k not in piv), key=lambda k: (deg[k], k))

    def degree_profile(self) -> list[int]:
        """Dimension of each graded piece of the degree filtration of the quotient."""
        deg = self.hall.degrees
        prof = [0] * self.c
        for k in self.free_columns():
            prof[deg[k] - 1] += 1
        return prof

    def concentrated_in_degree_one(self) -> bool:
        return all(x == 0 for x in self.degree_profile()[1:])

    def normal_form(self, v: dict) -> dict:
        return self.relations.reduce(dict(v))

    def letter_vector(self, tag: str, coords: Sequence) -> dict:
        off = self.offsets[tag]
        return {off + i: x for i, x in enumerate(coords) if x}

    def bracket(self, u: dict, v: dict) -> dict:
        """Bracket of two classes, each given by any representative."""
        u, v = self.normal_form(u), self.normal_form(v)
        if self.degree_of(u) + self.degree_of(v) > self.c:
            raise ValueError("bracket leaves the truncation")
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, x in self.hall.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * x
        return self.normal_form({k: x for k, x in out.items() if x})

    def quotient_coordinates(self, v: dict) -> Vector:
        r = self.normal_form(v)
        return tuple(self.field(r.get(k, 0)) for k in self.free_columns())

    def inclusion(self, tag: str) -> Matrix:
        """Matrix of i_tag: factor -> quotient (in free-column coordinates)."""
        a = dict(self.factors)[tag]
        cols = [self.quotient_coordinates(self.letter_vector(tag, a.unit(i))) for i in range(a.dim)]
        return Matrix.from_columns(self.field, cols, self.dimension)

    def fold_matrix(self, target: str) -> Matrix:
        """Matrix of V -> target sending the target's letters to themselves and the rest to 0."""
        a = dict(self.factors)[target]
        off = self.offsets[target]
        vals: list = []
        for k, w in enumerate(self.hall.words):
            if isinstance(w, Letter):
                vals.append(a.unit(k - off) if w.origin == target else a.zero())
            else:
                vals.append(a.bracket(vals[w[0]], vals[w[1]]))
        return Matrix.from_columns(self.field, vals, a.dim)

    def check_partial_jacobi(self) -> Witness | None:
        """Jacobi on quotient basis triples whose degrees add up to at most c."""
        cols = self.free_columns()
        deg = self.hall.degrees
        one = self.field.one
        for i, j, k in itertools.combinations(cols, 3):
            if deg[i] + deg[j] + deg[k] > self.c:
                continue
            u, v, w = {i: one}, {j: one}, {k: one}
            s: dict = {}
            for part in (self.bracket(self.bracket(u, v), w), self.bracket(self.bracket(v, w), u), self.bracket(self.bracket(w, u), v)):
                for kk, x in part.items():
                    s[kk] = s.get(kk, 0) + x
            s = {kk: x for kk, x in s.items() if x}
            if s:
                names = self.hall.names()
                return Witness("jacobi", (i, j, k), (names[i], names[j], names[k]), None)
        return None

    def check_inclusion_morphism(self, tag: str) -> Witness | None:
        a = dict(self.factors)[tag]
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = self.normal_form(self.letter_vector(tag, a.table[i][j]))
                rhs = self.bracket(self.letter_vector(tag, a.unit(i)), self.letter_vector(tag, a.unit(j)))
                if lhs != rhs:
                    return Witness("morphism", (i, j), (a.basis[i], a.basis[j]), None)
        return None


def truncated_coproduct(M: LieAlgebra, N: LieAlgebra, c: int) -> TruncatedCoproduct:
    return TruncatedCoproduct([("M", M), ("N", N)], c)


@dataclass(frozen=True, eq=False)
class FlatObject:
    """P♭M inside the truncated coproduct of P and M.

    ``kernel`` and ``ideal`` are subspaces of the truncated free algebra V;
    both contain the relation subspace.  ``dimension`` is the dimension of
    their image in the quotient.
    """

    coproduct: TruncatedCoproduct
    kernel: Subspace
    ideal: Subspace

    @property
    def dimension(self) -> int:
        return self.kernel.dim - len(self.coproduct.relations)

    def matches_ideal(self) -> bool:
        return self.kernel == self.ideal

    def quotient_basis(self) -> Subspace:
        cp = self.coproduct
        vecs = [cp.quotient_coordinates({k: x for k, x in enumerate(v) if x}) for v in self.kernel.vectors]
        return Subspace.span(cp.field, cp.dimension, vecs)


def flat_object(P: LieAlgebra, M: LieAlgebra, c: int) -> FlatObject:
    """Kernel of the fold map P+M -> P, truncated at class c."""
    cp = TruncatedCoproduct([("P", P), ("M", M)], c)
    f = cp.field
    n = cp.ambient_dim
    ker = kernel(cp.fold_matrix("P"))
    one = f.one
    seeds = [{cp.offsets["M"] + i: one} for i in range(M.dim)]
    eb = cp.ideal_closure(seeds)
    ideal = Subspace.span(f, n, [to_dense(f, n, r) for r in eb.rows.values()])
    return FlatObject(cp, ker, ideal)


# -- Peiffer product on M ⊕ N ------------------------------------------------


def _check_pair(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action):
    if aMN.actor.dim != M.dim or aMN.target.dim != N.dim or aNM.actor.dim != N.dim or aNM.target.dim != M.dim:
        raise ValueError("actions do not match the algebras")
    for name, a in (("M on N", aMN), ("N on M", aNM)):
        w = check_action(a)
        if w is not None:
            raise ActionAxiomError(name, w)


def reduction_algebra(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action) -> LieAlgebra:
    """M⊕N with bracket r((m,n),(m',n')) = ([m,m'] + n.m', [n,n'] + m.n').

    Mixed brackets are rewritten with the left argument acting; the result is
    usually not antisymmetric, so this is a candidate table, not a Lie algebra.
    """
    clash = set(M.basis) & set(N.basis)
    S = direct_sum(M, N, prefixes=("M.", "N.") if clash else ("", ""))
    rows = []
    for i in range(S.dim):
        row = []
        for j in range(S.dim):
            row.append(_r(M, N, aMN, aNM, S.unit(i), S.unit(j)))
        rows.append(tuple(row))
    return LieAlgebra(f"{M.name}*{N.name}", S.basis, tuple(rows), M.field)


def _r(M, N, aMN, aNM, u, v) -> Vector:
    dm = M.dim
    m, n = u[:dm], u[dm:]
    m2, n2 = v[:dm], v[dm:]
    top = vadd(M.bracket(m, m2), aNM.act(n, m2))
    bottom = vadd(N.bracket(n, n2), aMN.act(m, n2))
    return tuple(top) + tuple(bottom)


@dataclass(frozen=True, eq=False)
class PeifferResult:
    M: LieAlgebra
    N: LieAlgebra
    aMN: Action
    aNM: Action
    reduction: LieAlgebra  # M⊕N with the bracket r
    W: Subspace
    carrier: LieAlgebra
    projection: LinearMap  # reduction -> carrier
    l_M: LinearMap
    l_N: LinearMap

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def lift(self, v: Sequence) -> Vector:
        """Representative in M⊕N of a carrier vector."""
        return self.W.section_matrix().apply(v)

    def split(self, u: Sequence) -> tuple[Vector, Vector]:
        dm = self.M.dim
        return tuple(u[:dm]), tuple(u[dm:])

    def spans(self) -> bool:
        imgs = [self.l_M(self.M.unit(i)) for i in range(self.M.dim)] + [self.l_N(self.N.unit(j)) for j in range(self.N.dim)]
        return Subspace.span(self.carrier.field, self.carrier.dim, imgs).dim == self.carrier.dim

    def k_relations(self) -> Witness | None:
        """l_N(m.n) = [l_M m, l_N n] and l_M(n.m) = [l_N n, l_M m] on basis pairs."""
        M, N, C = self.M, self.N, self.carrier
        for i in range(M.dim):
            for j in range(N.dim):
                m, n = M.unit(i), N.unit(j)
                lm, ln = self.l_M(m), self.l_N(n)
                d = vsub(self.l_N(self.aMN.act(m, n)), C.bracket(lm, ln))
                if not is_zero(d):
                    return Witness("K-relation m.n", (i, j), (M.basis[i], N.basis[j]), d)
                d = vsub(self.l_M(self.aNM.act(n, m)), C.bracket(ln, lm))
                if not is_zero(d):
                    return Witness("K-relation n.m", (i, j), (M.basis[i], N.basis[j]), d)
        return None


def peiffer_seeds(red: LieAlgebra) -> list[Vector]:
    """Antisymmetry and Jacobi defects of the reduction bracket on basis vectors."""
    n = red.dim
    units = [red.unit(i) for i in range(n)]
    out = []
    for i in range(n):
        for j in range(i, n):
            d = vadd(red.table[i][j], red.table[j][i])
            if not is_zero(d):
                out.append(d)
    for i, j, k in itertools.product(range(n), repeat=3):
        d = vadd(
            vadd(red.bracket(red.table[i][j], units[k]), red.bracket(red.table[j][k], units[i])),
            red.bracket(red.table[k][i], units[j]),
        )
        if not is_zero(d):
            out.append(d)
    return out


def peiffer_saturate(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action, name: str | None = None) -> PeifferResult:
    """M⋈N as the quotient of M⊕N by the collapse subspace W."""
    _check_pair(M, N, aMN, aNM)
    red = reduction_algebra(M, N, aMN, aNM)
    seed = Subspace.span(M.field, red.dim, peiffer_seeds(red))
    W = saturate(seed, [red.bracket])
    carrier, proj = quotient_by_ideal(red, W, name or f"{M.name}⋈{N.name}")
    w = check_jacobi(carrier)
    if w is not None:
        raise AssertionError(f"Peiffer carrier is not a Lie algebra: {w}")
    iM, iN = inclusions(M, N, red)
    return PeifferResult(M, N, aMN, aNM, red, W, carrier, proj, proj.compose(iM), proj.compose(iN))


# -- the truncation oracle ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedPeiffer:
    c: int
    dimension: int
    profile: tuple
    W: Subspace  # collapse inside M⊕N seen in degree one
    table: tuple | None  # degree-one bracket table in complement coordinates
    coproduct: TruncatedCoproduct

    @property
    def concentrated(self) -> bool:
        return all(x == 0 for x in self.profile[1:])


def peiffer_relations(cp: TruncatedCoproduct, M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action) -> list[dict]:
    """n.m - [n,m] and m.n - [m,n] for basis m, n, as vectors of the truncated algebra."""
    om, on = cp.offsets["M"], cp.offsets["N"]
    out = []
    for i in range(M.dim):
        for j in range(N.dim):
            rel = {k: -x for k, x in cp.hall.bracket_basis(on + j, om + i).items()}
            for k, x in enumerate(aNM.act(N.unit(j), M.unit(i))):
                if x:
                    rel[om + k] = rel.get(om + k, 0) + x
            out.append(rel)
            rel = {k: -x for k, x in cp.hall.bracket_basis(om + i, on + j).items()}
            for k, x in enumerate(aMN.act(M.unit(i), N.unit(j))):
                if x:
                    rel[on + k] = rel.get(on + k, 0) + x
            out.append(rel)
    return out


def peiffer_truncated(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action, c: int) -> TruncatedPeiffer:
    """(M+N)/K inside the class-c truncation of the free product."""
    _check_pair(M, N, aMN, aNM)
    cp = TruncatedCoproduct([("M", M), ("N", N)], c, extra=lambda cp: peiffer_relations(cp, M, N, aMN, aNM))
    f = cp.field
    n1 = M.dim + N.dim
    deg1 = [to_dense(f, n1, r) for p, r in cp.relations.rows.items() if cp.hall.degrees[p] == 1]
    W = Subspace.span(f, n1, deg1)
    profile = tuple(cp.degree_profile())
    table = None
    if all(x == 0 for x in profile[1:]):
        comp = W.complement_columns()
        one = f.one
        rows = []
        for i in comp:
            row = []
            for j in comp:
                v = cp.bracket({i: one}, {j: one})
                dense = to_dense(f, n1, v)
                row.append(tuple(dense[k] for k in comp))
            rows.append(tuple(row))
        table = tuple(rows)
    return TruncatedPeiffer(c, cp.dimension, profile, W, table, cp)


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    stabilized: bool
    runs: tuple  # TruncatedPeiffer per class tried

    @property
    def final(self) -> TruncatedPeiffer:
        return self.runs[-1]

    @property
    def stable_class(self) -> int | None:
        return self.runs[-1].c if self.stabilized else None


def peiffer_oracle(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action, max_class: int = 5, start: int = 2) -> OracleVerdict:
    """Run the truncation at increasing classes until two consecutive runs agree.

    Agreement means equal dimension with everything in degree one.  Returns
    an inconclusive verdict if that has not happened by ``max_class``.
    """
    runs = []
    for c in range(start, max_class + 1):
        t = peiffer_truncated(M, N, aMN, aNM, c)
        runs.append(t)
        if len(runs) >= 2:
            a, b = runs[-2], runs[-1]
            if a.concentrated and b.concentrated and a.dimension == b.dimension and a.W == b.W:
                return OracleVerdict(True, tuple(runs))
    return OracleVerdict(False, tuple(runs))


def oracle_agrees(p: PeifferResult, t: TruncatedPeiffer) -> bool:
    """Same collapse subspace, same dimension and the same degree-one bracket table."""
    if not t.concentrated or t.table is None:
        return False
    if t.W != p.W or t.dimension != p.carrier.dim:
        return False
    return t.table == p.carrier.table


# -- the coequalizer property ------------------------------------------------


@dataclass(frozen=True)
class CoequalizerFailure:
    home: str
    generators: tuple  # e.g. ("[n,m]", ...) from outermost to innermost
    target: str
    lhs: Vector
    rhs: Vector

    def __str__(self):
        inner = self.target
        for g in reversed(self.generators):
            inner = f"[{g},{inner}]"
        return f"coequalizer property fails in {self.home} at {inner}"


def check_coequalizer_property(M: LieAlgebra, N: LieAlgebra, aMN: Action, aNM: Action, d: int = 3) -> CoequalizerFailure | None:
    """Compare xi([x_k,[...,[x_1,mbar]...]]) with xi([eps x_k,[...,[eps x_1,mbar]...]]).

    The x_i run over the basis generators [n,m] of N♭M and [m,n] of M♭N,
    with eps the corresponding action; mbar runs over the basis of the home
    algebra.  Both homes M and N are checked, for every depth up to d.
    """
    _check_pair(M, N, aMN, aNM)
    env = ActionEnvironment({"M": M, "N": N}, {("M", "N"): aMN, ("N", "M"): aNM})
    gens = []
    for i in range(M.dim):
        for j in range(N.dim):
            m, n = Letter(M.basis[i], "M"), Letter(N.basis[j], "N")
            gens.append((Bracket(n, m), "M", aNM.act(N.unit(j), M.unit(i))))
            gens.append((Bracket(m, n), "N", aMN.act(M.unit(i), N.unit(j))))
    for home, A in (("M", M), ("N", N)):
        for k in range(1, d + 1):
            for combo in itertools.product(range(len(gens)), repeat=k):
                for t in range(A.dim):
                    target = Letter(A.basis[t], home)
                    lhs_term, rhs_term = target, target
                    values = {}
                    for pos, g in enumerate(reversed(combo)):
                        word, tag, eps = gens[g]
                        lhs_term = Bracket(word, lhs_term)
                        x = Letter(f"eps{pos}", tag)
                        values[x] = eps
                        rhs_term = Bracket(x, rhs_term)
                    lhs = evaluate_word(env, MixedWord(lhs_term), home)
                    rhs = evaluate_word(env, MixedWord(rhs_term, values), home)
                    if lhs != rhs:
                        return CoequalizerFailure(home, tuple(str(gens[g][0]) for g in combo), A.basis[t], lhs, rhs)
    return None
