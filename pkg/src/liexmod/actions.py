"""Actions of one Lie algebra on another, and compatibility of mutual actions.

An action of P on M is stored as one matrix per basis element of P; the
value of ``act(p, m)`` is ``sum_i p_i * rho[i] @ m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactlin import Matrix, Vector, is_zero, lincomb, vneg, vsub
from .freelie import Bracket, Letter, MagmaTerm, letters, normalize_pinned
from .liealg import LieAlgebra, LinearMap, Witness


@dataclass(frozen=True, eq=False)
class Action:
    actor: LieAlgebra
    target: LieAlgebra
    matrices: tuple

    def __post_init__(self):
        ms = tuple(self.matrices)
        if len(ms) != self.actor.dim:
            raise ValueError(f"action of {self.actor.name} needs {self.actor.dim} matrices, got {len(ms)}")
        for m in ms:
            if m.shape != (self.target.dim, self.target.dim):
                raise ValueError(f"action matrices must be {self.target.dim}x{self.target.dim}")
        object.__setattr__(self, "matrices", ms)

    @classmethod
    def zero(cls, actor: LieAlgebra, target: LieAlgebra) -> "Action":
        z = Matrix.zero(target.field, target.dim, target.dim)
        return cls(actor, target, (z,) * actor.dim)

    def rho(self, p: Sequence) -> Matrix:
        """Matrix of m -> p.m for an arbitrary actor element p."""
        f = self.target.field
        out = Matrix.zero(f, self.target.dim, self.target.dim)
        for c, m in zip(p, self.matrices):
            if c:
                out = out + m.scale(c)
        return out

    def act(self, p: Sequence, m: Sequence) -> Vector:
        t = self.target
        return lincomb(t.field, t.dim, ((c, mat.apply(m)) for c, mat in zip(p, self.matrices) if c))

    def __eq__(self, other):
        if not isinstance(other, Action):
            return NotImplemented
        return self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def pullback(self, f: LinearMap) -> "Action":
        """The action of f.domain given by x.m = f(x).m."""
        if f.codomain.dim != self.actor.dim:
            raise ValueError("pullback along a map into a different actor")
        mats = [self.rho(f(f.domain.unit(i))) for i in range(f.domain.dim)]
        return Action(f.domain, self.target, tuple(mats))

    def __repr__(self):
        return f"Action({self.actor.name} on {self.target.name})"


def conjugation(m: LieAlgebra) -> Action:
    """The adjoint action of m on itself."""
    return Action(m, m, tuple(m.ad(m.unit(i)) for i in range(m.dim)))


def check_action(a: Action) -> Witness | None:
    """None if both action axioms hold on basis pairs, else the first failure."""
    P, M = a.actor, a.target
    rho = a.matrices
    for i in range(P.dim):
        for j in range(P.dim):
            lhs = a.rho(P.table[i][j])
            rhs = rho[i] @ rho[j] - rho[j] @ rho[i]
            if lhs != rhs:
                # report the first basis vector where the matrices differ
                for k in range(M.dim):
                    d = vsub(lhs.column(k), rhs.column(k))
                    if not is_zero(d):
                        return Witness("action-homomorphism", (i, j, k), (P.basis[i], P.basis[j], M.basis[k]), d)
    for i in range(P.dim):
        for j in range(M.dim):
            mj = M.unit(j)
            pj = rho[i].apply(mj)
            for k in range(M.dim):
                mk = M.unit(k)
                lhs = rho[i].apply(M.table[j][k])
                rhs = lincomb(M.field, M.dim, [(1, M.bracket(pj, mk)), (1, M.bracket(mj, rho[i].apply(mk)))])
                d = vsub(lhs, rhs)
                if not is_zero(d):
                    return Witness("action-derivation", (i, j, k), (P.basis[i], M.basis[j], M.basis[k]), d)
    return None


def check_compatible(aMN: Action, aNM: Action) -> Witness | None:
    """None if the mutual actions are compatible.

    Checks ``(n.m).n' = [n', m.n]`` and ``(m.n).m' = [m', n.m]`` on basis
    triples; a witness names (m, n, third) and the defect.
    """
    M, N = aMN.actor, aMN.target
    if aNM.actor is not N and aNM.actor.table != N.table:
        raise ValueError("actions do not act on each other")
    if aNM.target.dim != M.dim:
        raise ValueError("actions do not act on each other")
    for i in range(M.dim):
        m = M.unit(i)
        for j in range(N.dim):
            n = N.unit(j)
            nm = aNM.act(n, m)
            mn = aMN.act(m, n)
            for k in range(N.dim):
                n2 = N.unit(k)
                d = vsub(aMN.act(nm, n2), N.bracket(n2, mn))
                if not is_zero(d):
                    return Witness("compatibility-N", (i, j, k), (M.basis[i], N.basis[j], N.basis[k]), d)
            for k in range(M.dim):
                m2 = M.unit(k)
                d = vsub(aNM.act(mn, m2), M.bracket(m2, nm))
                if not is_zero(d):
                    return Witness("compatibility-M", (i, j, k), (M.basis[i], N.basis[j], M.basis[k]), d)
    return None


# -- words over several algebras ---------------------------------------------


class UnresolvedPair(KeyError):
    pass


@dataclass(frozen=True)
class ActionEnvironment:
    """Algebras keyed by origin tag, and actions keyed by (actor tag, target tag)."""

    algebras: Mapping[str, LieAlgebra]
    actions: Mapping[tuple, Action] = field(default_factory=dict)

    def action(self, actor: str, target: str) -> Action:
        if actor == target:
            return conjugation(self.algebras[actor])
        try:
            return self.actions[(actor, target)]
        except KeyError:
            raise UnresolvedPair(f"no action of {actor} on {target} registered") from None


@dataclass(frozen=True)
class MixedWord:
    """A bracket term whose letters are tagged with the algebra they live in.

    ``values`` optionally assigns a coordinate vector to a letter; otherwise
    the letter's name is read as a basis element of its algebra.
    """

    term: MagmaTerm
    values: Mapping[Letter, Vector] = field(default_factory=dict)

    def vector(self, env: ActionEnvironment, x: Letter) -> Vector:
        if x in self.values:
            return tuple(self.values[x])
        return env.algebras[x.origin].unit(x.name)


def _tags(t: MagmaTerm) -> set:
    return {x.origin for x in letters(t)}


def evaluate_word(env: ActionEnvironment, w: MixedWord, home: str, strategy: str = "collapse") -> Vector:
    """Value in the home algebra of a word in the ideal generated by home.

    Innermost brackets are evaluated first.  A subterm without home letters
    acts on home values; it acts through the registered action when it is a
    letter, and through commutators of actions otherwise.  With
    ``strategy="collapse"`` a subterm whose letters all come from one other
    algebra is first bracketed inside that algebra.
    """
    if strategy not in ("collapse", "commutator"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if home not in _tags(w.term):
        raise ValueError(f"word {w.term} has no letter from {home}")
    H = env.algebras[home]

    def value(t) -> Vector:
        if isinstance(t, Letter):
            return w.vector(env, t)
        lh, rh = home in _tags(t.left), home in _tags(t.right)
        if lh and rh:
            return H.bracket(value(t.left), value(t.right))
        if rh:
            return act(t.left, value(t.right))
        return vneg(act(t.right, value(t.left)))

    def act(s, v: Vector) -> Vector:
        if isinstance(s, Letter):
            return env.action(s.origin, home).act(w.vector(env, s), v)
        tags = _tags(s)
        if strategy == "collapse" and len(tags) == 1:
            (tag,) = tags
            return env.action(tag, home).act(pure(s, env.algebras[tag]), v)
        a = act(s.left, act(s.right, v))
        b = act(s.right, act(s.left, v))
        return vsub(a, b)

    def pure(s, A: LieAlgebra) -> Vector:
        if isinstance(s, Letter):
            return w.vector(env, s)
        return A.bracket(pure(s.left, A), pure(s.right, A))

    return value(w.term)


def evaluate_pinned(env: ActionEnvironment, w: MixedWord, home: str, pin: Letter) -> Vector:
    """Evaluate by first rewriting w into right-nested words ending in ``pin``.

    Each word [x_k,[...,[x_2, pin]...]] is then evaluated innermost-first,
    one letter action at a time.
    """
    if pin.origin != home:
        raise ValueError("the pinned letter must come from the home algebra")
    H = env.algebras[home]
    acc = H.zero()
    terms = []
    for c, word in normalize_pinned(w.term, pin):
        v = w.vector(env, word.last)
        for x in reversed(word.letters[:-1]):
            if x.origin == home:
                v = H.bracket(w.vector(env, x), v)
            else:
                v = env.action(x.origin, home).act(w.vector(env, x), v)
        terms.append((c, v))
    return lincomb(H.field, H.dim, terms) if terms else acc


def coproduct_action_identity(aNM: Action, m: int, n: int, mbar: int) -> tuple[Vector, Vector]:
    """Both sides of xi([[n,m],mbar]) = [xi([n,m]), mbar] for basis indices."""
    N, M = aNM.actor, aNM.target
    env = ActionEnvironment({"M": M, "N": N}, {("N", "M"): aNM})
    t = Bracket(Bracket(Letter(N.basis[n], "N"), Letter(M.basis[m], "M")), Letter(M.basis[mbar], "M"))
    lhs = evaluate_word(env, MixedWord(t), "M")
    rhs = M.bracket(aNM.act(N.unit(n), M.unit(m)), M.unit(mbar))
    return lhs, rhs


def induced_action(a: Action, f: LinearMap) -> Action:
    """x.m := f(x).m, i.e. the action pulled back along f."""
    return a.pullback(f)
