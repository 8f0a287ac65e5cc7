"""Finite-dimensional Lie algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .exactlin import (
    QQ,
    Field,
    Matrix,
    Subspace,
    Vector,
    block_diagonal,
    is_zero,
    kernel,
    lincomb,
    rank,
    unit_vector,
    vadd,
    vsub,
    zero_vector,
)


class NotAnIdeal(ValueError):
    def __init__(self, basis_index: int, vector_index: int, message: str):
        super().__init__(message)
        self.witness = (basis_index, vector_index)


@dataclass(frozen=True)
class Witness:
    """A failed check: which identity, at which basis indices, and the defect."""

    family: str
    indices: tuple
    names: tuple
    defect: Vector | None = None

    def __str__(self):
        where = ", ".join(self.names)
        return f"{self.family} fails at ({where})"


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra with named basis; ``table[i][j]`` holds [b_i, b_j]."""

    name: str
    basis: tuple
    table: tuple
    field: Field = QQ

    def __post_init__(self):
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise ValueError(f"{self.name}: basis names must be distinct")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"{self.name}: bracket table must be {n}x{n}")
        table = tuple(tuple(tuple(self.field(x) for x in v) for v in row) for row in self.table)
        for row in table:
            for v in row:
                if len(v) != n:
                    raise ValueError(f"{self.name}: bracket vectors must have length {n}")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "table", table)

    @classmethod
    def from_brackets(
        cls,
        name: str,
        basis: Sequence[str],
        brackets: Mapping[tuple[str, str], Mapping[str, object]],
        field: Field = QQ,
    ) -> "LieAlgebra":
        """Build from {(a, b): {c: coeff}}; the (b, a) entries are filled by antisymmetry."""
        idx = {b: i for i, b in enumerate(basis)}
        sparse = {}
        for (a, b), val in brackets.items():
            if a not in idx or b not in idx:
                raise KeyError(f"unknown basis element in [{a},{b}]")
            vec = {}
            for c, x in val.items():
                if c not in idx:
                    raise KeyError(f"unknown basis element {c!r} in [{a},{b}]")
                vec[idx[c]] = field(x)
            i, j = idx[a], idx[b]
            sparse[(i, j)] = vec
            if (j, i) not in sparse or (b, a) not in brackets:
                sparse[(j, i)] = {k: -x for k, x in vec.items()}
        return cls.from_sparse(name, basis, sparse, field)

    @classmethod
    def from_sparse(cls, name: str, basis: Sequence[str], sparse: Mapping[tuple[int, int], Mapping[int, object]], field: Field = QQ) -> "LieAlgebra":
        n = len(basis)
        z = field.zero
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                v = [z] * n
                for k, x in sparse.get((i, j), {}).items():
                    v[k] = field(x)
                row.append(tuple(v))
            table.append(tuple(row))
        return cls(name, tuple(basis), tuple(table), field)

    @classmethod
    def abelian(cls, name: str, basis: Sequence[str], field: Field = QQ) -> "LieAlgebra":
        return cls.from_sparse(name, basis, {}, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self.basis.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a basis element of {self.name}") from None

    def unit(self, i: int | str) -> Vector:
        if isinstance(i, str):
            i = self.index(i)
        return unit_vector(self.field, self.dim, i)

    def zero(self) -> Vector:
        return zero_vector(self.field, self.dim)

    def element(self, coords: Mapping[str, object]) -> Vector:
        return lincomb(self.field, self.dim, ((self.field(c), self.unit(b)) for b, c in coords.items()))

    @cached_property
    def _sparse(self):
        return [[{k: x for k, x in enumerate(v) if x} for v in row] for row in self.table]

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        acc = [self.field.zero] * self.dim
        sp = self._sparse
        for i, a in enumerate(u):
            if not a:
                continue
            row = sp[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, x in row[j].items():
                    acc[k] += ab * x
        return tuple(acc)

    def ad(self, u: Sequence) -> Matrix:
        cols = [self.bracket(u, self.unit(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def is_abelian(self) -> bool:
        return all(is_zero(v) for row in self.table for v in row)

    def format_vector(self, v: Sequence) -> str:
        from .freelie import format_combination

        return format_combination([(x, b) for x, b in zip(v, self.basis)], self.field)

    def structure_constants(self) -> dict:
        """{(a, b): {c: coeff}} for a before b with nonzero bracket."""
        out = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                v = self.table[i][j]
                if not is_zero(v):
                    out[(self.basis[i], self.basis[j])] = {self.basis[k]: x for k, x in enumerate(v) if x}
        return out

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    def same_structure(self, other: "LieAlgebra") -> bool:
        return self.field == other.field and self.table == other.table


def check_jacobi(a: LieAlgebra) -> Witness | None:
    """None if a is a Lie algebra, else the first violated identity.

    Families are checked in the order alternating, antisymmetry, Jacobi,
    each over basis indices in lexicographic order.
    """
    n = a.dim
    names = a.basis
    for i in range(n):
        if not is_zero(a.table[i][i]):
            return Witness("alternating", (i,), (names[i],), a.table[i][i])
    for i in range(n):
        for j in range(i + 1, n):
            d = vadd(a.table[i][j], a.table[j][i])
            if not is_zero(d):
                return Witness("antisymmetry", (i, j), (names[i], names[j]), d)
    units = [a.unit(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            bij = a.table[i][j]
            for k in range(j + 1, n):
                d = vadd(
                    vadd(a.bracket(bij, units[k]), a.bracket(a.table[j][k], units[i])),
                    a.bracket(a.table[k][i], units[j]),
                )
                if not is_zero(d):
                    return Witness("jacobi", (i, j, k), (names[i], names[j], names[k]), d)
    return None


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear map between algebras; column j is the image of domain basis j."""

    domain: LieAlgebra
    codomain: LieAlgebra
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"map {self.domain.name}->{self.codomain.name} needs a "
                f"{self.codomain.dim}x{self.domain.dim} matrix, got {self.matrix.shape}"
            )

    @classmethod
    def identity(cls, a: LieAlgebra) -> "LinearMap":
        return cls(a, a, Matrix.identity(a.field, a.dim))

    @classmethod
    def zero(cls, a: LieAlgebra, b: LieAlgebra) -> "LinearMap":
        return cls(a, b, Matrix.zero(a.field, b.dim, a.dim))

    @classmethod
    def from_images(cls, a: LieAlgebra, b: LieAlgebra, images: Sequence[Sequence]) -> "LinearMap":
        return cls(a, b, Matrix.from_columns(a.field, images, b.dim))

    def __call__(self, v: Sequence) -> Vector:
        return self.matrix.apply(v)

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """self o inner."""
        return LinearMap(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def kernel(self) -> Subspace:
        return kernel(self.matrix)

    def rank(self) -> int:
        return rank(self.matrix)

    def __repr__(self):
        return f"LinearMap({self.domain.name} -> {self.codomain.name})"


def check_morphism(f: LinearMap) -> Witness | None:
    """None if f([x,y]) = [f x, f y] on all basis pairs."""
    a, b = f.domain, f.codomain
    imgs = [f(a.unit(i)) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            d = vsub(f(a.table[i][j]), b.bracket(imgs[i], imgs[j]))
            if not is_zero(d):
                return Witness("morphism", (i, j), (a.basis[i], a.basis[j]), d)
    return None


def is_ideal(a: LieAlgebra, w: Subspace) -> tuple[int, int] | None:
    """None if [basis, W] is inside W, else (basis index, W row index) of a failure."""
    for i in range(a.dim):
        u = a.unit(i)
        for r, v in enumerate(w.vectors):
            if not w.contains(a.bracket(u, v)):
                return (i, r)
    return None


def quotient_by_ideal(a: LieAlgebra, w: Subspace, name: str | None = None) -> tuple[LieAlgebra, LinearMap]:
    """A/W with the projection; the quotient basis is the complement of W's pivots."""
    if w.ambient != a.dim:
        raise ValueError("subspace lives in the wrong ambient space")
    bad = is_ideal(a, w)
    if bad is not None:
        i, r = bad
        raise NotAnIdeal(i, r, f"[{a.basis[i]}, W_{r}] is not in W: not an ideal of {a.name}")
    comp = w.complement_columns()
    basis = tuple(a.basis[j] for j in comp)
    m = len(comp)
    sparse = {}
    for x, i in enumerate(comp):
        for y, j in enumerate(comp):
            v = w.quotient_coordinates(a.table[i][j])
            s = {k: c for k, c in enumerate(v) if c}
            if s:
                sparse[(x, y)] = s
    q = LieAlgebra.from_sparse(name or f"{a.name}/W", basis, sparse, a.field)
    proj = LinearMap(a, q, w.quotient_matrix())
    assert q.dim == m
    return q, proj


def direct_sum(a: LieAlgebra, b: LieAlgebra, name: str | None = None, prefixes: tuple[str, str] | None = None) -> LieAlgebra:
    """A (+) B with componentwise bracket.  Basis names get prefixes if they clash."""
    if prefixes is None:
        clash = set(a.basis) & set(b.basis)
        prefixes = (f"{a.name}.", f"{b.name}.") if clash else ("", "")
        if clash and prefixes[0] == prefixes[1]:
            prefixes = ("1.", "2.")
    basis = tuple(prefixes[0] + x for x in a.basis) + tuple(prefixes[1] + x for x in b.basis)
    n = a.dim
    sparse = {}
    for i in range(a.dim):
        for j in range(a.dim):
            s = {k: x for k, x in enumerate(a.table[i][j]) if x}
            if s:
                sparse[(i, j)] = s
    for i in range(b.dim):
        for j in range(b.dim):
            s = {n + k: x for k, x in enumerate(b.table[i][j]) if x}
            if s:
                sparse[(n + i, n + j)] = s
    return LieAlgebra.from_sparse(name or f"{a.name}+{b.name}", basis, sparse, a.field)


def inclusions(a: LieAlgebra, b: LieAlgebra, s: LieAlgebra) -> tuple[LinearMap, LinearMap]:
    f = a.field
    ia = LinearMap(a, s, Matrix.identity(f, a.dim).vstack(Matrix.zero(f, b.dim, a.dim)))
    ib = LinearMap(b, s, Matrix.zero(f, a.dim, b.dim).vstack(Matrix.identity(f, b.dim)))
    return ia, ib


def zero_algebra(name: str = "0", field: Field = QQ) -> LieAlgebra:
    return LieAlgebra(name, (), (), field)


def subalgebra_inclusion(a: LieAlgebra, vectors: Sequence[Sequence], names: Sequence[str], name: str) -> tuple[LieAlgebra, LinearMap]:
    """The subalgebra spanned by independent ``vectors`` with its inclusion."""
    f = a.field
    m = Matrix.from_columns(f, vectors, a.dim)
    if rank(m) != len(vectors):
        raise ValueError("spanning vectors must be independent")
    sparse = {}
    from .exactlin import solve

    for i, u in enumerate(vectors):
        for j, v in enumerate(vectors):
            x = solve(m, a.bracket(u, v))
            if x is None:
                raise ValueError("span is not closed under the bracket")
            s = {k: c for k, c in enumerate(x) if c}
            if s:
                sparse[(i, j)] = s
    sub = LieAlgebra.from_sparse(name, names, sparse, f)
    return sub, LinearMap(sub, a, m)


__all__ = [
    "LieAlgebra",
    "LinearMap",
    "NotAnIdeal",
    "Witness",
    "block_diagonal",
    "check_jacobi",
    "check_morphism",
    "direct_sum",
    "inclusions",
    "is_ideal",
    "quotient_by_ideal",
    "subalgebra_inclusion",
    "zero_algebra",
]
