"""Exact scalars and dense linear algebra over Q and F_p.

Every value here is immutable.  Vectors are plain tuples of field elements,
matrices are :class:`Matrix` instances and subspaces are stored through their
reduced row echelon basis, so two :class:`Subspace` objects are equal exactly
when they span the same space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Vector = tuple


class Residue:
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Residue(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Residue(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Residue(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Residue(self.value * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if v % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Residue(self.value * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(v, self.p) / self

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return (self.value - v) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Ground field; subclasses fix the element type."""

    name: str
    characteristic: int

    def __call__(self, x) -> object:
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError


class Rationals(Field):
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Residue):
            raise TypeError("cannot coerce a residue into Q")
        return Fraction(x)

    def parse(self, text: str):
        text = str(text).strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc

    def format(self, x) -> str:
        return str(Fraction(x))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    """F_p for an odd prime p."""

    def __init__(self, p: int):
        if p <= 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"F_p needs an odd prime, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def __call__(self, x):
        if isinstance(x, Residue):
            if x.p != self.p:
                raise ValueError(f"residue mod {x.p} is not in F_{self.p}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return Residue(x.numerator, self.p) / x.denominator
        return Residue(int(x), self.p)

    def parse(self, text: str):
        text = str(text).strip()
        try:
            return self(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an element of F_{self.p}: {text!r}") from exc

    def format(self, x) -> str:
        return str(self(x).value)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# -- vectors -----------------------------------------------------------------


def zero_vector(field: Field, n: int) -> Vector:
    return (field.zero,) * n


def unit_vector(field: Field, n: int, i: int) -> Vector:
    z, o = field.zero, field.one
    return tuple(o if k == i else z for k in range(n))


def vadd(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def vneg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def is_zero(v: Vector) -> bool:
    return not any(v)


def lincomb(field: Field, n: int, terms: Iterable[tuple[object, Vector]]) -> Vector:
    """Sum of c*v over (c, v) pairs, all vectors of length n."""
    acc = [field.zero] * n
    for c, v in terms:
        if not c:
            continue
        for k, a in enumerate(v):
            if a:
                acc[k] += c * a
    return tuple(acc)


def concat(*parts: Vector) -> Vector:
    out: tuple = ()
    for p in parts:
        out += tuple(p)
    return out


# -- matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Dense matrix; ``rows`` is a tuple of equal-length tuples."""

    field: Field
    rows: tuple
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {self.ncols} columns")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(field, tuple(rows), ncols)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [tuple(c) for c in cols]
        rows = [tuple(c[i] for c in cols) for i in range(nrows)]
        return cls(field, tuple(rows), len(cols))

    @classmethod
    def zero(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, tuple(unit_vector(field, n, i) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(self.columns()), self.nrows)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"cannot apply a {self.shape} matrix to a vector of length {len(v)}")
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, v):
                if a and b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(self.field, cols, self.nrows)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self.field, tuple(vadd(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self.field, tuple(vsub(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, tuple(vneg(r) for r in self.rows), self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, tuple(vscale(c, r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return all(is_zero(r) for r in self.rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return Matrix(self.field, tuple(a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    def formatted(self) -> list[list[str]]:
        return [[self.field.format(x) for x in r] for r in self.rows]

    def __str__(self):
        cells = self.formatted()
        if not cells:
            return f"<empty {self.nrows}x{self.ncols}>"
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def block_diagonal(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    top = a.hstack(Matrix.zero(f, a.nrows, b.ncols))
    bottom = Matrix.zero(f, b.nrows, a.ncols).hstack(b)
    return top.vstack(bottom)


# -- echelon forms -----------------------------------------------------------


class EchelonBasis:
    """Incrementally built semi-echelon basis of sparse rows.

    A local builder: rows are stored as ``{column: value}`` dicts normalized
    to a leading 1 at their pivot.  ``order`` fixes the column priority; the
    pivot of a row is its first nonzero column in that order.
    """

    def __init__(self, field: Field, ncols: int, order: Sequence[int] | None = None):
        self.field = field
        self.ncols = ncols
        self.order = list(range(ncols)) if order is None else list(order)
        if sorted(self.order) != list(range(ncols)):
            raise ValueError("column order must be a permutation")
        self.rank_of = {c: k for k, c in enumerate(self.order)}
        self.rows: dict[int, dict[int, object]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        """Reduce a sparse vector against the stored rows."""
        v = {k: x for k, x in v.items() if x}
        rank_of = self.rank_of
        rows = self.rows
        while True:
            cand = [k for k in v if k in rows]
            if not cand:
                return v
            col = min(cand, key=rank_of.__getitem__)
            c = v[col]
            for k, x in rows[col].items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)

    def add(self, v: dict) -> dict | None:
        """Insert ``v``; returns the new normalized row, or None if dependent."""
        r = self.reduce(v)
        if not r:
            return None
        pivot = min(r, key=self.rank_of.__getitem__)
        inv = self.field.one / r[pivot]
        row = {k: x * inv for k, x in r.items()}
        self.rows[pivot] = row
        return row

    def contains(self, v: dict) -> bool:
        return not self.reduce(dict(v))

    def pivots(self) -> list[int]:
        return sorted(self.rows, key=self.rank_of.__getitem__)

    def reduced_rows(self) -> list[tuple[int, dict]]:
        """Fully reduced rows in pivot order (back substitution applied)."""
        piv = self.pivots()
        done: dict[int, dict] = {}
        for col in reversed(piv):
            row = dict(self.rows[col])
            for k in list(row):
                if k != col and k in done and k in row:
                    c = row[k]
                    for kk, x in done[k].items():
                        nv = row.get(kk, 0) - c * x
                        if nv:
                            row[kk] = nv
                        else:
                            row.pop(kk, None)
            done[col] = row
        return [(c, done[c]) for c in piv]


def to_sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def to_dense(field: Field, n: int, v: dict) -> Vector:
    z = field.zero
    return tuple(field(v[i]) if i in v else z for i in range(n))


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns."""
    eb = EchelonBasis(m.field, m.ncols)
    for r in m.rows:
        eb.add(to_sparse(r))
    rows = eb.reduced_rows()
    pivots = tuple(c for c, _ in rows)
    dense = tuple(to_dense(m.field, m.ncols, r) for _, r in rows)
    return Matrix(m.field, dense, m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of field^ambient held as a canonical RREF basis."""

    field: Field
    ambient: int
    basis: Matrix
    pivots: tuple

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [tuple(v) for v in vectors]
        for v in rows:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
        r, piv = rref(Matrix(field, tuple(rows), ambient))
        return cls(field, ambient, r, piv)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls.span(field, ambient, [])

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls.span(field, ambient, Matrix.identity(field, ambient).rows)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple:
        return self.basis.rows

    def reduce(self, v: Sequence) -> Vector:
        """Canonical representative of v modulo this subspace (zero on pivots)."""
        v = list(v)
        for row, p in zip(self.basis.rows, self.pivots):
            c = v[p]
            if c:
                for k, x in enumerate(row):
                    if x:
                        v[k] -= c * x
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient dimensions differ")
        return Subspace.span(self.field, self.ambient, self.vectors + other.vectors)

    def complement_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(self.ambient) if j not in piv)

    def quotient_coordinates(self, v: Sequence) -> Vector:
        """Coordinates of v + self in the basis of the complement columns."""
        r = self.reduce(v)
        return tuple(r[j] for j in self.complement_columns())

    def quotient_matrix(self) -> Matrix:
        """Matrix of the projection field^ambient -> field^ambient / self."""
        n = self.ambient
        cols = [self.quotient_coordinates(unit_vector(self.field, n, j)) for j in range(n)]
        return Matrix.from_columns(self.field, cols, n - self.dim)

    def section_matrix(self) -> Matrix:
        """Matrix of the section quotient -> ambient picking complement unit vectors."""
        n = self.ambient
        cols = [unit_vector(self.field, n, j) for j in self.complement_columns()]
        return Matrix.from_columns(self.field, cols, n)

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.span(self.field, m.nrows, [m.apply(v) for v in self.vectors])


def kernel(m: Matrix) -> Subspace:
    """Null space {v : m v = 0}."""
    r, piv = rref(m)
    n = m.ncols
    f = m.field
    pivset = set(piv)
    vecs = []
    for j in range(n):
        if j in pivset:
            continue
        v = [f.zero] * n
        v[j] = f.one
        for row, p in zip(r.rows, piv):
            if row[j]:
                v[p] = -row[j]
        vecs.append(tuple(v))
    return Subspace.span(f, n, vecs)


def row_space(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.ncols, m.rows)


def column_space(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.nrows, m.columns())


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """Some x with m x = b, or None."""
    aug = m.hstack(Matrix.from_columns(m.field, [tuple(b)], m.nrows))
    r, piv = rref(aug)
    if m.ncols in piv:
        return None
    x = [m.field.zero] * m.ncols
    for row, p in zip(r.rows, piv):
        x[p] = row[m.ncols]
    return tuple(x)


Bilinear = Callable[[Vector, Vector], Vector]


def saturate(seed: Subspace, operators: Sequence[Bilinear]) -> Subspace:
    """Smallest subspace containing ``seed`` and closed under every operator.

    Closure means op(b, w) and op(w, b) lie in the result for each ambient
    basis vector b and each w in the result.  The operators must be bilinear,
    so it is enough to feed them basis vectors of the growing subspace.
    """
    f, n = seed.field, seed.ambient
    units = [unit_vector(f, n, j) for j in range(n)]
    eb = EchelonBasis(f, n)
    queue = []
    for v in seed.vectors:
        row = eb.add(to_sparse(v))
        if row is not None:
            queue.append(to_dense(f, n, row))
    while queue:
        w = queue.pop()
        for op in operators:
            for b in units:
                for img in (op(b, w), op(w, b)):
                    row = eb.add(to_sparse(img))
                    if row is not None:
                        queue.append(to_dense(f, n, row))
    rows = eb.reduced_rows()
    dense = tuple(to_dense(f, n, r) for _, r in rows)
    return Subspace(f, n, Matrix(f, dense, n), tuple(c for c, _ in rows))
