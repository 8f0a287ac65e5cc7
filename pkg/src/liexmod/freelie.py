"""Bracket terms, their rewriting to right-nested words, and Hall bases.

A :class:`MagmaTerm` is a :class:`Letter` or a :class:`Bracket` of two terms.
A :class:`LieExpr` is a finite formal combination of terms.  ``normalize``
rewrites an expression into right-nested words ``[x_k,[...,[x_2,x_1]...]]``
using only the Jacobi identity and antisymmetry; ``HallAlgebra`` is the free
Lie algebra truncated at a nilpotency class, used to decide equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .exactlin import QQ, Field, Vector, lincomb, unit_vector


@dataclass(frozen=True, order=True)
class Letter:
    name: str
    origin: str = ""

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Bracket:
    left: "MagmaTerm"
    right: "MagmaTerm"

    def __str__(self):
        return f"[{self.left},{self.right}]"


MagmaTerm = Union[Letter, Bracket]


def bracket(*terms: MagmaTerm) -> MagmaTerm:
    """Right-nested bracket: bracket(a, b, c) == [a,[b,c]]."""
    if not terms:
        raise ValueError("bracket() needs at least one term")
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Bracket(t, out)
    return out


def degree(t: MagmaTerm) -> int:
    if isinstance(t, Letter):
        return 1
    return degree(t.left) + degree(t.right)


def height(t: MagmaTerm) -> int:
    return degree(t) - 1


def letters(t: MagmaTerm) -> list[Letter]:
    """Leaves from left to right."""
    if isinstance(t, Letter):
        return [t]
    return letters(t.left) + letters(t.right)


def is_well_nested(t: MagmaTerm) -> bool:
    """No bracket of two brackets anywhere in t."""
    if isinstance(t, Letter):
        return True
    if isinstance(t.left, Bracket) and isinstance(t.right, Bracket):
        return False
    return is_well_nested(t.left) and is_well_nested(t.right)


def term_key(t: MagmaTerm):
    """Total order used for canonical printing."""
    if isinstance(t, Letter):
        return (1, (t.origin, t.name))
    return (degree(t), term_key(t.left), term_key(t.right))


# -- right-nested words ------------------------------------------------------


@dataclass(frozen=True)
class RightNestedWord:
    """[x_k,[x_{k-1},[...,[x_2,x_1]...]]] stored as (x_k, ..., x_1)."""

    letters: tuple

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a right-nested word needs at least one letter")

    @property
    def last(self) -> Letter:
        return self.letters[-1]

    @property
    def degree(self) -> int:
        return len(self.letters)

    def term(self) -> MagmaTerm:
        return bracket(*self.letters)

    def __str__(self):
        return str(self.term())


def is_right_nested(t: MagmaTerm) -> bool:
    while isinstance(t, Bracket):
        if not isinstance(t.left, Letter):
            return False
        t = t.right
    return True


def as_right_nested(t: MagmaTerm) -> RightNestedWord:
    if not is_right_nested(t):
        raise ValueError(f"{t} is not right-nested")
    out = []
    while isinstance(t, Bracket):
        out.append(t.left)
        t = t.right
    out.append(t)
    return RightNestedWord(tuple(out))


# -- formal combinations -----------------------------------------------------


class LieExpr:
    """Finite formal sum of scalar multiples of magma terms."""

    __slots__ = ("field", "_terms")

    def __init__(self, terms: Mapping[MagmaTerm, object] | Iterable[tuple[object, MagmaTerm]] = (), field: Field = QQ):
        self.field = field
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else ((t, c) for c, t in terms)
        for t, c in items:
            c = field(c)
            acc[t] = acc.get(t, field.zero) + c
        self._terms = {t: c for t, c in acc.items() if c}

    @classmethod
    def of(cls, t: MagmaTerm, field: Field = QQ) -> "LieExpr":
        return cls({t: 1}, field)

    def items(self) -> list[tuple[object, MagmaTerm]]:
        return [(self._terms[t], t) for t in sorted(self._terms, key=term_key)]

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, LieExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LieExpr") -> "LieExpr":
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out.get(t, self.field.zero) + c
        return LieExpr(out, self.field)

    def __neg__(self) -> "LieExpr":
        return LieExpr({t: -c for t, c in self._terms.items()}, self.field)

    def __sub__(self, other: "LieExpr") -> "LieExpr":
        return self + (-other)

    def __rmul__(self, c) -> "LieExpr":
        c = self.field(c)
        return LieExpr({t: c * v for t, v in self._terms.items()}, self.field)

    def bracket(self, other: "LieExpr") -> "LieExpr":
        out: dict = {}
        for s, a in self._terms.items():
            for t, b in other._terms.items():
                k = Bracket(s, t)
                out[k] = out.get(k, self.field.zero) + a * b
        return LieExpr(out, self.field)

    def letters(self) -> list[Letter]:
        seen: dict = {}
        for _, t in self.items():
            for x in letters(t):
                seen.setdefault(x, None)
        return list(seen)

    def max_degree(self) -> int:
        return max((degree(t) for t in self._terms), default=0)

    def __str__(self):
        return format_combination([(c, t) for c, t in self.items()], self.field)

    def __repr__(self):
        return f"LieExpr({str(self)!r})"


def format_combination(terms: Sequence[tuple[object, object]], field: Field = QQ) -> str:
    """Render [(coeff, term), ...] in the file syntax, e.g. "3/2*[a,b] - c"."""
    out = ""
    for c, t in terms:
        if not c:
            continue
        neg = (c == -1) or (field.characteristic == 0 and Fraction(c) < 0)
        mag = -c if neg else c
        body = str(t) if mag == 1 else f"{field.format(mag)}*{t}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


# -- parsing -----------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_.']*)|(?P<op>[\[\],+\-*]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos + (len(text[pos:]) - len(text[pos:].lstrip())))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_expr(text: str, field: Field = QQ, origins: Mapping[str, str] | None = None) -> LieExpr:
    """Parse "3/2*[a,[b,c]] - [c,a]" into a LieExpr.

    Bracket arguments may themselves be combinations and are expanded
    bilinearly.  ``origins`` maps letter names to origin tags.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        k, v, p = toks[i]
        if (kind and k != kind) or (value is not None and v != value):
            want = value if value is not None else kind
            got = v or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", text, p)
        i += 1
        return v, p

    def letter(name):
        tag = (origins or {}).get(name, "")
        if origins is not None and name not in origins:
            raise ParseError(f"unknown letter {name!r}", text, toks[i - 1][2])
        return Letter(name, tag)

    def combination() -> LieExpr:
        acc = LieExpr((), field)
        sign = 1
        k, v, _ = peek()
        if k == "op" and v in "+-":
            take()
            sign = -1 if v == "-" else 1
        acc = acc + sign * summand()
        while True:
            k, v, _ = peek()
            if k == "op" and v in "+-":
                take()
                s = -1 if v == "-" else 1
                acc = acc + s * summand()
            else:
                return acc

    def summand() -> LieExpr:
        k, v, p = peek()
        coeff = field.one
        if k == "num":
            take()
            coeff = field.parse(v)
            take("op", "*")
        return coeff * atom()

    def atom() -> LieExpr:
        k, v, p = peek()
        if k == "name":
            take()
            return LieExpr.of(letter(v), field)
        if k == "op" and v == "[":
            take()
            a = combination()
            take("op", ",")
            b = combination()
            take("op", "]")
            return a.bracket(b)
        raise ParseError(f"expected a letter or '[', found {v or 'end of input'!r}", text, p)

    e = combination()
    k, v, p = peek()
    if k != "end":
        raise ParseError(f"unexpected {v!r}", text, p)
    return e


def parse_term(text: str, origins: Mapping[str, str] | None = None) -> MagmaTerm:
    e = parse_expr(text, QQ, origins)
    items = e.items()
    if len(items) != 1 or items[0][0] != 1:
        raise ParseError("expected a single bracket term", text, 0)
    return items[0][1]


# -- the rewriting algorithm -------------------------------------------------


@dataclass(frozen=True)
class _Pin:
    """Marks the leaf that must end up innermost-right."""

    letter: Letter

    def __str__(self):
        return f"<{self.letter}>"


def _contains_pin(t) -> bool:
    if isinstance(t, _Pin):
        return True
    if isinstance(t, Letter):
        return False
    return _contains_pin(t.left) or _contains_pin(t.right)


def _is_leaf(t) -> bool:
    return not isinstance(t, Bracket)


def _pin_simple(t) -> list[tuple[int, object]]:
    """Jacobi-expand t until the pin sits in a simple bracket [a, pin] or [pin, a]."""
    if _is_leaf(t):
        return [(1, t)]
    left_pinned = _contains_pin(t.left)
    inner, other = (t.left, t.right) if left_pinned else (t.right, t.left)
    if isinstance(inner, _Pin):
        if _is_leaf(other):
            return [(1, t)]
        # [pin, [w1,w2]] = [[pin,w1],w2] + [w1,[pin,w2]]
        w1, w2 = other.left, other.right
        sign = 1 if left_pinned else -1
        out = []
        for c, s in _pin_simple(Bracket(Bracket(inner, w1), w2)):
            out.append((sign * c, s))
        for c, s in _pin_simple(Bracket(w1, Bracket(inner, w2))):
            out.append((sign * c, s))
        return out
    out = []
    for c, s in _pin_simple(inner):
        out.append((c, Bracket(s, other) if left_pinned else Bracket(other, s)))
    return out


def _maximal_nest(t, path=()):
    """Path to the maximal well-nested subtree containing the pin's simple bracket."""
    # locate the pinned simple bracket
    def find(u, p):
        if _is_leaf(u):
            return None
        if isinstance(u.left, _Pin) or isinstance(u.right, _Pin):
            if _is_leaf(u.left) and _is_leaf(u.right):
                return p
        if _contains_pin(u.left):
            return find(u.left, p + (0,))
        return find(u.right, p + (1,))

    p = find(t, ())
    if p is None:
        raise AssertionError("pin is not in a simple bracket")
    # walk up while the sibling is a leaf
    while p:
        parent = _subterm(t, p[:-1])
        sibling = parent.right if p[-1] == 0 else parent.left
        if not _is_leaf(sibling):
            break
        p = p[:-1]
    return p


def _subterm(t, path):
    for step in path:
        t = t.left if step == 0 else t.right
    return t


def _replace(t, path, new):
    if not path:
        return new
    if path[0] == 0:
        return Bracket(_replace(t.left, path[1:], new), t.right)
    return Bracket(t.left, _replace(t.right, path[1:], new))


def _grow(t) -> list[tuple[int, object]]:
    """Step 2 of the rewriting: enlarge the pinned nest until it is everything."""
    out = []
    stack = [(1, t)]
    while stack:
        c, s = stack.pop()
        p = _maximal_nest(s)
        if not p:
            out.append((c, s))
            continue
        parent = _subterm(s, p[:-1])
        if p[-1] == 0:
            nest, w, sign = parent.left, parent.right, 1
        else:
            nest, w, sign = parent.right, parent.left, -1
        # [nest,[w1,w2]] = [w1,[nest,w2]] + [[nest,w1],w2]
        w1, w2 = w.left, w.right
        for piece in (Bracket(w1, Bracket(nest, w2)), Bracket(Bracket(nest, w1), w2)):
            stack.append((sign * c, _replace(s, p[:-1], piece)))
    return out


def _flip_left(t) -> tuple[int, list]:
    """Step 3: put the simple element on the left of every bracket of a nest."""
    sign = 1
    seq = []
    while isinstance(t, Bracket):
        if _is_leaf(t.left) and _is_leaf(t.right):
            if isinstance(t.left, _Pin):
                sign = -sign
                seq += [t.right, t.left]
            else:
                seq += [t.left, t.right]
            return sign, seq
        if _is_leaf(t.left):
            seq.append(t.left)
            t = t.right
        else:
            sign = -sign
            seq.append(t.right)
            t = t.left
    return sign, [t]


def _unpin(x) -> Letter:
    return x.letter if isinstance(x, _Pin) else x


def _mark(t: MagmaTerm, path: tuple):
    if not path:
        return _Pin(t)
    if path[0] == 0:
        return Bracket(_mark(t.left, path[1:]), t.right)
    return Bracket(t.left, _mark(t.right, path[1:]))


def _rightmost_path(t: MagmaTerm) -> tuple:
    p = ()
    while isinstance(t, Bracket):
        p += (1,)
        t = t.right
    return p


def _find_letter(t: MagmaTerm, x: Letter, path=()) -> list[tuple]:
    if isinstance(t, Letter):
        return [path] if t == x else []
    return _find_letter(t.left, x, path + (0,)) + _find_letter(t.right, x, path + (1,))


def _rewrite_marked(marked) -> list[tuple[int, RightNestedWord]]:
    out = []
    for c1, s1 in _pin_simple(marked):
        for c2, s2 in _grow(s1):
            sign, seq = _flip_left(s2)
            word = tuple(_unpin(x) for x in seq)
            if len(word) >= 2 and word[-1] == word[-2]:
                continue
            out.append((c1 * c2 * sign, RightNestedWord(word)))
    return out


def _collect(field: Field, pieces: Iterable[tuple[object, RightNestedWord]]) -> list[tuple[object, RightNestedWord]]:
    acc: dict = {}
    for c, w in pieces:
        acc[w] = acc.get(w, field.zero) + field(c)
    key = lambda w: (w.degree, tuple((x.origin, x.name) for x in w.letters))
    return [(acc[w], w) for w in sorted(acc, key=key) if acc[w]]


def _has_square(t) -> bool:
    """True if some subterm is [u, u], which makes the whole term zero."""
    if isinstance(t, Letter):
        return False
    return t.left == t.right or _has_square(t.left) or _has_square(t.right)


def normalize_term(t: MagmaTerm, pin_path: tuple | None = None) -> list[tuple[int, RightNestedWord]]:
    """Rewrite one term; the leaf at ``pin_path`` (default: rightmost) ends innermost."""
    if isinstance(t, Letter):
        return [(1, RightNestedWord((t,)))]
    if _has_square(t):
        return []
    if pin_path is None:
        pin_path = _rightmost_path(t)
    return _rewrite_marked(_mark(t, pin_path))


def normalize(e: LieExpr | MagmaTerm) -> list[tuple[object, RightNestedWord]]:
    """Rewrite e as a combination of right-nested words.

    Each term is rewritten with its rightmost leaf kept as the innermost
    letter: first Jacobi moves that leaf into a simple bracket, then the
    surrounding nest is grown one Jacobi step at a time, then antisymmetry
    puts single letters on the left.
    """
    if not isinstance(e, LieExpr):
        e = LieExpr.of(e)
    pieces = []
    for c, t in e.items():
        for s, w in normalize_term(t):
            pieces.append((c * s, w))
    return _collect(e.field, pieces)


def normalize_pinned(e: LieExpr | MagmaTerm, x: Letter) -> list[tuple[object, RightNestedWord]]:
    """As :func:`normalize`, but every output word ends in the letter x.

    Raises ValueError if some term of e does not contain x exactly once.
    """
    if not isinstance(e, LieExpr):
        e = LieExpr.of(e)
    pieces = []
    for c, t in e.items():
        where = _find_letter(t, x)
        if len(where) != 1:
            raise ValueError(f"letter {x} occurs {len(where)} times in {t}; need exactly one")
        for s, w in normalize_term(t, where[0]):
            pieces.append((c * s, w))
    return _collect(e.field, pieces)


def words_to_expr(words: Iterable[tuple[object, RightNestedWord]], field: Field = QQ) -> LieExpr:
    return LieExpr(((c, w.term()) for c, w in words), field)


def format_words(words: Sequence[tuple[object, RightNestedWord]], field: Field = QQ) -> str:
    return format_combination(list(words), field)


# -- Hall bases --------------------------------------------------------------


def witt_dimension(k: int, n: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on k generators."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * k ** (n // d)
    return total // n


def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


class HallAlgebra:
    """Free Lie algebra on ``generators`` modulo brackets of degree > c.

    Basis elements are Hall words in the basic-commutator convention: a
    bracket (u, v) is basic when u > v and, if u = (u1, u2), u2 <= v.  Basis
    elements are ordered by degree, then by construction order.
    """

    def __init__(self, generators: Sequence[Letter], c: int = 4, field: Field = QQ):
        if c < 1:
            raise ValueError("nilpotency class must be at least 1")
        if not generators:
            raise ValueError("a Hall algebra needs at least one generator")
        if len(set(generators)) != len(generators):
            raise ValueError("generators must be distinct")
        self.generators = tuple(generators)
        self.c = c
        self.field = field
        self.words: list = []  # Letter or (i, j) pairs of basis indices
        self.degrees: list[int] = []
        self.index: dict = {}
        self._build()
        self._cache: dict = {}

    def _build(self):
        for g in self.generators:
            self._append(g, 1)
        by_degree = {1: list(range(len(self.generators)))}
        for d in range(2, self.c + 1):
            by_degree[d] = []
            for du in range(d - 1, 0, -1):
                dv = d - du
                if dv > du:
                    continue
                for u in by_degree[du]:
                    for v in by_degree[dv]:
                        if not u > v:
                            continue
                        w = self.words[u]
                        if isinstance(w, tuple) and w[1] > v:
                            continue
                        by_degree[d].append(self._append((u, v), d))

    def _append(self, w, d) -> int:
        k = len(self.words)
        self.words.append(w)
        self.degrees.append(d)
        self.index[w] = k
        return k

    @property
    def dim(self) -> int:
        return len(self.words)

    def degree_dims(self) -> list[int]:
        return [self.degrees.count(d) for d in range(1, self.c + 1)]

    def term(self, k: int) -> MagmaTerm:
        w = self.words[k]
        if isinstance(w, Letter):
            return w
        return Bracket(self.term(w[0]), self.term(w[1]))

    def names(self) -> list[str]:
        return [str(self.term(k)) for k in range(self.dim)]

    def _sparse_bracket(self, u: int, v: int) -> dict:
        """[b_u, b_v] as {index: coefficient}; zero above class c."""
        if self.degrees[u] + self.degrees[v] > self.c or u == v:
            return {}
        key = (u, v)
        if key in self._cache:
            return self._cache[key]
        if u < v:
            res = {k: -x for k, x in self._sparse_bracket(v, u).items()}
        else:
            w = self.words[u]
            if not isinstance(w, tuple) or w[1] <= v:
                res = {self.index[(u, v)]: 1}
            else:
                # [[u1,u2],v] = [[u1,v],u2] + [u1,[u2,v]]
                u1, u2 = w
                res = {}
                for k, x in self._sparse_bracket(u1, v).items():
                    for kk, y in self._sparse_bracket(k, u2).items():
                        res[kk] = res.get(kk, 0) + x * y
                for k, x in self._sparse_bracket(u2, v).items():
                    for kk, y in self._sparse_bracket(u1, k).items():
                        res[kk] = res.get(kk, 0) + x * y
                res = {k: x for k, x in res.items() if x}
        self._cache[key] = res
        return res

    def bracket_basis(self, u: int, v: int) -> dict:
        """Integer structure constants of [b_u, b_v] as a sparse dict."""
        return dict(self._sparse_bracket(u, v))

    def bracket(self, a: Vector, b: Vector) -> Vector:
        f = self.field
        acc: dict = {}
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, z in self._sparse_bracket(i, j).items():
                    acc[k] = acc.get(k, f.zero) + x * y * z
        return tuple(f(acc.get(k, 0)) for k in range(self.dim))

    def unit(self, x: Letter) -> Vector:
        return unit_vector(self.field, self.dim, self.index[x])

    def expand(self, e: LieExpr | MagmaTerm) -> Vector:
        """Hall coordinates of e; rejects terms of degree > c."""
        if not isinstance(e, LieExpr):
            e = LieExpr.of(e, self.field)
        return lincomb(self.field, self.dim, ((c, self._expand_term(t)) for c, t in e.items()))

    def _expand_term(self, t: MagmaTerm) -> Vector:
        if degree(t) > self.c:
            raise ValueError(f"term {t} has degree {degree(t)} > class {self.c}")
        if isinstance(t, Letter):
            if t not in self.index:
                raise ValueError(f"letter {t} is not a generator")
            return self.unit(t)
        return self.bracket(self._expand_term(t.left), self._expand_term(t.right))

    def to_lie_algebra(self, name: str | None = None):
        from .liealg import LieAlgebra

        n = self.dim
        table = {}
        for i in range(n):
            for j in range(n):
                s = self._sparse_bracket(i, j)
                if s:
                    table[(i, j)] = s
        return LieAlgebra.from_sparse(name or f"Hall({len(self.generators)},{self.c})", self.names(), table, self.field)


def hall_algebra(generators: Sequence[Letter | str], c: int = 4, field: Field = QQ) -> HallAlgebra:
    gens = [g if isinstance(g, Letter) else Letter(g) for g in generators]
    return HallAlgebra(gens, c, field)


def expand(e: LieExpr | MagmaTerm, c: int = 4, generators: Sequence[Letter] | None = None, field: Field = QQ) -> Vector:
    """Coordinates of e in HallAlgebra(generators, c); generators default to the sorted letters of e."""
    if not isinstance(e, LieExpr):
        e = LieExpr.of(e, field)
    gens = list(generators) if generators is not None else sorted(e.letters())
    return HallAlgebra(gens, c, field).expand(e)


def words_by_degree(gens: Sequence[Letter], d: int) -> Iterator[tuple]:
    if d == 0:
        yield ()
        return
    for w in words_by_degree(gens, d - 1):
        for g in gens:
            yield w + (g,)
