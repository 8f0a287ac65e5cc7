import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import lyndon_count, random_term, tensor, tensor_of_combination

from liexmod.exactlin import GF, QQ
from liexmod.freelie import (
    Bracket,
    HallAlgebra,
    LieExpr,
    Letter,
    ParseError,
    bracket,
    expand,
    format_words,
    hall_algebra,
    is_right_nested,
    normalize,
    normalize_pinned,
    parse_expr,
    witt_dimension,
    words_to_expr,
)

x, y, z, w = (Letter(c) for c in "xyzw")
XYZ = [x, y, z]


def test_normalize_example():
    out = normalize(Bracket(Bracket(x, y), z))
    assert format_words(out) == "[x,[y,z]] - [y,[x,z]]"


def test_alternating_is_zero():
    assert normalize(Bracket(x, x)) == []
    assert normalize(Bracket(Bracket(x, y), Bracket(x, y))) == []


def test_right_nested_input_kept():
    t = bracket(x, y, z)
    assert format_words(normalize(t)) == "[x,[y,z]]"


def test_letter_is_its_own_normal_form():
    (c, word), = normalize(x)
    assert c == 1 and word.letters == (x,)


def test_pinned_variant_ends_in_pin():
    t = Bracket(Bracket(x, y), Bracket(z, w))
    for pin in (x, y, z, w):
        out = normalize_pinned(t, pin)
        assert out and all(word.last == pin for _, word in out)
        assert tensor_of_combination([(c, wd.term()) for c, wd in out]) == tensor(t)


def test_pinned_requires_single_occurrence():
    with pytest.raises(ValueError):
        normalize_pinned(Bracket(x, Bracket(x, y)), x)
    with pytest.raises(ValueError):
        normalize_pinned(Bracket(x, y), z)


def test_hall_dimensions_two_generators():
    h = hall_algebra(["a", "b"], 5)
    cumulative = [sum(h.degree_dims()[:c]) for c in range(1, 6)]
    assert cumulative == [2, 3, 5, 8, 14]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hall_dimensions_match_lyndon(k):
    h = HallAlgebra([Letter(f"g{i}") for i in range(k)], 5 if k < 3 else 4)
    for n, d in enumerate(h.degree_dims(), start=1):
        assert d == lyndon_count(k, n) == witt_dimension(k, n)


def test_hall_basis_is_independent_in_tensor_algebra():
    # every Hall word expands to a nonzero tensor and the expansions are independent
    from liexmod.exactlin import Matrix, rank

    h = hall_algebra(["a", "b", "c"], 4)
    tens = [tensor(h.term(k)) for k in range(h.dim)]
    keys = sorted({wd for t in tens for wd in t}, key=lambda wd: tuple(str(l) for l in wd))
    m = Matrix.from_rows(QQ, [[t.get(k, 0) for k in keys] for t in tens], len(keys))
    assert rank(m) == h.dim


def _from_hall(h: HallAlgebra, v) -> dict:
    return tensor_of_combination([(c, h.term(k)) for k, c in enumerate(v) if c])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_expand_matches_tensor_oracle(seed):
    rng = random.Random(seed)
    t = random_term(rng, XYZ, 4)
    h = HallAlgebra(XYZ, 4)
    assert _from_hall(h, h.expand(t)) == tensor(t)


def test_expand_rejects_degree_above_class():
    with pytest.raises(ValueError):
        expand(bracket(x, y, z), 2, XYZ)


def test_hall_bracket_truncates():
    h = HallAlgebra([x, y], 2)
    xy = h.bracket(h.unit(x), h.unit(y))
    assert any(xy)
    assert not any(h.bracket(xy, h.unit(x)))


def test_hall_to_lie_algebra_is_lie():
    from liexmod.liealg import check_jacobi

    assert check_jacobi(HallAlgebra([x, y], 4).to_lie_algebra()) is None


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_sound_and_right_nested(seed):
    rng = random.Random(seed)
    t = random_term(rng, XYZ, 5)
    out = normalize(t)
    assert all(is_right_nested(wd.term()) for _, wd in out)
    assert expand(words_to_expr(out), 5, XYZ) == expand(t, 5, XYZ)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_normalize_is_idempotent(seed):
    rng = random.Random(seed)
    out = normalize(random_term(rng, XYZ, 5))
    again = normalize(words_to_expr(out))
    assert expand(words_to_expr(again), 5, XYZ) == expand(words_to_expr(out), 5, XYZ)


def test_normalize_linear_combination():
    e = parse_expr("2*[[x,y],z] - [x,[y,z]]")
    assert format_words(normalize(e)) == "[x,[y,z]] - 2*[y,[x,z]]"


def test_parse_roundtrip_and_bilinearity():
    e = parse_expr("[x + y, z]")
    assert e == parse_expr("[x,z] + [y,z]")
    assert str(parse_expr("3/2*[a,[b,c]] - [c,a]")) in ("3/2*[a,[b,c]] - [c,a]", "-[c,a] + 3/2*[a,[b,c]]")


@pytest.mark.parametrize("bad", ["[x,y", "[x y]", "x +", "[,x]", "2*", ""])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as exc:
        parse_expr(bad)
    assert exc.value.pos >= 0


def test_normalize_over_prime_field():
    F = GF(7)
    e = parse_expr("[[x,y],z] + 8*[x,[y,z]]", F)
    assert format_words(normalize(e), F) == "2*[x,[y,z]] - [y,[x,z]]"


def test_lieexpr_arithmetic():
    a = LieExpr.of(Bracket(x, y))
    assert not (a - a)
    assert (2 * a).items()[0][0] == 2
    assert a.bracket(LieExpr.of(z)).max_degree() == 3
