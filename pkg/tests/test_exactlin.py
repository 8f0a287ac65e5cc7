from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liexmod.exactlin import (
    GF,
    QQ,
    EchelonBasis,
    Matrix,
    Residue,
    Subspace,
    kernel,
    rank,
    rref,
    saturate,
    solve,
    unit_vector,
)

small = st.integers(-3, 3)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: Matrix.from_rows(QQ, rows, c)
            )
        )
    )


def test_rref_known():
    m = Matrix.from_rows(QQ, [[2, 4, 0], [1, 2, 1], [3, 6, 1]])
    r, piv = rref(m)
    assert piv == (0, 2)
    assert r.rows == ((1, 2, 0), (0, 0, 1))


def test_rref_drops_zero_rows():
    r, piv = rref(Matrix.zero(QQ, 3, 2))
    assert r.nrows == 0 and piv == ()


def test_kernel_example():
    k = kernel(Matrix.from_rows(QQ, [[1, 1, 0]]))
    assert k.dim == 2
    assert k.contains((1, -1, 0)) and k.contains((0, 0, 1))
    assert not k.contains((1, 0, 0))


def test_kernel_over_f5():
    F = GF(5)
    m = Matrix.from_rows(F, [[1, 2], [3, 1]])  # 1*1 - 2*3 = -5 = 0 mod 5
    k = kernel(m)
    assert k.dim == 1
    (v,) = k.vectors
    assert m.apply(v) == (F.zero, F.zero)


def test_residue_arithmetic():
    F = GF(7)
    a, b = F(3), F(5)
    assert a + b == F(1)
    assert a * b == F(1)
    assert a / b == F(3) * F(3)  # 1/5 = 3 mod 7
    assert F("1/2") == F(4)
    assert -a == F(4)
    with pytest.raises(ZeroDivisionError):
        a / F(0)
    with pytest.raises(ValueError):
        Residue(1, 7) + Residue(1, 11)


@pytest.mark.parametrize("p", [2, 4, 9, 1])
def test_prime_field_rejects(p):
    with pytest.raises(ValueError):
        GF(p)


def test_rationals_parse():
    assert QQ("3/2") == Fraction(3, 2)
    with pytest.raises(ValueError):
        QQ.parse("x")
    assert QQ.format(Fraction(-4, 2)) == "-2"


def test_solve():
    m = Matrix.from_rows(QQ, [[1, 1], [0, 1]])
    assert solve(m, (3, 1)) == (2, 1)
    assert solve(Matrix.from_rows(QQ, [[1, 1], [1, 1]]), (1, 2)) is None


def test_subspace_canonical_and_sum():
    a = Subspace.span(QQ, 3, [(1, 1, 0), (0, 1, 0)])
    b = Subspace.span(QQ, 3, [(1, 0, 0), (2, 3, 0)])
    assert a == b
    c = a + Subspace.span(QQ, 3, [(0, 0, 5)])
    assert c == Subspace.full(QQ, 3)
    assert a.complement_columns() == (2,)
    assert a.quotient_coordinates((4, 5, 6)) == (6,)


def test_quotient_and_section():
    w = Subspace.span(QQ, 3, [(1, -1, 0)])
    q, s = w.quotient_matrix(), w.section_matrix()
    assert (q @ s) == Matrix.identity(QQ, 2)
    assert q.apply((1, -1, 0)) == (0, 0)


def test_saturate_smallest_closed():
    # the operator (u, v) -> e1 * u_3 * v_3 forces e1 in once e3 is present
    def op(u, v):
        return (u[2] * v[2], QQ(0), QQ(0))

    s = saturate(Subspace.span(QQ, 3, [(0, 0, 1)]), [op])
    assert s == Subspace.span(QQ, 3, [(1, 0, 0), (0, 0, 1)])
    s0 = saturate(Subspace.span(QQ, 3, [(0, 1, 0)]), [op])
    assert s0.dim == 1


def test_saturate_brackets_of_heisenberg():
    from liexmod.catalog import heisenberg

    h = heisenberg()
    s = saturate(Subspace.span(QQ, 3, [h.unit("x")]), [h.bracket])
    assert s == Subspace.span(QQ, 3, [h.unit("x"), h.unit("z")])


def test_echelon_basis_order():
    eb = EchelonBasis(QQ, 3, order=[2, 1, 0])
    row = eb.add({0: 1, 2: 2})
    assert min(row, key=eb.rank_of.__getitem__) == 2 and row[2] == 1
    assert eb.add({0: 2, 2: 4}) is None
    assert eb.contains({0: 1, 2: 2})


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.ncols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_annihilated(m):
    for v in kernel(m).vectors:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_is_canonical_and_idempotent(m):
    r, piv = rref(m)
    assert rref(r) == (r, piv)
    for row, p in zip(r.rows, piv):
        assert row[p] == 1
        assert all(other[p] == 0 for other in r.rows if other is not row)
    # same row space after shuffling the input rows
    r2, piv2 = rref(Matrix.from_rows(QQ, list(reversed(m.rows)), m.ncols))
    assert (r2, piv2) == (r, piv)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent(m, data):
    x = tuple(data.draw(st.lists(small, min_size=m.ncols, max_size=m.ncols)))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_unit_vector():
    assert unit_vector(QQ, 3, 1) == (0, 1, 0)
