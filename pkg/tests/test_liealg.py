import pytest

from liexmod.catalog import abelian, aff2, heisenberg, perturbed_sl2, sl2
from liexmod.exactlin import GF, QQ, Matrix, Subspace
from liexmod.liealg import (
    LieAlgebra,
    LinearMap,
    NotAnIdeal,
    check_jacobi,
    check_morphism,
    direct_sum,
    inclusions,
    quotient_by_ideal,
    subalgebra_inclusion,
    zero_algebra,
)


@pytest.mark.parametrize("make", [sl2, heisenberg, aff2, lambda: abelian(3), zero_algebra])
def test_catalog_is_lie(make):
    assert check_jacobi(make()) is None


def test_perturbed_sl2_witness():
    w = check_jacobi(perturbed_sl2())
    assert w.family == "jacobi" and w.names == ("h", "e", "f")
    assert w.defect is not None and any(w.defect)


def test_non_antisymmetric_table_is_caught():
    a = LieAlgebra("bad", ("a", "b"), (((0, 0), (1, 0)), ((1, 0), (0, 0))))
    w = check_jacobi(a)
    assert w.family == "antisymmetry" and w.names == ("a", "b")


def test_nonzero_square_is_caught():
    a = LieAlgebra("bad", ("a",), (((1,),),))
    assert check_jacobi(a).family == "alternating"


def test_from_brackets_fills_antisymmetry():
    s = sl2()
    assert s.bracket(s.unit("e"), s.unit("h")) == (0, -2, 0)
    assert s.structure_constants()[("h", "e")] == {"e": 2}


def test_ad_matrix_columns_are_images():
    s = sl2()
    ad_h = s.ad(s.unit("h"))
    assert ad_h.column(1) == (0, 2, 0)


def test_check_morphism():
    s = sl2()
    assert check_morphism(LinearMap.identity(s)) is None
    scale = LinearMap(s, s, Matrix.identity(QQ, 3).scale(2))
    w = check_morphism(scale)
    assert w is not None and w.family == "morphism"


def test_quotient_of_heisenberg_by_center():
    h = heisenberg()
    q, proj = quotient_by_ideal(h, Subspace.span(QQ, 3, [h.unit("z")]))
    assert q.dim == 2 and q.is_abelian() and q.basis == ("x", "y")
    assert check_morphism(proj) is None


def test_quotient_rejects_non_ideal():
    with pytest.raises(NotAnIdeal) as exc:
        quotient_by_ideal(sl2(), Subspace.span(QQ, 3, [(0, 1, 0)]))
    assert exc.value.witness is not None


def test_direct_sum_prefixes_on_clash():
    s = direct_sum(sl2(), sl2(name="t"))
    assert s.basis[:3] == ("sl2.h", "sl2.e", "sl2.f")
    assert check_jacobi(s) is None
    ia, ib = inclusions(sl2(), sl2(), s)
    assert check_morphism(ia) is None and check_morphism(ib) is None


def test_direct_sum_no_prefix_without_clash():
    assert direct_sum(aff2(), heisenberg()).basis == ("e1", "e2", "x", "y", "z")


def test_subalgebra_inclusion():
    h = heisenberg()
    sub, inc = subalgebra_inclusion(h, [h.unit("x"), h.unit("z")], ["x", "z"], "xz")
    assert sub.is_abelian() and check_morphism(inc) is None
    with pytest.raises(ValueError):
        subalgebra_inclusion(h, [h.unit("x"), h.unit("y")], ["x", "y"], "xy")


def test_prime_field_jacobi():
    assert check_jacobi(sl2(GF(5))) is None


def test_bad_table_shape():
    with pytest.raises(ValueError):
        LieAlgebra("bad", ("a", "b"), (((0, 0),),))
