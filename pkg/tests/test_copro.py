import pytest

from liexmod.actions import Action, conjugation
from liexmod.catalog import abelian, aff2, heisenberg, perturbed_sl2, sl2
from liexmod.copro import (
    ActionAxiomError,
    TruncatedCoproduct,
    check_coequalizer_property,
    flat_object,
    oracle_agrees,
    peiffer_oracle,
    peiffer_saturate,
    peiffer_truncated,
    truncated_coproduct,
)
from liexmod.corpus import collapsing_pair, conjugation_pair, corpus_pairs, incompatible_pair, zero_pair
from liexmod.exactlin import QQ, Matrix, Subspace
from liexmod.liealg import check_jacobi, check_morphism, zero_algebra

A1M = abelian(1, name="M", prefix="m")
A1N = abelian(1, name="N", prefix="n")


# -- truncated coproducts ----------------------------------------------------


def test_truncated_coproduct_dimensions():
    assert truncated_coproduct(A1M, A1N, 2).dimension == 3
    assert truncated_coproduct(A1M, A1N, 3).dimension == 5


@pytest.mark.parametrize("c", [2, 3, 4])
def test_coproduct_with_zero(c):
    cp = truncated_coproduct(A1M, zero_algebra(), c)
    assert cp.dimension == 1


def test_truncated_coproduct_rejects_class_one():
    with pytest.raises(ValueError):
        truncated_coproduct(A1M, A1N, 1)


@pytest.mark.parametrize("M,N", [(sl2(), A1N), (aff2(), heisenberg()), (A1M, aff2())])
def test_truncated_coproduct_invariants(M, N):
    cp = truncated_coproduct(M, N, 3)
    # degree one embeds M + N
    assert cp.degree_profile()[0] == M.dim + N.dim
    for tag, A in (("M", M), ("N", N)):
        assert cp.check_inclusion_morphism(tag) is None
        fold = cp.fold_matrix(tag)
        inc = Matrix.from_columns(QQ, [dict_to_dense(cp, cp.letter_vector(tag, A.unit(i))) for i in range(A.dim)], cp.ambient_dim)
        assert fold @ inc == Matrix.identity(QQ, A.dim)
    assert cp.check_partial_jacobi() is None


def dict_to_dense(cp, v):
    return tuple(QQ(v.get(k, 0)) for k in range(cp.ambient_dim))


def test_sl2_coproduct_keeps_degree_two():
    # sl2 is perfect, so brackets of its letters must not leave the free product
    cp = truncated_coproduct(sl2(), A1N, 3)
    assert cp.dimension > sl2().dim + 1


# -- the flat object ---------------------------------------------------------


def test_flat_object_smallest_example():
    P, M = abelian(1, name="P", prefix="p"), A1M
    fo = flat_object(P, M, 2)
    assert fo.dimension == 2
    assert fo.matches_ideal()
    names = fo.coproduct.hall.names()
    spanned = {names[k] for v in fo.kernel.vectors for k, x in enumerate(v) if x}
    assert spanned == {"m", "[m,p]"}


def test_flat_object_with_zero_pieces():
    M = aff2()
    assert flat_object(zero_algebra(), M, 3).dimension == M.dim
    assert flat_object(M, zero_algebra(), 3).dimension == 0


@pytest.mark.parametrize("c", [2, 3, 4])
@pytest.mark.parametrize(
    "P,M",
    [(aff2(), A1M), (A1M, aff2()), (sl2(), A1N), (heisenberg(), aff2()), (sl2(), sl2(name="t"))],
    ids=["aff,ab1", "ab1,aff", "sl2,ab1", "heis,aff", "sl2,sl2"],
)
def test_flat_object_is_generated_ideal(P, M, c):
    fo = flat_object(P, M, c)
    assert fo.matches_ideal()


# -- Peiffer products --------------------------------------------------------


def test_zero_actions_give_direct_sum():
    p = zero_pair(aff2(), heisenberg())
    r = peiffer_saturate(*p.astuple())
    assert r.W.dim == 0 and r.dim == 5
    assert r.carrier.basis == ("e1", "e2", "x", "y", "z")


def test_collapsing_pair():
    r = peiffer_saturate(*collapsing_pair().astuple())
    assert r.dim == 1
    assert r.l_N.matrix.is_zero()
    assert r.W == Subspace.span(QQ, 2, [(0, 1)])


def test_sl2_conjugation_pair():
    r = peiffer_saturate(*conjugation_pair(sl2()).astuple())
    assert r.dim == 3
    assert r.W == Subspace.span(QQ, 6, [(1, 0, 0, -1, 0, 0), (0, 1, 0, 0, -1, 0), (0, 0, 1, 0, 0, -1)])
    assert r.l_M == r.l_N and r.l_M.rank() == 3


@pytest.mark.parametrize("pair", corpus_pairs(), ids=lambda p: p.name)
def test_peiffer_result_invariants(pair):
    r = peiffer_saturate(*pair.astuple())
    assert check_jacobi(r.carrier) is None
    assert check_morphism(r.l_M) is None and check_morphism(r.l_N) is None
    assert r.spans()
    assert r.k_relations() is None
    assert r.dim == pair.M.dim + pair.N.dim - r.W.dim


def test_peiffer_rejects_bad_actions():
    s = sl2()
    bad = Action(s, s, tuple(Matrix.identity(QQ, 3) for _ in range(3)))
    with pytest.raises(ActionAxiomError):
        peiffer_saturate(s, s, bad, conjugation(s))


@pytest.mark.parametrize("pair", corpus_pairs(), ids=lambda p: p.name)
def test_oracle_agrees_on_corpus(pair):
    r = peiffer_saturate(*pair.astuple())
    v = peiffer_oracle(*pair.astuple(), max_class=4)
    assert v.stabilized and v.stable_class <= 4
    assert oracle_agrees(r, v.final)


def test_oracle_specific_values():
    assert peiffer_truncated(*collapsing_pair().astuple(), 3).dimension == 1
    assert peiffer_truncated(*conjugation_pair(sl2()).astuple(), 3).dimension == 3
    z = zero_pair(aff2(), heisenberg())
    for c in (2, 3):
        t = peiffer_truncated(*z.astuple(), c)
        assert t.dimension == 5 and t.concentrated


def test_oracle_collapse_grows_with_class():
    # at class 2 nothing above degree 2 is formed, so collapse can only be partial
    p = conjugation_pair(sl2())
    dims = [peiffer_truncated(*p.astuple(), c).W.dim for c in (2, 3, 4)]
    assert dims == sorted(dims) and dims[-1] == 3


def test_oracle_inconclusive_when_capped():
    v = peiffer_oracle(*conjugation_pair(sl2()).astuple(), max_class=2)
    assert not v.stabilized and v.stable_class is None


# -- coequalizer property ----------------------------------------------------


@pytest.mark.parametrize("d", [1, 2])
def test_coequalizer_zero_and_conjugation(d):
    for p in (zero_pair(A1M, aff2()), conjugation_pair(aff2()), collapsing_pair()):
        assert check_coequalizer_property(*p.astuple(), d) is None


def test_coequalizer_sl2_degree_three():
    assert check_coequalizer_property(*conjugation_pair(sl2()).astuple(), 3) is None


def test_coequalizer_needs_compatibility():
    f = check_coequalizer_property(*incompatible_pair().astuple(), 1)
    assert f is not None and f.home == "M"
    assert str(f) == "coequalizer property fails in M at [[e2,n],e1]"


def test_coequalizer_rejects_invalid_actions():
    s = perturbed_sl2()
    with pytest.raises(ActionAxiomError):
        check_coequalizer_property(A1M, s, Action.zero(A1M, s), Action(s, A1M, tuple(Matrix.identity(QQ, 1) for _ in range(3))), 1)


def test_truncated_coproduct_extra_callable():
    cp = TruncatedCoproduct([("M", A1M), ("N", A1N)], 2, extra=lambda cp: [cp.hall.bracket_basis(1, 0)])
    assert cp.dimension == 2
