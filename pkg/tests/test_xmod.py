import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liexmod.actions import Action, check_compatible, conjugation
from liexmod.catalog import abelian, heisenberg, sl2
from liexmod.copro import peiffer_saturate
from liexmod.corpus import (
    broken_xmod,
    collapsing_pair,
    conjugation_pair,
    corpus_pairs,
    corpus_xmod_pairs,
    identity_xmod,
    incompatible_pair,
    mediator_cases,
    random_action_pairs,
    zero_xmod,
)
from liexmod.exactlin import QQ, Matrix
from liexmod.liealg import LinearMap
from liexmod.xmod import (
    CrossedModule,
    RestrictionFailure,
    WellDefinednessFailure,
    XModMorphism,
    action_on_peiffer,
    check_xmod,
    check_xmod_morphism,
    copair_xmod,
    identity_morphism,
    induced_actions,
    peiffer_xmods,
    theorem_roundtrip,
    xmod_coproduct,
    xmod_coproduct_mediator,
    xmod_failures,
)


@pytest.mark.parametrize("pair", corpus_xmod_pairs(), ids=lambda p: p.name)
def test_corpus_xmods_are_valid(pair):
    assert check_xmod(pair.xm) is None and check_xmod(pair.xn) is None


def test_broken_xmod_fails_peiffer():
    fs = xmod_failures(broken_xmod())
    assert [w.family for w in fs] == ["peiffer"]
    assert fs[0].names == ("e1", "e2")


def test_zero_boundary_with_conjugation_fails_peiffer():
    s = sl2()
    x = CrossedModule(s, s, LinearMap.zero(s, s), conjugation(s))
    assert check_xmod(x).family == "peiffer"


def test_scaled_boundary_fails_morphism_and_more():
    s = sl2()
    x = CrossedModule(s, s, LinearMap(s, s, Matrix.identity(QQ, 3).scale(2)), conjugation(s))
    fams = {w.family for w in xmod_failures(x)}
    assert "boundary-morphism" in fams and "peiffer" in fams


def test_shape_checked():
    s, a = sl2(), abelian(1)
    with pytest.raises(ValueError):
        CrossedModule(s, a, LinearMap.zero(s, s), conjugation(s))


@pytest.mark.parametrize("pair", corpus_xmod_pairs(), ids=lambda p: p.name)
def test_induced_actions_are_compatible(pair):
    aMN, aNM = induced_actions(pair.xm, pair.xn)
    assert check_compatible(aMN, aNM) is None


def test_induced_actions_need_common_base():
    with pytest.raises(ValueError):
        induced_actions(identity_xmod(sl2()), identity_xmod(heisenberg()))


@pytest.mark.parametrize("pair", corpus_pairs(), ids=lambda p: p.name)
def test_peiffer_xmods_match_compatibility(pair):
    r = theorem_roundtrip(*pair.astuple())
    assert r.agrees
    assert r.compatible == (pair.name != "incompatible")


def test_incompatible_pair_reports_failures():
    p = peiffer_saturate(*incompatible_pair().astuple())
    px = peiffer_xmods(p)
    assert not px.passed
    fams = {w.family for side in "MN" for w in px.failures[side]}
    assert fams & {"action_well_defined", "peiffer", "equivariance", "action-homomorphism", "action-derivation"}


def test_sl2_peiffer_xmods_are_isomorphisms():
    px = peiffer_xmods(peiffer_saturate(*conjugation_pair(sl2()).astuple()))
    assert px.passed
    assert px.xm.boundary.rank() == 3 and px.xn.boundary.rank() == 3


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_roundtrip_on_random_pairs(seed):
    for pair in random_action_pairs(4, seed=seed):
        assert theorem_roundtrip(*pair.astuple()).agrees, pair.name


def test_action_on_peiffer_sl2_is_conjugation():
    s = sl2()
    c = conjugation(s)
    p = peiffer_saturate(*conjugation_pair(s).astuple())
    a = action_on_peiffer(s, c, c, p)
    assert a.matrices == c.matrices


def test_action_on_peiffer_restriction_failure():
    # sl2 acting on the first summand only moves (v, -v) out of W
    s = sl2()
    c = conjugation(s)
    p = peiffer_saturate(*conjugation_pair(s).astuple())
    with pytest.raises(RestrictionFailure) as exc:
        action_on_peiffer(s, c, Action.zero(s, s), p)
    assert exc.value.witness.family == "restriction"


def test_action_on_peiffer_collapsing():
    cp = collapsing_pair()
    p = peiffer_saturate(*cp.astuple())
    L = abelian(1, name="L", prefix="l")
    a = action_on_peiffer(L, Action.zero(L, cp.M), Action(L, cp.N, (Matrix.identity(QQ, 1),)), p)
    assert a.target is p.carrier and a.matrices[0].is_zero()


@pytest.mark.parametrize("pair", corpus_xmod_pairs(), ids=lambda p: p.name)
def test_xmod_coproduct_is_valid(pair):
    cp = xmod_coproduct(pair.xm, pair.xn)
    assert check_xmod(cp.xmod) is None
    assert check_xmod_morphism(cp.iota_M) is None and check_xmod_morphism(cp.iota_N) is None


def test_xmod_coproduct_dimensions():
    dims = {p.name: xmod_coproduct(p.xm, p.xn).peiffer.dim for p in corpus_xmod_pairs()}
    assert dims["sl2 id/id"] == 3
    # the zero top contributes nothing
    assert dims["sl2 id/0"] == 3
    # both induced actions vanish, so the carrier is a direct sum
    assert dims["heis center/id"] == 4
    # only (z, -z) collapses
    assert dims["heis id/id"] == 5
    assert dims["ab1 collapsing"] == 1


def test_copair_needs_vanishing_boundary():
    s = sl2()
    c = conjugation(s)
    p = peiffer_saturate(*conjugation_pair(s).astuple())
    # W is spanned by (v, -v); with boundaries 1 and -1 the copairing sends it to 2v
    neg = CrossedModule(s, s, LinearMap(s, s, Matrix.identity(QQ, 3).scale(-1)), c)
    with pytest.raises(WellDefinednessFailure) as exc:
        copair_xmod(identity_xmod(s), neg, p)
    assert exc.value.witness.family == "boundary-on-W"


@pytest.mark.parametrize("case", mediator_cases(), ids=lambda c: c.name)
def test_mediator(case):
    cp = xmod_coproduct(case.pair.xm, case.pair.xn)
    if case.target is None:
        target, zM, zN = cp.xmod, cp.iota_M, cp.iota_N
    else:
        target, zM, zN = case.target, case.zM, case.zN
    med = xmod_coproduct_mediator(cp, target, zM, zN)
    assert med.unique and not med.failures
    if case.target is None:
        assert med.morphism.top == LinearMap.identity(cp.peiffer.carrier)


def test_mediator_must_vanish_on_w():
    s = sl2()
    cp = xmod_coproduct(identity_xmod(s), identity_xmod(s))
    idL = identity_xmod(s)
    one = LinearMap.identity(s)
    zM = XModMorphism(cp.iota_M.source, idL, one, one)
    zN = XModMorphism(cp.iota_N.source, idL, LinearMap.zero(s, s), one)
    with pytest.raises(WellDefinednessFailure) as exc:
        xmod_coproduct_mediator(cp, idL, zM, zN)
    assert exc.value.witness.family == "mediator-on-W"


def test_mediator_rejects_mismatched_bases():
    s = sl2()
    cp = xmod_coproduct(identity_xmod(s), identity_xmod(s))
    idL = identity_xmod(s)
    one = LinearMap.identity(s)
    zM = XModMorphism(cp.iota_M.source, idL, one, one)
    zN = XModMorphism(cp.iota_N.source, idL, one, LinearMap.zero(s, s))
    with pytest.raises(ValueError):
        xmod_coproduct_mediator(cp, idL, zM, zN)


def test_identity_morphism():
    x = identity_xmod(heisenberg())
    assert check_xmod_morphism(identity_morphism(x)) is None
