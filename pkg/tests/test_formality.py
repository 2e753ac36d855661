import pytest

from ratmodels import (CDGAMorphism, CERTIFIED_FORMAL, CERTIFIED_NONFORMAL, CohomologyAlgebra,
                       Element, bigraded_model, check_morphism, cohomology_dims, formality_check,
                       koszul_formality, lemma37_witness, linalg, massey_triple, minimal_model,
                       regular_sequence_check, retract_transfer_check, sphere_mapping_space_model)
from ratmodels.bridge import sphere_model_maps
from ratmodels.exceptions import NonHomogeneousInput, NotARetract, NotSimplyConnected
from ratmodels.formality import (INCONCLUSIVE, MasseyUndefined, NotApplicable, WitnessNotFound,
                                 lower_degree, massey_search, verify_psi)

from conftest import model, quotient, sullivan


@pytest.fixture(scope="module")
def F2():
    return sphere_mapping_space_model(model("Y"), 2).algebra


@pytest.fixture(scope="module")
def H_Y():
    return quotient("x1:4 x2:4", ["x1*x2"], 16)


def _is_decomposable(e):
    return all(sum(x for _, x in m) >= 2 for m in e.terms)


def _assert_minimal_model(mm, A, bound):
    for gen in mm.algebra.generators:
        assert _is_decomposable(mm.algebra.dgen(gen.name))
    assert mm.algebra.is_minimal()
    report = check_morphism(mm.morphism, bound)
    assert report.is_quasi_isomorphism()
    assert cohomology_dims(mm.algebra, bound) == cohomology_dims(A, bound)


# -- minimal models

def test_minimal_model_of_Y_cohomology(H_Y):
    mm = minimal_model(H_Y, 16)
    low = [(x.name, x.degree) for x in mm.algebra.generators if x.degree < 12]
    assert sorted(d for _, d in low) == [4, 4, 7]
    y = next(x for x in mm.algebra.generators if x.degree == 7)
    d = mm.algebra.dgen(y.name)
    assert d == mm.algebra.gen("x1") * mm.algebra.gen("x2") or \
        d == -(mm.algebra.gen("x1") * mm.algebra.gen("x2"))
    _assert_minimal_model(mm, H_Y, 16)


def test_minimal_model_of_minimal_input(Y):
    mm = minimal_model(Y, 14)
    assert sorted(x.degree for x in mm.algebra.generators) == sorted(x.degree for x in Y.generators)
    for n in range(15):
        basis = mm.algebra.basis(n)
        if not basis:
            continue
        images = [Y.vector(mm.morphism(Element.monomial(m)), n) for m in basis]
        assert len(basis) == len(Y.basis(n)) == linalg.rank(images)


def test_minimal_model_of_sphere_cohomology():
    H = quotient("w:4", ["w^2"], 4, truncated=False)
    mm = minimal_model(H, 14)
    degs = [x.degree for x in mm.algebra.generators]
    assert degs == [4, 7]
    x = mm.algebra.generators[0]
    w = mm.algebra.generators[1]
    assert mm.algebra.dgen(w.name).coefficient(((x, 2),)) != 0
    # oracle: H(Λ(x4, w7; dw = x^2)) is that of S^4
    assert cohomology_dims(mm.algebra, 14) == [1, 0, 0, 0, 1] + [0] * 10


def test_minimal_model_of_non_minimal_sullivan_algebra():
    A = sullivan("u:3 v:4 x:4 y:7", {"u": "v", "y": "x^2"})
    mm = minimal_model(A, 12)
    assert sorted(x.degree for x in mm.algebra.generators) == [4, 7]
    _assert_minimal_model(mm, A, 12)


def test_minimal_model_not_simply_connected():
    with pytest.raises(NotSimplyConnected):
        minimal_model(sullivan("t:1"), 6)


# -- bigraded models

def test_bigraded_model_of_Y_cohomology(H_Y):
    B = bigraded_model(H_Y, 12)
    assert sorted((x.degree, B.lower[x.name]) for x in B.algebra.generators) == [(4, 0), (4, 0), (7, 1)]
    assert not [x for x in B.generators_in(2) if x.degree < 12]
    assert B.check_grading()
    y = B.generators_in(1)[0]
    assert B.algebra.dgen(y.name) == B.algebra.gen("x1") * B.algebra.gen("x2")


def test_bigraded_model_single_odd():
    H = quotient("t:3", [], 3, truncated=False)
    B = bigraded_model(H, 12)
    assert [(x.name, B.lower[x.name]) for x in B.algebra.generators] == [("t", 0)]
    assert not B.algebra.dgen("t")


def test_bigraded_model_truncated_polynomial():
    H = quotient("u:2", ["u^3"], 10)
    B = bigraded_model(H, 10)
    gens = [(x.degree, B.lower[x.name]) for x in B.algebra.generators]
    assert gens == [(2, 0), (5, 1)]
    v = B.generators_in(1)[0]
    assert B.algebra.dgen(v.name) == B.algebra.gen("u") ** 3
    # oracle: H(Λ(u, v; dv = u^3)) = Q[u]/(u^3)
    assert cohomology_dims(B.algebra, 10) == [1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0]


def test_bigraded_model_grading_law_wedge():
    H = quotient("a:2 b:2", ["a^2", "a*b", "b^2"], 2, truncated=False)
    B = bigraded_model(H, 10)
    assert B.check_grading()
    for x in B.algebra.generators:
        for m in B.algebra.dgen(x.name).terms:
            assert lower_degree(m, B.lower) == B.lower[x.name] - 1
    assert cohomology_dims(B.algebra, 10) == [1, 0, 2] + [0] * 8


def test_bigraded_model_rho():
    H = quotient("u:2", ["u^3"], 10)
    B = bigraded_model(H, 10)
    for x in B.algebra.generators:
        img = B.rho.images[x]
        assert bool(img) == (B.lower[x.name] == 0)
    assert check_morphism(B.rho, 10).is_quasi_isomorphism()


# -- regular sequences

def test_regular_sequence_both_orders(F2):
    dy, dyb = F2.dgen("y"), F2.dgen("y_bar")
    for seq in ([dy, dyb], [dyb, dy]):
        v = regular_sequence_check(seq, 16)
        assert v.regular and v.status == "REGULAR_UP_TO_BOUND" and v.max_degree == 16


def test_regular_sequence_repeated():
    R = sullivan("x1:4 x2:4")
    x1 = R.gen("x1")
    v = regular_sequence_check([x1, x1], 12)
    assert v.status == "NOT_REGULAR" and v.index == 1
    assert v.witness == x1 * 0 + Element.scalar(1) or v.witness_degree == 0


def test_regular_sequence_variables():
    R = sullivan("x1:4 x2:4")
    assert regular_sequence_check([R.gen("x1"), R.gen("x2")], 16).regular


def test_regular_sequence_zero_divisor_witness():
    R = sullivan("a:2 b:2")
    a, b = R.gen("a"), R.gen("b")
    v = regular_sequence_check([a * b, a * a], 10)
    assert not v.regular
    # b is a nonzero class of Q[a,b]/(ab) killed by a^2
    assert v.witness_degree == 2 and v.witness == b


def test_regular_sequence_rejects_bad_input():
    R = sullivan("x:4 y:3")
    with pytest.raises(NonHomogeneousInput):
        regular_sequence_check([R.gen("x") + R.gen("x") ** 2], 12)
    with pytest.raises(NonHomogeneousInput):
        regular_sequence_check([Element()], 12)
    with pytest.raises(NonHomogeneousInput):
        regular_sequence_check([R.gen("y") * R.gen("x")], 12)


# -- Koszul route

def test_koszul_mapping_space(F2):
    v = koszul_formality(F2, 14)
    assert v.status == CERTIFIED_FORMAL and v.verified and v.method == "koszul"
    assert check_morphism(v.witness, 14).is_quasi_isomorphism()


def test_koszul_Y(Y):
    assert koszul_formality(Y, 14).status == CERTIFIED_FORMAL


def test_koszul_repeated_differential():
    A = sullivan("x:4 o:7 p:7", {"o": "x^2", "p": "x^2"})
    v = koszul_formality(A, 16)
    assert isinstance(v, NotApplicable) and not v
    assert v.witness.status == "NOT_REGULAR"


def test_koszul_shape_not_applicable(nonformal):
    v = koszul_formality(nonformal, 12)
    assert isinstance(v, NotApplicable)


# -- Massey products

def test_massey_nonformal_hand_computation(nonformal):
    x, y, z = (nonformal.gen(n) for n in ("x", "y", "z"))
    ms = massey_triple(nonformal, x, x, y)
    # hand computation: x^2 = 0 gives u = 0, dz = xy gives v = z,
    # value = u*y - (-1)^3 x*v = x*z, and H^5 = 0 so no indeterminacy
    assert ms.u == Element() and ms.v == z
    assert ms.value == x * z
    assert ms.degree == 8 and ms.indeterminacy == [] and ms.avoids_zero
    assert nonformal.cohomology(8).classify(x * z) != [0]


def test_massey_zero_on_the_nose_in_formal_algebra():
    H = quotient("a:3 b:3", ["a*b"], 3, truncated=False)
    a, b = H.gen("a"), H.gen("b")
    ms = massey_triple(H, a, a, b)
    assert ms.u == Element() and ms.v == Element() and not ms.value
    assert not ms.avoids_zero


def test_massey_undefined(H_Y):
    x1 = H_Y.gen("x1")
    with pytest.raises(MasseyUndefined):
        massey_triple(H_Y, x1, x1, x1)


def test_massey_search_finds_nonformal(nonformal):
    ms = massey_search(nonformal, 12)
    assert ms is not None and ms.avoids_zero


# -- formality_check

def test_formality_mapping_space(F2):
    v = formality_check(F2, 14)
    assert v.status == CERTIFIED_FORMAL and v.verified and v.max_degree == 14


def test_formality_mapping_space_psi_search(F2):
    v = formality_check(F2, 14, use_koszul=False)
    assert v.status == CERTIFIED_FORMAL and v.method == "psi-search"
    verify_psi(v.witness, CohomologyAlgebra(F2, 14), 14)


@pytest.mark.parametrize("gens,rels,top", [
    ("x1:4 x2:4", ["x1*x2"], 12),
    ("u:2", ["u^3"], 10),
    ("a:2 b:2", ["a^2", "a*b", "b^2"], 2),
    ("t:3 s:3", [], 6),
])
def test_formality_of_cohomology_algebra(gens, rels, top):
    H = quotient(gens, rels, top, truncated=top >= 10)
    v = formality_check(H, 10)
    assert v.status == CERTIFIED_FORMAL
    mm = minimal_model(H, 10)
    # ψ sends closed generators to themselves
    for gen in mm.algebra.generators:
        if not mm.algebra.dgen(gen.name) and gen.name in {x.name for x in H.generators}:
            assert v.witness.images[v.witness.source.generator(gen.name)] == H.gen(gen.name)


def test_formality_nonformal(nonformal):
    v = formality_check(nonformal, 12)
    assert v.status == CERTIFIED_NONFORMAL and v.verified
    assert v.massey.indeterminacy == []


def test_formality_S3_mapping_space_nonformal():
    F3 = sphere_mapping_space_model(model("Y"), 3).algebra
    v = formality_check(F3, 12)
    assert v.status == CERTIFIED_NONFORMAL
    assert v.massey.avoids_zero


def test_backtrack_cap_zero_never_certifies_wrongly(nonformal):
    v = formality_check(nonformal, 12, backtrack_cap=0)
    assert v.status in (CERTIFIED_NONFORMAL, INCONCLUSIVE)


@pytest.mark.parametrize("name,gens,diff", [
    ("Y", "x1:4 x2:4 y:7", {"y": "x1*x2"}),
    ("S4", "x:4 w:7", {"w": "x^2"}),
    ("odd", "t:3 x:4 y:7", {"y": "x^2"}),
])
def test_koszul_and_psi_agree(name, gens, diff):
    A = sullivan(gens, diff)
    k = koszul_formality(A, 14)
    p = formality_check(A, 14, use_koszul=False)
    if k and p.status != INCONCLUSIVE:
        assert k.status == p.status


# -- power witnesses

def test_power_witness_rejects_odd_generator():
    B = bigraded_model(quotient("u:2", ["u^3"], 10), 10)
    v = B.generators_in(1)[0]
    with pytest.raises(ValueError):
        lemma37_witness(B, v, 20)


def test_power_witness_planted_witness():
    A = sullivan("w:4 wp:7", {"wp": "w^2"})
    from ratmodels.formality import BigradedModel
    B = BigradedModel(A, {"w": 1, "wp": 2})
    pw = lemma37_witness(B, "w", 12)
    assert (pw.w_prime, pw.n, pw.omega) == (A.gen("wp"), 2, Element())


def test_power_witness_not_found_below_bound():
    A = sullivan("w:4 wp:11", {"wp": "w^3"})
    from ratmodels.formality import BigradedModel
    B = BigradedModel(A, {"w": 1, "wp": 2})
    with pytest.raises(WitnessNotFound):
        lemma37_witness(B, "w", 10)
    assert lemma37_witness(B, "w", 12).n == 3


def test_power_witness_wedge_of_two_spheres():
    # first even generator of positive lower grading in the bigraded model of
    # H(S^2 ∨ S^2) sits in degree 4; a square witness appears in degree 7
    H = quotient("a:2 b:2", ["a^2", "a*b", "b^2"], 2, truncated=False)
    B = bigraded_model(H, 10)
    w = next(x for x in B.algebra.generators if B.lower[x.name] >= 1 and not x.odd)
    assert w.degree == 4
    pw = lemma37_witness(B, w, 10)
    assert pw.n == 2
    d = B.algebra.d(pw.w_prime)
    assert d - pw.omega == Element.gen(w) ** 2
    assert not pw.omega.coefficient(((w, 2),))
    assert _is_decomposable(pw.omega)


# -- retract transfer

def test_retract_identity(Y):
    ident = CDGAMorphism.identity(Y)
    rep = retract_transfer_check(ident, ident, 12)
    assert rep.conclusion.startswith("confirmed")


def test_retract_mapping_space():
    model_ = sphere_mapping_space_model(model("Y"), 2)
    inc, proj = sphere_model_maps(model_)
    rep = retract_transfer_check(inc, proj, 14)
    assert rep.b_verdict.status == CERTIFIED_FORMAL
    assert rep.a_verdict.status == CERTIFIED_FORMAL
    assert rep.conclusion.startswith("confirmed")


def test_not_a_retract(Y):
    twice = CDGAMorphism(Y, Y, {"x1": Y.gen("x1") * 2, "x2": Y.gen("x2"), "y": Y.gen("y") * 2})
    with pytest.raises(NotARetract):
        retract_transfer_check(twice, CDGAMorphism.identity(Y), 12)


def test_retract_nonformal_source_not_claimed(nonformal):
    ident = CDGAMorphism.identity(nonformal)
    rep = retract_transfer_check(ident, ident, 12)
    assert rep.a_verdict is None and "nothing to transfer" in rep.conclusion
