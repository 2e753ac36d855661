import pytest

from ratmodels import (Element, FreeDGL, LieElement, LieGenerator, bracket, evaluation_maps,
                       finite_dimensional_model, mapping_space_lie_model, odd_spherical_retract)
from ratmodels.cdga import push_retract
from ratmodels.dgl import homology, lie_basis_in_degree, tensor, tensor_retract
from ratmodels.exceptions import ConnectivityViolation, DifferentialError, NotARetract

from conftest import model, quotient, sullivan


def L33():
    return FreeDGL([("a1", 3), ("a2", 3)], name="L")


def lg(L, name):
    return L.gen(name)


def test_even_self_bracket_vanishes():
    L = FreeDGL([("a", 2)])
    assert not bracket(lg(L, "a"), lg(L, "a"))


def test_odd_bracket_is_symmetric():
    L = L33()
    a, b = lg(L, "a1"), lg(L, "a2")
    assert bracket(a, b) == bracket(b, a)
    assert bracket(a, a)


def test_odd_triple_self_bracket_vanishes():
    L = FreeDGL([("a", 3)])
    a = lg(L, "a")
    aa = bracket(a, a)
    # in the tensor algebra [a,a] = 2 a⊗a and [a, a⊗a] = a⊗a⊗a - a⊗a⊗a
    assert aa == LieElement({(L.generator("a"),) * 2: 2})
    assert not bracket(a, aa)


def test_lie_basis_examples():
    L = L33()
    assert len(lie_basis_in_degree(L, 3)) == 2
    assert len(lie_basis_in_degree(L, 6)) == 3
    assert L.dim(1) == 0
    E = FreeDGL([("a", 2)])
    assert E.dim(4) == 0


def _pbw_series(lie_dims, n_max):
    # graded-commutative symmetric algebra on L: polynomial on odd degrees of L
    # shifted? no: inside T(V) the PBW basis is Sym in the super sense, where
    # odd-degree Lie elements are exterior and even ones polynomial
    series = [1] + [0] * n_max
    for d, k in enumerate(lie_dims):
        for _ in range(k):
            if d % 2:
                series = [series[n] + (series[n - d] if n >= d else 0) for n in range(n_max + 1)]
            else:
                new = list(series)
                for n in range(d, n_max + 1):
                    new[n] += new[n - d]
                series = new
    return series


@pytest.mark.parametrize("gens", [[("a1", 3), ("a2", 3)], [("a", 2), ("b", 3)], [("a", 1), ("b", 2)],
                                  [("a", 2), ("b", 2), ("c", 4)]])
def test_lie_dimensions_match_pbw(gens):
    L = FreeDGL(gens)
    n_max = 12
    dims = [0] + [L.dim(n) for n in range(1, n_max + 1)]
    words = [1] + [len(L.words(n)) for n in range(1, n_max + 1)]
    assert _pbw_series(dims, n_max) == words


def test_boundary_checks():
    with pytest.raises(DifferentialError):
        FreeDGL([("a", 3), ("b", 5)], {"b": LieElement.gen(LieGenerator("a", 3))})
    a = LieGenerator("a", 3)
    L = FreeDGL([a, ("b", 7)], {"b": bracket(LieElement.gen(a), LieElement.gen(a))})
    assert L.is_minimal()
    assert not L.boundary(L.boundary(L.gen("b")))


def test_homology_zero_differential_equals_L():
    L = L33()
    for n in range(1, 10):
        assert homology(L, n).dimension == L.dim(n)


def test_homology_loses_killed_bracket():
    a = LieGenerator("a", 3)
    L = FreeDGL([a, ("b", 7)], {"b": bracket(LieElement.gen(a), LieElement.gen(a))})
    # L_6 = <[a,a]> is killed; L_7 = <b> is not a cycle
    assert homology(L, 6).dimension == 0
    assert homology(L, 7).dimension == 0
    assert homology(L, 3).dimension == 1


def test_homology_matches_rank_count():
    a, b = LieGenerator("a", 2), LieGenerator("b", 2)
    A, B = LieElement.gen(a), LieElement.gen(b)
    L = FreeDGL([a, b, ("c", 5)], {"c": bracket(A, B)})
    from ratmodels import linalg
    for n in range(1, 12):
        rk = lambda k: linalg.rank(L.boundary_matrix(k)) if L.dim(k) and L.dim(k - 1) else 0
        assert homology(L, n).dimension == L.dim(n) - rk(n) - rk(n + 1)


@pytest.fixture
def S2_tensor():
    A, _ = finite_dimensional_model(model("S2"), 8)
    L = L33()
    return A, L, mapping_space_lie_model(A, L)


def test_tensor_degrees(S2_tensor):
    A, L, M = S2_tensor
    u = Element.gen(A.generator("x"))
    assert M.element(u, lg(L, "a1")).degree() == 1
    assert not M.bracket(M.element(u, lg(L, "a1")), M.element(u, lg(L, "a2")))
    assert not M.D(M.element(u, lg(L, "a1")))


def test_tensor_validation(S2_tensor):
    _, _, M = S2_tensor
    rep = M.validate(8)
    assert rep.ok, rep.failures[:3]
    assert rep.jacobi > 0 and rep.antisymmetry > 0


def test_tensor_validation_with_differentials():
    X = sullivan("x:2 y:3", {"y": "x^2"})
    A, _ = finite_dimensional_model(X, 8)
    a, b = LieGenerator("a", 3), LieGenerator("b", 3)
    L = FreeDGL([a, b, ("c", 7)], {"c": bracket(LieElement.gen(a), LieElement.gen(b))})
    assert mapping_space_lie_model(A, L).validate(9).ok


def test_tensor_validation_with_nonzero_dA():
    # A has d ≠ 0 and top degree 7
    X = sullivan("u:2 v:3 w:5", {"v": "u^2"})
    A, _ = finite_dimensional_model(X, 12)
    assert any(A.d(Element.monomial(m)) for n in range(8) for m in A.basis(n))
    L = FreeDGL([("a", 8), ("b", 9)])
    assert mapping_space_lie_model(A, L).validate(12).ok


def test_connectivity_violation():
    A, _ = finite_dimensional_model(model("S2"), 8)
    with pytest.raises(ConnectivityViolation):
        mapping_space_lie_model(A, FreeDGL([("a", 2)]))


def test_evaluation_maps(S2_tensor):
    A, L, M = S2_tensor
    proj, sec = evaluation_maps(M)
    a1 = lg(L, "a1")
    assert sec(a1) == tensor(Element.scalar(1), a1)
    assert not proj(M.element(Element.gen(A.generator("x")), a1))
    for name in ("a1", "a2"):
        assert proj(sec(lg(L, name))) == lg(L, name)
    assert proj.check(8) and sec.check(8)
    assert proj.compose(sec).check(8)


def test_tensor_retract():
    X = sullivan("t:3 x:4 y:7", {"y": "x^2"})
    A, proj = finite_dimensional_model(X, 16)
    ret = push_retract(odd_spherical_retract(X), proj)
    L = FreeDGL([("a", 9)])
    M = mapping_space_lie_model(A, L)
    T, I, Q = tensor_retract(M, ret.i, ret.q, max_degree=12)
    assert I.check(12) and Q.check(12)
    for n in T.degrees_up_to(12):
        for x in T.basis(n):
            assert Q(I(x)) == x


def test_tensor_retract_identities():
    T0 = quotient("t:3", [], 3, truncated=False)
    from ratmodels import CDGAMorphism
    ident = CDGAMorphism.identity(T0)
    M = mapping_space_lie_model(T0, FreeDGL([("a", 5)]))
    T, I, Q = tensor_retract(M, ident, ident, max_degree=10)
    for n in T.degrees_up_to(10):
        for x in T.basis(n):
            assert I(x) == x and Q(x) == x


def test_tensor_retract_rejects_non_retract():
    X = sullivan("t:3 s:3")
    A, proj = finite_dimensional_model(X, 10)
    ret = push_retract(odd_spherical_retract(X), proj)
    from ratmodels import CDGAMorphism
    zero_q = CDGAMorphism(A, ret.sphere, {})
    M = mapping_space_lie_model(A, FreeDGL([("a", 9)]))
    with pytest.raises(NotARetract):
        tensor_retract(M, ret.i, zero_q)
