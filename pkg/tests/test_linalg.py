from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from ratmodels import linalg

F = Fraction

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_identity():
    R, piv = linalg.rref([[1, 0], [0, 1]])
    assert R == [[1, 0], [0, 1]] and piv == [0, 1]


def test_rref_rank_one():
    R, piv = linalg.rref([[1, 2], [2, 4]])
    assert R == [[1, 2], [0, 0]] and piv == [0]


def test_kernel_examples():
    assert len(linalg.kernel_basis([[0] * 3] * 3)) == 3
    assert linalg.kernel_basis([[1, 0], [0, 1]]) == []
    (k,) = linalg.kernel_basis([[1, 1]])
    assert k[0] == -k[1] != 0


def test_solve_examples():
    assert linalg.solve([[1, 0], [0, 1]], [F(2), F(-3)]) == [2, -3]
    assert linalg.solve([[1, 1]], [1]) == [1, 0]
    assert linalg.solve([[1], [1]], [1, 2]) is None


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    assert linalg.rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_sympy_and_is_idempotent(m):
    R, piv = linalg.rref(m)
    S, spiv = sympy.Matrix(m).rref()
    nonzero = [row for row in R if any(row)]
    assert [[F(int(x.p), int(x.q)) for x in S.row(i)] for i in range(len(spiv))] == nonzero
    assert list(spiv) == piv
    assert linalg.rref(R)[0] == R


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(m):
    cols = len(m[0])
    ker = linalg.kernel_basis(m)
    assert linalg.rank(m) + len(ker) == cols
    for v in ker:
        assert all(x == 0 for x in linalg.matvec(m, v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_is_exact(m, data):
    b = data.draw(st.lists(small, min_size=len(m), max_size=len(m)))
    x = linalg.solve(m, b)
    consistent = sympy.Matrix(m).rank() == sympy.Matrix(m).row_join(sympy.Matrix(b)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert linalg.matvec(m, x) == list(b)


def test_echelon_span_tracks_membership():
    span = linalg.EchelonSpan(3)
    assert span.add([1, 1, 0])
    assert not span.add([2, 2, 0])
    assert span.contains([3, 3, 0]) and not span.contains([0, 0, 1])
    assert linalg.express([[1, 0], [1, 1]], [2, 1]) == [1, 1]
