from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import rationals, symmetric_int_matrices
from logsurf.errors import NotSymmetric, SingularMatrix
from logsurf.exactlin import (
    QMatrix,
    as_rational,
    determinant,
    format_rational,
    in_cone,
    is_negative_definite,
    leading_minors,
    rank,
    solve_linear,
)
from oracles import caratheodory_in_cone, cramer_solve, grid_negative, ldlt_positive, leibniz_det

F = Fraction


@pytest.mark.parametrize("A, b, x", [
    ([[-2]], [0], [0]),
    ([[-2, 1], [1, -2]], [-1, -1], [1, 1]),
    ([[1, 0], [0, 1]], [F(3, 2), -5], [F(3, 2), -5]),
])
def test_solve_examples(A, b, x):
    assert solve_linear(A, b) == x
    assert cramer_solve(A, b) == x


@pytest.mark.parametrize("A, expected", [
    ([[-2]], True),
    ([[-2, 1], [1, -2]], True),
    ([[-1, 2], [2, -1]], False),
])
def test_negative_definite_examples(A, expected):
    assert is_negative_definite(A) is expected


def test_minors_of_a2():
    assert leading_minors([[-2, 1], [1, -2]]) == [-2, 3]


def test_singular_raises():
    with pytest.raises(SingularMatrix):
        solve_linear([[1, 2], [2, 4]], [1, 2])


def test_asymmetric_rejected():
    with pytest.raises(NotSymmetric):
        is_negative_definite([[-2, 1], [0, -2]])


def test_normalization():
    assert as_rational("2/4") == as_rational("1/2") == F(1, 2)
    assert F(2, 4).denominator == 2


@pytest.mark.parametrize("bad", [0.5, True, "x/y", "1/0", None])
def test_as_rational_rejects(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rational(bad)


def test_format_rational():
    assert format_rational(F(4, 2)) == 2
    assert format_rational(F(-3, 6)) == "-1/2"


@given(rationals(), rationals())
def test_addition_exact(p, q):
    s = p + q
    assert s * p.denominator * q.denominator == p.numerator * q.denominator + q.numerator * p.denominator
    assert s.denominator > 0


@given(st.data())
def test_solve_zero_residual(data):
    n = data.draw(st.integers(1, 4))
    A = [[data.draw(rationals(max_den=4, bound=5)) for _ in range(n)] for _ in range(n)]
    b = [data.draw(rationals()) for _ in range(n)]
    expected = cramer_solve(A, b)
    if expected is None:
        with pytest.raises(SingularMatrix):
            solve_linear(A, b)
        return
    x = solve_linear(A, b)
    assert x == expected
    assert QMatrix.of(A).matvec(x) == b


@given(symmetric_int_matrices())
def test_determinant_matches_leibniz(A):
    assert determinant(A) == leibniz_det(A)


@given(symmetric_int_matrices(max_n=3, bound=3))
def test_negdef_necessary_direction(A):
    # a negative-definite matrix passes the grid check
    if is_negative_definite(A):
        assert grid_negative(A)
    else:
        assert not ldlt_positive([[-x for x in r] for r in A])


@given(symmetric_int_matrices(max_n=4, bound=4))
def test_negdef_matches_ldlt(A):
    assert is_negative_definite(A) == ldlt_positive([[-x for x in r] for r in A])


def test_negdef_grid_on_4x4_chain():
    # D4 and A4 intersection forms, checked on the full [-5, 5]^4 grid
    a4 = [[-2, 1, 0, 0], [1, -2, 1, 0], [0, 1, -2, 1], [0, 0, 1, -2]]
    d4 = [[-2, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -2]]
    d4_minus_one_tip = [[-2, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -1]]
    for A in (a4, d4):
        assert is_negative_definite(A) and grid_negative(A)
    assert not is_negative_definite(d4_minus_one_tip)
    assert not grid_negative(d4_minus_one_tip)


@given(symmetric_int_matrices(max_n=4))
def test_rank_bounds(A):
    r = rank(A)
    assert 0 <= r <= len(A)
    assert (r == len(A)) == (determinant(A) != 0)


@st.composite
def cone_problems(draw):
    dim = draw(st.integers(1, 3))
    k = draw(st.integers(0, 4))
    vec = st.lists(st.integers(-3, 3), min_size=dim, max_size=dim)
    return draw(vec), [draw(vec) for _ in range(k)]


@given(cone_problems())
def test_in_cone_matches_caratheodory(problem):
    v, gens = problem
    assert in_cone(v, gens) == caratheodory_in_cone(v, gens)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_in_cone_accepts_combinations(gens, lams):
    v = [sum(l * g[i] for l, g in zip(lams, gens)) for i in range(3)]
    assert in_cone(v, gens)


def test_in_cone_simple():
    assert in_cone([1, 1], [[1, 0], [0, 1]])
    assert not in_cone([-1, 0], [[1, 0], [0, 1]])
    assert in_cone([0, 0], [])
    assert not in_cone([1], [])


def test_quad_form():
    M = QMatrix.of([[-2, 1], [1, -2]])
    assert M.quad([1, 1]) == -2
