import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from species_crystal import linalg as la
from species_crystal.errors import FieldError
from species_crystal.fields import (RATIONALS, Matrix, PrimeField, make_extension, restrict_scalars,
                                    solve_linear)

QI = make_extension(RATIONALS, [1, 0, 1])
HANDLES = [
    make_extension(RATIONALS, [1, 0, 1]),
    make_extension(RATIONALS, [-2, 0, 1]),
    make_extension(RATIONALS, [-2, 0, 0, 1]),
    make_extension(PrimeField(7), [1, 0, 1]),
]


def test_gaussian_rationals():
    i = QI.gen
    assert i * i == QI.element([-1])
    assert QI.degree == 2


def test_linear_minpoly_behaves_like_base():
    h = make_extension(RATIONALS, [-3, 1])
    assert h.degree == 1
    a = h.element([5])
    assert (a * a).coords == (25,)
    assert h.gen == h.element([3])


def test_reducible_rejected():
    with pytest.raises(FieldError, match="not a field"):
        make_extension(RATIONALS, [-1, 0, 1])


def test_non_monic_rejected():
    with pytest.raises(FieldError):
        make_extension(RATIONALS, [1, 0, 2])


def test_reducible_mod_p():
    # x^2 + 1 = (x - 2)(x + 2) over GF(5)
    with pytest.raises(FieldError):
        make_extension(PrimeField(5), [1, 0, 1])


def test_floats_refused():
    with pytest.raises(FieldError):
        RATIONALS.coerce(0.5)


@pytest.mark.parametrize("h", HANDLES, ids=lambda h: repr(h))
def test_field_axioms_on_random_triples(h):
    rng = random.Random(1)
    for _ in range(1000):
        a, b, c = (h.random_element(rng, 50) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == h.one


def test_solve_identity():
    A = Matrix.from_rows(RATIONALS, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    b = Matrix.from_rows(RATIONALS, [[4], [5], [6]])
    sol = solve_linear(A, b)
    assert sol.consistent and sol.particular == [4, 5, 6] and sol.kernel == []


def test_solve_zero_system():
    A = Matrix.from_rows(RATIONALS, [[0, 0], [0, 0]])
    b = Matrix.from_rows(RATIONALS, [[0], [0]])
    sol = solve_linear(A, b)
    assert sol.particular == [0, 0]
    assert len(sol.kernel) == 2


def test_solve_over_extension():
    A = Matrix.from_rows(QI, [[QI.gen]])
    b = Matrix.from_rows(QI, [[1]])
    sol = solve_linear(A, b)
    assert sol.particular == [-QI.gen]
    assert sol.kernel == []


def test_solve_inconsistent():
    A = Matrix.from_rows(RATIONALS, [[1, 1], [1, 1]])
    b = Matrix.from_rows(RATIONALS, [[1], [2]])
    assert not solve_linear(A, b).consistent


def test_handle_mismatch():
    A = Matrix.from_rows(QI, [[1]])
    b = Matrix.from_rows(RATIONALS, [[1]])
    with pytest.raises(FieldError):
        solve_linear(A, b)


def test_restrict_scalars():
    n, G = restrict_scalars(QI, 1)
    assert n == 2
    assert la.is_zero(G - la.as_matrix([[0, -1], [1, 0]], RATIONALS))
    assert restrict_scalars(QI, 0)[0] == 0
    base = make_extension(RATIONALS, [-3, 1])
    n, G = restrict_scalars(base, 2)
    assert n == 2 and la.is_zero(G - 3 * la.identity(2, RATIONALS))


@pytest.mark.parametrize("h", HANDLES, ids=lambda h: repr(h))
def test_restricted_action_satisfies_minpoly(h):
    _, G = restrict_scalars(h, 3)
    assert la.is_zero(la.poly_eval(h.minpoly, G, h.base))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=5),
       st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_rank_nullity_and_solutions(rows, rhs):
    A = Matrix.from_rows(RATIONALS, rows)
    assert A.rank() + len(A.kernel()) == A.cols
    b = Matrix.from_rows(RATIONALS, [[x] for x in rhs[:A.rows]])
    sol = solve_linear(A, b)
    if sol.consistent:
        x = la.column(sol.particular, RATIONALS)
        assert la.is_zero(la.matmul(A.entries, x, RATIONALS) - b.entries)
    for k in sol.kernel:
        assert la.is_zero(la.matmul(A.entries, la.column(k, RATIONALS), RATIONALS))


def test_rank_over_extension():
    i = QI.gen
    A = Matrix.from_rows(QI, [[1, i], [i, -1]])  # second row = i * first row
    assert A.rank() == 1
    assert len(A.kernel()) == 1
