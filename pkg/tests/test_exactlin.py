"""Exact linear algebra: frozen examples plus algebraic property tests."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grkoszul.errors import InputFormatError
from grkoszul.exactlin import (
    FieldSpec,
    MatrixExact,
    QQ,
    echelon,
    in_span,
    intersect_spaces,
    rank_kernel,
    row_space,
    solve,
    span_coordinates,
)

F2 = FieldSpec(2)
F5 = FieldSpec(5)


def test_field_spec_rejects_composite_characteristic():
    with pytest.raises(InputFormatError):
        FieldSpec(6)


def test_rank_kernel_rational_frozen():
    m = MatrixExact(QQ, [[1, 1], [1, 1]])
    rank, kernel = rank_kernel(m)
    assert rank == 1
    assert kernel.rows == [[Fraction(1), Fraction(-1)]]


def test_rank_kernel_mod2_frozen():
    m = MatrixExact(F2, [[1, 1], [1, 1]])
    rank, kernel = rank_kernel(m)
    assert rank == 1
    assert kernel.rows == [[1, 1]]


def test_solve_diagonal_frozen():
    a = MatrixExact(QQ, [[2, 0], [0, 3]])
    assert solve(a, [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]


def test_solve_inconsistent_returns_none():
    a = MatrixExact(QQ, [[1, 1], [1, 1]])
    assert solve(a, [0, 1]) is None


def test_solve_shape_mismatch_is_input_error():
    a = MatrixExact(QQ, [[1, 0], [0, 1]])
    with pytest.raises(InputFormatError):
        solve(a, [1, 1, 1])


def test_echelon_is_canonical_rref():
    m = MatrixExact(QQ, [[0, 1, 2], [1, 0, 3], [1, 1, 5]])
    red, pivots = echelon(m)
    assert pivots == (0, 1)
    assert red.rows == [
        [Fraction(1), Fraction(0), Fraction(3)],
        [Fraction(0), Fraction(1), Fraction(2)],
    ]


def test_identity_and_mul():
    m = MatrixExact(F5, [[1, 2], [3, 4]])
    assert MatrixExact.identity(F5, 2).mul(m).rows == m.rows
    assert m.mul(MatrixExact.identity(F5, 2)).rows == m.rows


def test_span_utilities():
    rows, pivots = row_space(QQ, [[1, 1, 0], [0, 0, 1]], 3)
    assert in_span(QQ, rows, pivots, [2, 2, 7])
    assert not in_span(QQ, rows, pivots, [1, 0, 0])
    assert span_coordinates(QQ, rows, pivots, [3, 3, 1]) == [Fraction(3), Fraction(1)]
    meet = intersect_spaces(QQ, [[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]], 3)
    assert meet == [[Fraction(0), Fraction(1), Fraction(0)]]


entry = st.integers(min_value=-6, max_value=6)


def matrices(field):
    return st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.integers(min_value=1, max_value=4).flatmap(
            lambda m: st.lists(
                st.lists(entry, min_size=m, max_size=m), min_size=n, max_size=n
            ).map(lambda rows: MatrixExact(field, rows))
        )
    )


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([QQ, F2, F5]).flatmap(matrices))
def test_rank_nullity_and_kernel_annihilation(m):
    rank, kernel = rank_kernel(m)
    assert rank + kernel.nrows == m.ncols
    if kernel.nrows:
        assert m.mul(kernel.transpose()).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([QQ, F2, F5]).flatmap(matrices))
def test_rank_equals_transpose_rank(m):
    assert rank_kernel(m)[0] == rank_kernel(m.transpose())[0]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([QQ, F2, F5]).flatmap(matrices))
def test_echelon_idempotent(m):
    red, _ = echelon(m)
    red2, _ = echelon(red)
    assert red.rows == red2.rows


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([QQ, F2, F5]).flatmap(
        lambda f: matrices(f).flatmap(
            lambda m: st.lists(entry, min_size=m.ncols, max_size=m.ncols).map(
                lambda x: (m, x)
            )
        )
    )
)
def test_solve_recovers_consistent_systems(case):
    m, x = case
    b = m.apply(x)
    got = solve(m, b)
    assert got is not None
    assert m.apply(got) == b


def test_determinant_frozen():
    from grkoszul.exactlin import determinant

    assert determinant(MatrixExact(QQ, [[1, 2], [3, 4]])) == Fraction(-2)
    assert determinant(MatrixExact(QQ, [[1, 2], [2, 4]])) == 0
    assert determinant(MatrixExact(F5, [[2, 0], [0, 3]])) == 1
    with pytest.raises(InputFormatError):
        determinant(MatrixExact(QQ, [[1, 2, 3]], 3))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-5, 5), min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )
)
def test_determinant_zero_iff_singular(rows):
    from grkoszul.exactlin import determinant

    m = MatrixExact(QQ, rows)
    rank, _ = rank_kernel(m)
    if rank == m.nrows:
        assert determinant(m) != 0
    else:
        assert determinant(m) == 0
