"""Exact linear algebra: dense Fraction routines and the integer echelon span."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wzw.linalg import (IntSpan, identity, invert, is_zero, mat_mul, mat_sub,
                        nullspace, rank, rref, transpose, zeros)


def fr(rows):
    return [[Fraction(v) for v in row] for row in rows]


def test_rref_reports_pivots():
    a = fr([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    reduced, pivots = rref(a)
    assert pivots == [0, 1]
    # pivot columns carry unit vectors after reduction
    for r, c in enumerate(pivots):
        assert reduced[r][c] == 1
        assert all(reduced[i][c] == 0 for i in range(len(reduced)) if i != r)


def test_rank_small_cases():
    assert rank(fr([[1, 2], [2, 4]])) == 1
    assert rank(fr([[1, 0], [0, 1]])) == 2
    assert rank(zeros(3, 5)) == 0
    assert rank(fr([[Fraction(1, 2), Fraction(1, 3)]])) == 1


def test_invert_roundtrip():
    a = fr([[2, 1, 0], [1, 3, 1], [0, 1, 1]])
    inv = invert(a)
    assert mat_mul(a, inv) == identity(3)
    assert mat_mul(inv, a) == identity(3)


def test_invert_rejects_singular():
    with pytest.raises(ValueError):
        invert(fr([[1, 2], [2, 4]]))


def test_nullspace_vectors_are_killed():
    a = fr([[1, 2, 3, 4], [2, 4, 6, 8], [1, 1, 1, 1]])
    basis = nullspace(a)
    assert len(basis) == 4 - rank(a)
    for v in basis:
        assert all(sum(row[j] * v[j] for j in range(4)) == 0 for row in a)


def test_matrix_helpers():
    a = fr([[1, 2], [3, 4]])
    assert transpose(a) == fr([[1, 3], [2, 4]])
    assert is_zero(mat_sub(a, a))
    assert not is_zero(a)


entries = st.integers(min_value=-7, max_value=7)
int_matrix = st.lists(st.lists(entries, min_size=4, max_size=4),
                      min_size=2, max_size=5)


@settings(max_examples=60, deadline=None)
@given(int_matrix)
def test_intspan_rank_matches_dense(rows):
    span = IntSpan()
    for row in rows:
        span.add({j: v for j, v in enumerate(row) if v})
    assert span.rank == rank(fr(rows))


@settings(max_examples=60, deadline=None)
@given(int_matrix, st.lists(entries, min_size=2, max_size=5))
def test_intspan_reduce_detects_membership(rows, coeffs):
    span = IntSpan()
    for row in rows:
        span.add({j: v for j, v in enumerate(row) if v})
    combo = {}
    for c, row in zip(coeffs, rows):
        for j, v in enumerate(row):
            if c * v:
                combo[j] = combo.get(j, 0) + Fraction(c * v)
    combo = {j: v for j, v in combo.items() if v}
    assert span.reduce(combo) == {}


@settings(max_examples=60, deadline=None)
@given(int_matrix, st.lists(entries, min_size=4, max_size=4))
def test_intspan_reduce_is_a_projection(rows, probe):
    span = IntSpan()
    for row in rows:
        span.add({j: v for j, v in enumerate(row) if v})
    residual = span.reduce({j: Fraction(v) for j, v in enumerate(probe) if v})
    assert span.reduce(residual) == residual
    # the residual touches no pivot column
    assert not set(residual) & set(span.pivots)


def test_add_fraction_row_clears_denominators():
    a, b = IntSpan(), IntSpan()
    a.add_fraction_row({0: Fraction(1, 2), 1: Fraction(1, 3)})
    b.add({0: 3, 1: 2})
    assert a.rank == b.rank == 1
    assert a.reduce({0: Fraction(3), 1: Fraction(2)}) == {}
