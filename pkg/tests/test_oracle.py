"""Coinvariant-rank oracles for labeled points on the line."""

import itertools
from fractions import Fraction

import pytest

from wzw.errors import InputError
from wzw.oracle import (CoinvariantProblem, npoint_block_rank, npoint_block_ranks,
                        propagation_check, sl2_irrep_matrices, three_point_rank,
                        three_point_ranks)


def classical_triple(l, m, n):
    # dimension of invariants in V_l (x) V_m (x) V_n: triangle window, no truncation
    if (l + m + n) % 2:
        return 0
    return int(abs(l - m) <= n <= l + m)


def test_irrep_matrices_bracket():
    for m in range(5):
        rep = sl2_irrep_matrices(m)
        d = m + 1
        ef = [[sum(rep.E[i][k] * rep.F[k][j] for k in range(d)) -
               sum(rep.F[i][k] * rep.E[k][j] for k in range(d))
               for j in range(d)] for i in range(d)]
        assert ef == [list(r) for r in rep.H]
        assert [rep.H[i][i] for i in range(d)] == [m - 2 * j for j in range(d)]


def test_three_point_classical_rank():
    for l, m, n in itertools.product(range(4), repeat=3):
        _, classical = three_point_ranks(3, l, m, n)
        assert classical == classical_triple(l, m, n), (l, m, n)


def test_three_point_level_truncation_bites():
    # (1,1,0) fits at level 1; (1,1,2) needs level 2
    assert three_point_rank(1, 1, 1, 0) == 1
    assert three_point_rank(1, 1, 1, 1) == 0
    assert three_point_rank(2, 1, 1, 2) == 1
    # classical rank ignores the level: these couple classically but not fused
    rank, classical = three_point_ranks(2, 2, 2, 2)
    assert (rank, classical) == (0, 1)
    rank, classical = three_point_ranks(3, 3, 3, 2)
    assert (rank, classical) == (0, 1)


def test_npoint_matches_three_point():
    z = (Fraction(0), Fraction(1), Fraction(3))
    for l, m, n in itertools.product(range(3), repeat=3):
        p = CoinvariantProblem(2, (l, m, n), z)
        assert npoint_block_ranks(p) == three_point_ranks(2, l, m, n)


def test_npoint_four_point_values():
    z = (Fraction(0), Fraction(1), Fraction(2), Fraction(5))
    rank, classical = npoint_block_ranks(CoinvariantProblem(1, (1, 1, 1, 1), z))
    assert (rank, classical) == (1, 2)
    rank, classical = npoint_block_ranks(CoinvariantProblem(2, (1, 1, 1, 1), z))
    assert (rank, classical) == (2, 2)


def test_rank_independent_of_points():
    configs = [(Fraction(0), Fraction(1), Fraction(2), Fraction(3)),
               (Fraction(-5), Fraction(1, 3), Fraction(2), Fraction(11)),
               (Fraction(7), Fraction(-2), Fraction(1, 2), Fraction(-9))]
    ranks = {npoint_block_rank(CoinvariantProblem(1, (1, 1, 1, 1), z))
             for z in configs}
    assert ranks == {1}


def test_propagation_preserves_rank():
    assert propagation_check(1, (1, 1), (Fraction(0), Fraction(1)))
    assert propagation_check(2, (2, 1, 1), (Fraction(0), Fraction(1), Fraction(4)))


def test_input_validation():
    with pytest.raises(InputError):
        npoint_block_rank(CoinvariantProblem(1, (2,), (Fraction(0),)))
    with pytest.raises(InputError):
        npoint_block_rank(CoinvariantProblem(1, (1, 1), (Fraction(0), Fraction(0))))
    with pytest.raises(InputError):
        npoint_block_rank(CoinvariantProblem(1, (1, 1), (Fraction(0),)))
    with pytest.raises(InputError):
        npoint_block_rank(CoinvariantProblem(1, (1, 1), None))
    with pytest.raises(InputError):
        three_point_rank(-1, 0, 0, 0)
