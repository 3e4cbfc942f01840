"""KZ connection matrices, Kohno flatness, and numeric parallel transport."""

import itertools
import math
from fractions import Fraction

import pytest

from wzw.errors import InputError
from wzw.kz import (casimir_pair_matrix, flatness_check, kz_system,
                    parallel_transport, translation_contraction)

F = Fraction


def test_two_point_example():
    system = kz_system(1, (1, 1))
    assert system.dim == 1
    assert system.classical_dim == 1
    assert not system.truncated
    assert system.a_matrices[(0, 1)] == [[F(1, 2)]]


def test_casimir_pair_matrix_minimal_polynomial():
    # on V_1 (x) V_1 the pair Casimir has eigenvalues 1/2 (triplet), -3/2 (singlet)
    c = casimir_pair_matrix((1, 1), 1, 2)
    d = 4
    prod = [[sum((c[i][k] + (F(3, 2) if i == k else 0))
                 * (c[k][j] - (F(1, 2) if k == j else 0)) for k in range(d))
             for j in range(d)] for i in range(d)]
    assert all(v == 0 for row in prod for v in row)


FOUR_POINT_L2 = {
    (0, 1): [[F(3, 8), F(0)], [F(1, 4), F(-1, 8)]],
    (0, 2): [[F(-1, 8), F(1, 4)], [F(0), F(3, 8)]],
    (0, 3): [[F(1, 8), F(-1, 4)], [F(-1, 4), F(1, 8)]],
}


def test_four_point_level_two_matrices():
    system = kz_system(2, (1, 1, 1, 1))
    assert system.dim == 2 and system.classical_dim == 2
    assert not system.truncated
    for key, want in FOUR_POINT_L2.items():
        assert system.a_matrices[key] == want
    # the opposite pair acts identically: (2,3) with (0,1), etc.
    assert system.a_matrices[(2, 3)] == FOUR_POINT_L2[(0, 1)]
    assert system.a_matrices[(1, 3)] == FOUR_POINT_L2[(0, 2)]
    assert system.a_matrices[(1, 2)] == FOUR_POINT_L2[(0, 3)]


def test_four_point_total_casimir_scalar():
    # sum of all A_ij acts by the total-Casimir scalar on the invariant block
    system = kz_system(2, (1, 1, 1, 1))
    total = [[sum(system.a_matrices[key][i][j] for key in system.a_matrices)
              for j in range(2)] for i in range(2)]
    assert total == [[F(3, 4), F(0)], [F(0), F(3, 4)]]


def test_four_point_level_one_truncated():
    system = kz_system(1, (1, 1, 1, 1))
    assert system.dim == 1
    assert system.classical_dim == 2
    assert system.truncated
    assert system.truncation_invariant is False
    assert system.a_matrices[(0, 1)] == [[F(-1, 6)]]
    assert system.a_matrices[(0, 2)] == [[F(-5, 6)]]
    assert system.a_matrices[(0, 3)] == [[F(3, 2)]]
    assert system.a_matrices[(1, 2)] == [[F(3, 2)]]
    assert system.a_matrices[(1, 3)] == [[F(-5, 6)]]
    assert system.a_matrices[(2, 3)] == [[F(-1, 6)]]


TRUNCATED_DIMS = [
    ((1, 1, 1, 1), 1, 1, 2),
    ((2, 2, 2, 2), 2, 1, 3),
    ((2, 2, 2, 2), 3, 2, 3),
    ((3, 3, 3), 3, 0, 0),  # odd total weight: no invariants at all
    ((3, 3, 3, 3), 3, 1, 4),
]


@pytest.mark.parametrize("labels,level,dim,classical", TRUNCATED_DIMS)
def test_truncated_dimensions(labels, level, dim, classical):
    system = kz_system(level, labels)
    assert system.dim == dim
    assert system.classical_dim == classical
    assert system.truncated == (dim != classical)


def test_flatness_samples():
    for level, labels in [(1, (1, 1, 1, 1)), (2, (1, 1, 2)), (2, (2, 2, 2, 2)),
                          (3, (1, 2, 3)), (3, (3, 3, 3, 3))]:
        assert flatness_check(kz_system(level, labels))


def test_translation_contraction_zero():
    system = kz_system(2, (1, 1, 2))
    out = translation_contraction(system, system.base_point)
    assert all(v == 0 for row in out for v in row)
    shifted = tuple(z + 7 for z in system.base_point)
    out = translation_contraction(system, shifted)
    assert all(v == 0 for row in out for v in row)


def test_translation_contraction_rejects_collision():
    system = kz_system(2, (1, 1, 2))
    with pytest.raises(InputError):
        translation_contraction(system, (F(0), F(0), F(1)))


def test_system_validation():
    with pytest.raises(InputError):
        kz_system(1, (2, 0))
    with pytest.raises(InputError):
        kz_system(1, (1,))
    with pytest.raises(InputError):
        kz_system(-1, (1, 1))


def test_transport_constant_path_is_identity():
    system = kz_system(2, (1, 1, 2))
    res = parallel_transport(system, [(2, 0, -2)], steps=1000)
    assert res.matrix == [[1 + 0j]]
    assert res.error_estimate == 0.0


def test_transport_contractible_loop():
    system = kz_system(2, (1, 1, 2))
    loop = [(2, 0, -2), (2 + 1j, 0, -2), (3 + 1j, 0, -2), (3, 0, -2), (2, 0, -2)]
    res = parallel_transport(system, loop, steps=2000)
    assert res.converged
    assert abs(res.matrix[0][0] - 1) < 1e-9


def test_transport_reversal_inverts():
    system = kz_system(2, (1, 1, 1, 1))
    path = [(3, 1, 0, -2), (3 + 1j, 1, 0, -2), (4, 1, 0, -2)]
    fwd = parallel_transport(system, path, steps=2000).matrix
    back = parallel_transport(system, path[::-1], steps=2000).matrix
    prod = [[sum(fwd[i][k] * back[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]
    assert abs(prod[0][0] - 1) < 1e-9 and abs(prod[1][1] - 1) < 1e-9
    assert abs(prod[0][1]) < 1e-9 and abs(prod[1][0]) < 1e-9


def test_transport_convergence_is_fourth_order():
    system = kz_system(2, (1, 1, 2))
    tight = [(0.3, 0, -2), (0.3 + 0.6j, 0, -2), (0.9 + 0.6j, 0, -2),
             (0.9, 0, -2), (0.3, 0, -2)]
    devs = [abs(parallel_transport(system, tight, steps=s).matrix[0][0] - 1)
            for s in (100, 200, 400)]
    orders = [math.log2(devs[i] / devs[i + 1]) for i in range(2)]
    assert min(orders) >= 3.5


def test_transport_rejects_bad_paths():
    system = kz_system(2, (1, 1, 2))
    with pytest.raises(InputError):
        parallel_transport(system, [(1, 0, -2), (-1, 0, -2)], steps=1000)
    with pytest.raises(InputError):
        parallel_transport(system, [(1, 1, -2)], steps=1000)
    with pytest.raises(InputError):
        parallel_transport(system, [(2, 0, -2), (3, 0, -2)], steps=50)
    with pytest.raises(InputError):
        parallel_transport(system, [(2, 0), (3, 0)], steps=1000)
    with pytest.raises(InputError):
        parallel_transport(system, [], steps=1000)


def test_all_two_point_systems_are_scalars():
    for level in range(1, 4):
        for m1, m2 in itertools.product(range(level + 1), repeat=2):
            system = kz_system(level, (m1, m2))
            if system.dim:
                mat = system.a_matrices[(0, 1)]
                assert len(mat) == system.dim
                assert flatness_check(system)
