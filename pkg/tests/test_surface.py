"""State-sum block dimensions, pants decompositions, Dehn twist eigenvalues."""

import itertools
from fractions import Fraction

import pytest

from wzw.errors import InputError
from wzw.fusion import alphabet, fusion_coeff
from wzw.liealg import build_root_system, dual_weight
from wzw.surface import (MarkedSurface, TrivalentGraph, TwistEigenvalue,
                         block_dimension, canonical_graph, connection_weight,
                         decomposition_independence, dehn_twist_eigenvalue,
                         dumbbell_graph, four_point_graph, remove_trivial_labels,
                         theta_graph)

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)


@pytest.mark.parametrize("level", range(5))
def test_torus_dimension_counts_alphabet(level):
    assert block_dimension(MarkedSurface(A1, level, 1, ())) == level + 1


def test_torus_a2():
    assert block_dimension(MarkedSurface(A2, 1, 1, ())) == 3
    assert block_dimension(MarkedSurface(A2, 2, 1, ())) == 6


def test_sphere_base_cases():
    assert block_dimension(MarkedSurface(A1, 2, 0, ())) == 1
    assert block_dimension(MarkedSurface(A1, 2, 0, ((0,),))) == 1
    assert block_dimension(MarkedSurface(A1, 2, 0, ((1,),))) == 0
    assert block_dimension(MarkedSurface(A1, 2, 0, ((1,), (1,)))) == 1
    assert block_dimension(MarkedSurface(A1, 2, 0, ((1,), (2,)))) == 0


def test_three_holed_sphere_is_fusion():
    alph = alphabet(A1, 2)
    for labels in itertools.product(alph.labels, repeat=3):
        want = fusion_coeff(alph, *labels)
        assert block_dimension(MarkedSurface(A1, 2, 0, labels)) == want


def test_genus_two_graph_independence():
    surf = MarkedSurface(A1, 1, 2, ())
    assert block_dimension(surf, theta_graph()) == 4
    assert block_dimension(surf, dumbbell_graph()) == 4
    assert block_dimension(surf) == 4
    assert decomposition_independence(surf, theta_graph(), dumbbell_graph())


def test_genus_two_higher_level():
    surf = MarkedSurface(A1, 2, 2, ())
    a = block_dimension(surf, theta_graph())
    b = block_dimension(surf, dumbbell_graph())
    assert a == b == 10


@pytest.mark.parametrize("level", range(4))
def test_four_point_channel_agreement(level):
    labels = [(m,) for m in range(level + 1)]
    for assignment in itertools.product(labels, repeat=4):
        surf = MarkedSurface(A1, level, 0, assignment)
        s = block_dimension(surf, four_point_graph("s"))
        t = block_dimension(surf, four_point_graph("t"))
        assert s == t, assignment


def test_factorization_identity():
    for level in range(4):
        for genus in (1, 2):
            whole = block_dimension(MarkedSurface(A1, level, genus, ()))
            glued = sum(
                block_dimension(MarkedSurface(A1, level, genus - 1,
                                              (mu, dual_weight(A1, mu))))
                for mu in alphabet(A1, level).labels)
            assert whole == glued


def test_remove_trivial_labels():
    surf = MarkedSurface(A1, 2, 1, ((1,), (0,), (2,), (0,)))
    slim = remove_trivial_labels(surf)
    assert slim.boundary_labels == ((1,), (2,))
    assert block_dimension(slim) == block_dimension(surf)


def test_canonical_graph_shapes():
    g = canonical_graph(2, 0)
    assert g.num_vertices == 2
    assert g.betti == 2
    assert g.legs == ()
    g = canonical_graph(1, 2)
    assert g.betti == 1
    assert len(g.legs) == 2
    g = canonical_graph(0, 5)
    assert g.betti == 0
    assert g.num_vertices == 3


def test_graph_validation():
    with pytest.raises(InputError):
        TrivalentGraph(2, ((0, 1),), (0,))  # degrees off
    with pytest.raises(InputError):
        TrivalentGraph(4, ((0, 1), (0, 1), (2, 3), (2, 3), (2, 3)), (0, 1))
    with pytest.raises(InputError):
        canonical_graph(-1, 0)
    with pytest.raises(InputError):
        canonical_graph(0, 2)  # no trivalent graph: 2g-2+n = 0


def test_graph_surface_compatibility():
    surf = MarkedSurface(A1, 1, 2, ())
    with pytest.raises(InputError):
        block_dimension(surf, four_point_graph("s"))


def test_twist_eigenvalue_text_forms():
    assert TwistEigenvalue(Fraction(0)).eigenvalue_text() == "1"
    assert TwistEigenvalue(Fraction(1)).eigenvalue_text() == "-1"
    assert TwistEigenvalue(Fraction(1, 2)).eigenvalue_text() == "exp(-i*pi/2)"
    assert TwistEigenvalue(Fraction(3, 4)).eigenvalue_text() == "exp(-i*pi*3/4)"
    with pytest.raises(InputError):
        TwistEigenvalue(Fraction(5, 2))
    with pytest.raises(InputError):
        TwistEigenvalue(Fraction(-1, 2))


def test_dehn_twist_values():
    tw = dehn_twist_eigenvalue(A1, 1, (1,))
    assert tw.exponent == Fraction(1, 2)
    assert tw.eigenvalue_text() == "exp(-i*pi/2)"
    assert abs(tw.eigenvalue() - (-1j)) < 1e-15
    assert dehn_twist_eigenvalue(A1, 2, (2,)).eigenvalue_text() == "-1"
    assert dehn_twist_eigenvalue(A1, 3, (0,)).eigenvalue_text() == "1"


def test_dehn_twist_duality_invariance():
    for mu in alphabet(A2, 2).labels:
        a = dehn_twist_eigenvalue(A2, 2, mu).exponent
        b = dehn_twist_eigenvalue(A2, 2, dual_weight(A2, mu)).exponent
        assert a == b


def test_dehn_twist_rejects_bad_label():
    with pytest.raises(InputError):
        dehn_twist_eigenvalue(A1, 1, (2,))


def test_connection_weight():
    assert connection_weight(A1, 1) == Fraction(1, 2)
    assert connection_weight(A2, 1) == 1
    assert connection_weight(A1, 2) == Fraction(3, 4)


def test_surface_validation():
    with pytest.raises(InputError):
        MarkedSurface(A1, 1, -1, ())
    with pytest.raises(InputError):
        MarkedSurface(A1, -1, 1, ())
    with pytest.raises(InputError):
        MarkedSurface(A1, 1, 0, ((5,),))
