# tests/test_newton.py - Newton polyhedra and cone decomposition

import random
from fractions import Fraction

import pytest

from app.errors import DomainError
from app.newton import (FaceKind, FacetKind, binomial_nondegenerate, candidate_poles,
                        cones_and_lattice, fundamental_points, m_and_face, newton_polyhedron)

CUSP = {(3, 0), (0, 2)}


def test_cusp_polyhedron():
    poly = newton_polyhedron(CUSP)
    assert poly.vertices == ((0, 2), (3, 0))
    assert [f.kind for f in poly.facets] == [FacetKind.HORIZONTAL, FacetKind.VERTICAL, FacetKind.COMPACT]
    compact = poly.facets[2]
    assert (compact.normal, compact.m) == ((2, 3), 6)
    assert len(poly.faces) == 5
    assert [g.label for g in poly.faces] == ["gamma1", "gamma2", "gamma3", "gamma4", "gamma5"]
    assert poly.faces[3].vertices == ((3, 0),)


def test_dominated_points_are_dropped():
    poly = newton_polyhedron({(2, 0), (0, 3), (4, 0), (3, 3)})
    assert poly.vertices == ((0, 3), (2, 0))


def test_single_point_support():
    poly = newton_polyhedron({(1, 0)})
    assert [(f.normal, f.m) for f in poly.facets] == [((0, 1), 0), ((1, 0), 1)]


def test_empty_support():
    with pytest.raises(DomainError):
        newton_polyhedron(set())


def test_m_and_face():
    poly = newton_polyhedron(CUSP)
    m, face = m_and_face(poly, (1, 1))
    assert m == 2 and face.kind is FaceKind.VERTEX and face.vertices == ((0, 2),)
    m, face = m_and_face(poly, (2, 3))
    assert m == 6 and face.label == "gamma3"
    m, face = m_and_face(poly, (0, 1))
    assert m == 0 and face.label == "gamma1"
    with pytest.raises(DomainError):
        m_and_face(poly, (0, 0))


def test_fundamental_points():
    assert fundamental_points((1, 0), (2, 3)) == frozenset({(0, 0), (1, 1), (2, 2)})
    assert fundamental_points((0, 1), (2, 3)) == frozenset({(0, 0), (1, 2)})


def test_cones_follow_face_order():
    cones = cones_and_lattice(newton_polyhedron(CUSP))
    assert [c.generators for c in cones] == [((0, 1),), ((1, 0),), ((2, 3),),
                                             ((0, 1), (2, 3)), ((1, 0), (2, 3))]
    assert cones[3].determinant == 2


def test_corner_point_of_cone_is_covered():
    cone = cones_and_lattice(newton_polyhedron(CUSP))[3]
    assert cone.decompose((1, 2)) == ((1, 2), (0, 0))
    assert (1, 2) in cone.lattice_points(5)


@pytest.mark.parametrize("support", [CUSP, {(2, 0), (0, 3)}, {(4, 0), (1, 1), (0, 5)}, {(2, 0), (0, 2)}])
def test_cones_tile_the_quadrant(support):
    poly = newton_polyhedron(support)
    cones = cones_and_lattice(poly)
    for i in range(21):
        for j in range(21):
            if (i, j) == (0, 0):
                continue
            owners = [c for c in cones if c.decompose((i, j)) is not None]
            assert len(owners) == 1, (i, j)
            assert owners[0].face == m_and_face(poly, (i, j))[1]


def test_lattice_points_match_decomposition():
    cones = cones_and_lattice(newton_polyhedron(CUSP))
    listed = sorted(pt for c in cones for pt in c.lattice_points(12))
    grid = sorted((i, j) for i in range(13) for j in range(13) if (i, j) != (0, 0))
    assert listed == grid


def test_candidate_poles():
    report = candidate_poles(newton_polyhedron(CUSP))
    assert report.factors() == [(1, 1), (5, 6)]
    assert report.real_parts == {Fraction(-1), Fraction(-5, 6)}


def test_binomial_nondegenerate():
    assert binomial_nondegenerate(1, 3, 1, 2, 5)
    assert not binomial_nondegenerate(1, 2, 1, 3, 3)


def test_m_matches_brute_force_minimum():
    rng = random.Random(2718)
    for _ in range(50):
        support = {(rng.randint(0, 6), rng.randint(0, 6)) for _ in range(rng.randint(1, 6))}
        support.discard((0, 0))
        if not support:
            continue
        poly = newton_polyhedron(support)
        for _ in range(10):
            a = (rng.randint(0, 7), rng.randint(0, 7))
            if a == (0, 0):
                continue
            m, face = m_and_face(poly, a)
            assert m == min(a[0] * i + a[1] * j for i, j in support)
            assert all(a[0] * i + a[1] * j == m for i, j in face.vertices)
