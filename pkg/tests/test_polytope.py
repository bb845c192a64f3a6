#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests du polytope des complexes et de son treillis de faces
"""

from fractions import Fraction

import numpy as np

import pytest

from crnldp.errors import EmptyReactionSetError, ZeroProjectionError
from crnldp.models import SupportSet
from crnldp.services import network_service, polytope_service


@pytest.fixture
def ex2_lattice(ex2):
    polytope = polytope_service.build_polytope(ex2, SupportSet.full(2))
    return polytope_service.face_lattice(polytope)


def test_ex2_polytope_is_a_triangle(ex2_lattice):
    polytope = ex2_lattice.polytope
    assert set(polytope.points) == {(0, 0), (1, 2), (0, 3)}
    assert polytope.affine_dim == 2
    assert not polytope.is_degenerate
    assert ex2_lattice.counts() == {0: 3, 1: 3}


def test_ex2_facet_normals(ex2_lattice):
    normals = {f.normal_generators[0] for f in ex2_lattice.by_dim(1)}
    assert normals == {(-1, 0), (2, -1), (1, 1)}
    for facet in ex2_lattice.by_dim(1):
        assert facet.is_facet_dual_point


def test_vertex_cone_generated_by_adjacent_facets(ex2_lattice):
    origin = ex2_lattice.polytope.points.index((Fraction(0), Fraction(0)))
    vertex = ex2_lattice.face_with_vertices(frozenset({origin}))
    assert set(vertex.normal_generators) == {(-1, 0), (2, -1)}
    assert len(ex2_lattice.parents[vertex.key]) == 2


def test_duplicate_inputs_are_merged(tetra):
    polytope = polytope_service.build_polytope(tetra, SupportSet.full(3))
    # A -> B et A -> 0 partagent le même complexe d'entrée
    assert len(polytope.points) == 4
    assert len(polytope.reaction_indices) == 5


def test_exposed_reactions(ex2):
    full = SupportSet.full(2)
    assert polytope_service.exposed_reaction_indices(ex2, full, (1, 1)) == [1, 2]
    assert polytope_service.exposed_reaction_indices(ex2, full, (-1, -1)) == [0]


def test_zero_projection_is_rejected(ex2):
    with pytest.raises(ZeroProjectionError):
        polytope_service.exposed_reaction_indices(ex2, SupportSet((0,)), (0, 1))


def test_empty_restricted_set(builtin):
    with pytest.raises(EmptyReactionSetError):
        polytope_service.build_polytope(builtin('ex32'), SupportSet((1,)))


def test_degenerate_hull_gets_lineality():
    network = network_service.parse("A -> B ; k = 1\nB -> A ; k = 1\n")
    polytope = polytope_service.build_polytope(network, SupportSet.full(2))
    assert polytope.affine_dim == 1
    assert polytope.is_degenerate
    assert polytope.lineality in (((1, 1),), ((-1, -1),))
    lattice = polytope_service.face_lattice(polytope)
    assert lattice.counts() == {0: 2, 1: 1}
    for face in lattice.faces:
        assert (1, 1) in face.normal_generators
        assert (-1, -1) in face.normal_generators


def test_degenerate_hull_is_its_own_face():
    network = network_service.parse("species: A, B\nB -> A + B ; k = 1\nA + B -> B ; k = 1\n")
    polytope = polytope_service.build_polytope(network, SupportSet.full(2))
    lattice = polytope_service.face_lattice(polytope)
    whole = lattice.face_with_vertices(frozenset(range(len(polytope.points))))
    assert whole is not None
    assert whole.dim == 1
    assert whole.facet_normal_count == 0
    assert set(whole.normal_generators) == {(0, 1), (0, -1)}
    assert sorted(lattice.parents[k] for k in lattice.children[whole.key]) == [(whole.key,)] * 2
    assert polytope_service.face_for_direction(lattice, (0, 1)) == whole


def test_single_point_hull(builtin):
    polytope = polytope_service.build_polytope(builtin('ex2'), SupportSet((0,)))
    assert polytope.affine_dim == 0
    lattice = polytope_service.face_lattice(polytope)
    assert len(lattice.faces) == 1
    assert set(lattice.faces[0].normal_generators) == {(1,), (-1,)}


def test_face_for_direction(ex2_lattice):
    face = polytope_service.face_for_direction(ex2_lattice, (1, 1))
    assert face.dim == 1
    assert face.normal_generators == ((1, 1),)
    vertex = polytope_service.face_for_direction(ex2_lattice, (-1, -1))
    assert vertex.dim == 0


def test_lattice_is_cached(ex2):
    polytope = polytope_service.build_polytope(ex2, SupportSet.full(2))
    assert polytope_service.face_lattice(polytope) is polytope_service.face_lattice(polytope)


def test_cone_membership():
    generators = [(1, 0), (0, 1)]
    assert polytope_service.cone_contains(generators, (1.0, 2.0))
    assert not polytope_service.cone_contains(generators, (-1.0, 0.5))
    projection = polytope_service.cone_projection(generators, (-1.0, 0.5))
    assert projection.tolist() == pytest.approx([0.0, 0.5])


def test_reactions_on_face_match_exposed_reactions(ex2, ex2_lattice):
    full = SupportSet.full(2)
    for direction in [(1, 1), (2, -1), (-1, 0)]:
        face = polytope_service.face_for_direction(ex2_lattice, direction)
        assert polytope_service.reactions_on_face(ex2, full, face) == \
            polytope_service.exposed_reactions(ex2, full, direction)


DEGENERATE = "species: A, B\nB -> A + B ; k = 1\nA + B -> B ; k = 1\n"


def full_lattice(network):
    full = SupportSet.full(network.dimension)
    return full, polytope_service.face_lattice(polytope_service.build_polytope(network, full))


@pytest.mark.parametrize('name', ['ex2', 'ex31', 'tetra', 'bistable'])
def test_interior_directions_expose_their_face(builtin, interior_directions, name):
    network = builtin(name)
    full, lattice = full_lattice(network)
    rng = np.random.default_rng(7)
    for face in lattice.faces:
        on_face = polytope_service.reactions_on_face(network, full, face)
        for direction in interior_directions(face, rng, 10):
            assert polytope_service.face_for_direction(lattice, direction) == face
            assert polytope_service.exposed_reactions(network, full, direction) == on_face


@pytest.mark.parametrize('name', ['ex2', 'tetra', 'degenerate'])
def test_every_direction_exposes_exactly_one_face(builtin, name):
    network = network_service.parse(DEGENERATE) if name == 'degenerate' else builtin(name)
    full, lattice = full_lattice(network)
    polytope = lattice.polytope
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 2000:
        direction = tuple(int(c) for c in rng.integers(-5, 6, network.dimension))
        if not any(direction):
            continue
        exposed = polytope_service.exposed_reaction_indices(network, full, direction)
        matching = [f for f in lattice.faces
                    if polytope_service.reaction_indices_on_face(polytope, f) == exposed]
        assert len(matching) == 1
        assert polytope_service.face_for_direction(lattice, direction) == matching[0]
        assert polytope_service.cone_contains(matching[0].normal_generators, direction)
        checked += 1


@pytest.mark.parametrize('name', ['ex2', 'ex31', 'tetra', 'bistable', 'degenerate'])
def test_lattice_is_closed_under_intersection(builtin, name):
    network = network_service.parse(DEGENERATE) if name == 'degenerate' else builtin(name)
    _, lattice = full_lattice(network)
    for first in lattice.faces:
        for second in lattice.faces:
            meet = first.vertex_indices & second.vertex_indices
            if meet:
                assert lattice.face_with_vertices(meet) is not None
