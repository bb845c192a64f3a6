#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests de l'analyse topologique: classes de réactions, siphons, verdicts
fortement endotactiques, recherche du poids et verdict ASE
"""

import time
from dataclasses import replace
from itertools import combinations

import numpy as np
import pytest

from crnldp.errors import NotInRPError, ZeroProjectionError
from crnldp.models import (
    Complex, Network, Reaction, ReactionClass, SupportSet, WeightVector,
    restricted_reactions,
)
from crnldp.services import network_service, polytope_service, topology_service


# Classification

@pytest.mark.parametrize('direction, index, expected', [
    ((1, 1), 1, ReactionClass.NULL),
    ((1, 1), 2, ReactionClass.DISSIPATIVE),
    ((2, -1), 0, ReactionClass.NULL),
    ((2, -1), 1, ReactionClass.DISSIPATIVE),
    ((-1, 1), 0, ReactionClass.EXPLOSIVE),
])
def test_classify_reaction(ex2, direction, index, expected):
    full = SupportSet.full(2)
    ones = WeightVector.ones(2)
    assert topology_service.classify_reaction(ex2, full, ones, direction, index) == expected


def test_classification_uses_weights(builtin):
    ex13 = builtin('ex13')
    full = SupportSet.full(2)
    # B -> 2A a pour vecteur (2, -1)
    reaction = 2
    assert topology_service.classify_reaction(
        ex13, full, WeightVector.ones(2), (1, 1), reaction) == ReactionClass.EXPLOSIVE
    assert topology_service.classify_reaction(
        ex13, full, WeightVector.parse("1/2,1"), (1, 1), reaction) == ReactionClass.NULL


def test_output_leaving_support_is_dissipative(ex2):
    only_b = SupportSet((1,))
    assert topology_service.classify_reaction(
        ex2, only_b, WeightVector.ones(2), (0, 1), 2) == ReactionClass.DISSIPATIVE


def test_reaction_outside_restricted_set(ex2):
    only_a = SupportSet((0,))
    ones = WeightVector.ones(2)
    assert topology_service.classify_reaction(
        ex2, only_a, ones, (1, 0), 1) == ReactionClass.NOT_IN_RP
    with pytest.raises(NotInRPError):
        topology_service.classify_reaction(ex2, only_a, ones, (1, 0), 1, strict=True)


def test_zero_projection(ex2):
    with pytest.raises(ZeroProjectionError):
        topology_service.classify_reaction(
            ex2, SupportSet((0,)), WeightVector.ones(2), (0, 1), 0)


def test_unperturbed_system_has_explosive_exposed_reaction(builtin):
    network = builtin('bistable_unperturbed')
    full = SupportSet.full(network.dimension)
    direction = (3, 0, 3, 1)
    exposed = polytope_service.exposed_reaction_indices(network, full, direction)
    assert len(exposed) == 1
    reaction = network.reactions[exposed[0]]
    assert reaction.describe(network.species) == "Z + W -> X + Z + W"
    for a in (WeightVector.ones(4), WeightVector.parse("1,2,3,4")):
        assert topology_service.classify_reaction(
            network, full, a, direction, exposed[0]) == ReactionClass.EXPLOSIVE


# Siphons

def brute_force_minimal_siphons(network):
    siphons = [frozenset(s) for size in range(1, network.dimension + 1)
               for s in combinations(range(network.dimension), size)
               if topology_service.is_siphon(network, SupportSet(s))]
    return {s for s in siphons if not any(other < s for other in siphons)}


def random_network(rng):
    d = int(rng.integers(1, 7))
    m = int(rng.integers(1, 13))
    reactions = []
    while len(reactions) < m:
        lhs = tuple(int(c) for c in rng.integers(0, 3, d) * (rng.random(d) < 0.4))
        rhs = tuple(int(c) for c in rng.integers(0, 3, d) * (rng.random(d) < 0.4))
        if lhs != rhs:
            reactions.append(Reaction(Complex(lhs), Complex(rhs), 1.0))
    return Network(tuple(f"S{i}" for i in range(d)), tuple(reactions))


def test_minimal_siphons_match_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(100):
        network = random_network(rng)
        found = {frozenset(s.indices) for s in topology_service.find_siphons(network).minimal_siphons}
        assert found == brute_force_minimal_siphons(network)


@pytest.mark.parametrize('name, expected', [
    ('ex2', []),
    ('tetra', []),
    ('ex31', []),
    ('ex32', [['A']]),
    ('siphon', [['A']]),
])
def test_siphon_table(builtin, name, expected):
    network = builtin(name)
    report = topology_service.find_siphons(network)
    assert [s.names(network.species) for s in report.minimal_siphons] == expected
    assert report.asiphonic == (not expected)


# Propriété fortement endotactique

def test_ex2_strongly_endotactic_with_unit_weights(ex2):
    verdict = topology_service.is_strongly_endotactic(ex2, SupportSet.full(2), WeightVector.ones(2))
    assert verdict.holds
    assert verdict.violations == []
    assert verdict.witness_a == WeightVector.ones(2)


def test_ex13_needs_reweighting(builtin):
    ex13 = builtin('ex13')
    full = SupportSet.full(2)
    failing = topology_service.is_strongly_endotactic(ex13, full, WeightVector.ones(2))
    assert not failing.holds
    assert any(v.reaction_class == ReactionClass.EXPLOSIVE for v in failing.violations)
    assert topology_service.is_strongly_endotactic(ex13, full, WeightVector.parse("1/2,1")).holds


def test_weight_search_finds_verified_vector(builtin):
    ex13 = builtin('ex13')
    a = topology_service.search_weight_vector(ex13)
    assert a is not None
    assert topology_service.is_strongly_endotactic(ex13, SupportSet.full(2), a).holds


def test_weight_search_prefers_unit_weights(ex2):
    assert topology_service.search_weight_vector(ex2) == WeightVector.ones(2)


@pytest.mark.parametrize('name', ['ex31', 'bistable_unperturbed'])
def test_no_weight_vector(builtin, name):
    network = builtin(name)
    assert topology_service.search_weight_vector(network) is None
    report = topology_service.ase_report(network, check_subsets=False)
    assert not report.strongly_endotactic
    assert not report.ase
    assert report.verdict.violations


@pytest.mark.parametrize('name, ase', [
    ('ex2', True),
    ('tetra', True),
    ('ex32', False),
    ('bistable', True),
])
def test_ase_table(builtin, name, ase):
    report = topology_service.ase_report(builtin(name), check_subsets=False)
    assert report.ase == ase
    assert report.strongly_endotactic


def test_degenerate_hull_with_only_null_reactions_fails():
    network = network_service.parse("species: A, B\nB -> A + B ; k = 1\nA + B -> B ; k = 1\n")
    verdict = topology_service.is_strongly_endotactic(network, SupportSet.full(2), WeightVector.ones(2))
    assert not verdict.holds
    assert verdict.degenerate
    assert [v.reaction_class for v in verdict.violations] == [ReactionClass.NULL]
    assert topology_service.search_weight_vector(network) is None


def test_unperturbed_verdict_is_fast_and_located(builtin):
    network = builtin('bistable_unperturbed')
    full = SupportSet.full(network.dimension)
    started = time.perf_counter()
    verdict = topology_service.is_strongly_endotactic(network, full, WeightVector.ones(4))
    assert time.perf_counter() - started < 5.0
    assert not verdict.holds

    lattice = polytope_service.face_lattice(polytope_service.build_polytope(network, full))
    face = polytope_service.face_for_direction(lattice, (3, 0, 3, 1))
    assert any(v.face == face.key and v.reaction_class == ReactionClass.EXPLOSIVE
               for v in verdict.violations)


def test_unperturbed_direction_with_negative_x_is_harmless(builtin):
    network = builtin('bistable_unperturbed')
    full = SupportSet.full(network.dimension)
    direction = (-3, 3, 3, 1)
    exposed = polytope_service.exposed_reaction_indices(network, full, direction)
    assert [network.reactions[i].describe(network.species) for i in exposed] == ["Z + W -> X + Z + W"]
    for a in (WeightVector.ones(4), WeightVector.parse("1,2,3,4")):
        assert topology_service.classify_reaction(
            network, full, a, direction, exposed[0]) == ReactionClass.DISSIPATIVE


@pytest.mark.parametrize('name, a', [('ex2', '1,1'), ('tetra', '1,1,1'), ('ex13', '1/2,1')])
def test_classes_are_constant_inside_normal_cones(builtin, interior_directions, name, a):
    network = builtin(name)
    weight = WeightVector.parse(a)
    full = SupportSet.full(network.dimension)
    assert topology_service.is_strongly_endotactic(network, full, weight).holds

    lattice = polytope_service.face_lattice(polytope_service.build_polytope(network, full))
    polytope = lattice.polytope
    rng = np.random.default_rng(3)
    for face in lattice.faces:
        on_face = polytope_service.reaction_indices_on_face(polytope, face)
        seen = {i: set() for i in on_face}
        for direction in interior_directions(face, rng, 100):
            for i in on_face:
                seen[i].add(topology_service.classify_reaction(network, full, weight, direction, i))
        assert all(len(classes) == 1 for classes in seen.values())
        classes = set().union(*seen.values())
        assert ReactionClass.DISSIPATIVE in classes
        assert ReactionClass.EXPLOSIVE not in classes


def exposed_reactions_are_endotactic(network, support, a, direction):
    exposed = polytope_service.exposed_reaction_indices(network, support, direction)
    classes = {topology_service.classify_reaction(network, support, a, direction, i) for i in exposed}
    return ReactionClass.EXPLOSIVE not in classes and ReactionClass.DISSIPATIVE in classes


def embed(support, dimension, projected):
    direction = [0] * dimension
    for i, c in zip(support.indices, projected):
        direction[i] = c
    return tuple(direction)


@pytest.mark.parametrize('name', ['ex2', 'tetra', 'ex13', 'ex32'])
def test_every_support_is_endotactic_by_direct_sampling(builtin, interior_directions, name):
    network = builtin(name)
    report = topology_service.ase_report(network)
    assert report.subsets_consistent is True
    assert report.failing_supports == []

    a = report.weight
    d = network.dimension
    rng = np.random.default_rng(5)
    for size in range(1, d + 1):
        for subset in combinations(range(d), size):
            support = SupportSet(subset)
            if not restricted_reactions(network, support):
                continue
            lattice = polytope_service.face_lattice(polytope_service.build_polytope(network, support))
            directions = [embed(support, d, w) for face in lattice.faces
                          for w in interior_directions(face, rng, 5)]
            while len(directions) < 200 + 5 * len(lattice.faces):
                w = tuple(int(c) for c in rng.integers(-5, 6, d))
                if any(support.project(w)):
                    directions.append(w)
            for direction in directions:
                assert exposed_reactions_are_endotactic(network, support, a, direction)


def test_ase_report_lists_failing_supports(ex2, monkeypatch):
    is_strongly_endotactic = topology_service.is_strongly_endotactic

    def failing_on_subsets(network, support, a):
        verdict = is_strongly_endotactic(network, support, a)
        if support.size < network.dimension:
            return replace(verdict, holds=False, witness_a=None)
        return verdict

    monkeypatch.setattr(topology_service, 'is_strongly_endotactic', failing_on_subsets)
    report = topology_service.ase_report(ex2)
    assert report.strongly_endotactic
    assert report.subsets_consistent is False
    assert [s.names(ex2.species) for s in report.failing_supports] == [['A'], ['B']]


# Critères auxiliaires

def test_facet_cone_precheck(ex2, dimer):
    assert topology_service.facet_cone_precheck(dimer, WeightVector.ones(1))
    # la facette de normale (2, -1) porte 0 -> A + 2B avec un produit nul
    assert not topology_service.facet_cone_precheck(ex2, WeightVector.ones(2))


def test_positive_span(tetra, dimer, builtin):
    assert topology_service.positive_span_check(tetra)
    assert topology_service.positive_span_check(dimer)
    assert not topology_service.positive_span_check(builtin('explosive'))
