#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests des modèles de réseau: complexes, réactions, poids, supports, validation
"""

from fractions import Fraction

import numpy as np
import pytest

from crnldp.errors import InvalidWeightVectorError, NetworkValidationError
from crnldp.models import (
    Complex, Network, Reaction, SupportSet, WeightVector,
    reaction_vector, restricted_reactions, scaled_rate_constant, validate,
    weighted_reaction_vector,
)


def make_reaction(lhs, rhs, k=1.0):
    return Reaction(Complex(tuple(lhs)), Complex(tuple(rhs)), k)


def test_complex_order_and_label():
    cplx = Complex((1, 2))
    assert cplx.order == 3
    assert cplx.label(('A', 'B')) == "A + 2B"
    assert Complex.zero(2).label(('A', 'B')) == "0"
    assert Complex.zero(2).is_empty
    assert cplx.support == frozenset({0, 1})


def test_reaction_vector_is_output_minus_input():
    reaction = make_reaction((1, 2), (0, 3))
    assert reaction_vector(reaction) == (-1, 1)
    assert reaction.vector == (-1, 1)


def test_weight_vector_normalized_to_dimension():
    a = WeightVector.parse("1/2,1")
    assert a.values == (Fraction(2, 3), Fraction(4, 3))
    assert sum(a.values) == 2


def test_weighted_reaction_vector():
    a = WeightVector.parse("1/2,1")
    reaction = make_reaction((0, 1), (2, 0))
    assert weighted_reaction_vector(reaction, a) == (Fraction(4, 3), Fraction(-4, 3))


@pytest.mark.parametrize('text', ["0,1", "-1,2", "a,b", ""])
def test_weight_vector_rejects_invalid(text):
    with pytest.raises(InvalidWeightVectorError):
        WeightVector.parse(text)


def test_scaled_rate_constant():
    reaction = make_reaction((1, 2), (0, 3), k=2.0)
    assert scaled_rate_constant(reaction, 10) == pytest.approx(2e-3)
    assert scaled_rate_constant(make_reaction((0, 0), (1, 0), k=2.0), 10) == 2.0


def test_support_set_projection_and_containment():
    support = SupportSet((2, 0, 0))
    assert support.indices == (0, 2)
    assert support.project((5, 6, 7)) == (5, 7)
    assert support.contains_support((1, 0, 3))
    assert not support.contains_support((0, 1, 0))
    assert SupportSet((0,)).issubset(support)


def test_restricted_reactions(ex2):
    only_a = SupportSet((0,))
    reactions = restricted_reactions(ex2, only_a)
    assert [r.input.coefficients for r in reactions] == [(0, 0)]


def test_network_matrices(ex2):
    assert ex2.dimension == 2
    assert ex2.size == 3
    np.testing.assert_array_equal(ex2.input_matrix, [[0, 0], [1, 2], [0, 3]])
    np.testing.assert_array_equal(ex2.vector_matrix, [[1, 2], [-1, 1], [1, -3]])


def test_content_hash_tracks_rate_constants(ex2):
    same = Network(ex2.species, ex2.reactions, name="autre nom")
    assert same.content_hash() == ex2.content_hash()
    changed = ex2.with_reactions(
        [ex2.reactions[0], ex2.reactions[1], make_reaction((0, 3), (1, 0), k=2.0)])
    assert changed.content_hash() != ex2.content_hash()


def test_validate_accepts_builtin(ex2):
    assert validate(ex2).ok


def test_validate_reports_every_issue():
    network = Network(
        species=('A', 'A'),
        reactions=(
            make_reaction((1, 0), (1, 0)),
            make_reaction((1, 0), (0, 1), k=0.0),
        ),
    )
    codes = validate(network).codes()
    assert codes == ['duplicate species', 'no-op reaction', 'nonpositive rate constant']


@pytest.mark.parametrize('lhs, rhs, code', [
    ((1,), (0, 1), 'dimension mismatch'),
    ((-1, 0), (0, 1), 'negative multiplicity'),
    ((0.5, 0), (0, 1), 'non-integer multiplicity'),
])
def test_network_rejects_malformed_complexes(lhs, rhs, code):
    with pytest.raises(NetworkValidationError) as info:
        Network(('A', 'B'), (make_reaction((1, 0), (0, 1)), make_reaction(lhs, rhs)))
    assert info.value.report.codes() == [code]
    assert info.value.report.issues[0].location == 'reaction[1].input'


def test_weight_vector_invariants_hold_at_construction():
    with pytest.raises(InvalidWeightVectorError):
        WeightVector((1, 0))
    with pytest.raises(InvalidWeightVectorError):
        WeightVector(())
    assert sum(WeightVector((1, 3)).values) == 2


def test_validate_empty_network():
    codes = validate(Network((), ())).codes()
    assert codes == ['no species', 'no reactions']
