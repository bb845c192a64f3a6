#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests des utilitaires: sommes signées en log, arithmétique exacte,
formatage et cache
"""

import math
from datetime import timedelta
from fractions import Fraction

import pytest

from crnldp.errors import ZeroSumError
from crnldp.utils import CSVFormatter, JSONFormatter, MemoryCache, report_key
from crnldp.utils.exact import (
    exact_linprog, is_nonnegative_combination, nullspace, primitive_vector, to_fraction,
)
from crnldp.utils.logmath import log_abs_expm1, signed_logsumexp


def test_signed_logsumexp():
    sign, magnitude = signed_logsumexp([math.log(3.0), math.log(1.0)], [1, -1])
    assert sign == 1
    assert magnitude == pytest.approx(math.log(2.0))
    sign, magnitude = signed_logsumexp([1000.0, 1001.0], [1, -1])
    assert sign == -1
    assert magnitude == pytest.approx(1001.0 + math.log1p(-math.exp(-1.0)))
    assert signed_logsumexp([], []) == (0, -math.inf)


def test_signed_logsumexp_cancellation():
    assert signed_logsumexp([5.0, 5.0], [1, -1])[0] == 0
    with pytest.raises(ZeroSumError):
        signed_logsumexp([5.0, 5.0], [1, -1], strict=True)


@pytest.mark.parametrize('y', [-50.0, -1.0, -1e-8, 1e-8, 2.0, 80.0])
def test_log_abs_expm1(y):
    sign, magnitude = log_abs_expm1(y)
    assert sign == (1 if y > 0 else -1)
    assert magnitude == pytest.approx(math.log(abs(math.expm1(y))), rel=1e-12, abs=1e-12)


def test_fractions_and_primitive_vectors():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(0.5) == Fraction(1, 2)
    with pytest.raises(TypeError):
        to_fraction(True)
    assert primitive_vector([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    with pytest.raises(ValueError):
        primitive_vector([0, 0])


def test_nullspace():
    basis = nullspace([[1, 1, 0]], 3)
    assert len(basis) == 2
    for vector in basis:
        assert vector[0] + vector[1] == 0
    assert len(nullspace([], 2)) == 2


def test_exact_linprog():
    # min -x - y sous x + 2y ≤ 4, 3x + y ≤ 6
    result = exact_linprog([-1, -1], a_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert result.is_optimal
    assert result.value == Fraction(-14, 5)
    assert result.x == (Fraction(8, 5), Fraction(6, 5))
    assert exact_linprog([-1], a_ub=[[-1]], b_ub=[0]).status == 'unbounded'
    assert exact_linprog([1], a_eq=[[1]], b_eq=[-1]).status == 'infeasible'


def test_highs_vertex_is_rebuilt_in_rationals():
    # sommet (1/4, 1/4): l'arrondi flottant ne doit pas apparaître
    result = exact_linprog([-1, -1], a_ub=[[3, 1], [1, 3]], b_ub=[1, 1], fallback=False)
    assert result.status == 'optimal'
    assert result.x == (Fraction(1, 4), Fraction(1, 4))
    assert result.value == Fraction(-1, 2)
    third = exact_linprog([-1, 0], a_ub=[[3, 0]], b_ub=[1], a_eq=[[1, 1]], b_eq=[1])
    assert third.x == (Fraction(1, 3), Fraction(2, 3))


def test_exact_linprog_without_fallback_reports_highs_status():
    assert exact_linprog([1], a_eq=[[1]], b_eq=[-1], fallback=False).status == 'infeasible'
    assert exact_linprog([1], a_eq=[[1]], b_eq=[-1], fallback=False).x is None


def test_cone_membership_is_exact():
    assert is_nonnegative_combination([(2, -1), (1, 1)], (3, 0))
    assert not is_nonnegative_combination([(2, -1), (1, 1)], (-1, 0))
    assert is_nonnegative_combination([], (0, 0))


def test_json_formatter_is_deterministic():
    text = JSONFormatter.dumps({'b': math.inf, 'a': Fraction(1, 3)})
    assert text.index('"a"') < text.index('"b"')
    assert '"inf"' in text
    assert '"exact": "1/3"' in text


def test_read_path():
    times, states = CSVFormatter.read_path("t,A,B\n0,1,2\n0.5,1.5,2\n")
    assert times.tolist() == [0.0, 0.5]
    assert states.tolist() == [[1.0, 2.0], [1.5, 2.0]]
    with pytest.raises(ValueError):
        CSVFormatter.read_path("t,A\n0,1\n")
    with pytest.raises(ValueError):
        CSVFormatter.read_path("0,1\n1,2,3\n")


def test_memory_cache():
    cache = MemoryCache(cleanup=False)
    key = report_key('abc', None, '1.0.0')
    assert cache.get(key) is None
    cache.set(key, {'ase': True})
    assert cache.get(key) == {'ase': True}
    cache.set('old', 1, ttl=timedelta(seconds=-1))
    assert cache.get('old') is None
    stats = cache.get_stats()
    assert (stats['hits'], stats['misses']) == (1, 2)
    assert cache.clear() == 1
