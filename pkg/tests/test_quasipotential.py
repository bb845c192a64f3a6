#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests du quasipotentiel: minimisation de l'action, formule de naissance et
mort, statistiques de transition
"""

import numpy as np
import pytest

from crnldp.errors import RateVanishesError
from crnldp.models import PathOptimizationProblem
from crnldp.services import dynamics_service, network_service, quasipotential_service

SCHLOGL_BARRIER = 0.01346


def problem(start, end, **kwargs):
    options = dict(domain_lower=[0.5], domain_upper=[3.5], n_points=16, restarts=1)
    options.update(kwargs)
    return PathOptimizationProblem(start=[start], end=[end], **options)


# Processus de naissance et mort

def test_birth_death_oracle(schlogl_bistable):
    birth, death = quasipotential_service.birth_death_rates(schlogl_bistable)
    assert birth(1.0) == pytest.approx(12.0)
    assert death(2.0) == pytest.approx(30.0)
    value = quasipotential_service.birth_death_quasipotential(birth, death, 1.0, 2.0)
    assert value == pytest.approx(SCHLOGL_BARRIER, abs=2e-4)


def test_birth_death_downhill_is_zero(schlogl_bistable):
    birth, death = quasipotential_service.birth_death_rates(schlogl_bistable)
    assert quasipotential_service.birth_death_quasipotential(birth, death, 2.0, 1.0) == 0.0
    assert quasipotential_service.birth_death_quasipotential(birth, death, 1.5, 1.5) == 0.0


def test_birth_death_rate_vanishes():
    network = network_service.parse("0 <-> A ; kf = 1, kr = 1\n")
    birth, death = quasipotential_service.birth_death_rates(network)
    with pytest.raises(RateVanishesError):
        quasipotential_service.birth_death_quasipotential(birth, death, 0.0, 1.0)


def test_birth_death_requires_unit_jumps(ex2, dimer):
    with pytest.raises(ValueError):
        quasipotential_service.birth_death_rates(ex2)
    with pytest.raises(ValueError):
        quasipotential_service.birth_death_rates(dimer)


# Minimisation de l'action

def test_uphill_action_matches_oracle(schlogl_bistable):
    estimate = quasipotential_service.minimize_action(
        schlogl_bistable, problem(1.0, 2.0, t_grid=(4.0, 8.0, 16.0)))
    assert 0.95 * SCHLOGL_BARRIER <= estimate.value <= 2 * SCHLOGL_BARRIER
    assert estimate.T_star > 0
    path = estimate.path.states[:, 0]
    assert path[0] == pytest.approx(1.0)
    assert path[-1] == pytest.approx(2.0)
    assert np.all((path >= 0.5) & (path <= 3.5))
    assert estimate.diagnostics['n_points'] in (16, 31)


def test_downhill_action_is_small(schlogl_bistable):
    estimate = quasipotential_service.minimize_action(
        schlogl_bistable, problem(1.9, 1.1, t_grid=(2.0, 4.0, 8.0)))
    assert estimate.value < 1e-3


def test_same_set_gives_zero(schlogl_bistable):
    estimate = quasipotential_service.minimize_action(schlogl_bistable, problem(1.0, 1.0))
    assert estimate.value == 0.0
    assert estimate.diagnostics['same_set']


def test_default_time_grid(schlogl_bistable):
    grid = quasipotential_service.default_t_grid(schlogl_bistable, problem(1.0, 2.0))
    assert len(grid) == 8
    assert grid[-1] == pytest.approx(64 * grid[0])


@pytest.mark.parametrize('kwargs', [
    dict(n_points=4),
    dict(domain_lower=[1.5]),
    dict(domain_upper=[1.5]),
])
def test_invalid_problems(kwargs):
    with pytest.raises(ValueError):
        problem(1.0, 2.0, **kwargs)


# Transitions entre bassins

def test_transition_statistics_account_for_every_trial(schlogl_bistable):
    stats = quasipotential_service.transition_statistics(
        schlogl_bistable, [20], [([0.8], [1.2]), ([2.8], [3.2])], T_max=50.0, trials=5, seed=0)
    assert [(s.source, s.target) for s in stats] == [(0, 1), (1, 0)]
    for s in stats:
        assert len(s.times) + s.censored == 5
        assert all(0 < t <= 50.0 for t in s.times)


def test_transition_statistics_need_two_boxes(schlogl_bistable):
    with pytest.raises(ValueError):
        quasipotential_service.transition_statistics(
            schlogl_bistable, [20], [([0.8], [1.2])], T_max=1.0, trials=1, seed=0)


@pytest.mark.slow
def test_long_bistable_transitions(schlogl_bistable):
    stats = quasipotential_service.transition_statistics(
        schlogl_bistable, [5], [([0.8], [1.2]), ([2.8], [3.2])], T_max=1e4, trials=3, seed=1)
    for s in stats:
        assert len(s.times) + s.censored == 3
        assert not s.all_censored
        assert s.median <= 1e4


def test_transition_tasks_skip_history_and_use_distinct_streams(schlogl_bistable, monkeypatch):
    seen = []
    run_tasks = dynamics_service.run_tasks

    def spy(tasks, threads=None):
        seen.extend(tasks)
        return run_tasks(tasks, 1)

    monkeypatch.setattr(dynamics_service, 'run_tasks', spy)
    stats = quasipotential_service.transition_statistics(
        schlogl_bistable, [20, 40], [([0.8], [1.2]), ([2.8], [3.2])], T_max=5.0, trials=3, seed=0)
    assert len(stats) == 4
    assert len(seen) == 12
    assert all(task[7] is False for task in seen)
    assert len({task[5] for task in seen}) == 12
    for s in stats:
        assert len(s.times) + s.censored == 3
        assert all(0 < t <= 5.0 for t in s.times)
