#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Fixtures communes: application Flask de test, réseaux intégrés, option --runslow
"""

import os

os.environ.setdefault('CRNLDP_ENV', 'testing')

import numpy as np
import pytest

from config.config import TestingConfig
from crnldp import create_app
from crnldp.services import network_service


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help="exécute aussi les ensembles longs")


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason="utiliser --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def app():
    """Application utilisée par le fixture client de pytest-flask"""
    return create_app(TestingConfig)


@pytest.fixture
def builtin():
    """Charge un réseau intégré par son nom"""
    return network_service.load_builtin


@pytest.fixture
def ex2():
    return network_service.load_builtin('ex2')


@pytest.fixture
def tetra():
    return network_service.load_builtin('tetra')


@pytest.fixture
def dimer():
    return network_service.load_builtin('dimer')


@pytest.fixture
def schlogl_bistable():
    return network_service.load_builtin('schlogl_bistable')


@pytest.fixture
def interior_directions():
    """Directions entières de l'intérieur relatif de N(F): Σ λ_n n, λ_n ∈ {1..5}"""
    def sample(face, rng, count):
        generators = np.array(face.normal_generators, dtype=np.int64)
        directions = []
        while len(directions) < count:
            weights = rng.integers(1, 6, len(generators))
            direction = weights @ generators
            if np.any(direction):
                directions.append(tuple(int(c) for c in direction))
        return directions
    return sample
