#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Package des modèles
"""

from .network import (
    Complex, Reaction, Network, WeightVector, SupportSet,
    ValidationIssue, ValidationReport,
    reaction_vector, weighted_reaction_vector, scaled_rate_constant,
    restricted_reactions, restricted_reaction_indices, validate,
)
from .geometry import Polytope, Face, FaceLattice
from .results import (
    ReactionClass, Violation, EndotacticVerdict, SiphonReport, ASEReport,
    Trajectory, JumpPath, DeviationStats, ContainmentEstimate, TransitionStats,
    ToricPoint, SignedLog, LagrangianResult, ActionResult, ConstantLedger,
    PathOptimizationProblem, QuasipotentialEstimate,
)

__all__ = [
    'Complex', 'Reaction', 'Network', 'WeightVector', 'SupportSet',
    'ValidationIssue', 'ValidationReport',
    'reaction_vector', 'weighted_reaction_vector', 'scaled_rate_constant',
    'restricted_reactions', 'restricted_reaction_indices', 'validate',
    'Polytope', 'Face', 'FaceLattice',
    'ReactionClass', 'Violation', 'EndotacticVerdict', 'SiphonReport', 'ASEReport',
    'Trajectory', 'JumpPath', 'DeviationStats', 'ContainmentEstimate', 'TransitionStats',
    'ToricPoint', 'SignedLog', 'LagrangianResult', 'ActionResult', 'ConstantLedger',
    'PathOptimizationProblem', 'QuasipotentialEstimate',
]
