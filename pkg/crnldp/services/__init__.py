#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Package des services
"""

from .network_service import network_service, NetworkService
from .polytope_service import polytope_service, PolytopeService
from .topology_service import topology_service, TopologyService
from .dynamics_service import dynamics_service, DynamicsService
from .ldp_service import ldp_service, LDPService
from .quasipotential_service import quasipotential_service, QuasipotentialService
from .report_service import report_service, ReportService

__all__ = [
    'network_service', 'NetworkService',
    'polytope_service', 'PolytopeService',
    'topology_service', 'TopologyService',
    'dynamics_service', 'DynamicsService',
    'ldp_service', 'LDPService',
    'quasipotential_service', 'QuasipotentialService',
    'report_service', 'ReportService',
]
