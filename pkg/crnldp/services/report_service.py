#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service d'assemblage du rapport d'analyse (siphons, propriété endotactique,
ASE, couverture positive, constantes), mis en cache par empreinte du réseau
"""

import logging
from typing import Optional

from config.config import get_config

from ..models import Network, SupportSet, WeightVector
from ..utils.cache import cache, report_key
from .ldp_service import ldp_service
from .polytope_service import polytope_service
from .topology_service import topology_service

logger = logging.getLogger(__name__)


class ReportService:
    """Rapport d'analyse déterministe pour un réseau"""

    def __init__(self, config=None):
        self.config = config or get_config()

    def analyze(self, network: Network, a: Optional[WeightVector] = None,
                use_cache: bool = True) -> dict:
        """Rapport complet; avec a imposé, le verdict porte sur ce poids"""
        network_hash = network.content_hash()
        key = report_key(network_hash, str(a) if a else None, self.config.APP_VERSION)
        if use_cache:
            cached = cache.get(key)
            if cached is not None:
                logger.debug(f"Rapport {network_hash[:12]} servi depuis le cache")
                return cached

        species = network.species
        full = SupportSet.full(network.dimension)
        siphons = topology_service.find_siphons(network)

        if a is None:
            ase = topology_service.ase_report(network)
            weight = ase.weight
            verdict = ase.verdict
            subsets_consistent = ase.subsets_consistent
            failing = [s.names(species) for s in ase.failing_supports]
        else:
            if a.dimension != network.dimension:
                raise ValueError(f"Poids de dimension {a.dimension} pour {network.dimension} espèces")
            verdict = topology_service.is_strongly_endotactic(network, full, a)
            weight = a if verdict.holds else None
            subsets_consistent, failing = None, []

        ledger_weight = weight or WeightVector.ones(network.dimension)
        lattice = polytope_service.face_lattice(polytope_service.build_polytope(network, full))

        report = {
            'schema_version': self.config.REPORT_SCHEMA_VERSION,
            'tool_version': self.config.APP_VERSION,
            'network_hash': network_hash,
            'network': network.to_api_dict(),
            'siphons': siphons.to_api_dict(species),
            'endotactic': verdict.to_api_dict(),
            'strongly_endotactic': weight is not None,
            'ase': siphons.asiphonic and weight is not None,
            'subsets_consistent': subsets_consistent,
            'failing_supports': failing,
            'facet_cone_precheck': topology_service.facet_cone_precheck(network, ledger_weight),
            'positive_span': topology_service.positive_span_check(network),
            'polytope': lattice.to_api_dict(),
            'constants_ledger': ldp_service.proof_constants(network, ledger_weight).to_api_dict(),
        }
        logger.info(f"Analyse de '{network.name or network_hash[:12]}': ASE = {report['ase']}")
        cache.set(key, report)
        return report


# Instance globale du service
report_service = ReportService()
