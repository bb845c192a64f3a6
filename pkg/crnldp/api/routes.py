#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Routes API du service d'analyse de réseaux de réactions
"""

import logging

from flask import Blueprint, current_app, jsonify, request

from ..errors import NetworkValidationError
from ..models import WeightVector, validate
from ..services import dynamics_service, network_service, report_service
from ..utils import cache
from ..utils.formatters import JSONFormatter

logger = logging.getLogger(__name__)

api_bp = Blueprint('api', __name__, url_prefix='/api')

MAX_SSA_VOLUME = 1e4


def _network_from_body(body: dict, check: bool = True):
    text = body.get('network')
    if not isinstance(text, str) or not text.strip():
        raise ValueError("Champ 'network' (texte .crn) requis")
    return network_service.parse(text, name=body.get('name', ''), check=check)


@api_bp.route('/validate', methods=['POST'])
def validate_network():
    """Valide un réseau au format texte"""
    try:
        body = request.get_json(silent=True) or {}
        network = _network_from_body(body, check=False)
        report = validate(network)
        return jsonify({
            'network': network.to_api_dict() if report.ok else None,
            'validation': report.to_api_dict(),
        })

    except ValueError as e:
        logger.warning(f"Erreur de validation: {e}")
        return jsonify({'error': str(e)}), 400

    except Exception as e:
        logger.error(f"Erreur inattendue dans la validation: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/analyze', methods=['POST'])
def analyze_network():
    """Rapport d'analyse complet (mis en cache par empreinte)"""
    try:
        body = request.get_json(silent=True) or {}
        network = _network_from_body(body)
        weight = WeightVector.parse(body['a']) if body.get('a') else None
        report = report_service.analyze(network, weight)
        return current_app.response_class(JSONFormatter.dumps(report), mimetype='application/json')

    except NetworkValidationError as e:
        logger.warning(f"Réseau invalide: {e}")
        return jsonify({'error': str(e), 'validation': e.report.to_api_dict()}), 400

    except ValueError as e:
        logger.warning(f"Erreur de validation: {e}")
        return jsonify({'error': str(e)}), 400

    except RuntimeError as e:
        logger.error(f"Échec numérique: {e}")
        return jsonify({'error': str(e)}), 503

    except Exception as e:
        logger.error(f"Erreur inattendue dans l'analyse: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/examples')
def list_examples():
    """Réseaux intégrés"""
    try:
        names = network_service.list_builtins()
        return jsonify({
            'examples': [{'name': n, 'description': network_service.describe_builtin(n)} for n in names],
            'count': len(names),
        })

    except Exception as e:
        logger.error(f"Erreur lors de la liste des exemples: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/examples/<name>')
def get_example(name: str):
    """Texte et rapport d'un réseau intégré"""
    try:
        if name not in network_service.list_builtins():
            return jsonify({'error': f"Réseau intégré inconnu: {name}"}), 404
        network = network_service.load_builtin(name)
        payload = {
            'name': name,
            'text': network_service.builtin_text(name),
            'report': report_service.analyze(network),
        }
        return current_app.response_class(JSONFormatter.dumps(payload), mimetype='application/json')

    except RuntimeError as e:
        logger.error(f"Échec numérique: {e}")
        return jsonify({'error': str(e)}), 503

    except Exception as e:
        logger.error(f"Erreur inattendue pour l'exemple {name}: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/simulate', methods=['POST'])
def simulate():
    """Trajectoire déterministe (mode 'ode') ou stochastique (mode 'ssa')"""
    try:
        body = request.get_json(silent=True) or {}
        network = _network_from_body(body)
        x0 = body.get('x0')
        T = float(body.get('T', 0))
        if not isinstance(x0, list) or len(x0) != network.dimension:
            raise ValueError(f"x0 doit être une liste de {network.dimension} concentrations")
        if T <= 0:
            raise ValueError("T doit être strictement positif")

        mode = body.get('mode', 'ode')
        if mode == 'ode':
            trajectory = dynamics_service.integrate_ode(network, x0, T)
            payload = trajectory.to_api_dict()
        elif mode == 'ssa':
            volume = float(body.get('v', 100))
            if volume > MAX_SSA_VOLUME:
                raise ValueError(f"Volume limité à {MAX_SSA_VOLUME:g} pour le service HTTP")
            path = dynamics_service.ssa_simulate(network, volume, x0, T, int(body.get('seed', 0)),
                                                 snap=True)
            payload = {
                'species': list(network.species),
                'volume': volume,
                'stop_reason': path.stop_reason,
                'records': list(path.records()),
            }
        else:
            raise ValueError(f"Mode inconnu: {mode}")
        return current_app.response_class(JSONFormatter.dumps(payload), mimetype='application/json')

    except (TypeError, ValueError) as e:
        logger.warning(f"Erreur de validation: {e}")
        return jsonify({'error': str(e)}), 400

    except RuntimeError as e:
        logger.error(f"Échec numérique: {e}")
        return jsonify({'error': str(e)}), 503

    except Exception as e:
        logger.error(f"Erreur inattendue dans la simulation: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/status')
def get_status():
    """Version de l'outil et statistiques du cache"""
    try:
        return jsonify({
            'tool_version': current_app.config['APP_VERSION'],
            'schema_version': current_app.config['REPORT_SCHEMA_VERSION'],
            'cache': cache.get_stats(),
        })

    except Exception as e:
        logger.error(f"Erreur lors de la récupération du statut: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500


@api_bp.route('/cache/clear', methods=['POST'])
def clear_cache():
    """Vide le cache des rapports"""
    try:
        removed = cache.clear()
        return jsonify({'message': 'Cache vidé avec succès', 'removed': removed})

    except Exception as e:
        logger.error(f"Erreur lors du vidage du cache: {e}")
        return jsonify({'error': 'Erreur interne du serveur'}), 500
