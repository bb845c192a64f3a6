#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Factory pour créer le service HTTP d'analyse de réseaux de réactions
"""

import logging

from flask import Flask, jsonify
from flask_cors import CORS

from config.config import get_config
from .api import api_bp
from .services import network_service


def create_app(config_name=None):
    """Factory pour créer l'application Flask"""
    app = Flask(__name__)

    config = get_config() if config_name is None else config_name
    app.config.from_object(config)

    setup_logging(app)
    CORS(app)
    app.register_blueprint(api_bp)

    @app.route('/health')
    def health_check():
        """État du service: version de l'outil et réseaux intégrés disponibles"""
        return {
            'status': 'healthy',
            'service': app.config['APP_NAME'],
            'tool_version': app.config['APP_VERSION'],
            'builtin_networks': len(network_service.list_builtins()),
        }, 200

    setup_error_handlers(app)
    return app


def configure_logging(level: str = 'INFO', log_format: str = None) -> None:
    """basicConfig vers la sortie d'erreur (les données restent sur stdout)"""
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=log_format or "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )


def setup_logging(app):
    """Configure le système de logging"""
    configure_logging(app.config.get('LOG_LEVEL', 'INFO'), app.config.get('LOG_FORMAT'))
    logger = logging.getLogger(__name__)
    logger.info(f"Application {app.config['APP_NAME']} v{app.config['APP_VERSION']} démarrée")


def setup_error_handlers(app):
    """Gestionnaires d'erreur globaux, réponses JSON"""

    @app.errorhandler(400)
    def bad_request(error):
        return jsonify({'error': 'Requête invalide (JSON attendu)'}), 400

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({'error': 'Ressource introuvable'}), 404

    @app.errorhandler(405)
    def method_not_allowed(error):
        return jsonify({'error': 'Méthode non autorisée'}), 405

    @app.errorhandler(500)
    def internal_error(error):
        app.logger.error(f'Erreur interne: {error}')
        return jsonify({'error': 'Erreur interne du serveur'}), 500
