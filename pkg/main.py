#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Point d'entrée de la ligne de commande crnldp
"""

import os
import sys

# Charger les variables d'environnement depuis .env si disponibles
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    sys.stderr.write("python-dotenv non installé, les variables .env ne seront pas chargées\n")

# Ajouter le répertoire du projet au path pour les imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from crnldp.cli import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
