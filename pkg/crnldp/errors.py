#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exceptions de l'outil

Les erreurs d'entrée héritent de ValueError et les échecs numériques de
RuntimeError, ce qui permet aux routes et à la CLI de les trier par catégorie.
"""

from typing import Optional


class CRNError(Exception):
    """Erreur de base du paquet"""


class NetworkSyntaxError(CRNError, ValueError):
    """Erreur de syntaxe dans un fichier réseau"""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"ligne {line}, colonne {column}: {message}")


class NetworkValidationError(CRNError, ValueError):
    """Réseau syntaxiquement correct mais invalide"""

    def __init__(self, report):
        self.report = report
        details = "; ".join(str(issue) for issue in report.issues)
        super().__init__(f"Réseau invalide: {details}")


class EmptyReactionSetError(CRNError, ValueError):
    """R(P) est vide"""


class ZeroProjectionError(CRNError, ValueError):
    """La direction a une projection nulle sur P"""


class NotInRPError(CRNError, ValueError):
    """La réaction n'appartient pas à R(P)"""


class NegativeConcentrationError(CRNError, ValueError):
    """Concentration négative en entrée"""


class UnitPointError(CRNError, ValueError):
    """Le point (1,...,1) n'a pas de coordonnées toriques"""


class InvalidWeightVectorError(CRNError, ValueError):
    """Vecteur de poids invalide"""


class NumericalError(CRNError, RuntimeError):
    """Échec numérique"""


class BlowUpError(NumericalError):
    """Explosion de la solution en temps fini"""

    def __init__(self, message: str, time: Optional[float] = None):
        self.time = time
        super().__init__(message)


class ZeroSumError(NumericalError):
    """Compensation des parties positive et négative d'une somme en espace log"""


class NoDescentError(NumericalError):
    """Aucune relance n'améliore le chemin initial"""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class RateVanishesError(NumericalError):
    """Un taux s'annule sur l'intervalle d'intégration"""
