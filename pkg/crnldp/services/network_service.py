#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service de lecture et d'écriture des réseaux au format texte .crn

Une réaction par ligne:
    A + 2B -> 3B ; k = 1
    2A <-> 0 ; kf = 1, kr = 0.5
avec '#' pour les commentaires et un en-tête optionnel 'species: A, B'.
"""

import logging
import re
from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple

from ..errors import NetworkSyntaxError, NetworkValidationError
from ..models import Complex, Network, Reaction, validate

logger = logging.getLogger(__name__)

NAME = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
NUMBER = re.compile(r'[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?')
TERM = re.compile(r'\s*(?:(?P<coef>[0-9]+)\s*)?(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*$')
HEADER = re.compile(r'^\s*species\s*:(?P<body>.*)$')

DESCRIPTIONS = {
    'ex1': "A + 2B <-> 3B",
    'ex2': "0 -> A + 2B -> 3B -> A, fortement endotactique pour a = 1",
    'ex13': "A -> 0 -> B -> 2A, fortement endotactique pour a = (1/2, 1)",
    'ex31': "0 -> A + 2B -> 3B -> A, 2A <-> A + 3B, non fortement endotactique",
    'ex32': "A -> 2A -> 3A + 2B -> A, siphon {A}",
    'tetra': "0 <-> A -> B -> C -> A, ASE",
    'siphon': "A -> 2A -> 0, siphon {A}",
    'dimer': "2A <-> 0",
    'explosive': "2A -> 3A",
    'schlogl': "Schlögl avec les constantes k6..k9 de la section de Poincaré",
    'schlogl_bistable': "Schlögl à points fixes 1, 2 et 3",
    'bz': "bloc chaotique à trois espèces",
    'bistable': "système couplé complet, quatorze réactions",
    'bistable_unperturbed': "système couplé sans les réactions perturbatives",
    'bz_reduced': "réduction à trois espèces en w = w* = 0.0389",
}


def _syntax_error(message: str, line: int, column: int) -> NetworkSyntaxError:
    return NetworkSyntaxError(message, line=line, column=column)


class NetworkService:
    """Analyse et sérialisation du format .crn, réseaux intégrés"""

    def __init__(self):
        self._builtin_cache: Dict[str, Network] = {}

    # Lecture

    def parse(self, text: str, name: str = "", check: bool = True) -> Network:
        """Construit un réseau; erreurs de syntaxe localisées (ligne, colonne)"""
        species: List[str] = []
        fixed_species = False
        raw: List[Tuple[Dict[str, int], Dict[str, int], float, int]] = []

        for number, line in enumerate(text.splitlines(), start=1):
            content = line.split('#', 1)[0]
            if not content.strip():
                continue
            try:
                content.encode('ascii')
            except UnicodeEncodeError:
                column = next(i for i, ch in enumerate(content) if ord(ch) > 127) + 1
                raise _syntax_error("caractère non ASCII", number, column)

            header = HEADER.match(content)
            if header:
                if raw or fixed_species:
                    raise _syntax_error("l'en-tête species doit précéder les réactions", number, 1)
                species = self._parse_species_header(header.group('body'), number,
                                                     header.start('body') + 1)
                fixed_species = True
                continue

            for lhs, rhs, rate, _ in self._parse_reaction_line(content, number):
                for cplx in (lhs, rhs):
                    for key in cplx:
                        if key not in species:
                            if fixed_species:
                                raise _syntax_error(f"espèce non déclarée: {key}", number,
                                                    content.find(key) + 1)
                            species.append(key)
                raw.append((lhs, rhs, rate, number))

        reactions = []
        for lhs, rhs, rate, _ in raw:
            reactions.append(Reaction(self._complex(species, lhs), self._complex(species, rhs), rate))
        network = Network(tuple(species), tuple(reactions), name)

        if check:
            report = validate(network)
            if not report.ok:
                raise NetworkValidationError(report)
        logger.debug(f"Réseau '{name}' lu: {network.dimension} espèces, {network.size} réactions")
        return network

    @staticmethod
    def _complex(species: List[str], terms: Dict[str, int]) -> Complex:
        return Complex(tuple(terms.get(s, 0) for s in species))

    @staticmethod
    def _parse_species_header(body: str, line: int, offset: int) -> List[str]:
        names = []
        position = 0
        for part in body.split(','):
            stripped = part.strip()
            column = offset + position + (len(part) - len(part.lstrip()))
            if not NAME.fullmatch(stripped):
                raise _syntax_error(f"nom d'espèce invalide: '{stripped}'", line, column)
            if stripped in names:
                raise _syntax_error(f"espèce en double: {stripped}", line, column)
            names.append(stripped)
            position += len(part) + 1
        return names

    def _parse_reaction_line(self, content: str, line: int):
        if ';' not in content:
            raise _syntax_error("';' attendu avant les constantes", line, len(content.rstrip()) + 1)
        body, params = content.split(';', 1)
        params_offset = len(body) + 2

        if '<->' in body:
            arrow, reversible = '<->', True
        elif '->' in body:
            arrow, reversible = '->', False
        else:
            raise _syntax_error("flèche '->' ou '<->' attendue", line, 1)
        split = body.index(arrow)
        if body.count('->') > 1:
            raise _syntax_error("une seule flèche par ligne", line, body.index('->', split + len(arrow)) + 1)

        lhs = self._parse_complex(body[:split], line, 1)
        rhs = self._parse_complex(body[split + len(arrow):], line, split + len(arrow) + 1)
        values = self._parse_constants(params, line, params_offset)

        if reversible:
            missing = {'kf', 'kr'} - set(values)
            if missing or set(values) - {'kf', 'kr'}:
                raise _syntax_error("'kf = ..., kr = ...' attendus pour '<->'", line, params_offset)
            return [(lhs, rhs, values['kf'], line), (rhs, lhs, values['kr'], line)]
        if set(values) != {'k'}:
            raise _syntax_error("'k = ...' attendu pour '->'", line, params_offset)
        return [(lhs, rhs, values['k'], line)]

    @staticmethod
    def _parse_complex(text: str, line: int, offset: int) -> Dict[str, int]:
        if not text.strip():
            raise _syntax_error("complexe vide (utiliser '0')", line, offset)
        if text.strip() == '0':
            return {}
        terms: Dict[str, int] = {}
        position = 0
        for part in text.split('+'):
            column = offset + position + (len(part) - len(part.lstrip()))
            match = TERM.match(part)
            if not match or not part.strip():
                raise _syntax_error(f"terme invalide: '{part.strip()}'", line, column)
            coefficient = int(match.group('coef')) if match.group('coef') else 1
            if coefficient == 0:
                raise _syntax_error("coefficient nul", line, column)
            name = match.group('name')
            terms[name] = terms.get(name, 0) + coefficient
            position += len(part) + 1
        return terms

    @staticmethod
    def _parse_constants(text: str, line: int, offset: int) -> Dict[str, float]:
        values: Dict[str, float] = {}
        position = 0
        for part in text.split(','):
            column = offset + position + (len(part) - len(part.lstrip()))
            key, sep, value = part.partition('=')
            key, value = key.strip(), value.strip()
            if not sep or key not in ('k', 'kf', 'kr'):
                raise _syntax_error(f"constante attendue (k, kf ou kr): '{part.strip()}'", line, column)
            if not NUMBER.fullmatch(value):
                raise _syntax_error(f"nombre décimal positif attendu: '{value}'", line,
                                    column + part.strip().find('=') + 1)
            if key in values:
                raise _syntax_error(f"constante {key} en double", line, column)
            values[key] = float(value)
            position += len(part) + 1
        return values

    def load(self, path) -> Network:
        """Lit un fichier .crn"""
        path = Path(path)
        return self.parse(path.read_text(encoding='utf-8'), name=path.stem)

    # Écriture

    @staticmethod
    def serialize(network: Network) -> str:
        """Texte .crn avec en-tête species; les réactions restent irréversibles"""
        lines = [f"species: {', '.join(network.species)}"]
        for reaction in network.reactions:
            lines.append(f"{reaction.describe(network.species)} ; k = {reaction.rate_constant!r}")
        return "\n".join(lines) + "\n"

    # Réseaux intégrés

    @staticmethod
    def _data_dir():
        return resources.files('crnldp') / 'data' / 'networks'

    def list_builtins(self) -> List[str]:
        return sorted(entry.name[:-4] for entry in self._data_dir().iterdir()
                      if entry.name.endswith('.crn'))

    def builtin_text(self, name: str) -> str:
        entry = self._data_dir() / f"{name}.crn"
        if not entry.is_file():
            raise ValueError(f"Réseau intégré inconnu: {name}")
        return entry.read_text(encoding='utf-8')

    def load_builtin(self, name: str) -> Network:
        """Réseau intégré par son nom (ex2, tetra, ...)"""
        if name not in self._builtin_cache:
            self._builtin_cache[name] = self.parse(self.builtin_text(name), name=name)
        return self._builtin_cache[name]

    def describe_builtin(self, name: str) -> str:
        return DESCRIPTIONS.get(name, "")

    def source_text(self, reference: str) -> str:
        """Texte d'un fichier .crn ou d'un réseau intégré"""
        path = Path(reference)
        if path.is_file():
            return path.read_text(encoding='utf-8')
        if reference in self.list_builtins():
            return self.builtin_text(reference)
        raise ValueError(f"Ni fichier ni réseau intégré: {reference}")

    def resolve(self, reference: str) -> Network:
        """Chemin vers un fichier .crn ou nom d'un réseau intégré"""
        path = Path(reference)
        if path.is_file():
            return self.load(path)
        if reference in self.list_builtins():
            return self.load_builtin(reference)
        raise ValueError(f"Ni fichier ni réseau intégré: {reference}")

    def export_builtins(self, destination) -> List[Path]:
        """Copie les fichiers intégrés dans un répertoire"""
        destination = Path(destination)
        destination.mkdir(parents=True, exist_ok=True)
        written = []
        for name in self.list_builtins():
            target = destination / f"{name}.crn"
            target.write_text(self.builtin_text(name), encoding='utf-8')
            written.append(target)
        logger.info(f"{len(written)} réseaux écrits dans {destination}")
        return written


# Instance globale du service
network_service = NetworkService()
