#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Modèles de données pour les réseaux de réactions chimiques

Les complexes sont des vecteurs d'entiers denses dans la base des espèces,
dans l'ordre de déclaration. Un réseau est immuable après construction.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidWeightVectorError, NetworkValidationError
from ..utils.exact import to_fraction


@dataclass(frozen=True)
class Complex:
    """Complexe: multiplicités des espèces (le vecteur nul est ∅)"""
    coefficients: Tuple[int, ...]

    @classmethod
    def zero(cls, dimension: int) -> 'Complex':
        return cls(tuple([0] * dimension))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, index: int) -> int:
        return self.coefficients[index]

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.coefficients) if c != 0)

    @property
    def order(self) -> int:
        """‖c‖₁, l'ordre cinétique du complexe"""
        return sum(self.coefficients)

    @property
    def is_empty(self) -> bool:
        return not any(self.coefficients)

    def label(self, species: Sequence[str]) -> str:
        """Représentation textuelle, '0' pour le complexe vide"""
        terms = []
        for name, coefficient in zip(species, self.coefficients):
            if coefficient == 1:
                terms.append(name)
            elif coefficient:
                terms.append(f"{coefficient}{name}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Reaction:
    """Réaction irréversible c_in → c_out de constante k"""
    input: Complex
    output: Complex
    rate_constant: float
    label: str = ""

    @property
    def vector(self) -> Tuple[int, ...]:
        return reaction_vector(self)

    def reverse(self, rate_constant: float, label: str = "") -> 'Reaction':
        return Reaction(self.output, self.input, rate_constant, label)

    def describe(self, species: Sequence[str]) -> str:
        return f"{self.input.label(species)} -> {self.output.label(species)}"

    def to_api_dict(self, species: Sequence[str]) -> dict:
        """Convertit la réaction en dictionnaire pour l'API"""
        return {
            'label': self.label,
            'reaction': self.describe(species),
            'input': list(self.input.coefficients),
            'output': list(self.output.coefficients),
            'rate_constant': self.rate_constant,
        }


def reaction_vector(reaction: Reaction) -> Tuple[int, ...]:
    """c^r = c_out − c_in"""
    return tuple(o - i for o, i in zip(reaction.output.coefficients,
                                       reaction.input.coefficients))


def weighted_reaction_vector(reaction: Reaction, a: 'WeightVector') -> Tuple[Fraction, ...]:
    """c^{r,a} avec c^{r,a}_i = c^r_i a_i"""
    return tuple(c * w for c, w in zip(reaction_vector(reaction), a.values))


def scaled_rate_constant(reaction: Reaction, volume: float) -> float:
    """k_r^{(v)} = v^{−‖c_in‖₁} k_r"""
    return reaction.rate_constant * float(volume) ** (-reaction.input.order)


@dataclass(frozen=True)
class SupportSet:
    """Ensemble P d'indices d'espèces, trié"""
    indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(sorted(set(self.indices))))

    @classmethod
    def full(cls, dimension: int) -> 'SupportSet':
        return cls(tuple(range(dimension)))

    @classmethod
    def from_names(cls, network: 'Network', names: Iterable[str]) -> 'SupportSet':
        return cls(tuple(network.index_of(name) for name in names))

    @property
    def size(self) -> int:
        """d_P"""
        return len(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in self.indices

    def __iter__(self):
        return iter(self.indices)

    def issubset(self, other: 'SupportSet') -> bool:
        return set(self.indices) <= set(other.indices)

    def contains_support(self, vector: Iterable) -> bool:
        """supp(vector) ⊆ P"""
        return all(i in self.indices for i, c in enumerate(vector) if c != 0)

    def project(self, vector: Sequence) -> tuple:
        """π_P"""
        return tuple(vector[i] for i in self.indices)

    def names(self, species: Sequence[str]) -> List[str]:
        return [species[i] for i in self.indices]


@dataclass(frozen=True)
class WeightVector:
    """Vecteur de poids a > 0, normalisé à ‖a‖₁ = d"""
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        try:
            values = tuple(to_fraction(v) for v in self.values)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise InvalidWeightVectorError(f"Poids non rationnel: {e}")
        if not values:
            raise InvalidWeightVectorError("Vecteur de poids vide")
        if any(v <= 0 for v in values):
            raise InvalidWeightVectorError(f"Poids non strictement positifs: {[str(v) for v in values]}")
        scale = Fraction(len(values)) / sum(values)
        object.__setattr__(self, 'values', tuple(v * scale for v in values))

    @classmethod
    def ones(cls, dimension: int) -> 'WeightVector':
        return cls(tuple([Fraction(1)] * dimension))

    @classmethod
    def parse(cls, text: str) -> 'WeightVector':
        """Lit une liste 'p/q,p/q,...'"""
        parts = [p for p in text.replace(';', ',').split(',') if p.strip()]
        return cls(tuple(parts))

    @property
    def dimension(self) -> int:
        return len(self.values)

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class ValidationIssue:
    """Violation d'un invariant, avec sa localisation"""
    code: str
    location: str
    message: str = ""

    def __str__(self) -> str:
        suffix = f" ({self.message})" if self.message else ""
        return f"{self.location}: {self.code}{suffix}"


@dataclass
class ValidationReport:
    """Rapport de validation d'un réseau"""
    issues: List[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def codes(self) -> List[str]:
        return [issue.code for issue in self.issues]

    def to_api_dict(self) -> dict:
        return {
            'ok': self.ok,
            'issues': [
                {'code': i.code, 'location': i.location, 'message': i.message}
                for i in self.issues
            ],
        }


@dataclass(frozen=True)
class Network:
    """Réseau (S, C, R): espèces ordonnées et réactions irréversibles"""
    species: Tuple[str, ...]
    reactions: Tuple[Reaction, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, 'species', tuple(self.species))
        object.__setattr__(self, 'reactions', tuple(self.reactions))
        # forme des complexes: refusée dès la construction
        issues = _shape_issues(self.species, self.reactions)
        if issues:
            raise NetworkValidationError(ValidationReport(issues))

    @property
    def dimension(self) -> int:
        """d, le nombre d'espèces"""
        return len(self.species)

    @property
    def size(self) -> int:
        """m, le nombre de réactions"""
        return len(self.reactions)

    def index_of(self, name: str) -> int:
        try:
            return self.species.index(name)
        except ValueError:
            raise ValueError(f"Espèce inconnue: {name}")

    def complex(self, **multiplicities: int) -> Complex:
        """Construit un complexe à partir de multiplicités nommées"""
        coefficients = [0] * self.dimension
        for name, value in multiplicities.items():
            coefficients[self.index_of(name)] = value
        return Complex(tuple(coefficients))

    @cached_property
    def input_matrix(self) -> np.ndarray:
        """Matrice m×d des complexes d'entrée"""
        return np.array([r.input.coefficients for r in self.reactions], dtype=np.int64).reshape(self.size, self.dimension)

    @cached_property
    def vector_matrix(self) -> np.ndarray:
        """Matrice m×d des vecteurs de réaction"""
        return np.array([reaction_vector(r) for r in self.reactions], dtype=np.int64).reshape(self.size, self.dimension)

    @cached_property
    def rate_constants(self) -> np.ndarray:
        return np.array([r.rate_constant for r in self.reactions], dtype=float)

    def content_hash(self) -> str:
        """Empreinte SHA-256 du contenu (espèces, complexes, constantes)"""
        payload = {
            'species': list(self.species),
            'reactions': [
                [list(r.input.coefficients), list(r.output.coefficients), repr(float(r.rate_constant))]
                for r in self.reactions
            ],
        }
        encoded = json.dumps(payload, sort_keys=True, separators=(',', ':')).encode('utf-8')
        return hashlib.sha256(encoded).hexdigest()

    def with_reactions(self, reactions: Sequence[Reaction], name: Optional[str] = None) -> 'Network':
        return Network(self.species, tuple(reactions), self.name if name is None else name)

    def to_api_dict(self) -> dict:
        return {
            'name': self.name,
            'species': list(self.species),
            'reactions': [r.to_api_dict(self.species) for r in self.reactions],
            'hash': self.content_hash(),
        }


def restricted_reaction_indices(network: Network, support: SupportSet) -> List[int]:
    """Indices des réactions de R(P) (supp c_in ⊆ P)"""
    return [i for i, r in enumerate(network.reactions)
            if support.contains_support(r.input.coefficients)]


def restricted_reactions(network: Network, support: SupportSet) -> List[Reaction]:
    """R(P): réactions dont l'entrée est supportée dans P"""
    return [network.reactions[i] for i in restricted_reaction_indices(network, support)]


def _location(position: int, reaction: Reaction) -> str:
    return f"reaction[{position}]" + (f" '{reaction.label}'" if reaction.label else "")


def _shape_issues(species: Sequence[str], reactions: Sequence[Reaction]) -> List[ValidationIssue]:
    """Complexes de longueur d et multiplicités entières ≥ 0"""
    issues = []
    d = len(species)
    for position, reaction in enumerate(reactions):
        location = _location(position, reaction)
        for side, cplx in (('input', reaction.input), ('output', reaction.output)):
            if len(cplx.coefficients) != d:
                issues.append(ValidationIssue(
                    'dimension mismatch', f"{location}.{side}",
                    f"{len(cplx.coefficients)} composantes pour {d} espèces"))
            if any(not isinstance(c, (int, np.integer)) for c in cplx.coefficients):
                issues.append(ValidationIssue('non-integer multiplicity', f"{location}.{side}",
                                              str(list(cplx.coefficients))))
            elif any(c < 0 for c in cplx.coefficients):
                issues.append(ValidationIssue('negative multiplicity', f"{location}.{side}",
                                              str(list(cplx.coefficients))))
    return issues


def validate(network: Network) -> ValidationReport:
    """Vérifie tous les invariants du modèle et localise chaque violation"""
    report = ValidationReport()
    issues = report.issues
    d = len(network.species)

    if d == 0:
        issues.append(ValidationIssue('no species', 'network'))
    seen = set()
    for position, name in enumerate(network.species):
        if not isinstance(name, str) or not name:
            issues.append(ValidationIssue('invalid species name', f"species[{position}]", repr(name)))
        elif name in seen:
            issues.append(ValidationIssue('duplicate species', f"species[{position}]", name))
        seen.add(name)

    if not network.reactions:
        issues.append(ValidationIssue('no reactions', 'network'))
    issues.extend(_shape_issues(network.species, network.reactions))

    for position, reaction in enumerate(network.reactions):
        location = _location(position, reaction)
        try:
            rate = float(reaction.rate_constant)
        except (TypeError, ValueError):
            rate = float('nan')
        if not rate > 0 or not np.isfinite(rate):
            issues.append(ValidationIssue('nonpositive rate constant', location, repr(reaction.rate_constant)))
        if reaction.input.coefficients == reaction.output.coefficients:
            issues.append(ValidationIssue('no-op reaction', location))

    return report
