#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Résultats des analyses: verdicts topologiques, trajectoires, grandeurs de
grandes déviations et estimations du quasipotentiel
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .network import SupportSet, WeightVector


def _rational_dict(value: Fraction) -> dict:
    """Rationnel exact en chaîne plus approximation flottante"""
    return {'exact': str(value), 'float': float(value)}


# Analyse topologique

class ReactionClass(str, Enum):
    """Classe d'une réaction pour une direction w et des poids a"""
    DISSIPATIVE = 'Dissipative'
    NULL = 'Null'
    EXPLOSIVE = 'Explosive'
    NOT_IN_RP = 'NotInRP'


@dataclass(frozen=True)
class Violation:
    """Face, direction, réaction et classe qui mettent en défaut la condition"""
    face: Tuple[int, int]
    direction: Tuple[Fraction, ...]
    reaction: Optional[int]
    reaction_class: ReactionClass

    def to_api_dict(self) -> dict:
        return {
            'face': list(self.face),
            'direction': [str(c) for c in self.direction],
            'reaction': self.reaction,
            'class': self.reaction_class.value,
        }


@dataclass
class EndotacticVerdict:
    """Verdict « fortement (P,a)-endotactique »"""
    holds: bool
    support: SupportSet
    witness_a: Optional[WeightVector]
    violations: List[Violation] = field(default_factory=list)
    degenerate: bool = False

    def to_api_dict(self) -> dict:
        return {
            'holds': self.holds,
            'support': list(self.support.indices),
            'a': [_rational_dict(v) for v in self.witness_a.values] if self.witness_a else None,
            'violations': [v.to_api_dict() for v in self.violations],
            'degenerate_hull': self.degenerate,
        }


@dataclass
class SiphonReport:
    """Siphons minimaux du réseau"""
    minimal_siphons: List[SupportSet]

    @property
    def asiphonic(self) -> bool:
        return not self.minimal_siphons

    def to_api_dict(self, species: Sequence[str]) -> dict:
        return {
            'asiphonic': self.asiphonic,
            'minimal_siphons': [s.names(species) for s in self.minimal_siphons],
        }


@dataclass
class ASEReport:
    """Asiphonique + fortement endotactique"""
    siphons: SiphonReport
    verdict: EndotacticVerdict
    weight: Optional[WeightVector]
    subsets_consistent: Optional[bool] = None
    failing_supports: List[SupportSet] = field(default_factory=list)

    @property
    def strongly_endotactic(self) -> bool:
        return self.weight is not None

    @property
    def ase(self) -> bool:
        return self.siphons.asiphonic and self.weight is not None

    def to_api_dict(self, species: Sequence[str]) -> dict:
        return {
            'ase': self.ase,
            'strongly_endotactic': self.strongly_endotactic,
            'siphons': self.siphons.to_api_dict(species),
            'endotactic': self.verdict.to_api_dict(),
            'subsets_consistent': self.subsets_consistent,
            'failing_supports': [s.names(species) for s in self.failing_supports],
        }


# Dynamique

@dataclass
class Trajectory:
    """Solution x(t) de l'EDO d'action de masse"""
    times: np.ndarray
    states: np.ndarray
    species: Tuple[str, ...] = ()
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    dense: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False, compare=False)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def at(self, t) -> np.ndarray:
        """États aux instants t (interpolation dense si disponible, sinon linéaire)"""
        t = np.asarray(t, dtype=float)
        t = np.clip(t, self.times[0], self.times[-1])
        if self.dense is not None:
            values = np.asarray(self.dense(t))
            return values.T if values.ndim == 2 else values
        columns = [np.interp(t, self.times, self.states[:, i]) for i in range(self.states.shape[1])]
        return np.stack(columns, axis=-1)

    def rows(self):
        for t, state in zip(self.times, self.states):
            yield [float(t)] + [float(x) for x in state]

    def to_api_dict(self) -> dict:
        return {
            'species': list(self.species),
            'times': self.times.tolist(),
            'states': self.states.tolist(),
            'diagnostics': self.diagnostics,
        }


@dataclass
class JumpPath:
    """Trajectoire du processus de sauts N_t à volume v"""
    volume: float
    times: np.ndarray          # times[0] = 0, puis les instants de saut
    counts: np.ndarray         # une ligne par instant de times
    reaction_ids: np.ndarray   # réaction déclenchée à chaque saut
    horizon: float
    species: Tuple[str, ...] = ()
    absorbed: bool = False
    stop_reason: str = "horizon"

    @property
    def jump_times(self) -> np.ndarray:
        return self.times[1:]

    @property
    def jump_count(self) -> int:
        return len(self.reaction_ids)

    @property
    def concentrations(self) -> np.ndarray:
        """X^v = N / v"""
        return self.counts / self.volume

    def count_at(self, t: float) -> np.ndarray:
        """Comptes à l'instant t (trajectoire continue à droite)"""
        k = int(np.searchsorted(self.times, t, side='right')) - 1
        return self.counts[max(k, 0)]

    def records(self):
        """Enregistrements JSONL: temps, réaction, comptes"""
        for k, t in enumerate(self.times):
            yield {
                't': float(t),
                'reaction': None if k == 0 else int(self.reaction_ids[k - 1]),
                'counts': [int(c) for c in self.counts[k]],
            }


@dataclass
class DeviationStats:
    """Écart sup_t ‖X_t^v − x(t)‖₁ sur un ensemble de trajectoires"""
    volume: float
    deviations: List[float]

    @property
    def median(self) -> float:
        return float(np.median(self.deviations))

    @property
    def p95(self) -> float:
        return float(np.percentile(self.deviations, 95))

    def to_api_dict(self) -> dict:
        return {'volume': self.volume, 'trials': len(self.deviations),
                'median': self.median, 'p95': self.p95}


@dataclass
class ContainmentEstimate:
    """Estimation de (1/v) log P[sup_t ‖X_t^v‖₁ > ρ]"""
    volume: float
    trials: int
    exceedances: int

    @property
    def frequency(self) -> float:
        return self.exceedances / self.trials

    @property
    def is_upper_bound(self) -> bool:
        return self.exceedances == 0

    @property
    def log_rate(self) -> float:
        if self.exceedances == 0:
            return math.log(1.0 / self.trials) / self.volume
        return math.log(self.frequency) / self.volume

    def to_api_dict(self) -> dict:
        return {'volume': self.volume, 'trials': self.trials, 'exceedances': self.exceedances,
                'frequency': self.frequency, 'log_rate': self.log_rate,
                'upper_bound': self.is_upper_bound}


@dataclass
class TransitionStats:
    """Temps de premier passage d'une boîte attractive à l'autre"""
    volume: float
    source: int
    target: int
    times: List[float]
    censored: int

    @property
    def all_censored(self) -> bool:
        return not self.times

    @property
    def median(self) -> float:
        """Médiane empirique, les trajectoires censurées comptant comme +∞"""
        values = sorted(self.times) + [math.inf] * self.censored
        return float(np.median(values)) if values else math.inf

    @property
    def log_median_rate(self) -> float:
        return math.log(self.median) / self.volume

    def to_api_dict(self) -> dict:
        return {'volume': self.volume, 'from': self.source, 'to': self.target,
                'transitions': len(self.times), 'censored': self.censored,
                'median': self.median, 'log_median_rate': self.log_median_rate,
                'lower_bound': self.censored > 0}


# Grandes déviations

@dataclass(frozen=True)
class ToricPoint:
    """Coordonnées toriques z = θ^w, θ stocké par log θ"""
    log_theta: float
    w: Tuple[float, ...]

    @property
    def theta(self) -> float:
        return math.exp(self.log_theta) if self.log_theta < 709 else math.inf

    def direction(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


@dataclass(frozen=True)
class SignedLog:
    """Nombre réel sous la forme signe · exp(log_magnitude)"""
    sign: int
    log_magnitude: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_magnitude)

    def to_api_dict(self) -> dict:
        return {'sign': self.sign, 'log_magnitude': self.log_magnitude}


@dataclass
class LagrangianResult:
    """Valeur du lagrangien L(λ, ξ) et variable duale"""
    value: float
    argmax_theta: Optional[np.ndarray]
    feasible: bool
    iterations: int = 0
    converged: bool = True
    degenerate_span: bool = False
    boundary: bool = False


@dataclass
class ActionResult:
    """Action discrétisée I = Σ L(λ(z_{k+½}), ż_{k+½}) Δt"""
    value: float
    lagrangians: np.ndarray
    steps: np.ndarray
    not_absolutely_continuous: bool = False
    infinite_segments: List[int] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_api_dict(self) -> dict:
        return {'value': self.value if self.finite else None, 'finite': self.finite,
                'not_absolutely_continuous': self.not_absolutely_continuous,
                'infinite_segments': self.infinite_segments}


@dataclass
class ConstantLedger:
    """Constantes constructives: c*, κ_r, K₁, K₅, K₀ et la chaîne C_j"""
    c_star: float
    kappa: Tuple[float, ...]
    K1: float
    K2: float
    K3: float
    K5: float
    K0: float
    zeta_star: float
    C: Tuple[float, ...]
    rho0: Optional[float] = None
    configured: FrozenSet[str] = frozenset()

    def delta(self, j: int, log_theta: float) -> float:
        """δ_j(θ) = C_{2j} / log θ"""
        return self.C[2 * j] / log_theta

    def epsilon(self, j: int, log_theta: float) -> float:
        """ε_j(θ) = C_{2j+1} / log θ"""
        return self.C[2 * j + 1] / log_theta

    def to_api_dict(self) -> dict:
        def number(x):
            return x if x is None or math.isfinite(x) else str(x)
        return {
            'c_star': number(self.c_star),
            'kappa': [number(k) for k in self.kappa],
            'K1': number(self.K1), 'K2': number(self.K2), 'K3': number(self.K3),
            'K5': number(self.K5), 'K0': number(self.K0),
            'zeta_star': number(self.zeta_star),
            'C': [number(c) for c in self.C],
            'rho0': number(self.rho0),
            'configured': sorted(self.configured),
        }


# Quasipotentiel

@dataclass
class PathOptimizationProblem:
    """Minimisation de l'action entre A et B dans le domaine D"""
    start: np.ndarray
    end: np.ndarray
    domain_lower: np.ndarray
    domain_upper: np.ndarray
    n_points: int = 32
    t_grid: Optional[Tuple[float, ...]] = None
    restarts: int = 3
    seed: int = 0
    ball_radius: float = 1e-3

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=float)
        self.end = np.asarray(self.end, dtype=float)
        self.domain_lower = np.asarray(self.domain_lower, dtype=float)
        self.domain_upper = np.asarray(self.domain_upper, dtype=float)
        if self.n_points < 8:
            raise ValueError("n_points doit être ≥ 8")
        for name, point in (('départ', self.start), ('arrivée', self.end)):
            if np.any(point < self.domain_lower) or np.any(point > self.domain_upper):
                raise ValueError(f"Point de {name} hors du domaine D")

    def same_set(self) -> bool:
        """A et B se recouvrent (boules L∞ de rayon ball_radius)"""
        return bool(np.max(np.abs(self.start - self.end)) <= 2 * self.ball_radius)


@dataclass
class QuasipotentialEstimate:
    """Estimation de V_D(A, B) et chemin optimal"""
    value: float
    path: Trajectory
    T_star: float
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_api_dict(self) -> dict:
        return {'value': self.value, 'T_star': self.T_star,
                'diagnostics': self.diagnostics}
