#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service de quasipotentiel: minimisation de l'action sur les chemins,
formule intégrale des processus de naissance et mort, et statistiques de
transition entre bassins attractifs
"""

import hashlib
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize, minimize_scalar

from config.config import get_config

from ..errors import NoDescentError, RateVanishesError
from ..models import (
    Network, PathOptimizationProblem, QuasipotentialEstimate, Trajectory, TransitionStats,
)
from .dynamics_service import _in_box, dynamics_service, mass_action_rates, stream
from .ldp_service import ldp_service

logger = logging.getLogger(__name__)

FLOW_SAMPLES = 16
LOG_FLOOR = 1e-300
GRAZING_TOL = 1e-8
REFINEMENT_WARNING = 0.02


class QuasipotentialService:
    """Estimation numérique de V_D(A, B)"""

    def __init__(self, config=None):
        self.config = config or get_config()
        self.ldp = ldp_service

    # Action discrète et gradient

    def _action_and_gradient(self, network: Network, dt: float,
                             states: np.ndarray) -> Tuple[float, np.ndarray]:
        """Action au point milieu et gradient par rapport à tous les nœuds"""
        vectors = network.vector_matrix.astype(float)
        inputs = network.input_matrix.astype(float)
        midpoints = 0.5 * (states[1:] + states[:-1])
        velocities = np.diff(states, axis=0) / dt
        rates = np.array([mass_action_rates(network, z) for z in midpoints])
        values, thetas = self.ldp.lagrangian_batch(rates, vectors, velocities)
        if not np.all(np.isfinite(values)):
            return math.inf, np.zeros_like(states)

        with np.errstate(over='ignore'):
            sensitivity = -(np.exp(thetas @ vectors.T) - 1.0) * rates        # ∂L/∂λ_r · λ_r
        with np.errstate(divide='ignore', invalid='ignore'):
            grad_mid = (sensitivity @ inputs) / midpoints                     # Σ_r ∂L/∂λ_r ∂λ_r/∂z
        grad_mid = np.nan_to_num(grad_mid, nan=0.0, posinf=0.0, neginf=0.0)

        gradient = np.zeros_like(states)
        gradient[:-1] += 0.5 * dt * grad_mid - thetas
        gradient[1:] += 0.5 * dt * grad_mid + thetas
        return float(np.sum(values) * dt), gradient

    def _flow_time(self, network: Network, start: np.ndarray, end: np.ndarray) -> float:
        """Échelle de temps ‖B − A‖₂ / vitesse moyenne du champ sur le segment"""
        samples = [start + s * (end - start) for s in np.linspace(0.0, 1.0, FLOW_SAMPLES)]
        speed = float(np.mean([np.linalg.norm(dynamics_service.mass_action_field(network, z))
                               for z in samples]))
        distance = float(np.linalg.norm(end - start))
        return max(distance / max(speed, 1e-12), 1e-3)

    def default_t_grid(self, network: Network, problem: PathOptimizationProblem) -> Tuple[float, ...]:
        """Grille géométrique de T_flow/4 à 16·T_flow"""
        t_flow = self._flow_time(network, problem.start, problem.end)
        return tuple(np.geomspace(t_flow / 4, 16 * t_flow, self.config.QP_T_GRID_SIZE))

    def _optimize_path(self, network: Network, problem: PathOptimizationProblem, T: float,
                       initial: np.ndarray) -> Tuple[float, np.ndarray, bool]:
        """L-BFGS-B en coordonnées log sur les nœuds intérieurs, extrémités fixées"""
        n, d = initial.shape
        dt = T / (n - 1)
        lower = np.log(np.maximum(problem.domain_lower, LOG_FLOOR))
        upper = np.log(np.maximum(problem.domain_upper, LOG_FLOOR))
        bounds = [(lo if problem.domain_lower[i] > 0 else None, hi)
                  for _ in range(n - 2) for i, (lo, hi) in enumerate(zip(lower, upper))]

        def assemble(y):
            states = initial.copy()
            states[1:-1] = np.exp(y.reshape(n - 2, d))
            return states

        def objective(y):
            states = assemble(y)
            value, gradient = self._action_and_gradient(network, dt, states)
            if not math.isfinite(value):
                return 1e300, np.zeros_like(y)
            return value, (gradient[1:-1] * states[1:-1]).ravel()

        y0 = np.log(np.maximum(initial[1:-1], LOG_FLOOR)).ravel()
        result = minimize(objective, y0, jac=True, method='L-BFGS-B', bounds=bounds,
                          options={'maxiter': 500})
        states = assemble(result.x)
        value, _ = self._action_and_gradient(network, dt, states)
        return value, states, bool(result.success)

    @staticmethod
    def _straight_path(problem: PathOptimizationProblem, n_points: int) -> np.ndarray:
        s = np.linspace(0.0, 1.0, n_points)[:, None]
        return problem.start + s * (problem.end - problem.start)

    def _perturbed_path(self, problem: PathOptimizationProblem, n_points: int,
                        restart: int) -> np.ndarray:
        path = self._straight_path(problem, n_points)
        rng = stream(problem.seed, restart)
        noise = rng.normal(0.0, 0.1, size=(n_points - 2, path.shape[1]))
        bump = np.sin(np.linspace(0.0, np.pi, n_points))[1:-1, None]
        path[1:-1] *= np.exp(noise * bump)
        return np.clip(path, problem.domain_lower, problem.domain_upper)

    @staticmethod
    def _resample(states: np.ndarray, n_points: int) -> np.ndarray:
        old = np.linspace(0.0, 1.0, len(states))
        new = np.linspace(0.0, 1.0, n_points)
        return np.stack([np.interp(new, old, states[:, i]) for i in range(states.shape[1])], axis=1)

    def minimize_action(self, network: Network, problem: PathOptimizationProblem) -> QuasipotentialEstimate:
        """
        min_T min_z I_T(z) sur les chemins de A à B dans D: grille en T,
        redémarrages graines, raffinement de T puis doublement de la discrétisation
        """
        species = network.species
        if problem.same_set():
            path = Trajectory(times=np.array([0.0, 1.0]),
                              states=np.stack([problem.start, problem.start]), species=species)
            return QuasipotentialEstimate(value=0.0, path=path, T_star=0.0,
                                          diagnostics={'same_set': True})

        t_grid = tuple(problem.t_grid) if problem.t_grid else self.default_t_grid(network, problem)
        n = problem.n_points
        straight = self._straight_path(problem, n)

        best = None   # (valeur, T, états)
        initial_best = math.inf
        improved = False
        any_success = False
        for T in t_grid:
            initial_value, _ = self._action_and_gradient(network, T / (n - 1), straight)
            initial_best = min(initial_best, initial_value)
            candidates = [(initial_value, straight)]
            for restart in range(max(problem.restarts, 1)):
                start_path = straight if restart == 0 else self._perturbed_path(problem, n, restart)
                value, states, success = self._optimize_path(network, problem, T, start_path)
                any_success = any_success or success
                if value < initial_value:
                    improved = True
                candidates.append((value, states))
            value, states = min(candidates, key=lambda c: c[0])
            logger.debug(f"T = {T:.4g}: action {value:.6g}")
            if best is None or value < best[0]:
                best = (value, T, states)

        if not improved and not any_success:
            raise NoDescentError("Aucun redémarrage n'améliore le chemin initial",
                                 diagnostics={'initial_value': initial_best, 't_grid': list(t_grid)})

        best = self._refine_time(network, problem, t_grid, best)
        coarse_value, T_star, coarse_states = best

        refined_n = 2 * n - 1
        refined_value, refined_states, _ = self._optimize_path(
            network, problem, T_star, self._resample(coarse_states, refined_n))
        change = (refined_value - coarse_value) / max(abs(coarse_value), 1e-300)
        if change > REFINEMENT_WARNING:
            logger.warning(f"Le doublement de la discrétisation augmente l'action de {100 * change:.1f}%")
        if refined_value <= coarse_value or not math.isfinite(coarse_value):
            value, states, n_final = refined_value, refined_states, refined_n
        else:
            value, states, n_final = coarse_value, coarse_states, n

        grazing = bool(np.any(np.abs(states - problem.domain_lower) <= GRAZING_TOL * (1 + np.abs(states)))
                       or np.any(np.abs(states - problem.domain_upper) <= GRAZING_TOL * (1 + np.abs(states))))
        if grazing:
            logger.warning("Le chemin optimal touche le bord du domaine D")

        path = Trajectory(times=np.linspace(0.0, T_star, n_final), states=states, species=species)
        diagnostics = {
            'same_set': False,
            't_grid': [float(t) for t in t_grid],
            'initial_value': initial_best,
            'coarse_value': coarse_value,
            'refined_value': refined_value,
            'refinement_change': change,
            'n_points': n_final,
            'boundary_grazing': grazing,
            'path_hash': hashlib.sha256(np.ascontiguousarray(states).tobytes()).hexdigest()[:16],
        }
        logger.info(f"Quasipotentiel estimé: {value:.6g} (T* = {T_star:.4g})")
        return QuasipotentialEstimate(value=max(value, 0.0), path=path, T_star=T_star,
                                      diagnostics=diagnostics)

    def _refine_time(self, network: Network, problem: PathOptimizationProblem,
                     t_grid: Sequence[float], best):
        """Recherche scalaire de T entre les voisins du meilleur point de grille"""
        value, T, states = best
        grid = sorted(t_grid)
        if len(grid) < 3:
            return best
        k = grid.index(T)
        low, high = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        if low == high:
            return best
        cache = {}

        def evaluate(log_t):
            t = math.exp(log_t)
            result = self._optimize_path(network, problem, t, states)
            cache[log_t] = (result[0], t, result[1])
            return result[0]

        minimize_scalar(evaluate, bounds=(math.log(low), math.log(high)), method='bounded',
                        options={'maxiter': 8, 'xatol': 1e-2})
        for candidate in cache.values():
            if candidate[0] < value:
                value, T, states = candidate
        return value, T, states

    # Processus de naissance et mort

    @staticmethod
    def birth_death_rates(network: Network) -> Tuple[Callable[[float], float], Callable[[float], float]]:
        """λ⁺ et λ⁻ d'un réseau unidimensionnel à sauts ±1"""
        if network.dimension != 1:
            raise ValueError("Réseau unidimensionnel requis")
        steps = network.vector_matrix[:, 0]
        if not np.all(np.abs(steps) == 1):
            raise ValueError("Les réactions doivent avoir des sauts ±1")

        def birth(x: float) -> float:
            return float(np.sum(mass_action_rates(network, [x])[steps > 0]))

        def death(x: float) -> float:
            return float(np.sum(mass_action_rates(network, [x])[steps < 0]))

        return birth, death

    @staticmethod
    def birth_death_quasipotential(birth: Callable[[float], float], death: Callable[[float], float],
                                   x_from: float, x_to: float) -> float:
        """V(x_from → x_to) = max(0, ∫ log(λ⁻/λ⁺))"""
        if x_from == x_to:
            return 0.0

        def integrand(u: float) -> float:
            up, down = birth(u), death(u)
            if up <= 0 or down <= 0:
                raise RateVanishesError(f"Taux nul en x = {u:g}")
            return math.log(down / up)

        for u in np.linspace(min(x_from, x_to), max(x_from, x_to), 65):
            integrand(float(u))
        value, error = quad(integrand, x_from, x_to, limit=200)
        logger.debug(f"Intégrale de naissance-mort: {value:.10g} (erreur {error:.1e})")
        return max(0.0, value)

    # Statistiques de transition

    def transition_statistics(self, network: Network, volumes: Sequence[float],
                              boxes: Sequence[Tuple[Sequence[float], Sequence[float]]],
                              T_max: float, trials: int, seed: int,
                              start_points: Optional[Sequence[Sequence[float]]] = None,
                              threads: Optional[int] = None) -> List[TransitionStats]:
        """
        Temps de premier passage entre deux boîtes (concentrations), dans les
        deux sens, pour chaque volume. Seul l'instant d'entrée est conservé
        """
        if len(boxes) != 2:
            raise ValueError("Exactement deux boîtes attendues")
        results = []
        for v_index, volume in enumerate(volumes):
            count_boxes = [(np.ceil(np.asarray(lo, float) * volume).astype(np.int64),
                            np.floor(np.asarray(hi, float) * volume).astype(np.int64))
                           for lo, hi in boxes]
            for source, target in ((0, 1), (1, 0)):
                if start_points is not None:
                    x0 = np.asarray(start_points[source], dtype=float)
                else:
                    lo, hi = boxes[source]
                    x0 = 0.5 * (np.asarray(lo, float) + np.asarray(hi, float))
                counts0 = dynamics_service.lattice_counts(volume, x0, snap=True)
                if not _in_box(counts0, count_boxes[source]):
                    raise ValueError(f"Le point de départ n'est pas dans la boîte {source}")
                # un flux par (volume, sens, essai)
                first = (2 * v_index + source) * trials
                tasks = [(network, float(volume), counts0, T_max, seed, first + trial,
                          dynamics_service.config.SSA_MAX_JUMPS, False, None, count_boxes[target])
                         for trial in range(trials)]
                times, censored = [], 0
                for *_, reason, t in dynamics_service.run_tasks(tasks, threads):
                    if reason == 'entered':
                        times.append(float(t))
                    else:
                        censored += 1
                stats = TransitionStats(volume=volume, source=source, target=target,
                                        times=times, censored=censored)
                if stats.all_censored:
                    logger.warning(f"v = {volume:g}, {source}→{target}: toutes les trajectoires censurées "
                                   f"(médiane minorée par T_max = {T_max:g})")
                results.append(stats)
        return results


# Instance globale du service
quasipotential_service = QuasipotentialService()
