#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service de dynamique: EDO d'action de masse et processus de sauts à volume v
(algorithme de Gillespie, méthode directe)
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import RK45, OdeSolution

from config.config import get_config

from ..errors import BlowUpError, NegativeConcentrationError, NumericalError
from ..models import (
    ContainmentEstimate, DeviationStats, JumpPath, Network, Reaction, Trajectory,
)

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 60
RNG_BATCH = 4096


def stream(seed: int, trial: int = 0) -> np.random.Generator:
    """Flux aléatoire à compteur (Philox) dérivé de (graine, essai)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial)])))


def mass_action_rates(network: Network, x) -> np.ndarray:
    """λ_r(x) = k_r Π x_i^{(c_in)_i}, avec 0⁰ = 1"""
    x = np.asarray(x, dtype=float)
    return network.rate_constants * np.prod(np.power(x, network.input_matrix), axis=1)


def _reaction_index(network: Network, reaction: Union[int, Reaction]) -> int:
    if isinstance(reaction, (int, np.integer)):
        return int(reaction)
    return network.reactions.index(reaction)


def _ssa_structure(network: Network, volume: float):
    """Constantes v·k_r^{(v)}, facteurs d'entrée et changements par réaction"""
    structure = []
    for reaction in network.reactions:
        rate = volume * reaction.rate_constant * volume ** (-reaction.input.order)
        factors = tuple((i, c) for i, c in enumerate(reaction.input.coefficients) if c)
        changes = tuple((i, o - c) for i, (c, o) in
                        enumerate(zip(reaction.input.coefficients, reaction.output.coefficients))
                        if o != c)
        structure.append((rate, factors, changes))
    return structure


def _ssa_kernel(structure, volume: float, counts0: Sequence[int], horizon: float,
                rng: np.random.Generator, max_jumps: int, record: bool = True,
                exceed_total: Optional[float] = None,
                target_box: Optional[Tuple[Sequence[int], Sequence[int]]] = None):
    """Boucle de la méthode directe; renvoie temps, comptes, réactions et motif d'arrêt"""
    counts = [int(c) for c in counts0]
    total_count = sum(counts)
    times = [0.0]
    history = [tuple(counts)]
    fired: List[int] = []
    t = 0.0
    jumps = 0
    reason = 'horizon'

    exponentials = rng.standard_exponential(RNG_BATCH)
    uniforms = rng.random(RNG_BATCH)
    cursor = 0

    if exceed_total is not None and total_count > exceed_total:
        return times, history, fired, 'exceeded', t
    if target_box is not None and _in_box(counts, target_box):
        return times, history, fired, 'entered', t

    while True:
        propensities = []
        total = 0.0
        for rate, factors, _ in structure:
            a = rate
            for i, c in factors:
                n = counts[i]
                if n < c:
                    a = 0.0
                    break
                for j in range(c):
                    a *= n - j
            propensities.append(a)
            total += a

        if total <= 0.0:
            reason = 'absorbed'
            break

        if cursor == RNG_BATCH:
            exponentials = rng.standard_exponential(RNG_BATCH)
            uniforms = rng.random(RNG_BATCH)
            cursor = 0
        t += exponentials[cursor] / total
        pick = uniforms[cursor] * total
        cursor += 1
        if t > horizon:
            reason = 'horizon'
            break

        chosen = len(propensities) - 1
        acc = 0.0
        for k, a in enumerate(propensities):
            acc += a
            if pick < acc:
                chosen = k
                break
        while propensities[chosen] == 0.0:
            chosen -= 1

        for i, delta in structure[chosen][2]:
            counts[i] += delta
            total_count += delta
        jumps += 1
        if record:
            times.append(t)
            history.append(tuple(counts))
            fired.append(chosen)

        if exceed_total is not None and total_count > exceed_total:
            reason = 'exceeded'
            break
        if target_box is not None and _in_box(counts, target_box):
            reason = 'entered'
            break
        if jumps >= max_jumps:
            reason = 'max_jumps'
            break

    if not record:
        times.append(t)
        history.append(tuple(counts))
    return times, history, fired, reason, t


def _in_box(counts, box) -> bool:
    lower, upper = box
    return all(lo <= n <= hi for n, lo, hi in zip(counts, lower, upper))


def _ensemble_task(args):
    """Tâche indépendante (sérialisable) pour les ensembles de trajectoires"""
    (network, volume, counts0, horizon, seed, trial, max_jumps, record,
     exceed_total, target_box) = args
    structure = _ssa_structure(network, volume)
    return _ssa_kernel(structure, volume, counts0, horizon, stream(seed, trial), max_jumps,
                       record=record, exceed_total=exceed_total, target_box=target_box)


class DynamicsService:
    """Intégration déterministe et simulation stochastique"""

    def __init__(self, config=None):
        self.config = config or get_config()

    # Déterministe

    def mass_action_field(self, network: Network, x) -> np.ndarray:
        """Σ_r λ_r(x) c^r"""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise NegativeConcentrationError(f"Concentration négative: {x.tolist()}")
        return mass_action_rates(network, x) @ network.vector_matrix

    def integrate_ode(self, network: Network, x0, T: float,
                      rel_tol: Optional[float] = None, abs_tol: Optional[float] = None,
                      max_step: float = np.inf, blowup_cap: Optional[float] = None) -> Trajectory:
        """Runge-Kutta 5(4) adaptatif avec projection de positivité"""
        x0 = np.asarray(x0, dtype=float)
        if np.any(x0 < 0):
            raise NegativeConcentrationError(f"Condition initiale négative: {x0.tolist()}")
        if T <= 0:
            raise ValueError("T doit être > 0")
        rtol = rel_tol if rel_tol is not None else self.config.ODE_REL_TOL
        atol = abs_tol if abs_tol is not None else self.config.ODE_ABS_TOL
        cap = blowup_cap if blowup_cap is not None else self.config.ODE_BLOWUP_CAP
        min_step = self.config.ODE_MIN_STEP

        vectors = network.vector_matrix.astype(float)

        def field(_t, y):
            return mass_action_rates(network, y) @ vectors

        def make_solver(t0, y0, first_step=None):
            return RK45(field, t0, y0, T, rtol=rtol, atol=atol, max_step=max_step,
                        first_step=first_step)

        solver = make_solver(0.0, x0.copy())
        times = [0.0]
        states = [x0.copy()]
        interpolants = []
        diagnostics = {'rejected_negative': 0, 'clamped': 0, 'stiffness': False}

        consecutive = 0
        while solver.status == 'running':
            t_prev, y_prev = solver.t, solver.y.copy()
            solver.step()

            if solver.status == 'failed':
                if np.sum(np.abs(y_prev)) > 1e-3 * cap:
                    raise BlowUpError(f"Divergence vers t = {t_prev:.6g}", time=t_prev)
                raise NumericalError(f"Échec de l'intégrateur à t = {t_prev:.6g}")

            y = solver.y
            if np.min(y) < 0:
                if np.min(y) < -atol:
                    diagnostics['rejected_negative'] += 1
                    consecutive += 1
                    if consecutive > MAX_REJECTIONS:
                        raise NumericalError(f"Positivité impossible à maintenir vers t = {t_prev:.6g}")
                    step = (solver.t - t_prev) / 2
                    if step < min_step:
                        self._stiffness(diagnostics, t_prev)
                    solver = make_solver(t_prev, y_prev, first_step=max(step, min_step))
                    continue
                np.maximum(y, 0.0, out=y)
                diagnostics['clamped'] += 1

            consecutive = 0
            interpolants.append(solver.dense_output())
            times.append(solver.t)
            states.append(y.copy())

            if np.sum(np.abs(y)) > cap:
                logger.warning(f"Explosion détectée à t = {solver.t:.6g} (‖x‖₁ > {cap:g})")
                raise BlowUpError(f"‖x‖₁ dépasse {cap:g} à t = {solver.t:.6g}", time=solver.t)
            if solver.step_size is not None and solver.step_size < min_step and solver.status == 'running':
                self._stiffness(diagnostics, solver.t)

        dense = OdeSolution(np.array(times), interpolants) if interpolants else None
        return Trajectory(times=np.array(times), states=np.array(states),
                          species=network.species, diagnostics=diagnostics, dense=dense)

    @staticmethod
    def _stiffness(diagnostics: dict, t: float) -> None:
        if not diagnostics['stiffness']:
            logger.warning(f"Pas d'intégration sous le plancher à t = {t:.6g}: système raide")
        diagnostics['stiffness'] = True

    # Stochastique

    def propensities(self, network: Network, volume: float, counts) -> np.ndarray:
        """Intensités v·Λ_{r,v}(n) de toutes les réactions"""
        counts = [int(c) for c in counts]
        values = []
        for rate, factors, _ in _ssa_structure(network, volume):
            a = rate
            for i, c in factors:
                if counts[i] < c:
                    a = 0.0
                    break
                for j in range(c):
                    a *= counts[i] - j
            values.append(a)
        return np.array(values)

    def propensity(self, network: Network, volume: float, counts,
                   reaction: Union[int, Reaction]) -> float:
        """v · k_r v^{−‖c_in‖₁} Π_i binom(n_i, c_i) c_i!"""
        if volume < 1:
            raise ValueError("Le volume doit être ≥ 1")
        if any(int(c) < 0 for c in counts):
            raise ValueError("Comptes négatifs")
        return float(self.propensities(network, volume, counts)[_reaction_index(network, reaction)])

    def lattice_counts(self, volume: float, x0, snap: bool = False) -> List[int]:
        """N_0 = v·x0, qui doit être entier sauf arrondi explicite"""
        scaled = np.asarray(x0, dtype=float) * volume
        counts = np.rint(scaled)
        if np.any(counts < 0):
            raise NegativeConcentrationError("Condition initiale négative")
        if not snap and np.any(np.abs(scaled - counts) > 1e-9 * np.maximum(1.0, np.abs(scaled))):
            raise ValueError(f"v·x0 n'est pas entier: {scaled.tolist()}")
        return [int(c) for c in counts]

    def ssa_simulate(self, network: Network, volume: float, x0, T: float, seed: int,
                     trial: int = 0, max_jumps: Optional[int] = None,
                     snap: bool = False, target_box=None) -> JumpPath:
        """Trajectoire de Gillespie reproductible pour une graine donnée"""
        if volume < 1:
            raise ValueError("Le volume doit être ≥ 1")
        counts0 = self.lattice_counts(volume, x0, snap=snap)
        structure = _ssa_structure(network, volume)
        times, history, fired, reason, _ = _ssa_kernel(
            structure, volume, counts0, T, stream(seed, trial),
            max_jumps or self.config.SSA_MAX_JUMPS, target_box=target_box)
        if reason == 'absorbed':
            logger.info(f"État absorbant atteint après {len(fired)} sauts")
        elif reason == 'max_jumps':
            logger.warning(f"Nombre maximal de sauts atteint ({len(fired)})")
        return JumpPath(volume=volume, times=np.array(times),
                        counts=np.array(history, dtype=np.int64).reshape(len(history), network.dimension),
                        reaction_ids=np.array(fired, dtype=np.int64), horizon=T,
                        species=network.species, absorbed=reason == 'absorbed', stop_reason=reason)

    def run_tasks(self, tasks: list, threads: Optional[int] = None) -> list:
        """Exécute des tâches indépendantes, en parallèle si threads > 1"""
        workers = threads if threads is not None else self.config.THREADS
        if workers and workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(_ensemble_task, tasks))
        return [_ensemble_task(task) for task in tasks]

    def sup_deviation(self, path: JumpPath, trajectory: Trajectory) -> float:
        """sup_{t ≤ T} ‖X_t^v − x(t)‖₁ évalué aux instants de saut (limites à gauche incluses)"""
        concentrations = path.concentrations
        start = np.minimum(path.times, path.horizon)
        end = np.append(start[1:], path.horizon)
        left = np.abs(concentrations - trajectory.at(start)).sum(axis=1)
        right = np.abs(concentrations - trajectory.at(end)).sum(axis=1)
        return float(max(left.max(), right.max()))

    def ensemble_lln(self, network: Network, volumes: Sequence[float], x0, T: float,
                     trials: int, seed: int, threads: Optional[int] = None) -> List[DeviationStats]:
        """Écarts à la limite déterministe, médiane et 95e centile par volume"""
        trajectory = self.integrate_ode(network, x0, T)
        table = []
        for v_index, volume in enumerate(volumes):
            counts0 = self.lattice_counts(volume, x0, snap=True)
            tasks = [(network, float(volume), counts0, T, seed, v_index * trials + k,
                      self.config.SSA_MAX_JUMPS, True, None, None) for k in range(trials)]
            deviations = []
            for times, history, fired, reason, _ in self.run_tasks(tasks, threads):
                path = JumpPath(volume=volume, times=np.array(times),
                                counts=np.array(history, dtype=np.int64).reshape(len(history), network.dimension),
                                reaction_ids=np.array(fired, dtype=np.int64), horizon=T)
                deviations.append(self.sup_deviation(path, trajectory))
            stats = DeviationStats(volume=volume, deviations=deviations)
            logger.info(f"v = {volume:g}: médiane {stats.median:.4g}, 95% {stats.p95:.4g}")
            table.append(stats)
        return table

    def estimate_containment(self, network: Network, volumes: Sequence[float], x0,
                             rho: float, gamma: float, T: float, trials: int, seed: int,
                             threads: Optional[int] = None) -> List[ContainmentEstimate]:
        """Fréquence de dépassement de ‖X^v‖₁ > ρ sur [0, T]"""
        x0 = np.asarray(x0, dtype=float)
        if np.sum(np.abs(x0)) > gamma:
            raise ValueError(f"‖x0‖₁ = {np.sum(np.abs(x0)):g} > γ = {gamma:g}")
        estimates = []
        for v_index, volume in enumerate(volumes):
            counts0 = self.lattice_counts(volume, x0, snap=True)
            tasks = [(network, float(volume), counts0, T, seed, v_index * trials + k,
                      self.config.SSA_MAX_JUMPS, False, rho * volume, None) for k in range(trials)]
            exceed = sum(1 for *_, reason, _t in self.run_tasks(tasks, threads)
                         if reason == 'exceeded')
            estimate = ContainmentEstimate(volume=volume, trials=trials, exceedances=exceed)
            if estimate.is_upper_bound:
                logger.info(f"v = {volume:g}: aucun dépassement, borne supérieure du taux")
            estimates.append(estimate)
        return estimates

    # Sections de Poincaré

    @staticmethod
    def poincare_section(trajectory: Trajectory, normal: Sequence[float], offset: float = 0.0,
                         projection: Sequence[int] = (0, 1), orientation: int = 1) -> np.ndarray:
        """Croisements interpolés de l'hyperplan ⟨n, x⟩ = offset dans un sens fixé"""
        states = np.asarray(trajectory.states, dtype=float)
        signed = orientation * (states @ np.asarray(normal, dtype=float) - offset)
        before, after = signed[:-1], signed[1:]
        crossing = np.nonzero((before < 0) & (after >= 0))[0]
        if crossing.size == 0:
            return np.empty((0, len(projection)))
        alpha = before[crossing] / (before[crossing] - after[crossing])
        points = states[crossing] + alpha[:, None] * (states[crossing + 1] - states[crossing])
        return points[:, list(projection)]

    @staticmethod
    def detect_period(points: np.ndarray, max_period: int = 8, tol: float = 1e-3) -> Optional[int]:
        """Plus petite période ≤ max_period de la suite des croisements, sinon None"""
        points = np.asarray(points, dtype=float)
        for period in range(1, max_period + 1):
            if len(points) <= 2 * period:
                break
            gaps = np.linalg.norm(points[period:] - points[:-period], axis=1)
            if np.all(gaps <= tol):
                return period
        return None

    @staticmethod
    def bounding_box(trajectory: Trajectory, after: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
        """Boîte englobante de la trajectoire après le transitoire"""
        mask = trajectory.times >= after
        states = trajectory.states[mask]
        return states.min(axis=0), states.max(axis=0)


# Instance globale du service
dynamics_service = DynamicsService()
