#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service de grandes déviations: coordonnées toriques, fonction de Lyapunov U_a,
signes des dérives en espace log, lagrangien, action, constantes constructives
et cellules de recouvrement de l'image sphérique
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import orth
from scipy.optimize import linprog
from scipy.special import gammaln, xlogy

from config.config import get_config

from ..errors import NegativeConcentrationError, UnitPointError
from ..models import (
    ActionResult, ConstantLedger, FaceLattice, LagrangianResult, Network, SignedLog,
    ToricPoint, WeightVector, reaction_vector, weighted_reaction_vector,
)
from ..utils.logmath import log_abs_expm1, signed_logsumexp
from .dynamics_service import dynamics_service, mass_action_rates
from .polytope_service import polytope_service

logger = logging.getLogger(__name__)

SPHERE_DIAMETER = 2.0
LINE_SEARCH_STEPS = 40
MAX_NEWTON_REJECTIONS = 3


def _series_g(u: float) -> float:
    """(1+u)·log1p(u) − u, stable pour u petit"""
    if abs(u) < 1e-4:
        return u * u / 2 - u ** 3 / 6 + u ** 4 / 12
    if u <= -1.0:
        return 1.0
    return (1 + u) * math.log1p(u) - u


def fibonacci_sphere(dimension: int, count: int) -> np.ndarray:
    """Directions unitaires quasi uniformes (cercle régulier en dimension 2)"""
    if dimension == 1:
        return np.array([[1.0], [-1.0]])
    if dimension == 2:
        angles = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if dimension == 3:
        k = np.arange(count) + 0.5
        polar = np.arccos(1 - 2 * k / count)
        azimuth = np.pi * (1 + 5 ** 0.5) * k
        return np.stack([np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar),
                         np.cos(polar)], axis=1)
    rng = np.random.default_rng(0)
    points = rng.standard_normal((count, dimension))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


class LDPService:
    """Grandeurs de grandes déviations et vérifications numériques de dérive"""

    def __init__(self, config=None):
        self.config = config or get_config()
        self._span_cache: Dict[bytes, bool] = {}

    # Coordonnées toriques

    @staticmethod
    def toric_decompose(z) -> ToricPoint:
        """θ = exp‖log z‖₂, w = log z / log θ"""
        z = np.asarray(z, dtype=float)
        if np.any(z <= 0):
            raise ValueError("z doit être strictement positif")
        logs = np.log(z)
        log_theta = float(np.linalg.norm(logs))
        if log_theta == 0.0:
            raise UnitPointError("Le point (1,...,1) n'a pas de direction torique")
        return ToricPoint(log_theta=log_theta, w=tuple(logs / log_theta))

    @staticmethod
    def toric_compose(point: ToricPoint) -> np.ndarray:
        """z = θ^w"""
        return np.exp(point.log_theta * point.direction())

    @staticmethod
    def toric_ray(direction: Sequence[float], log_thetas: Sequence[float]) -> np.ndarray:
        """Points θ^w de la demi-droite torique T^w"""
        w = np.asarray(direction, dtype=float)
        w = w / np.linalg.norm(w)
        return np.exp(np.outer(np.asarray(log_thetas, dtype=float), w))

    # Fonction de Lyapunov

    @staticmethod
    def lyapunov_value(a: WeightVector, x) -> float:
        """U_a(x) = d + 1 + Σ a_i x_i (log x_i − 1)"""
        x = np.asarray(x, dtype=float)
        weights = a.as_floats()
        return float(len(x) + 1 + np.sum(weights * (xlogy(x, x) - x)))

    @staticmethod
    def lyapunov_gradient(a: WeightVector, x) -> np.ndarray:
        """∂_i U_a = a_i log x_i"""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return a.as_floats() * np.log(x)

    def lyapunov_ode_drift(self, network: Network, a: WeightVector, x) -> float:
        """⟨∇U_a(x), f(x)⟩ évalué directement en flottants"""
        x = np.asarray(x, dtype=float)
        weighted = np.array([[float(c) for c in weighted_reaction_vector(r, a)]
                             for r in network.reactions])
        return float(mass_action_rates(network, x) @ (weighted @ np.log(x)))

    def ode_drift_of_U(self, network: Network, a: WeightVector, point: ToricPoint) -> SignedLog:
        """
        dU_a/dt le long de la demi-droite torique:
        (log θ) Σ_r k_r ⟨w, c^{r,a}⟩ θ^{⟨w, c_in^r⟩}, accumulé en log signé
        """
        if point.log_theta <= 0:
            raise ValueError("θ doit être > 1")
        w = point.direction()
        logs, signs = [], []
        for reaction in network.reactions:
            product = float(np.dot(w, [float(c) for c in weighted_reaction_vector(reaction, a)]))
            if product == 0.0:
                continue
            exponent = float(np.dot(w, reaction.input.coefficients)) * point.log_theta
            logs.append(math.log(reaction.rate_constant) + exponent + math.log(abs(product)))
            signs.append(1 if product > 0 else -1)
        sign, magnitude = signed_logsumexp(logs, signs, strict=True)
        if sign == 0:
            return SignedLog(0, -math.inf)
        return SignedLog(sign, magnitude + math.log(point.log_theta))

    def absorption_sweep(self, network: Network, a: WeightVector, log_radius: float,
                         spacing: float = 1e-3, count: Optional[int] = None) -> List[Tuple[np.ndarray, SignedLog]]:
        """Signe de dU_a/dt sur une grille de directions à rayon log fixé"""
        d = network.dimension
        if count is None:
            count = int(math.ceil(2 * math.pi / spacing)) if d == 2 else 2000
        sweep = []
        for w in fibonacci_sphere(d, count):
            sweep.append((w, self.ode_drift_of_U(network, a, ToricPoint(log_radius, tuple(w)))))
        negatives = sum(1 for _, s in sweep if s.sign < 0)
        logger.info(f"Balayage à log θ = {log_radius:g}: {negatives}/{len(sweep)} directions dissipatives")
        return sweep

    def empirical_stability_radius(self, network: Network, a: WeightVector,
                                   candidates: Sequence[float], count: int = 720) -> Optional[float]:
        """Plus petit rayon log candidat à partir duquel toute la grille est négative"""
        verdicts = []
        for radius in sorted(candidates):
            sweep = self.absorption_sweep(network, a, radius, count=count)
            verdicts.append((radius, all(s.sign < 0 for _, s in sweep)))
        found = None
        for radius, ok in reversed(verdicts):
            if not ok:
                break
            found = radius
        return found

    # Dérive du générateur

    def _log_jump_intensity(self, reaction, log_volume: float, counts: np.ndarray) -> float:
        """log Λ_{r,v}(x) avec n = v·x (−inf si molécules insuffisantes)"""
        total = math.log(reaction.rate_constant) - reaction.input.order * log_volume
        for i, c in enumerate(reaction.input.coefficients):
            for j in range(c):
                if counts[i] - j <= 0:
                    return -math.inf
                total += math.log(counts[i] - j)
        return total

    def _delta_u(self, a: np.ndarray, x: np.ndarray, vector: Sequence[int], volume: float) -> float:
        """U_a(x + c/v) − U_a(x), sans soustraction catastrophique"""
        total = 0.0
        for i, c in enumerate(vector):
            if c == 0:
                continue
            h = c / volume
            if x[i] > 0:
                total += a[i] * (h * math.log(x[i]) + x[i] * _series_g(h / x[i]))
            else:
                total += a[i] * (h * math.log(h) - h)
        return total

    def generator_drift_sign(self, network: Network, a: WeightVector, volume: float, x) -> SignedLog:
        """
        L_v U_a^v(x) = v Σ_r Λ_{r,v}(x) (exp(v·Δ_r) − 1), Δ_r = log U_a(x + c^r/v) − log U_a(x)
        """
        x = np.asarray(x, dtype=float)
        if volume < 1:
            raise ValueError("Le volume doit être ≥ 1")
        if np.any(x < 0):
            raise NegativeConcentrationError("Point hors de l'orthant positif")
        weights = a.as_floats()
        log_volume = math.log(volume)
        counts = x * volume
        base = self.lyapunov_value(a, x)
        logs, signs = [], []
        for reaction in network.reactions:
            log_intensity = self._log_jump_intensity(reaction, log_volume, counts)
            if log_intensity == -math.inf:
                continue
            if np.any(counts + np.asarray(reaction_vector(reaction)) < 0):
                continue
            ratio = self._delta_u(weights, x, reaction_vector(reaction), volume) / base
            scaled = volume * math.log1p(ratio)
            sign, log_mag = log_abs_expm1(scaled)
            if sign == 0:
                continue
            logs.append(log_volume + log_intensity + log_mag)
            signs.append(sign)
        sign, magnitude = signed_logsumexp(logs, signs)
        return SignedLog(sign, magnitude)

    def generator_drift_direct(self, network: Network, a: WeightVector, volume: float, x) -> float:
        """Évaluation directe v Σ Λ (U(x+c/v)^v / U(x)^v − 1), pour v modéré"""
        x = np.asarray(x, dtype=float)
        base = self.lyapunov_value(a, x)
        counts = x * volume
        total = 0.0
        for reaction in network.reactions:
            intensity = reaction.rate_constant * volume ** (-reaction.input.order)
            for i, c in enumerate(reaction.input.coefficients):
                for j in range(c):
                    intensity *= max(counts[i] - j, 0.0)
            if intensity == 0.0:
                continue
            shifted = x + np.asarray(reaction_vector(reaction), dtype=float) / volume
            if np.any(shifted < 0):
                continue
            total += intensity * ((self.lyapunov_value(a, shifted) / base) ** volume - 1.0)
        return volume * total

    def sample_standard_points(self, dimension: int, rho_low: float, rho_high: float,
                               samples: int, seed: int) -> List[np.ndarray]:
        """Points de l'orthant positif avec ‖x‖₁ uniforme dans [ρ_low, ρ_high]"""
        rng = np.random.default_rng(seed)
        radii = rng.uniform(rho_low, rho_high, samples)
        directions = rng.dirichlet(np.full(dimension, 0.5), samples)
        return [r * w for r, w in zip(radii, directions)]

    def generator_drift_sweep(self, network: Network, a: WeightVector, rho_low: float,
                              rho_high: float, samples: int, seed: int) -> List[Tuple[np.ndarray, float, SignedLog]]:
        """
        Signe de la dérive du générateur en des points standard, avec v = e^{‖x‖₁};
        chaque point est ramené sur le réseau (1/v)ℕ^d
        """
        results = []
        for x in self.sample_standard_points(network.dimension, rho_low, rho_high, samples, seed):
            volume = math.exp(float(np.sum(x)))
            x = np.asarray(dynamics_service.lattice_counts(volume, x, snap=True), dtype=float) / volume
            results.append((x, volume, self.generator_drift_sign(network, a, volume, x)))
        return results

    def empirical_generator_radius(self, network: Network, a: WeightVector,
                                   candidates: Sequence[float], samples: int = 200,
                                   seed: int = 0) -> Optional[float]:
        """Plus petit ρ₀ candidat tel que la dérive soit négative sur [ρ₀, 10ρ₀]"""
        found = None
        for rho0 in sorted(candidates, reverse=True):
            sweep = self.generator_drift_sweep(network, a, rho0, 10 * rho0, samples, seed)
            if not all(s.sign < 0 for _, _, s in sweep):
                break
            found = rho0
        if found is not None:
            logger.info(f"ρ₀ empirique: {found:g}")
        return found

    def estimate_zeta_star(self, network: Network, a: WeightVector, samples: int = 500,
                           seed: int = 0, radius: float = 50.0,
                           volume_range: Tuple[float, float] = (1.0, 1e3)) -> float:
        """
        Maximiseur empirique de |ζ_r(v,x)|, avec
        ζ_r = U(x)·v·log(U(x+c/v)/U(x)) − ⟨∇_{r,v}U(x), c^{r,a}⟩
        """
        rng = np.random.default_rng(seed)
        weights = a.as_floats()
        best = 0.0
        for _ in range(samples):
            x = rng.dirichlet(np.ones(network.dimension)) * rng.uniform(1.0, radius)
            volume = float(np.exp(rng.uniform(np.log(volume_range[0]), np.log(volume_range[1]))))
            base = self.lyapunov_value(a, x)
            for reaction in network.reactions:
                vector = reaction_vector(reaction)
                shifted = x + np.asarray(vector, dtype=float) / volume
                if np.any(shifted < 0):
                    continue
                ratio = self._delta_u(weights, x, vector, volume) / base
                slope = sum(weights[i] * c * (math.log(x[i]) if x[i] > 0 else
                                              (math.log(c / volume) if c > 0 else 0.0))
                            for i, c in enumerate(vector) if c)
                zeta = base * volume * math.log1p(ratio) - slope
                best = max(best, abs(zeta))
        return best

    # Lagrangien

    def _positively_spans(self, vectors: np.ndarray) -> bool:
        key = vectors.tobytes() + bytes(str(vectors.shape), 'ascii')
        cached = self._span_cache.get(key)
        if cached is not None:
            return cached
        m, d = vectors.shape
        result = True
        for i in range(d):
            for sign in (1.0, -1.0):
                target = np.zeros(d)
                target[i] = sign
                lp = linprog(np.zeros(m), A_eq=vectors.T, b_eq=target,
                             bounds=[(0, None)] * m, method='highs')
                if lp.status != 0:
                    result = False
                    break
            if not result:
                break
        self._span_cache[key] = result
        return result

    def _minimal_face(self, vectors: np.ndarray, xi: np.ndarray) -> Tuple[bool, np.ndarray]:
        """
        Réactions de la face minimale du cône positif contenant ξ
        (infaisable si ξ hors du cône)
        """
        m = vectors.shape[0]
        if self._positively_spans(vectors):
            return True, np.ones(m, dtype=bool)
        bounds = [(0, 1e6)] * m
        feasible = linprog(np.zeros(m), A_eq=vectors.T, b_eq=xi, bounds=bounds, method='highs')
        if feasible.status != 0:
            return False, np.zeros(m, dtype=bool)
        face = np.zeros(m, dtype=bool)
        for r in range(m):
            objective = np.zeros(m)
            objective[r] = -1.0
            lp = linprog(objective, A_eq=vectors.T, b_eq=xi, bounds=bounds, method='highs')
            if lp.status == 0 and -lp.fun > 1e-9:
                face[r] = True
        return True, face

    def _maximize_dual(self, rates: np.ndarray, vectors: np.ndarray, xi: np.ndarray):
        """Newton amorti sur G(φ) = ⟨φ,ξ⟩ − Σ λ_r (e^{⟨φ,u_r⟩} − 1), repli en montée de gradient"""
        tol = self.config.LAGRANGIAN_TOL
        max_iter = self.config.LAGRANGIAN_MAX_ITER

        def objective(phi):
            with np.errstate(over='ignore'):
                e = np.exp(vectors @ phi)
            return float(phi @ xi - rates @ (e - 1.0)), e

        phi = np.zeros(vectors.shape[1])
        value, e = objective(phi)
        rejections = 0
        for iteration in range(1, max_iter + 1):
            weighted = rates * e
            gradient = xi - vectors.T @ weighted
            scale = 1.0 + np.linalg.norm(xi) + np.linalg.norm(vectors.T @ weighted)
            if np.linalg.norm(gradient) <= tol * scale:
                return phi, value, iteration, True
            hessian = -(vectors.T * weighted) @ vectors
            use_newton = rejections < MAX_NEWTON_REJECTIONS
            direction = gradient
            if use_newton:
                try:
                    direction = np.linalg.solve(hessian, -gradient)
                except np.linalg.LinAlgError:
                    use_newton = False
            slope = float(gradient @ direction)
            if slope <= 0:
                direction, slope, use_newton = gradient, float(gradient @ gradient), False

            step = 1.0
            accepted = False
            for _ in range(LINE_SEARCH_STEPS):
                candidate = phi + step * direction
                cand_value, cand_e = objective(candidate)
                if np.isfinite(cand_value) and cand_value >= value + 1e-4 * step * slope:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                if use_newton:
                    rejections += 1
                    continue
                # plus de progrès possible en précision machine
                return phi, value, iteration, np.linalg.norm(gradient) <= 1e-8 * scale
            if np.linalg.norm(candidate - phi) <= 1e-15 * (1.0 + np.linalg.norm(phi)):
                phi, value, e = candidate, cand_value, cand_e
                return phi, value, iteration, True
            phi, value, e = candidate, cand_value, cand_e
        return phi, value, max_iter, False

    def lagrangian(self, rates: Sequence[float], vectors, xi) -> LagrangianResult:
        """L(λ, ξ) = sup_θ ⟨θ, ξ⟩ − Σ_r λ_r (e^{⟨θ, c^r⟩} − 1)"""
        rates = np.asarray(rates, dtype=float)
        vectors = np.asarray(vectors, dtype=float)
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if np.any(rates < 0):
            raise ValueError("Taux négatifs")
        if not np.any(rates > 0):
            raise ValueError("Tous les taux sont nuls")

        active = rates > 0
        lam, cs = rates[active], vectors[active]
        d = vectors.shape[1]

        feasible, face = self._minimal_face(cs, xi)
        if not feasible:
            return LagrangianResult(value=math.inf, argmax_theta=None, feasible=False,
                                    degenerate_span=np.linalg.matrix_rank(cs) < d)

        constant = float(lam[~face].sum())
        if not face.any():
            return LagrangianResult(value=constant, argmax_theta=None, feasible=True,
                                    boundary=True, degenerate_span=True)

        basis = orth(cs[face].T)
        degenerate = basis.shape[1] < d
        phi, value, iterations, converged = self._maximize_dual(
            lam[face], cs[face] @ basis, basis.T @ xi)
        if not converged:
            logger.warning(f"Newton non convergé après {iterations} itérations: L = +∞")
            return LagrangianResult(value=math.inf, argmax_theta=None, feasible=False,
                                    iterations=iterations, converged=False,
                                    degenerate_span=degenerate)
        theta = basis @ phi
        return LagrangianResult(value=max(value, 0.0) + constant, argmax_theta=theta, feasible=True,
                                iterations=iterations, converged=True,
                                degenerate_span=degenerate, boundary=not face.all())

    def _lagrangian_loop(self, rates: np.ndarray, vectors: np.ndarray, xis: np.ndarray):
        n, d = xis.shape
        values = np.empty(n)
        thetas = np.zeros((n, d))
        for k in range(n):
            if not np.any(rates[k] > 0):
                values[k] = 0.0 if not np.any(xis[k]) else math.inf
                continue
            result = self.lagrangian(rates[k], vectors, xis[k])
            values[k] = result.value
            if result.argmax_theta is not None:
                thetas[k] = result.argmax_theta
        return values, thetas

    def lagrangian_batch(self, rates: np.ndarray, vectors: np.ndarray,
                         xis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Lagrangiens de plusieurs segments; Newton vectorisé quand les vecteurs
        engendrent positivement l'espace et que tous les taux sont positifs
        """
        rates = np.asarray(rates, dtype=float)
        vectors = np.asarray(vectors, dtype=float)
        xis = np.asarray(xis, dtype=float)
        n, d = xis.shape
        if not (np.all(rates > 0) and self._positively_spans(vectors)):
            return self._lagrangian_loop(rates, vectors, xis)

        tol = self.config.LAGRANGIAN_TOL
        theta = np.zeros((n, d))

        def evaluate(th):
            with np.errstate(over='ignore'):
                e = np.exp(th @ vectors.T)
            return np.einsum('ij,ij->i', th, xis) - np.sum(rates * (e - 1.0), axis=1), e

        value, e = evaluate(theta)
        for _ in range(self.config.LAGRANGIAN_MAX_ITER):
            weighted = rates * e
            gradient = xis - weighted @ vectors
            scale = 1.0 + np.linalg.norm(xis, axis=1) + np.linalg.norm(weighted @ vectors, axis=1)
            active = np.linalg.norm(gradient, axis=1) > tol * scale
            if not active.any():
                break
            hessian = -np.einsum('nr,ri,rj->nij', weighted, vectors, vectors)
            try:
                direction = np.linalg.solve(hessian, -gradient[..., None])[..., 0]
            except np.linalg.LinAlgError:
                logger.debug("Hessien singulier: résolution segment par segment")
                return self._lagrangian_loop(rates, vectors, xis)
            direction[~active] = 0.0
            slope = np.einsum('ij,ij->i', gradient, direction)
            step = np.ones(n)
            pending = active.copy()
            new_theta, new_value, new_e = theta.copy(), value.copy(), e.copy()
            for _ in range(LINE_SEARCH_STEPS):
                candidate = theta + step[:, None] * direction
                cand_value, cand_e = evaluate(candidate)
                ok = pending & np.isfinite(cand_value) & (cand_value >= value + 1e-4 * step * slope)
                new_theta[ok], new_value[ok], new_e[ok] = candidate[ok], cand_value[ok], cand_e[ok]
                pending &= ~ok
                if not pending.any():
                    break
                step[pending] *= 0.5
            stalled = np.all(new_theta == theta, axis=1) & active
            theta, value, e = new_theta, new_value, new_e
            if stalled.all():
                break
        return np.maximum(value, 0.0), theta

    # Action

    def action(self, network: Network, times, states, x0=None,
               max_velocity_ratio: float = 1e3) -> ActionResult:
        """I = Σ_k L(λ(z_{k+½}), (z_{k+1} − z_k)/Δt) Δt (règle du point milieu)"""
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if np.any(states < 0):
            raise NegativeConcentrationError("Le chemin sort de l'orthant positif")
        if x0 is not None and not np.allclose(states[0], np.asarray(x0, dtype=float),
                                              rtol=1e-9, atol=1e-12):
            raise ValueError("Le chemin ne part pas de x0")
        steps = np.diff(times)
        if np.any(steps <= 0):
            raise ValueError("Les temps doivent être strictement croissants")

        midpoints = 0.5 * (states[1:] + states[:-1])
        velocities = np.diff(states, axis=0) / steps[:, None]
        rates = np.array([mass_action_rates(network, z) for z in midpoints])
        values, _ = self.lagrangian_batch(rates, network.vector_matrix.astype(float), velocities)

        speeds = np.linalg.norm(velocities, axis=1)
        reference = np.median(speeds) if len(speeds) else 0.0
        jumps = bool(np.any(speeds > max_velocity_ratio * (1.0 + reference)))
        if jumps:
            logger.warning("Chemin non absolument continu: saut entre deux états consécutifs")
        infinite = [int(k) for k in np.nonzero(~np.isfinite(values))[0]]
        total = math.inf if infinite else float(np.sum(values * steps))
        return ActionResult(value=total, lagrangians=values, steps=steps,
                            not_absolutely_continuous=jumps, infinite_segments=infinite)

    # Constantes constructives

    def proof_constants(self, network: Network, a: WeightVector,
                        overrides: Optional[dict] = None) -> ConstantLedger:
        """c*, κ_r, K₁, puis K₅, K₀ et la chaîne C₀..C_{2d}"""
        overrides = dict(overrides or {})
        configured = set()

        def pick(name, default):
            if name in overrides:
                configured.add(name)
                return float(overrides[name])
            return default

        inputs = [np.asarray(r.input.coefficients, dtype=float) for r in network.reactions]
        weighted = [np.array([float(c) for c in weighted_reaction_vector(r, a)])
                    for r in network.reactions]
        distances = [np.linalg.norm(p - q) for p in inputs for q in inputs]
        c_star = pick('c_star', float(max(distances + [np.linalg.norm(v) for v in weighted])))

        def xi(k: int) -> float:
            return 1.0 if k == 0 else math.exp(gammaln(k + 1) - k * math.log(k))

        kappa = tuple(float(np.prod([xi(c) for c in r.input.coefficients]))
                      for r in network.reactions)
        rates = [r.rate_constant for r in network.reactions]
        K1 = pick('K1', max(rates) / min(k * r for k, r in zip(kappa, rates)))

        K2 = self.config.LEDGER_K2
        K3 = self.config.LEDGER_K3
        zeta = self.config.LEDGER_ZETA_STAR
        configured.update({'K2', 'K3', 'zeta_star'})
        K2 = float(overrides.get('K2', K2))
        K3 = float(overrides.get('K3', K3))
        zeta = float(overrides.get('zeta_star', zeta))

        K5 = pick('K5', 4 * K1 * K3 * math.exp(zeta))
        K0 = pick('K0', 4 * network.size * K5 / K2)

        chain = [pick('C0', 2 * zeta / c_star)]
        for _ in range(network.dimension):
            exponent = 2 * c_star * chain[-1]
            odd = K0 * math.exp(exponent) if exponent < 700 else math.inf
            chain.append(odd)
            chain.append(odd + self.config.LEDGER_C_INCREMENT)

        rho0 = overrides.get('rho0')
        if rho0 is not None:
            configured.add('rho0')
        return ConstantLedger(c_star=c_star, kappa=kappa, K1=K1, K2=K2, K3=K3, K5=K5, K0=K0,
                              zeta_star=zeta, C=tuple(chain),
                              rho0=None if rho0 is None else float(rho0),
                              configured=frozenset(configured))

    # Recouvrement

    @staticmethod
    def spherical_image_face(lattice: FaceLattice, direction, tol: float = 1e-12):
        """Face F telle que w ∈ F*, c'est-à-dire la face exposée par w"""
        w = np.asarray(direction, dtype=float)
        points = np.array([[float(c) for c in p] for p in lattice.polytope.points])
        scores = points @ w
        best = scores.max()
        exposed = frozenset(int(i) for i in np.nonzero(scores >= best - tol * (1 + abs(best)))[0])
        return lattice.face_with_vertices(exposed)

    @staticmethod
    def _sphere_distance(generators, direction: np.ndarray) -> float:
        """Distance de w (unitaire) à Co(generators) ∩ S"""
        projection = polytope_service.cone_projection(generators, direction)
        norm = np.linalg.norm(projection)
        if norm < 1e-15:
            return math.sqrt(2.0)
        return float(np.linalg.norm(direction - projection / norm))

    def covering_cells(self, lattice: FaceLattice, ledger: ConstantLedger, direction,
                       log_theta: float) -> List[Tuple[int, int]]:
        """Cellules (W*_{j,ι})^{ε_j,δ_j} contenant w pour θ donné par log θ"""
        if log_theta <= 0:
            raise ValueError("θ doit être > 1")
        w = np.asarray(direction, dtype=float)
        w = w / np.linalg.norm(w)
        top = lattice.polytope.ambient_dim - 1
        cells = []
        for face in lattice.faces:
            delta = ledger.delta(face.dim, log_theta)
            if face.dim == top:
                if self._sphere_distance(face.normal_generators, w) < delta:
                    cells.append(face.key)
                continue
            epsilon = ledger.epsilon(face.dim, log_theta)
            if self._in_eroded_inflation(lattice, face, w, epsilon, delta):
                cells.append(face.key)
        return cells

    def _in_eroded_inflation(self, lattice: FaceLattice, face, w: np.ndarray,
                             epsilon: float, delta: float) -> bool:
        """Existe-t-il u ∈ F* à distance ≥ ε de ∂F* avec ‖w − u‖ < δ ?"""
        if delta >= SPHERE_DIAMETER and epsilon <= 0:
            return True
        if epsilon >= SPHERE_DIAMETER:
            return False
        boundary = [lattice.get(key).normal_generators for key in lattice.parents.get(face.key, ())]
        generators = np.asarray(face.normal_generators, dtype=float)

        projection = polytope_service.cone_projection(face.normal_generators, w)
        norm = np.linalg.norm(projection)
        start = projection / norm if norm > 1e-15 else None
        units = generators / np.linalg.norm(generators, axis=1, keepdims=True)
        center = units.sum(axis=0)
        if np.linalg.norm(center) < 1e-15:
            center = start if start is not None else units[0]
        center = center / np.linalg.norm(center)
        if start is None:
            start = center

        for t in np.linspace(0.0, 1.0, 33):
            u = (1 - t) * start + t * center
            if np.linalg.norm(u) < 1e-15:
                continue
            u = u / np.linalg.norm(u)
            if np.linalg.norm(w - u) >= delta:
                continue
            clearance = min((self._sphere_distance(g, u) for g in boundary), default=math.inf)
            if clearance >= epsilon:
                return True
        return False


# Instance globale du service
ldp_service = LDPService()
