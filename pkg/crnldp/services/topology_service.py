#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service d'analyse topologique: classification des réactions, siphons,
propriété fortement (P,a)-endotactique, recherche du vecteur de poids,
verdict ASE et couverture positive
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Union

from config.config import get_config

from ..errors import NotInRPError, ZeroProjectionError
from ..models import (
    ASEReport, EndotacticVerdict, Network, Reaction, ReactionClass,
    SiphonReport, SupportSet, Violation, WeightVector,
    reaction_vector, restricted_reaction_indices, weighted_reaction_vector,
)
from ..utils.exact import as_fractions, dot, exact_linprog, is_nonnegative_combination
from .polytope_service import polytope_service

logger = logging.getLogger(__name__)


class TopologyService:
    """Vérification exacte des conditions topologiques du réseau"""

    def __init__(self, config=None):
        self.config = config or get_config()
        self.polytopes = polytope_service

    # Classification

    def classify_reaction(self, network: Network, support: SupportSet, a: WeightVector,
                          direction: Sequence, reaction: Union[int, Reaction],
                          strict: bool = False) -> ReactionClass:
        """Classe (w,a) d'une réaction de R(P)"""
        if isinstance(reaction, int):
            reaction = network.reactions[reaction]
        projected_w = as_fractions(support.project(list(direction)))
        if all(c == 0 for c in projected_w):
            raise ZeroProjectionError("π_P w = 0")

        if not support.contains_support(reaction.input.coefficients):
            if strict:
                raise NotInRPError(f"{reaction.describe(network.species)} n'est pas dans R(P)")
            return ReactionClass.NOT_IN_RP

        if not support.contains_support(reaction.output.coefficients):
            return ReactionClass.DISSIPATIVE

        product = dot(projected_w, support.project(weighted_reaction_vector(reaction, a)))
        if product < 0:
            return ReactionClass.DISSIPATIVE
        if product == 0:
            return ReactionClass.NULL
        return ReactionClass.EXPLOSIVE

    # Siphons

    @staticmethod
    def is_siphon(network: Network, support: SupportSet) -> bool:
        """Toute réaction produisant une espèce de P en consomme une"""
        members = set(support.indices)
        for reaction in network.reactions:
            if reaction.output.support & members and not reaction.input.support & members:
                return False
        return True

    def find_siphons(self, network: Network) -> SiphonReport:
        """Siphons minimaux par énumération des 2^d − 1 sous-ensembles"""
        minimal: List[SupportSet] = []
        for size in range(1, network.dimension + 1):
            for subset in combinations(range(network.dimension), size):
                if any(set(m.indices) <= set(subset) for m in minimal):
                    continue
                candidate = SupportSet(subset)
                if self.is_siphon(network, candidate):
                    minimal.append(candidate)
        logger.debug(f"Siphons minimaux: {[m.names(network.species) for m in minimal]}")
        return SiphonReport(minimal_siphons=minimal)

    # Propriété fortement endotactique

    def is_strongly_endotactic(self, network: Network, support: SupportSet,
                               a: WeightVector) -> EndotacticVerdict:
        """Vérifie la condition face par face sur les générateurs de N(F), en rationnels"""
        polytope = self.polytopes.build_polytope(network, support)
        lattice = self.polytopes.face_lattice(polytope)
        violations: List[Violation] = []

        for face in lattice.faces:
            on_face = self.polytopes.reaction_indices_on_face(polytope, face)
            leaving = [i for i in on_face
                       if not support.contains_support(network.reactions[i].output.coefficients)]
            inside = [i for i in on_face if i not in leaving]
            vectors = {i: support.project(weighted_reaction_vector(network.reactions[i], a))
                       for i in inside}

            explosive = False
            for i in inside:
                for normal in face.normal_generators:
                    if dot(normal, vectors[i]) > 0:
                        explosive = True
                        violations.append(Violation(face.key, as_fractions(normal), i,
                                                    ReactionClass.EXPLOSIVE))
            if leaving or explosive:
                continue

            # tous les ⟨n, c^{r,a}⟩ sont ≤ 0: un w = Σ λ_n n (λ > 0) annule R_F
            # exactement quand tous ces produits sont nuls
            barycenter = face.barycenter()
            if any(dot(barycenter, vectors[i]) < 0 for i in inside):
                continue
            direction = barycenter if any(barycenter) else face.normal_generators[0]
            violations.append(Violation(face.key, as_fractions(direction), None,
                                        ReactionClass.NULL))

        holds = not violations
        if polytope.is_degenerate:
            logger.info(f"Enveloppe dégénérée pour P = {support.names(network.species)}: "
                        f"extension par linéalité")
        return EndotacticVerdict(holds=holds, support=support,
                                 witness_a=a if holds else None,
                                 violations=violations, degenerate=polytope.is_degenerate)

    def facet_cone_precheck(self, network: Network, a: WeightVector) -> bool:
        """
        Critère suffisant: ⟨n_F, c^{r,a}⟩ < 0 pour toute facette F et toute
        réaction r de R_F (enveloppe de pleine dimension seulement)
        """
        support = SupportSet.full(network.dimension)
        polytope = self.polytopes.build_polytope(network, support)
        if polytope.is_degenerate:
            return False
        lattice = self.polytopes.face_lattice(polytope)
        for facet in lattice.by_dim(polytope.affine_dim - 1):
            normal = facet.normal_generators[0]
            for i in self.polytopes.reaction_indices_on_face(polytope, facet):
                if dot(normal, weighted_reaction_vector(network.reactions[i], a)) >= 0:
                    return False
        return True

    # Recherche du vecteur de poids

    def search_weight_vector(self, network: Network) -> Optional[WeightVector]:
        """Cherche a tel que le réseau soit fortement (S,a)-endotactique"""
        full = SupportSet.full(network.dimension)
        ones = WeightVector.ones(network.dimension)

        precheck = self.facet_cone_precheck(network, ones)
        if self.is_strongly_endotactic(network, full, ones).holds:
            logger.info(f"Poids a = 1 vérifié (pré-test du cône: {precheck})")
            return ones

        for margin in (self.config.WITNESS_MARGIN, self.config.WITNESS_MARGIN_RETRY):
            candidate = self._solve_weight_lp(network, Fraction(margin))
            if candidate is None:
                continue
            if self.is_strongly_endotactic(network, full, candidate).holds:
                logger.info(f"Poids trouvé et vérifié: a = ({candidate})")
                return candidate
            logger.warning(f"Candidat a = ({candidate}) rejeté par la vérification exacte")

        logger.info("Recherche du vecteur de poids infructueuse")
        return None

    def _solve_weight_lp(self, network: Network, margin: Fraction) -> Optional[WeightVector]:
        """
        PL en (a, s), sommet reconstruit en rationnels: maximise la marge s sous
        ⟨n, c^{r,a}⟩ ≤ 0 pour n ∈ N(F), r ∈ R_F,
        Σ_{r ∈ R_F} ⟨n̄_F, c^{r,a}⟩ + s ≤ 0 au barycentre n̄_F,
        a_i ≥ s, ‖a‖₁ = d, s ≤ marge
        """
        d = network.dimension
        full = SupportSet.full(d)
        polytope = self.polytopes.build_polytope(network, full)
        lattice = self.polytopes.face_lattice(polytope)

        a_ub: List[List[Fraction]] = []
        b_ub: List[Fraction] = []
        seen = set()

        def add(row, bound):
            key = (tuple(row), bound)
            if key not in seen:
                seen.add(key)
                a_ub.append(list(row))
                b_ub.append(bound)

        for face in lattice.faces:
            on_face = self.polytopes.reaction_indices_on_face(polytope, face)
            vectors = [reaction_vector(network.reactions[i]) for i in on_face]
            for vector in vectors:
                for normal in face.normal_generators:
                    row = [Fraction(n * c) for n, c in zip(normal, vector)] + [Fraction(0)]
                    if any(row):
                        add(row, Fraction(0))
            barycenter = face.barycenter()
            row = [Fraction(sum(barycenter[i] * v[i] for v in vectors)) for i in range(d)] + [Fraction(1)]
            add(row, Fraction(0))

        for i in range(d):
            row = [Fraction(0)] * (d + 1)
            row[i] = Fraction(-1)
            row[d] = Fraction(1)
            add(row, Fraction(0))
        add([Fraction(0)] * d + [Fraction(1)], margin)

        objective = [0] * d + [-1]
        # un sommet admissible suffit: search_weight_vector revérifie le candidat
        result = exact_linprog(objective, a_ub, b_ub, [[1] * d + [0]], [d], fallback=False)
        if result.x is None or -result.value <= 0:
            return None
        return WeightVector(result.x[:d])

    # Verdict ASE

    def ase_report(self, network: Network, check_subsets: bool = True) -> ASEReport:
        """Siphons + recherche de a, puis cohérence sur tous les P avec R(P) non vide"""
        siphons = self.find_siphons(network)
        weight = self.search_weight_vector(network)
        full = SupportSet.full(network.dimension)
        verdict = self.is_strongly_endotactic(
            network, full, weight or WeightVector.ones(network.dimension))

        report = ASEReport(siphons=siphons, verdict=verdict, weight=weight)
        if weight is not None and check_subsets:
            failing = []
            for size in range(1, network.dimension + 1):
                for subset in combinations(range(network.dimension), size):
                    support = SupportSet(subset)
                    if not restricted_reaction_indices(network, support):
                        continue
                    if not self.is_strongly_endotactic(network, support, weight).holds:
                        failing.append(support)
            report.failing_supports = failing
            report.subsets_consistent = not failing
            if failing:
                logger.warning(f"Incohérence sur les sous-ensembles: "
                               f"{[s.names(network.species) for s in failing]}")
        return report

    # Couverture positive

    def positive_span_check(self, network: Network) -> bool:
        """Vrai si les vecteurs de réaction engendrent positivement R^d"""
        vectors = [reaction_vector(r) for r in network.reactions]
        for i in range(network.dimension):
            for sign in (1, -1):
                target = [0] * network.dimension
                target[i] = sign
                if not is_nonnegative_combination(vectors, target):
                    logger.debug(f"±e_{i} hors du cône des vecteurs de réaction")
                    return False
        return True


# Instance globale du service
topology_service = TopologyService()
