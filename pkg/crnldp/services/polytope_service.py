#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Service de géométrie exacte du polytope des complexes W(P)

Enveloppe convexe par énumération des facettes sur les sous-ensembles de points,
en arithmétique rationnelle. Les enveloppes dégénérées sont traitées dans leur
enveloppe affine: les directions de linéalité (±) sont ajoutées à chaque N(F).
"""

import logging
import threading
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import nnls

from ..errors import EmptyReactionSetError, ZeroProjectionError
from ..models import (
    Face, FaceLattice, Network, Polytope, Reaction, SupportSet,
    restricted_reaction_indices,
)
from ..utils.exact import as_fractions, dot, matrix_rank, nullspace, primitive_vector

logger = logging.getLogger(__name__)


def _sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(a - b for a, b in zip(p, q))


class PolytopeService:
    """Construction du polytope, du treillis des faces et requêtes d'exposition"""

    def __init__(self):
        self._lattices: Dict[Polytope, FaceLattice] = {}
        self._lock = threading.RLock()

    def build_polytope(self, network: Network, support: SupportSet) -> Polytope:
        """Enveloppe des complexes d'entrée de R(P), projetés par π_P et dédupliqués"""
        indices = restricted_reaction_indices(network, support)
        if not indices:
            raise EmptyReactionSetError(
                f"R(P) vide pour P = {support.names(network.species)}")

        points: List[Tuple[Fraction, ...]] = []
        position: Dict[Tuple[Fraction, ...], int] = {}
        mapping = []
        for i in indices:
            point = as_fractions(support.project(network.reactions[i].input.coefficients))
            if point not in position:
                position[point] = len(points)
                points.append(point)
            mapping.append(position[point])

        dim_p = support.size
        differences = [_sub(p, points[0]) for p in points[1:]]
        affine_dim = matrix_rank(differences, dim_p)
        lineality: Tuple[Tuple[int, ...], ...] = ()
        if affine_dim < dim_p:
            lineality = tuple(primitive_vector(v) for v in nullspace(differences, dim_p))
            logger.warning(f"Enveloppe dégénérée: dim {affine_dim} < d_P = {dim_p}, lignes de linéalité ajoutées")

        return Polytope(
            support=support,
            points=tuple(points),
            reaction_indices=tuple(indices),
            point_of_reaction=tuple(mapping),
            affine_dim=affine_dim,
            lineality=lineality,
        )

    def face_lattice(self, polytope: Polytope) -> FaceLattice:
        """
        Toutes les faces propres avec leurs générateurs N(F); une enveloppe
        dégénérée est elle-même une face, de cône normal ±linéalité
        """
        with self._lock:
            cached = self._lattices.get(polytope)
        if cached is not None:
            return cached

        lattice = self._compute_lattice(polytope)
        with self._lock:
            self._lattices[polytope] = lattice
        return lattice

    def _compute_lattice(self, polytope: Polytope) -> FaceLattice:
        points = polytope.points
        lineality_pm = []
        for vector in polytope.lineality:
            lineality_pm.append(vector)
            lineality_pm.append(tuple(-c for c in vector))

        if polytope.affine_dim == 0:
            face = Face(dim=0, index=0, vertex_indices=frozenset(range(len(points))),
                        normal_generators=tuple(lineality_pm), facet_normal_count=0)
            return FaceLattice(polytope=polytope, faces=(face,))

        facets = self._facets(polytope)

        face_sets = set(facets.values())
        frontier = list(face_sets)
        while frontier:
            discovered = []
            for current in frontier:
                for facet in facets.values():
                    meet = current & facet
                    if meet and meet not in face_sets:
                        face_sets.add(meet)
                        discovered.append(meet)
            frontier = discovered

        described = []
        for vertex_set in face_sets:
            members = sorted(vertex_set)
            base = points[members[0]]
            dim = matrix_rank([_sub(points[i], base) for i in members[1:]], polytope.ambient_dim)
            normals = sorted(n for n, s in facets.items() if vertex_set <= s)
            described.append((dim, tuple(members), normals))
        if polytope.is_degenerate:
            # l'enveloppe entière est exposée par les directions de linéalité
            described.append((polytope.affine_dim, tuple(range(len(points))), []))

        described.sort()
        faces = []
        counters: Dict[int, int] = {}
        for dim, members, normals in described:
            index = counters.get(dim, 0)
            counters[dim] = index + 1
            faces.append(Face(dim=dim, index=index, vertex_indices=frozenset(members),
                              normal_generators=tuple(normals) + tuple(lineality_pm),
                              facet_normal_count=len(normals)))

        parents: Dict[Tuple[int, int], List[Tuple[int, int]]] = {f.key: [] for f in faces}
        children: Dict[Tuple[int, int], List[Tuple[int, int]]] = {f.key: [] for f in faces}
        for small in faces:
            for large in faces:
                if large.dim == small.dim + 1 and small.vertex_indices < large.vertex_indices:
                    parents[small.key].append(large.key)
                    children[large.key].append(small.key)

        lattice = FaceLattice(
            polytope=polytope,
            faces=tuple(faces),
            parents={k: tuple(v) for k, v in parents.items()},
            children={k: tuple(v) for k, v in children.items()},
        )
        logger.debug(f"Treillis calculé: {lattice.counts()}")
        return lattice

    def _facets(self, polytope: Polytope) -> Dict[Tuple[int, ...], FrozenSet[int]]:
        """Normales extérieures primitives des facettes et points portés"""
        points = polytope.points
        dim_p = polytope.ambient_dim
        k = polytope.affine_dim
        facets: Dict[Tuple[int, ...], FrozenSet[int]] = {}

        for combo in combinations(range(len(points)), k):
            chosen = set(combo)
            if any(chosen <= existing for existing in facets.values()):
                continue
            base = points[combo[0]]
            rows = [_sub(points[i], base) for i in combo[1:]]
            rows.extend(as_fractions(v) for v in polytope.lineality)
            basis = nullspace(rows, dim_p)
            if len(basis) != 1:
                continue
            normal = primitive_vector(basis[0])
            values = [dot(normal, p) for p in points]
            height = values[combo[0]]
            if all(v <= height for v in values):
                outer = normal
            elif all(v >= height for v in values):
                outer = tuple(-c for c in normal)
            else:
                continue
            facets[outer] = frozenset(i for i, v in enumerate(values) if v == height)

        return facets

    def exposed_reaction_indices(self, network: Network, support: SupportSet,
                                 direction: Sequence) -> List[int]:
        """Indices de R(P)_w, l'ensemble des maximiseurs de ⟨π_P w, π_P c_in⟩"""
        projected = as_fractions(support.project(list(direction)))
        if all(c == 0 for c in projected):
            raise ZeroProjectionError("π_P w = 0")
        indices = restricted_reaction_indices(network, support)
        scores = [dot(projected, support.project(network.reactions[i].input.coefficients))
                  for i in indices]
        best = max(scores)
        return [i for i, s in zip(indices, scores) if s == best]

    def exposed_reactions(self, network: Network, support: SupportSet,
                          direction: Sequence) -> List[Reaction]:
        return [network.reactions[i]
                for i in self.exposed_reaction_indices(network, support, direction)]

    def reaction_indices_on_face(self, polytope: Polytope, face: Face) -> List[int]:
        return [r for r, p in zip(polytope.reaction_indices, polytope.point_of_reaction)
                if p in face.vertex_indices]

    def reactions_on_face(self, network: Network, support: SupportSet, face: Face) -> List[Reaction]:
        """R_F: réactions de R(P) dont l'entrée projetée est sur F"""
        polytope = self.build_polytope(network, support)
        return [network.reactions[i] for i in self.reaction_indices_on_face(polytope, face)]

    def face_for_direction(self, lattice: FaceLattice, direction: Sequence) -> Optional[Face]:
        """Face propre dont l'ensemble exposé par w coïncide avec ses sommets"""
        polytope = lattice.polytope
        projected = as_fractions(direction)
        scores = [dot(projected, p) for p in polytope.points]
        best = max(scores)
        exposed = frozenset(i for i, s in enumerate(scores) if s == best)
        return lattice.face_with_vertices(exposed)

    @staticmethod
    def cone_projection(generators: Sequence[Sequence[int]], direction: Sequence[float]) -> np.ndarray:
        """Projection euclidienne de w sur le cône engendré (moindres carrés positifs)"""
        target = np.asarray(direction, dtype=float)
        if not generators:
            return np.zeros_like(target)
        matrix = np.asarray(generators, dtype=float).T
        coefficients, _ = nnls(matrix, target)
        return matrix @ coefficients

    def cone_contains(self, generators: Sequence[Sequence[int]], direction: Sequence[float],
                      tol: float = 1e-9) -> bool:
        target = np.asarray(direction, dtype=float)
        residual = np.linalg.norm(self.cone_projection(generators, target) - target)
        return residual <= tol * max(1.0, np.linalg.norm(target))


# Instance globale du service
polytope_service = PolytopeService()
