#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Modèles géométriques: polytope des complexes, faces et treillis des faces
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from .network import SupportSet

Point = Tuple[Fraction, ...]
IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Polytope:
    """Enveloppe convexe W(P) des complexes d'entrée projetés de R(P)"""
    support: SupportSet
    points: Tuple[Point, ...]
    reaction_indices: Tuple[int, ...]
    point_of_reaction: Tuple[int, ...]
    affine_dim: int
    lineality: Tuple[IntVector, ...]

    @property
    def ambient_dim(self) -> int:
        """d_P"""
        return self.support.size

    @property
    def is_degenerate(self) -> bool:
        """Enveloppe de dimension inférieure à d_P"""
        return self.affine_dim < self.ambient_dim

    def to_api_dict(self) -> dict:
        return {
            'support': list(self.support.indices),
            'points': [[str(c) for c in p] for p in self.points],
            'affine_dim': self.affine_dim,
            'lineality': [list(v) for v in self.lineality],
            'degenerate': self.is_degenerate,
        }


@dataclass(frozen=True)
class Face:
    """Face propre W_{j,ι} avec ses générateurs de cône normal N(F)"""
    dim: int
    index: int
    vertex_indices: FrozenSet[int]
    normal_generators: Tuple[IntVector, ...]
    facet_normal_count: int

    @property
    def key(self) -> Tuple[int, int]:
        """(j, ι)"""
        return self.dim, self.index

    @property
    def is_facet_dual_point(self) -> bool:
        """Vrai si le dual est réduit à une direction (hors linéalité)"""
        return self.facet_normal_count == 1

    def generator_matrix(self) -> np.ndarray:
        return np.array(self.normal_generators, dtype=float)

    def barycenter(self) -> Tuple[int, ...]:
        """Somme des générateurs: point intérieur relatif du cône"""
        return tuple(sum(column) for column in zip(*self.normal_generators))

    def to_api_dict(self, points: Tuple[Point, ...]) -> dict:
        return {
            'dim': self.dim,
            'index': self.index,
            'vertices': [[str(c) for c in points[i]] for i in sorted(self.vertex_indices)],
            'normals': [list(n) for n in self.normal_generators],
        }


@dataclass
class FaceLattice:
    """Faces propres regroupées par dimension, avec les relations d'inclusion"""
    polytope: Polytope
    faces: Tuple[Face, ...]
    parents: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = field(default_factory=dict)
    children: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = field(default_factory=dict)

    def by_dim(self, dim: int) -> List[Face]:
        return [f for f in self.faces if f.dim == dim]

    def counts(self) -> Dict[int, int]:
        result: Dict[int, int] = {}
        for face in self.faces:
            result[face.dim] = result.get(face.dim, 0) + 1
        return result

    def get(self, key: Tuple[int, int]) -> Face:
        for face in self.faces:
            if face.key == key:
                return face
        raise KeyError(key)

    def face_with_vertices(self, vertices: FrozenSet[int]) -> Optional[Face]:
        for face in self.faces:
            if face.vertex_indices == vertices:
                return face
        return None

    def to_api_dict(self) -> dict:
        return {
            'polytope': self.polytope.to_api_dict(),
            'counts': {str(k): v for k, v in sorted(self.counts().items())},
            'faces': [f.to_api_dict(self.polytope.points) for f in self.faces],
        }
