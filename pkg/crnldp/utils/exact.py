#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Arithmétique exacte: fractions, algèbre linéaire rationnelle et programmation
linéaire exacte (HiGHS certifié, simplexe sympy en repli)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.optimize import linprog
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError
from sympy.solvers.simplex import linprog as simplex_linprog

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Convertit un entier, flottant, chaîne 'p/q' ou rationnel sympy en Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booléen non convertible en rationnel")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # conversion binaire exacte
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    try:
        return Fraction(float(value))
    except (TypeError, ValueError):
        raise TypeError(f"Valeur non convertible en rationnel: {value!r}")


def as_fractions(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    """Produit scalaire exact"""
    return sum((to_fraction(a) * to_fraction(b) for a, b in zip(u, v)), Fraction(0))


def primitive_vector(vector: Sequence) -> Tuple[int, ...]:
    """Multiple entier primitif (pgcd 1) d'un vecteur rationnel non nul"""
    fractions = as_fractions(vector)
    denominator = 1
    for f in fractions:
        denominator = denominator * f.denominator // gcd(denominator, f.denominator)
    integers = [int(f * denominator) for f in fractions]
    divisor = 0
    for n in integers:
        divisor = gcd(divisor, abs(n))
    if divisor == 0:
        raise ValueError("Le vecteur nul n'a pas de représentant primitif")
    return tuple(n // divisor for n in integers)


def _sympy_matrix(rows: Sequence[Sequence], ncols: int) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, ncols)
    return sympy.Matrix([[sympy.Rational(f.numerator, f.denominator) for f in as_fractions(row)]
                         for row in rows])


def _from_sympy(value) -> Fraction:
    value = sympy.nsimplify(value) if not getattr(value, 'is_Rational', False) else value
    return Fraction(int(value.p), int(value.q))


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Vector]:
    """Base rationnelle du noyau de la matrice dont les lignes sont données"""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    basis = _sympy_matrix(rows, ncols).nullspace()
    return [tuple(_from_sympy(entry) for entry in column) for column in basis]


def matrix_rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return int(_sympy_matrix(rows, ncols).rank())


_HIGHS_STATUS = {2: 'infeasible', 3: 'unbounded'}

# écart relatif en dessous duquel une contrainte est active au sommet HiGHS
ACTIVE_TOL = 1e-7


@dataclass(frozen=True)
class LPResult:
    """Résultat d'un programme linéaire exact"""
    status: str  # optimal, feasible, infeasible, unbounded, failed
    value: Optional[Fraction] = None
    x: Optional[Vector] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == 'optimal'


def _float_matrix(rows: Sequence[Sequence], ncols: int) -> Optional[np.ndarray]:
    if not len(rows):
        return None
    return np.array([[float(v) for v in as_fractions(row)] for row in rows]).reshape(len(rows), ncols)


def _float_vector(values: Sequence) -> Optional[np.ndarray]:
    if not len(values):
        return None
    return np.array([float(v) for v in as_fractions(values)])


def _exact_vertex(objective: Vector, x_float: np.ndarray,
                  ub_rows: List[Tuple[Vector, Fraction]],
                  eq_rows: List[Tuple[Vector, Fraction]]) -> Optional[Tuple[Vector, bool]]:
    """
    Reconstruit en rationnels le sommet désigné par les contraintes actives
    en flottant. Renvoie (x, optimalité certifiée) ou None si x n'est pas
    exactement admissible
    """
    n = len(objective)
    candidates = [(row, bound, False) for row, bound in eq_rows]
    for row, bound in ub_rows:
        slack = float(bound) - float(np.dot([float(c) for c in row], x_float))
        if abs(slack) <= ACTIVE_TOL * (1.0 + abs(float(bound))):
            candidates.append((row, bound, True))

    basis = []
    for candidate in candidates:
        rows = [b[0] for b in basis] + [candidate[0]]
        if matrix_rank(rows, n) == len(rows):
            basis.append(candidate)
            if len(basis) == n:
                break
    if len(basis) < n:
        return None

    matrix = _sympy_matrix([b[0] for b in basis], n)
    rhs = _sympy_matrix([[b[1]] for b in basis], 1)
    x = tuple(_from_sympy(v) for v in matrix.LUsolve(rhs))
    if any(dot(row, x) > bound for row, bound in ub_rows):
        return None
    if any(dot(row, x) != bound for row, bound in eq_rows):
        return None

    # c + Σ μ_k g_k = 0, μ_k ≥ 0 pour les inégalités de la base
    multipliers = matrix.T.LUsolve(-_sympy_matrix([objective], n).T)
    certified = all(_from_sympy(mu) >= 0 for mu, b in zip(multipliers, basis) if b[2])
    return x, certified


def _simplex(objective: Vector, a_ub, b_ub, a_eq, b_eq) -> LPResult:
    """Simplexe rationnel de sympy"""
    n = len(objective)
    c = _sympy_matrix([objective], n)
    if len(a_ub):
        a = _sympy_matrix(a_ub, n)
        b = _sympy_matrix([[v] for v in b_ub], 1)
    else:
        # ligne triviale 0 ≤ 0
        a = sympy.zeros(1, n)
        b = sympy.zeros(1, 1)
    aeq = _sympy_matrix(a_eq, n) if len(a_eq) else None
    beq = _sympy_matrix([[v] for v in b_eq], 1) if len(a_eq) else None

    try:
        optimum, solution = simplex_linprog(c, a, b, aeq, beq)
    except InfeasibleLPError:
        return LPResult(status='infeasible')
    except UnboundedLPError:
        return LPResult(status='unbounded')

    return LPResult(status='optimal',
                    value=_from_sympy(optimum),
                    x=tuple(_from_sympy(v) for v in solution))


def exact_linprog(objective: Sequence,
                  a_ub: Sequence[Sequence] = (),
                  b_ub: Sequence = (),
                  a_eq: Sequence[Sequence] = (),
                  b_eq: Sequence = (),
                  fallback: bool = True) -> LPResult:
    """
    Minimise ⟨objective, x⟩ sous a_ub·x ≤ b_ub, a_eq·x = b_eq et x ≥ 0.

    HiGHS désigne un sommet, reconstruit ensuite en rationnels et certifié
    exactement (admissibilité, multiplicateurs positifs). Sans certificat, le
    simplexe rationnel prend le relais; avec fallback=False on renvoie le
    sommet admissible non certifié (statut 'feasible') ou le statut HiGHS.
    """
    n = len(objective)
    c = as_fractions(objective)
    ub_rows = [(as_fractions(row), to_fraction(b)) for row, b in zip(a_ub, b_ub)]
    ub_rows += [(tuple(Fraction(-int(i == j)) for i in range(n)), Fraction(0)) for j in range(n)]
    eq_rows = [(as_fractions(row), to_fraction(b)) for row, b in zip(a_eq, b_eq)]

    highs = linprog(np.array([float(v) for v in c]),
                    A_ub=_float_matrix(a_ub, n), b_ub=_float_vector(b_ub),
                    A_eq=_float_matrix(a_eq, n), b_eq=_float_vector(b_eq),
                    bounds=(0, None), method='highs')
    if highs.status == 0:
        vertex = _exact_vertex(c, highs.x, ub_rows, eq_rows)
        if vertex is not None:
            x, certified = vertex
            if certified:
                return LPResult(status='optimal', value=dot(c, x), x=x)
            if not fallback:
                return LPResult(status='feasible', value=dot(c, x), x=x)
        logger.debug("Sommet HiGHS non certifié")
    if not fallback:
        return LPResult(status=_HIGHS_STATUS.get(highs.status, 'failed'))
    return _simplex(c, a_ub, b_ub, a_eq, b_eq)


def is_nonnegative_combination(generators: Sequence[Sequence], target: Sequence) -> bool:
    """Teste exactement si target appartient au cône engendré par generators"""
    if not generators:
        return all(to_fraction(t) == 0 for t in target)
    dim = len(target)
    columns = [[to_fraction(g[i]) for g in generators] for i in range(dim)]
    result = exact_linprog([0] * len(generators), a_eq=columns, b_eq=list(target))
    return result.is_optimal
