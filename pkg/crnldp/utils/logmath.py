#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Accumulation de sommes signées en espace logarithmique
"""

import math
from typing import Iterable, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import ZeroSumError

CANCELLATION_TOL = 1e-12


def signed_logsumexp(log_magnitudes: Iterable[float], signs: Iterable[int],
                     strict: bool = False) -> Tuple[int, float]:
    """
    Somme Σ s_k·exp(l_k) renvoyée sous la forme (signe, log|somme|).

    Le signe 0 correspond à une somme vide ou exactement compensée. Avec
    strict=True, une compensation dans la tolérance lève ZeroSumError.
    """
    logs = np.asarray(list(log_magnitudes), dtype=float)
    sgn = np.asarray(list(signs), dtype=int)
    keep = (sgn != 0) & (logs > -np.inf)
    logs, sgn = logs[keep], sgn[keep]

    positive = logs[sgn > 0]
    negative = logs[sgn < 0]
    log_pos = logsumexp(positive) if positive.size else -np.inf
    log_neg = logsumexp(negative) if negative.size else -np.inf

    if log_pos == -np.inf and log_neg == -np.inf:
        return 0, -math.inf
    if log_neg == -np.inf:
        return 1, float(log_pos)
    if log_pos == -np.inf:
        return -1, float(log_neg)

    gap = abs(log_pos - log_neg)
    if gap <= CANCELLATION_TOL:
        if strict:
            raise ZeroSumError(
                f"Compensation des parties positive et négative (écart log {gap:.3e})")
        return 0, -math.inf

    if log_pos > log_neg:
        return 1, float(log_pos + math.log1p(-math.exp(log_neg - log_pos)))
    return -1, float(log_neg + math.log1p(-math.exp(log_pos - log_neg)))


def log_abs_expm1(y: float) -> Tuple[int, float]:
    """(signe, log|e^y − 1|) sans dépassement pour |y| grand"""
    if y == 0:
        return 0, -math.inf
    if y > 0:
        if y > 30:
            return 1, y + math.log1p(-math.exp(-y))
        return 1, math.log(math.expm1(y))
    if y < -30:
        return -1, math.log1p(-math.exp(y))
    return -1, math.log(-math.expm1(y))
