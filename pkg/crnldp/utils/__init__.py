#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Package des utilitaires
"""

from .formatters import RationalFormatter, JSONFormatter, CSVFormatter, JSONLFormatter
from .cache import cache, MemoryCache, report_key

__all__ = [
    'RationalFormatter',
    'JSONFormatter',
    'CSVFormatter',
    'JSONLFormatter',
    'cache',
    'MemoryCache',
    'report_key',
]
