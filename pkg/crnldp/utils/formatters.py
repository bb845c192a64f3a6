#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Utilitaires de formatage des résultats: rationnels, JSON, CSV et JSONL
"""

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np


class RationalFormatter:
    """Rationnels exacts en chaîne, avec approximation flottante"""

    @staticmethod
    def format(value: Fraction) -> dict:
        return {'exact': str(value), 'float': float(value)}

    @staticmethod
    def format_vector(values: Sequence[Fraction]) -> List[dict]:
        return [RationalFormatter.format(Fraction(v)) for v in values]


class JSONFormatter:
    """JSON déterministe: clés triées, infinis et NaN en chaînes"""

    @classmethod
    def normalize(cls, value: Any) -> Any:
        if isinstance(value, dict):
            return {str(k): cls.normalize(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [cls.normalize(v) for v in value]
        if isinstance(value, np.ndarray):
            return cls.normalize(value.tolist())
        if isinstance(value, Fraction):
            return RationalFormatter.format(value)
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if math.isnan(value):
                return 'nan'
            if math.isinf(value):
                return 'inf' if value > 0 else '-inf'
            return value
        return value

    @classmethod
    def dumps(cls, value: Any, indent: int = 2) -> str:
        return json.dumps(cls.normalize(value), indent=indent, sort_keys=True, ensure_ascii=False)


class CSVFormatter:
    """Tables et trajectoires au format CSV"""

    @staticmethod
    def table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        return buffer.getvalue()

    @staticmethod
    def read_path(text: str) -> Tuple[np.ndarray, np.ndarray]:
        """Lit un chemin 't,x1,...,xd' (ligne d'en-tête optionnelle)"""
        rows = []
        for record in csv.reader(io.StringIO(text)):
            if not record or not ''.join(record).strip():
                continue
            try:
                rows.append([float(x) for x in record])
            except ValueError:
                if rows:
                    raise ValueError(f"Ligne non numérique dans le chemin: {record}")
        if len(rows) < 2:
            raise ValueError("Le chemin doit contenir au moins deux points")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("Nombre de colonnes variable dans le chemin")
        data = np.array(rows)
        return data[:, 0], data[:, 1:]


class JSONLFormatter:
    """Un objet JSON par ligne"""

    @staticmethod
    def lines(records: Iterable[dict]) -> Iterable[str]:
        for record in records:
            yield json.dumps(JSONFormatter.normalize(record), sort_keys=True)
