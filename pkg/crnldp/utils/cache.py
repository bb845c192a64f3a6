#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Cache mémoire des rapports d'analyse, indexé par l'empreinte du réseau
"""

import logging
import threading
import time
from datetime import datetime, timedelta
from typing import Any, Dict, Optional

from config.config import get_config

logger = logging.getLogger(__name__)

CLEANUP_INTERVAL = 300


def report_key(network_hash: str, weight: Optional[str], version: str) -> str:
    """Clé d'un rapport: empreinte du réseau, poids imposé, version de l'outil"""
    return f"report:{version}:{network_hash}:{weight or 'auto'}"


class CacheEntry:
    """Valeur mise en cache avec date d'expiration"""

    def __init__(self, data: Any, ttl: timedelta):
        self.data = data
        self.created_at = datetime.now()
        self.expires_at = self.created_at + ttl

    @property
    def is_expired(self) -> bool:
        return datetime.now() > self.expires_at


class MemoryCache:
    """Cache en mémoire thread-safe avec TTL et compteurs de succès"""

    def __init__(self, default_ttl: timedelta = timedelta(hours=1), cleanup: bool = True):
        self._entries: Dict[str, CacheEntry] = {}
        self._lock = threading.RLock()
        self.default_ttl = default_ttl
        self.hits = 0
        self.misses = 0
        if cleanup:
            self._start_cleanup_thread()

    def get(self, key: str) -> Optional[Any]:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or entry.is_expired:
                if entry is not None:
                    del self._entries[key]
                self.misses += 1
                return None
            self.hits += 1
            return entry.data

    def set(self, key: str, value: Any, ttl: Optional[timedelta] = None) -> None:
        with self._lock:
            self._entries[key] = CacheEntry(value, ttl or self.default_ttl)

    def delete(self, key: str) -> bool:
        with self._lock:
            return self._entries.pop(key, None) is not None

    def clear(self) -> int:
        """Vide le cache et renvoie le nombre d'entrées supprimées"""
        with self._lock:
            count = len(self._entries)
            self._entries.clear()
            self.hits = self.misses = 0
        logger.info(f"Cache vidé ({count} rapports)")
        return count

    def size(self) -> int:
        with self._lock:
            return len(self._entries)

    def get_stats(self) -> dict:
        with self._lock:
            expired = sum(1 for entry in self._entries.values() if entry.is_expired)
            return {
                'total_entries': len(self._entries),
                'expired_entries': expired,
                'active_entries': len(self._entries) - expired,
                'hits': self.hits,
                'misses': self.misses,
            }

    def _cleanup_expired(self) -> int:
        with self._lock:
            expired = [key for key, entry in self._entries.items() if entry.is_expired]
            for key in expired:
                del self._entries[key]
            return len(expired)

    def _start_cleanup_thread(self) -> None:
        def cleanup_worker():
            while True:
                time.sleep(CLEANUP_INTERVAL)
                try:
                    cleaned = self._cleanup_expired()
                    if cleaned:
                        logger.debug(f"Cache: {cleaned} rapports expirés supprimés")
                except Exception as e:
                    logger.error(f"Erreur lors du nettoyage du cache: {e}")

        threading.Thread(target=cleanup_worker, daemon=True).start()


# Instance globale du cache
cache = MemoryCache(default_ttl=get_config().CACHE_TTL)
