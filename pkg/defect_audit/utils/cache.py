"""
Disk cache for coverage spectra
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import diskcache as dc

from ..subject.types import Workspace

logger = logging.getLogger(__name__)

DEFAULT_CACHE_DIR = Path.home() / '.cache' / 'defect-audit'


class CacheManager:
    """
    diskcache wrapper counting hits, misses and writes

    Keys embed a content digest, so entries never go stale and carry no expiry.
    """

    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = Path(cache_dir) if cache_dir else DEFAULT_CACHE_DIR
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.cache = dc.Cache(str(self.cache_dir))
        self.stats = {'hits': 0, 'misses': 0, 'sets': 0}

    def _generate_key(self, prefix: str, *parts: Any) -> str:
        key_string = json.dumps([prefix, *parts], default=str)
        return f"{prefix}:{hashlib.md5(key_string.encode()).hexdigest()}"

    def get(self, key: str) -> Optional[Any]:
        try:
            value = self.cache.get(key)
        except Exception as e:
            logger.warning(f"Cache get error: {e}")
            return None
        self.stats['misses' if value is None else 'hits'] += 1
        logger.debug(f"Cache {'miss' if value is None else 'hit'}: {key}")
        return value

    def set(self, key: str, value: Any) -> bool:
        try:
            self.cache.set(key, value)
        except Exception as e:
            logger.warning(f"Cache set error: {e}")
            return False
        self.stats['sets'] += 1
        return True

    def clear(self) -> bool:
        try:
            count = self.cache.clear()
        except Exception as e:
            logger.error(f"Cache clear error: {e}")
            return False
        logger.info(f"Cache cleared ({count} entries)")
        return True

    def close(self) -> None:
        self.cache.close()

    def get_stats(self) -> Dict[str, Any]:
        return dict(
            self.stats,
            total_items=len(self.cache),
            cache_size_mb=round(self.cache.volume() / (1024 * 1024), 2),
            cache_dir=str(self.cache_dir),
        )


def tree_digest(ws: Workspace) -> str:
    """Content digest of every file in the workspace tree, variant bookkeeping included"""
    digest = hashlib.sha256()
    for path in sorted(p for p in ws.root.rglob('*') if p.is_file()):
        digest.update(path.relative_to(ws.root).as_posix().encode())
        digest.update(b'\0')
        digest.update(path.read_bytes())
        digest.update(b'\0')
    return digest.hexdigest()


class CoverageCache:
    """Coverage records per (adapter id, workspace content)"""

    prefix = 'coverage'

    def __init__(self, cache_manager: Optional[CacheManager] = None):
        self.cache = cache_manager or CacheManager()

    def key(self, adapter_id: str, ws: Workspace) -> str:
        return self.cache._generate_key(self.prefix, adapter_id, tree_digest(ws))

    def get(self, adapter_id: str, ws: Workspace) -> Optional[Dict[str, List[Dict[str, Any]]]]:
        return self.cache.get(self.key(adapter_id, ws))

    def set(self, adapter_id: str, ws: Workspace, payload: Dict[str, List[Dict[str, Any]]]) -> bool:
        return self.cache.set(self.key(adapter_id, ws), payload)
