"""Helpers for the breakpoint memo kept by integral recovery."""
from __future__ import annotations

import logging
from typing import Iterable

from django.core.cache import caches

logger = logging.getLogger(__name__)

BREAKPOINT_PREFIX = "breakpoint:"
BREAKPOINT_PATTERN = BREAKPOINT_PREFIX + "*"


def breakpoint_key(token: str, index: int) -> str:
    return f"{BREAKPOINT_PREFIX}{token}:{index}"


def _delete_with_delete_pattern(cache_backend) -> bool:
    """Remove memo keys via delete_pattern, return True if supported."""
    delete_pattern = getattr(cache_backend, "delete_pattern", None)
    if not callable(delete_pattern):
        return False
    try:
        delete_pattern(BREAKPOINT_PATTERN)
        return True
    except NotImplementedError:
        return False


def _delete_with_keys(cache_backend) -> bool:
    """Remove memo keys found by a key scan, return True if scanning works."""
    keys_method = getattr(cache_backend, "keys", None)
    if not callable(keys_method):
        return False

    try:
        raw_keys: Iterable[str] = keys_method(BREAKPOINT_PATTERN)
    except NotImplementedError:
        return False

    keys = [key.decode("utf-8") if isinstance(key, bytes) else key for key in raw_keys]
    if keys:
        cache_backend.delete_many(keys)
    return True


def _delete_with_locmem(cache_backend) -> bool:
    """In-memory caches: drop matching entries from the backend's own dict."""
    internal_cache = getattr(cache_backend, "_cache", None)
    if not isinstance(internal_cache, dict):
        return False

    expire_info = getattr(cache_backend, "_expire_info", None)
    lock = getattr(cache_backend, "_lock", None)
    if lock is None:
        return False

    with lock:
        # stored keys carry the backend's prefix and version, e.g. ":1:breakpoint:..."
        stale = [key for key in internal_cache if BREAKPOINT_PREFIX in str(key)]
        for key in stale:
            internal_cache.pop(key, None)
            if isinstance(expire_info, dict):
                expire_info.pop(key, None)
    return True


def reset_breakpoint_cache(cache_alias: str = "recovery") -> None:
    """Clear every memoized breakpoint integral held under ``cache_alias``."""
    cache_backend = caches[cache_alias]

    if _delete_with_delete_pattern(cache_backend):
        logger.info("Cleared breakpoint memo using delete_pattern")
        return

    if _delete_with_keys(cache_backend):
        logger.info("Cleared breakpoint memo using key scan")
        return

    if _delete_with_locmem(cache_backend):
        logger.info("Cleared breakpoint memo using in-memory fallback")
        return

    logger.warning("Unable to clear breakpoint memo for alias '%s'", cache_alias)
