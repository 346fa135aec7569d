import threading
from typing import Dict

import redis

from .config import settings

# decode_responses=True: values read from Redis come back as str
redis_pool = redis.ConnectionPool.from_url(settings.redis_url, max_connections=10, decode_responses=True)


def get_redis_client():
    """Redis client sharing the module connection pool."""
    return redis.Redis(connection_pool=redis_pool)


redis_client = get_redis_client()

_local_locks: Dict[str, threading.Lock] = {}
_local_locks_guard = threading.Lock()


def finalize_lock(key: str, timeout: int = 60):
    """
    Lock guarding survey finalization. Workers share a Redis lock; eager
    (in-process) surveys use a process-local lock so no Redis is needed.
    Both expose acquire(blocking=False) and release().
    """
    if settings.survey_eager:
        with _local_locks_guard:
            return _local_locks.setdefault(key, threading.Lock())
    return redis_client.lock(key, timeout=timeout)


def release_finalize_lock(key: str, lock) -> None:
    """Release a lock from finalize_lock; eager locks are dropped once free."""
    if not settings.survey_eager:
        lock.release()
        return
    with _local_locks_guard:
        lock.release()
        if _local_locks.get(key) is lock:
            del _local_locks[key]
