"""Thread-pool helpers honoring the TUBEFORGE_THREADS cap (0 or unset = auto)."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError


def thread_count() -> int:
    raw = os.environ.get("TUBEFORGE_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"TUBEFORGE_THREADS must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"TUBEFORGE_THREADS must be >= 0, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value


def map_ordered(fn, items):
    """Map preserving input order; result is independent of scheduling."""
    workers = min(thread_count(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
