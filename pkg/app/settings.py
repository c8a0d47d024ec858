"""Environment configuration, read once at import time.

BRANCHLY_LOG_LEVEL
    Root log level (default ``INFO``).
BRANCHLY_MAX_NODES
    Per-sample node cap for the branching-process samplers (default 10**6).
BRANCHLY_THREADS
    Default worker count for samplers (default 1).  Results never depend on it.
BRANCHLY_RATE_LIMIT
    slowapi limit applied to the heavy HTTP routes (default ``30/minute``).

No variable provides a default seed; every stochastic entry point takes its
seed explicitly.
"""

import os

LOG_LEVEL: str = os.getenv("BRANCHLY_LOG_LEVEL", "INFO").upper()
MAX_NODES: int = int(os.getenv("BRANCHLY_MAX_NODES", "1000000"))
THREADS: int = max(1, int(os.getenv("BRANCHLY_THREADS", "1")))
RATE_LIMIT: str = os.getenv("BRANCHLY_RATE_LIMIT", "30/minute")
