"""
Planner timing on a monotonic clock.
"""

import time
from typing import Any, Callable, Tuple


def timed(fn: Callable[..., Any], *args, **kwargs) -> Tuple[Any, float]:
    """
    Call fn and measure it with time.perf_counter.

    Only the call itself is bracketed, so map generation done by the caller
    beforehand is excluded. Exceptions propagate unchanged.

    Returns:
        (fn's return value, elapsed seconds)
    """
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start
