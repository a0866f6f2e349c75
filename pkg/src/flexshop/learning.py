"""Position-based learning effect on processing times.

An operation processed at position ``r`` of a machine's sequence takes
``floor(100 * p / r**alpha + 1/2)`` time units, where ``p`` is the standard
processing time and ``alpha > 0`` is the learning rate.  Position 1 always
yields exactly ``100 * p``.
"""

import math

__all__ = ["actual_time"]


def actual_time(p: int, r: int, alpha: float) -> int:
    """Actual processing time of an operation at machine position ``r``.

    ``p`` is the standard (integer) processing time, ``r`` the 1-based
    position in the machine sequence, ``alpha`` the learning rate.
    """
    if r < 1:
        raise ValueError(f"machine position must be >= 1, got {r}")
    if p < 0:
        raise ValueError(f"standard time must be >= 0, got {p}")
    if alpha <= 0:
        raise ValueError(f"learning rate must be > 0, got {alpha}")
    return math.floor(100.0 * p / r**alpha + 0.5)
