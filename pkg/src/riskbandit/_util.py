"""Small shared numeric helpers."""

from __future__ import annotations

import math

# Fractions like 0.4 * 10 land a hair above their exact value in binary floating
# point (4.000000000000000444...), which would push a plain ceil one step too
# high.  Every ceil of a float product in the package goes through this guard.
CEIL_EPS = 1e-9


def ceil_int(x: float) -> int:
    """Ceiling of ``x`` as an int, tolerant of float representation error."""
    return int(math.ceil(x - CEIL_EPS))
