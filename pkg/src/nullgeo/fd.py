"""Central finite differences with optional Richardson extrapolation.

This layer is the independent oracle: it never looks at jet derivatives,
only at field values, so it can cross-check everything the closed forms
produce.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

Point = tuple[float, float]


def _central(field: Callable[[float, float], float], point: Point,
             direction: tuple[float, float], h: float) -> float:
    u, v = point
    p, q = direction
    return (field(u + h * p, v + h * q) - field(u - h * p, v - h * q)) / (2.0 * h)


def fd_directional(field: Callable[[float, float], float], point: Point,
                   direction: tuple[float, float], h: float,
                   richardson: bool = True) -> float:
    """Directional derivative of a scalar field along chart direction (p, q)."""
    d_h = _central(field, point, direction, h)
    if not richardson:
        return d_h
    d_h2 = _central(field, point, direction, 0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def ambient_fd_vectorfield(field: Callable[[float, float], np.ndarray], point: Point,
                           direction: tuple[float, float], h: float,
                           richardson: bool = True) -> np.ndarray:
    """Componentwise directional derivative of an ambient-vector field."""
    u, v = point
    p, q = direction

    def stencil(step: float) -> np.ndarray:
        plus = field(u + step * p, v + step * q)
        minus = field(u - step * p, v - step * q)
        return (plus - minus) / (2.0 * step)

    d_h = stencil(h)
    if not richardson:
        return d_h
    return (4.0 * stencil(0.5 * h) - d_h) / 3.0
