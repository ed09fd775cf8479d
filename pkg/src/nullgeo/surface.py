"""Surface definitions: parsed immersions over a rectangular chart domain.

A surface is given by 3 or 4 coordinate expressions in the chart
variables x, y, a closed rectangular domain, and (optionally) the
constant spacelike direction whose tangent projection is studied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainRangeError, EvalDomainError, UsageError
from .expr import ExprAst, eval_jet, parse_expr, to_text
from .jets import Jet2, jet_var
from .minkowski import Vec, as_vec, mink_norm2


@dataclass(frozen=True)
class Domain:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def contains(self, u: float, v: float) -> bool:
        return (self.x_lo <= u <= self.x_hi) and (self.y_lo <= v <= self.y_hi)

    def grid(self, nx: int, ny: int) -> list[tuple[float, float]]:
        """Row-major grid points covering the closed rectangle."""
        xs = np.linspace(self.x_lo, self.x_hi, nx)
        ys = np.linspace(self.y_lo, self.y_hi, ny)
        return [(float(u), float(v)) for v in ys for u in xs]


@dataclass(frozen=True)
class SurfaceDef:
    label: str
    dim: int
    coords: tuple[ExprAst, ...]
    coord_sources: tuple[str, ...]
    domain: Domain
    z_dir: Vec | None  # unit spacelike, or None when no direction is singled out


def make_surface(label: str, coords: list[str], domain: Domain,
                 z: list[float] | None) -> SurfaceDef:
    dim = len(coords)
    if dim not in (3, 4):
        raise UsageError(f"a surface needs 3 or 4 coordinates, got {dim}")
    asts = tuple(parse_expr(c) for c in coords)
    z_vec = None
    if z is not None:
        z_vec = as_vec(z)
        if z_vec.shape[0] != dim:
            raise UsageError(f"direction has {z_vec.shape[0]} coordinates, surface has {dim}")
        zz = mink_norm2(z_vec)
        if zz <= 0.0:
            raise UsageError("the distinguished direction must be spacelike")
        if abs(zz - 1.0) > 1e-12:
            z_vec = z_vec / math.sqrt(zz)
    return SurfaceDef(label, dim, asts, tuple(coords), domain, z_vec)


def with_direction(surf: SurfaceDef, z: Vec) -> SurfaceDef:
    """Same surface, different distinguished direction (normalized)."""
    z = as_vec(z)
    zz = mink_norm2(z)
    if zz <= 0.0:
        raise UsageError("the distinguished direction must be spacelike")
    return replace(surf, z_dir=z / math.sqrt(zz))


def eval_immersion_jet(surf: SurfaceDef, u: float, v: float) -> list[Jet2]:
    """Evaluate the immersion at a chart point; one jet per coordinate."""
    if not surf.domain.contains(u, v):
        raise DomainRangeError(
            f"point ({u:.6g}, {v:.6g}) outside the domain of {surf.label!r}")
    xj, yj = jet_var("x", u), jet_var("y", v)
    out = []
    for k, ast in enumerate(surf.coords):
        try:
            out.append(eval_jet(ast, xj, yj))
        except EvalDomainError as exc:
            raise EvalDomainError(
                f"coordinate {k} of {surf.label!r} at ({u:.6g}, {v:.6g}): {exc}") from exc
    return out


def tangents(jets: list[Jet2]) -> tuple[Vec, Vec]:
    """Chart tangent vectors (psi_x, psi_y) from immersion jets."""
    psi_x = np.array([j.dx for j in jets])
    psi_y = np.array([j.dy for j in jets])
    return psi_x, psi_y


def second_derivatives(jets: list[Jet2]) -> tuple[Vec, Vec, Vec]:
    d_xx = np.array([j.dxx for j in jets])
    d_xy = np.array([j.dxy for j in jets])
    d_yy = np.array([j.dyy for j in jets])
    return d_xx, d_xy, d_yy


def position(jets: list[Jet2]) -> Vec:
    return np.array([j.v for j in jets])


# --- JSON interface -------------------------------------------------------
#
# {"label": str, "dim": 3|4, "coords": [str, ...],
#  "domain": {"x": [lo, hi], "y": [lo, hi]}, "Z": [num, ...]}

def surface_from_obj(obj: dict) -> SurfaceDef:
    try:
        label = obj["label"]
        dim = obj["dim"]
        coords = obj["coords"]
        dom = obj["domain"]
        z = obj["Z"]
        x_lo, x_hi = dom["x"]
        y_lo, y_hi = dom["y"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed surface object: {exc!r}") from exc
    if dim not in (3, 4) or len(coords) != dim:
        raise UsageError(f"surface dim must be 3 or 4 and match coords, got dim={dim}")
    return make_surface(str(label), [str(c) for c in coords],
                        Domain(float(x_lo), float(x_hi), float(y_lo), float(y_hi)),
                        [float(c) for c in z])


def surface_to_obj(surf: SurfaceDef) -> dict:
    if surf.z_dir is None:
        raise UsageError("surface has no distinguished direction to export")
    return {
        "label": surf.label,
        "dim": surf.dim,
        "coords": list(surf.coord_sources),
        "domain": {"x": [surf.domain.x_lo, surf.domain.x_hi],
                   "y": [surf.domain.y_lo, surf.domain.y_hi]},
        "Z": [float(c) for c in surf.z_dir],
    }


def load_surface(path: str) -> SurfaceDef:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load surface file {path!r}: {exc}") from exc
    return surface_from_obj(obj)


def canonical_text(surf: SurfaceDef) -> list[str]:
    return [to_text(ast) for ast in surf.coords]
