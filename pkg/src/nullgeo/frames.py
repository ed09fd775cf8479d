"""First fundamental form, tangent projection, and the adapted null frame.

At a point where the tangent projection Zt of the distinguished
direction Z is lightlike, the tangent plane carries a unique second null
direction W normalized by <Zt, W> = -1; together with the unit normal
part Zperp = Z - Zt (and later the normalized normal second-form value
nu) these form the frame every curvature check works in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError, FrameError
from .jets import Jet2
from .minkowski import Vec, gram_solve2, mink_inner
from .surface import SurfaceDef, eval_immersion_jet, tangents


@dataclass(frozen=True)
class FirstForm:
    E: float
    F: float
    G: float
    det: float
    scale: float  # max Euclidean norm of the chart tangents

    def is_timelike(self, eps_det: float = 1e-12) -> bool:
        return self.det < -eps_det * self.scale ** 4


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector as chart coefficients plus its ambient representative."""
    p: float
    q: float
    ambient: Vec


@dataclass
class AdaptedFrame:
    zt: TangentVec          # lightlike tangent part of Z
    w: TangentVec           # the opposite null direction, <zt, w> = -1
    z_perp: Vec             # unit spacelike normal part of Z
    nu: Vec | None = None   # normalized II(zt, zt), set by the curvature layer
    orientation_sign: int = 1
    seed: str = "x"         # which chart tangent seeded the W construction


def first_form(jets: list[Jet2]) -> FirstForm:
    psi_x, psi_y = tangents(jets)
    e = mink_inner(psi_x, psi_x)
    f = mink_inner(psi_x, psi_y)
    g = mink_inner(psi_y, psi_y)
    scale = math.sqrt(max(float(np.dot(psi_x, psi_x)), float(np.dot(psi_y, psi_y))))
    return FirstForm(e, f, g, e * g - f * f, scale)


def tangent_project(z: Vec, jets: list[Jet2], ff: FirstForm) -> TangentVec:
    """Tangential part of an ambient vector, in chart coordinates."""
    psi_x, psi_y = tangents(jets)
    p, q = gram_solve2(ff.E, ff.F, ff.G, mink_inner(z, psi_x), mink_inner(z, psi_y))
    return TangentVec(p, q, p * psi_x + q * psi_y)


def tangent_from_chart(p: float, q: float, jets: list[Jet2]) -> TangentVec:
    psi_x, psi_y = tangents(jets)
    return TangentVec(p, q, p * psi_x + q * psi_y)


@dataclass(frozen=True)
class NullDirection:
    has_cnd: bool
    zt: TangentVec | None


def detect_null_direction(surf: SurfaceDef, point: tuple[float, float],
                          tol: float = 1e-9, z: Vec | None = None) -> NullDirection:
    """Is the tangent part of Z a (nonzero) lightlike vector at the point?"""
    jets = eval_immersion_jet(surf, *point)
    ff = first_form(jets)
    return _detect(jets, ff, _direction(surf, z), tol)


def _direction(surf: SurfaceDef, z: Vec | None) -> Vec:
    if z is not None:
        return z
    if surf.z_dir is None:
        raise FrameError(f"surface {surf.label!r} has no distinguished direction")
    return surf.z_dir


def _detect(jets: list[Jet2], ff: FirstForm, z: Vec, tol: float) -> NullDirection:
    if not ff.is_timelike():
        raise DegenerateMetricError("surface is not timelike at the point")
    zt = tangent_project(z, jets, ff)
    norm2_euclid = float(np.dot(zt.ambient, zt.ambient))
    if norm2_euclid <= (tol * ff.scale) ** 2:
        return NullDirection(False, zt)  # Z is fully normal here
    q = mink_inner(zt.ambient, zt.ambient)
    if abs(q) <= tol * norm2_euclid:
        return NullDirection(True, zt)
    return NullDirection(False, zt)


def build_adapted_frame(surf: SurfaceDef, point: tuple[float, float],
                        tol: float = 1e-9, z: Vec | None = None) -> AdaptedFrame:
    jets = eval_immersion_jet(surf, *point)
    ff = first_form(jets)
    return frame_from_jets(jets, ff, _direction(surf, z), tol)


def frame_from_jets(jets: list[Jet2], ff: FirstForm, z: Vec,
                    tol: float = 1e-9) -> AdaptedFrame:
    """Adapted frame at a point known (or required) to carry a null direction."""
    det = _detect(jets, ff, z, tol)
    if not det.has_cnd:
        raise FrameError("no null tangent direction at the point")
    zt = det.zt
    psi_x, psi_y = tangents(jets)

    # W seed: psi_x unless it pairs degenerately with Zt, else psi_y.
    gx = mink_inner(zt.ambient, psi_x)
    if abs(gx) >= tol * ff.scale ** 2:
        seed = "x"
        v = TangentVec(1.0, 0.0, psi_x)
        gv, vv = gx, ff.E
    else:
        gy = mink_inner(zt.ambient, psi_y)
        if abs(gy) < tol * ff.scale ** 2:
            raise FrameError("both chart tangents pair degenerately with Zt")
        seed = "y"
        v = TangentVec(0.0, 1.0, psi_y)
        gv, vv = gy, ff.G
    c = vv / (2.0 * gv)
    w0_p, w0_q = v.p - c * zt.p, v.q - c * zt.q
    w0 = v.ambient - c * zt.ambient
    gw0 = mink_inner(zt.ambient, w0)  # equals gv since Zt is null
    w = TangentVec(-w0_p / gw0, -w0_q / gw0, -w0 / gw0)

    z_perp = z - zt.ambient
    if abs(mink_inner(z_perp, z_perp) - 1.0) > max(tol, 1e-9) * 10.0:
        raise FrameError("normal part of Z failed the unit-length check")
    return AdaptedFrame(zt, w, z_perp, nu=None, orientation_sign=1, seed=seed)


def orientation_sign(frame: AdaptedFrame) -> int:
    """Sign of det(e1|e2|e3|e4) for the orthonormal frame built from
    (zt, w, z_perp, nu); only meaningful in dimension 4 once nu is set."""
    if frame.nu is None or frame.z_perp.shape[0] != 4:
        return 1
    s = 1.0 / math.sqrt(2.0)
    e1 = s * (frame.zt.ambient + frame.w.ambient)
    e2 = s * (frame.zt.ambient - frame.w.ambient)
    mat = np.column_stack([e1, e2, frame.z_perp, frame.nu])
    return 1 if float(np.linalg.det(mat)) >= 0.0 else -1


def frame_invariant_residuals(frame: AdaptedFrame) -> dict[str, float]:
    """Residuals of the defining relations of the adapted frame."""
    zt, w, zp = frame.zt.ambient, frame.w.ambient, frame.z_perp
    out = {
        "zt_null": abs(mink_inner(zt, zt)),
        "w_null": abs(mink_inner(w, w)),
        "zt_w_pairing": abs(mink_inner(zt, w) + 1.0),
        "z_perp_unit": abs(mink_inner(zp, zp) - 1.0),
    }
    if frame.nu is not None:
        out["nu_unit"] = abs(mink_inner(frame.nu, frame.nu) - 1.0)
        out["nu_z_perp_orth"] = abs(mink_inner(frame.nu, zp))
    return out
