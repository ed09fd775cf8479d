"""Bivector algebra on Lambda^2 R^{3,1} and the Gauss-map invariants.

Bivectors are 6-vectors in the ordered wedge basis
(e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4).  The induced inner product
has signature (3,3); the Hodge star satisfies star^2 = -id and i = -star
gives the complex structure.  The orientation sign of the surface's
adapted frame is folded into the volume identification so the frame
identities hold at negatively oriented points as well.

Everything here requires dimension 4 and a point where II(Zt, Zt) is
nonzero (so the normalized direction nu exists).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .curvature import PointCache, SurfacePoint, analyze_point
from .errors import ConsistencyError, UnsupportedPointError, UsageError
from .fd import ambient_fd_vectorfield
from .frames import TangentVec
from .minkowski import Vec, mink_inner, mink_norm2

BASIS_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# diagonal of the induced (3,3) metric: <ei^ej, ei^ej> = eta_i * eta_j
_L2_DIAG = np.array([-1.0, -1.0, -1.0, 1.0, 1.0, 1.0])

# wedge4 pairing slots: (i, j, sign) with coefficient of e1^e2^e3^e4
_WEDGE4_TERMS = ((0, 5, 1.0), (5, 0, 1.0), (1, 4, -1.0),
                 (4, 1, -1.0), (2, 3, 1.0), (3, 2, 1.0))


def wedge(u: Vec, v: Vec) -> np.ndarray:
    """Wedge product of two ambient 4-vectors as a bivector."""
    if u.shape[0] != 4 or v.shape[0] != 4:
        raise UsageError("wedge needs 4-dimensional vectors")
    return np.array([u[i] * v[j] - u[j] * v[i] for i, j in BASIS_PAIRS])


def lambda2_inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(_L2_DIAG * a, b))


def wedge4(a: np.ndarray, b: np.ndarray, orientation: float = 1.0) -> float:
    """Coefficient of the volume form in a^b, times the orientation sign."""
    total = 0.0
    for i, j, sign in _WEDGE4_TERMS:
        total += sign * a[i] * b[j]
    return orientation * total


def _star_matrix() -> np.ndarray:
    """Solve <star(ei), .> = wedge4(ei, .) for each basis bivector."""
    mat = np.zeros((6, 6))
    for col in range(6):
        e = np.zeros(6)
        e[col] = 1.0
        for row in range(6):
            f = np.zeros(6)
            f[row] = 1.0
            mat[row, col] = wedge4(e, f) / _L2_DIAG[row]
    return mat


_STAR = _star_matrix()


def star(a: np.ndarray, orientation: float = 1.0) -> np.ndarray:
    return orientation * (_STAR @ a)


def cpx_mul_i(a: np.ndarray, orientation: float = 1.0) -> np.ndarray:
    """The complex structure i = -star."""
    return -star(a, orientation)


def h_form(a: np.ndarray, b: np.ndarray, orientation: float = 1.0) -> complex:
    """H(a, b) = <a, b> + i * (a ^ b)."""
    return complex(lambda2_inner(a, b), wedge4(a, b, orientation))


def _require_nu(pt: SurfacePoint) -> None:
    if pt.frame is None or pt.curv is None:
        raise UnsupportedPointError(
            f"no null tangent direction at ({pt.u:.6g}, {pt.v:.6g})")
    if pt.surface.dim != 4:
        raise UnsupportedPointError("Gauss-map invariants need dimension 4")
    if pt.curv.nu is None:
        raise UnsupportedPointError(
            f"II(Zt,Zt) vanishes at ({pt.u:.6g}, {pt.v:.6g}) (ruled point)")


@dataclass(frozen=True)
class GaussMapValue:
    coeffs: np.ndarray   # W ^ Zt
    chart_sign: int      # sign matching the normalized psi_x ^ psi_y form
    orientation: int


def gauss_map_at(pt: SurfacePoint, tol: float = 1e-9) -> GaussMapValue:
    """Oriented tangent plane as the unit simple bivector W ^ Zt."""
    _require_nu(pt)
    frame = pt.frame
    g = wedge(frame.w.ambient, frame.zt.ambient)
    chart = wedge(pt.psi_x, pt.psi_y) / math.sqrt(pt.ff.F ** 2 - pt.ff.E * pt.ff.G)
    sign = 1 if float(np.dot(g, chart)) >= 0.0 else -1
    if float(np.linalg.norm(g - sign * chart)) > 1e-9 * max(1.0, float(np.linalg.norm(g))):
        raise ConsistencyError("frame and chart Gauss-map forms disagree")
    hgg = h_form(g, g, frame.orientation_sign)
    if abs(hgg + 1.0) > tol:
        raise ConsistencyError(f"H(G,G) = {hgg} but must be -1")
    return GaussMapValue(g, sign, frame.orientation_sign)


def gauss_map(surf, point: tuple[float, float], tol: float = 1e-9) -> GaussMapValue:
    return gauss_map_at(analyze_point(surf, *point), tol)


def n1n2_at(pt: SurfacePoint, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """The null bivectors N1 = Zperp ^ W and N2 = Zperp ^ Zt."""
    _require_nu(pt)
    frame = pt.frame
    s = frame.orientation_sign
    n1 = wedge(frame.z_perp, frame.w.ambient)
    n2 = wedge(frame.z_perp, frame.zt.ambient)
    checks = {
        "H(N1,N1)": h_form(n1, n1, s),
        "H(N2,N2)": h_form(n2, n2, s),
        "H(N1,N2)+1": h_form(n1, n2, s) + 1.0,
        "i N1 - W^nu": np.linalg.norm(cpx_mul_i(n1, s)
                                      - wedge(frame.w.ambient, pt.curv.nu)),
        "i N2 + Zt^nu": np.linalg.norm(cpx_mul_i(n2, s)
                                       + wedge(frame.zt.ambient, pt.curv.nu)),
    }
    for name, value in checks.items():
        if abs(value) > tol:
            raise ConsistencyError(f"bivector identity {name} violated: {value}")
    return n1, n2


def n1n2(surf, point: tuple[float, float], tol: float = 1e-9):
    return n1n2_at(analyze_point(surf, *point), tol)


def volume_unit(pt: SurfacePoint) -> float:
    """-i N1 ^ N2, the volume normalization (must be +1)."""
    n1, n2 = n1n2_at(pt)
    s = pt.frame.orientation_sign
    return -wedge4(cpx_mul_i(n1, s), n2, s)


def _complex_combination(z1: complex, z2: complex, n1: np.ndarray, n2: np.ndarray,
                         s: float) -> np.ndarray:
    """Real bivector z1*N1 + z2*N2 under the complex structure i = -star."""
    return (z1.real * n1 + z1.imag * cpx_mul_i(n1, s)
            + z2.real * n2 + z2.imag * cpx_mul_i(n2, s))


def dgauss_at(pt: SurfacePoint, x: TangentVec, route: str = "formula",
              h: float = 1e-4, cache: PointCache | None = None,
              tol: float = 1e-9) -> np.ndarray:
    """Differential of the Gauss map along a tangent vector.

    The formula route evaluates the closed forms
      dG(Zt) = -H^Zt + W^II(Zt,Zt)      dG(W) = H^W - Zt^II(W,W)
    (cross-checked against their N1/N2 expressions) and extends by
    linearity; the fd route central-differences the Gauss map itself.
    """
    _require_nu(pt)
    frame, curv = pt.frame, pt.curv
    if route == "fd":
        if cache is None:
            cache = PointCache(pt.surface, z=_frame_direction(pt))

        def g_field(u: float, v: float) -> np.ndarray:
            return gauss_map_at(cache.framed(u, v)).coeffs

        return ambient_fd_vectorfield(g_field, pt.point, (x.p, x.q), h)
    if route != "formula":
        raise UsageError(f"unknown dgauss route {route!r}")

    s = frame.orientation_sign
    zt_a, w_a = frame.zt.ambient, frame.w.ambient
    d_zt = -wedge(curv.H, zt_a) + wedge(w_a, curv.IIZZ)
    d_w = wedge(curv.H, w_a) - wedge(zt_a, curv.IIWW)

    n1, n2 = n1n2_at(pt)
    norm = curv.IIZZ_norm
    d_zt_n = _complex_combination(1j * norm, -1j * curv.Hnu, n1, n2, s)
    kk = (curv.KN / norm) + 1j * (mink_norm2(curv.H) - curv.K) / norm
    d_w_n = _complex_combination(-1j * curv.Hnu, kk, n1, n2, s)
    for a, b, name in ((d_zt, d_zt_n, "dG(Zt)"), (d_w, d_w_n, "dG(W)")):
        if float(np.linalg.norm(a - b)) > tol * max(1.0, float(np.linalg.norm(a))):
            raise ConsistencyError(f"{name}: wedge and N1/N2 forms disagree")

    # decompose x over (Zt, W): x = lam*Zt + mu*W
    lam = -mink_inner(x.ambient, w_a)
    mu = -mink_inner(x.ambient, zt_a)
    return lam * d_zt + mu * d_w


def dgauss(surf, point, x: TangentVec, route: str = "formula", h: float = 1e-4):
    return dgauss_at(analyze_point(surf, *point), x, route, h)


def _frame_direction(pt: SurfacePoint) -> Vec | None:
    return pt.surface.z_dir


@dataclass(frozen=True)
class CpxQuadForm:
    """Complex quadratic form on the tangent plane in the (Zt, W) basis."""
    qZZ: complex
    qZW: complex
    qWW: complex


@dataclass(frozen=True)
class PullbackResult:
    direct: CpxQuadForm   # H applied to dG values
    closed: CpxQuadForm   # curvature closed forms

    @property
    def disc(self) -> complex:
        """Discriminant: minus the metric determinant of the form.

        In the null basis the metric determinant is qZW^2 - qZZ*qWW, so
        the discriminant is qZZ*qWW - qZW^2 (equal to -(K + i K_N)^2).
        """
        q = self.direct
        return q.qZZ * q.qWW - q.qZW * q.qZW


def pullback_gh_at(pt: SurfacePoint, tol: float = 1e-6) -> PullbackResult:
    """Pullback of H by the Gauss map, both routes, asserted equal."""
    _require_nu(pt)
    frame, curv = pt.frame, pt.curv
    s = frame.orientation_sign
    d_zt = dgauss_at(pt, frame.zt)
    d_w = dgauss_at(pt, frame.w)
    direct = CpxQuadForm(
        h_form(d_zt, d_zt, s), h_form(d_zt, d_w, s), h_form(d_w, d_w, s))
    norm = curv.IIZZ_norm
    h2 = mink_norm2(curv.H)
    closed = CpxQuadForm(
        complex(-2.0 * norm * curv.Hnu),
        complex(2.0 * h2 - curv.K, -curv.KN),
        -2.0 * curv.Hnu * complex(h2 - curv.K, -curv.KN) / norm)
    for which in ("qZZ", "qZW", "qWW"):
        delta = abs(getattr(direct, which) - getattr(closed, which))
        if delta > tol:
            raise ConsistencyError(
                f"pullback {which}: direct and closed forms differ by {delta:.3e}")
    return PullbackResult(direct, closed)


def pullback_gh(surf, point, tol: float = 1e-6) -> PullbackResult:
    return pullback_gh_at(analyze_point(surf, *point), tol)


@dataclass(frozen=True)
class DeltaResult:
    delta_zz: float
    delta_zw: float
    delta_ww: float
    big_delta: float  # -det of the asymptotic form w.r.t. the metric


def delta_and_Delta_at(pt: SurfacePoint, tol: float = 1e-6) -> DeltaResult:
    """Asymptotic quadratic form delta(u) = dG(u)^dG(u) and its invariant.

    Entries are the imaginary parts of the pullback normalized by the
    volume identification -i N1 ^ N2 = 1; the invariant equals -K_N^2.
    """
    _require_nu(pt)
    vol = volume_unit(pt)
    q = pullback_gh_at(pt).direct
    d_zz = q.qZZ.imag / vol
    d_zw = q.qZW.imag / vol
    d_ww = q.qWW.imag / vol
    big = d_zz * d_ww - d_zw * d_zw  # equals -det(g^{-1} S) in the null basis
    kn = pt.curv.KN
    if abs(big + kn * kn) > tol:
        raise ConsistencyError(
            f"asymptotic invariant {big:.6e} differs from -K_N^2 = {-kn*kn:.6e}")
    return DeltaResult(d_zz, d_zw, d_ww, big)


def delta_and_Delta(surf, point, tol: float = 1e-6) -> DeltaResult:
    return delta_and_Delta_at(analyze_point(surf, *point), tol)


@dataclass(frozen=True)
class AsymptoticResult:
    all_directions: bool
    directions: tuple[TangentVec, ...]


def _same_direction(a: TangentVec, b: TangentVec, tol: float = 1e-9) -> bool:
    cross = a.p * b.q - a.q * b.p
    scale = max(abs(a.p), abs(a.q)) * max(abs(b.p), abs(b.q))
    return abs(cross) <= max(tol, tol * scale)


def asymptotic_directions_at(pt: SurfacePoint, tol: float = 1e-9) -> AsymptoticResult:
    """Directions u with dG(u)^dG(u) = 0, from the asymptotic form."""
    _require_nu(pt)
    frame, curv = pt.frame, pt.curv
    d = delta_and_Delta_at(pt)
    zt, w = frame.zt, frame.w
    entries = (abs(d.delta_zz), abs(d.delta_zw), abs(d.delta_ww))
    if max(entries) <= tol:
        return AsymptoticResult(True, ())

    found: list[TangentVec] = []
    if abs(d.delta_zz) <= tol:
        found.append(zt)
    if abs(d.delta_ww) <= tol:
        found.append(w)
    # off-axis roots of delta(Zt + t W) = dZZ + 2 t dZW + t^2 dWW
    if abs(d.delta_ww) > tol:
        disc = d.delta_zw ** 2 - d.delta_zz * d.delta_ww
        if disc >= 0.0:
            for sign in (1.0, -1.0):
                t = (-d.delta_zw + sign * math.sqrt(disc)) / d.delta_ww
                cand = TangentVec(zt.p + t * w.p, zt.q + t * w.q,
                                  zt.ambient + t * w.ambient)
                if not any(_same_direction(cand, f) for f in found):
                    found.append(cand)
    elif abs(d.delta_zw) > tol:
        t = -d.delta_zz / (2.0 * d.delta_zw)
        cand = TangentVec(zt.p + t * w.p, zt.q + t * w.q,
                          zt.ambient + t * w.ambient)
        if not any(_same_direction(cand, f) for f in found):
            found.append(cand)

    w_in = any(_same_direction(f, w) for f in found)
    w_expected = abs(curv.Hnu * curv.KN) <= tol
    if w_in != w_expected:
        raise ConsistencyError(
            "W-membership in the asymptotic set disagrees with <H,nu>*K_N")
    return AsymptoticResult(False, tuple(found))


def asymptotic_directions(surf, point, tol: float = 1e-9) -> AsymptoticResult:
    return asymptotic_directions_at(analyze_point(surf, *point), tol)


def basis_self_test(tol: float = 1e-12) -> dict[str, float]:
    """One-time algebra checks of the bivector layer; returns residuals."""
    residuals = {}
    eye = np.eye(6)
    ss = np.array([star(star(eye[k])) for k in range(6)]).T
    residuals["star_squared_plus_id"] = float(np.max(np.abs(ss + eye)))

    # signature (3,3) of the induced metric on the wedge basis
    gram = np.array([[lambda2_inner(eye[i], eye[j]) for j in range(6)]
                     for i in range(6)])
    eigs = np.sort(np.linalg.eigvalsh(gram))
    residuals["metric_signature"] = float(
        np.max(np.abs(eigs - np.array([-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]))))

    residuals["h_e12_e12_plus_1"] = abs(h_form(eye[0], eye[0]) + 1.0)
    residuals["h_e23_e23_minus_1"] = abs(h_form(eye[3], eye[3]) - 1.0)
    residuals["volume_e12_e34"] = abs(wedge4(eye[0], eye[5]) - 1.0)
    worst = max(residuals.values())
    if worst > tol:
        raise ConsistencyError(f"bivector self-test failed: {residuals}")
    return residuals
