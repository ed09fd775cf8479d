"""Second fundamental form, curvature invariants, and their residual checks.

The closed forms all come from order-2 jets (the ambient is flat, so the
Gauss equation is exact at this order).  Everything derivative-like that
the closed forms cannot reach (derivatives of frame fields, Laplacians)
goes through the finite-difference oracle in :mod:`nullgeo.fd`, which
keeps the two routes independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (DegenerateInputError, DegenerateMetricError,
                     DomainRangeError, NullGeoError)
from .fd import ambient_fd_vectorfield, fd_directional
from .frames import (AdaptedFrame, FirstForm, TangentVec, first_form,
                     frame_from_jets, orientation_sign, tangent_project, _detect)
from .jets import Jet2
from .minkowski import (Vec, gram_solve2, mink_inner, mink_norm2,
                        normal_complement, normal_project)
from .surface import (SurfaceDef, eval_immersion_jet, second_derivatives, tangents)


class SeedSwitch(NullGeoError):
    """A stencil point chose a different W seed than the center point;
    frame-dependent fields are not differenced across the switch."""


@dataclass(frozen=True)
class SecondForm:
    II_xx: Vec
    II_xy: Vec
    II_yy: Vec


@dataclass(frozen=True)
class CurvatureData:
    H: Vec            # mean curvature vector
    K: float          # Gauss curvature
    a: float          # <II(W,W), Zperp>
    IIZZ: Vec         # II(Zt, Zt)
    IIWW: Vec         # II(W, W)
    IIZZ_norm: float  # Minkowski length of IIZZ (spacelike)
    KN: float         # normal curvature a*|IIZZ| (0 at ruled points)
    Hnu: float        # <H, nu>, 0.0 when nu is absent
    nu: Vec | None


def second_form(jets: list[Jet2], ff: FirstForm,
                normals: tuple[Vec, ...] | None = None) -> SecondForm:
    """Normal parts of the ambient second derivatives of the immersion."""
    psi_x, psi_y = tangents(jets)
    if normals is None:
        normals = normal_complement(psi_x, psi_y)
    d_xx, d_xy, d_yy = second_derivatives(jets)
    return SecondForm(normal_project(d_xx, normals),
                      normal_project(d_xy, normals),
                      normal_project(d_yy, normals))


def ii_eval(sf: SecondForm, u: TangentVec, v: TangentVec) -> Vec:
    """Bilinear value II(u, v) from the chart components."""
    return (u.p * v.p * sf.II_xx
            + (u.p * v.q + u.q * v.p) * sf.II_xy
            + u.q * v.q * sf.II_yy)


def raw_second(jets: list[Jet2], u: TangentVec, v: TangentVec) -> Vec:
    """Ambient second derivative d^2psi(u, v), no normal projection.

    Pairing this with an exactly-normal vector equals the II pairing but
    skips the noise of the orthonormalized normal basis.
    """
    d_xx, d_xy, d_yy = second_derivatives(jets)
    return (u.p * v.p * d_xx + (u.p * v.q + u.q * v.p) * d_xy
            + u.q * v.q * d_yy)


def mean_curvature(sf: SecondForm, ff: FirstForm) -> Vec:
    """Metric trace formula: (G*II_xx - 2F*II_xy + E*II_yy) / (2 det)."""
    return (ff.G * sf.II_xx - 2.0 * ff.F * sf.II_xy + ff.E * sf.II_yy) / (2.0 * ff.det)


def gauss_curvature(sf: SecondForm, ff: FirstForm) -> float:
    """Gauss equation in a flat ambient."""
    return (mink_inner(sf.II_xx, sf.II_yy) - mink_inner(sf.II_xy, sf.II_xy)) / ff.det


def curvature_data(surf: SurfaceDef, point: tuple[float, float],
                   frame: AdaptedFrame, sf: SecondForm, ff: FirstForm,
                   tol: float = 1e-9, jets: list[Jet2] | None = None) -> CurvatureData:
    """All pointwise curvature quantities in the adapted frame.

    Also fills ``frame.nu`` and ``frame.orientation_sign`` when the
    normal direction nu exists.
    """
    if jets is None:
        jets = eval_immersion_jet(surf, *point)
    h_vec = -ii_eval(sf, frame.zt, frame.w)
    # pair the raw second derivative with the exactly-normal z_perp
    a = mink_inner(raw_second(jets, frame.w, frame.w), frame.z_perp)
    k = gauss_curvature(sf, ff)
    iizz = ii_eval(sf, frame.zt, frame.zt)
    iiww = ii_eval(sf, frame.w, frame.w)
    nu = None
    iizz_norm = 0.0
    kn = 0.0
    hnu = 0.0
    if float(np.linalg.norm(iizz)) > tol * ff.scale:
        q = mink_norm2(iizz)
        if q <= 0.0:
            raise DegenerateInputError("II(Zt,Zt) is not spacelike")
        iizz_norm = math.sqrt(q)
        nu = iizz / iizz_norm
        kn = a * iizz_norm
        hnu = mink_inner(h_vec, nu)
        frame.nu = nu
        frame.orientation_sign = orientation_sign(frame)
    return CurvatureData(h_vec, k, a, iizz, iiww, iizz_norm, kn, hnu, nu)


@dataclass
class SurfacePoint:
    """Everything computed at one chart point, assembled bottom-up."""
    surface: SurfaceDef
    u: float
    v: float
    jets: list[Jet2]
    psi_x: Vec
    psi_y: Vec
    ff: FirstForm
    normals: tuple[Vec, ...]
    sf: SecondForm
    has_cnd: bool
    frame: AdaptedFrame | None
    curv: CurvatureData | None
    H: Vec
    K: float

    @property
    def point(self) -> tuple[float, float]:
        return (self.u, self.v)

    def tangential(self, vec: Vec) -> Vec:
        p, q = gram_solve2(self.ff.E, self.ff.F, self.ff.G,
                           mink_inner(vec, self.psi_x), mink_inner(vec, self.psi_y))
        return p * self.psi_x + q * self.psi_y

    def normal(self, vec: Vec) -> Vec:
        return normal_project(vec, self.normals)


def analyze_point(surf: SurfaceDef, u: float, v: float, tol: float = 1e-9,
                  z: Vec | None = None) -> SurfacePoint:
    jets = eval_immersion_jet(surf, u, v)
    ff = first_form(jets)
    psi_x, psi_y = tangents(jets)
    normals = normal_complement(psi_x, psi_y)
    sf = second_form(jets, ff, normals)
    h_vec = mean_curvature(sf, ff)
    k = gauss_curvature(sf, ff)
    direction = z if z is not None else surf.z_dir
    frame = None
    curv = None
    has_cnd = False
    if direction is not None:
        has_cnd = _detect(jets, ff, direction, tol).has_cnd
        if has_cnd:
            frame = frame_from_jets(jets, ff, direction, tol)
            curv = curvature_data(surf, (u, v), frame, sf, ff, tol, jets=jets)
    return SurfacePoint(surf, u, v, jets, psi_x, psi_y, ff, normals, sf,
                        has_cnd, frame, curv, h_vec, k)


# --- fields over the chart, for the finite-difference oracle --------------


class PointCache:
    """Memoizes per-point analysis so stencils shared by several residuals
    are evaluated once."""

    def __init__(self, surf: SurfaceDef, tol: float = 1e-9, z: Vec | None = None):
        self.surf = surf
        self.tol = tol
        self.z = z
        self._store: dict[tuple[float, float], SurfacePoint] = {}

    def at(self, u: float, v: float) -> SurfacePoint:
        key = (u, v)
        got = self._store.get(key)
        if got is None:
            got = analyze_point(self.surf, u, v, self.tol, self.z)
            self._store[key] = got
        return got

    def framed(self, u: float, v: float, seed: str | None = None) -> SurfacePoint:
        pt = self.at(u, v)
        if pt.frame is None:
            raise DomainRangeError(
                f"no null direction at stencil point ({u:.6g}, {v:.6g})")
        if seed is not None and pt.frame.seed != seed:
            raise SeedSwitch(f"W seed switches at ({u:.6g}, {v:.6g})")
        return pt


def zt_field(cache: PointCache) -> Callable[[float, float], Vec]:
    def field(u: float, v: float) -> Vec:
        pt = cache.at(u, v)
        return tangent_project(cache.z if cache.z is not None else
                               cache.surf.z_dir, pt.jets, pt.ff).ambient
    return field


def z_perp_field(cache: PointCache) -> Callable[[float, float], Vec]:
    zt = zt_field(cache)
    z = cache.z if cache.z is not None else cache.surf.z_dir

    def field(u: float, v: float) -> Vec:
        return z - zt(u, v)
    return field


def mean_curvature_field(cache: PointCache) -> Callable[[float, float], Vec]:
    def field(u: float, v: float) -> Vec:
        return cache.at(u, v).H
    return field


def gauss_field(cache: PointCache) -> Callable[[float, float], float]:
    def field(u: float, v: float) -> float:
        return cache.at(u, v).K
    return field


def a_field(cache: PointCache, seed: str) -> Callable[[float, float], float]:
    def field(u: float, v: float) -> float:
        return cache.framed(u, v, seed).curv.a
    return field


# --- compatibility residuals ----------------------------------------------


def shape_operator(pt: SurfacePoint, x: TangentVec, xi: Vec) -> TangentVec:
    """A_xi(x): the tangent vector metric-dual to <II(x, .), xi>."""
    jets, sf, ff = pt.jets, pt.sf, pt.ff
    psi_x = TangentVec(1.0, 0.0, pt.psi_x)
    psi_y = TangentVec(0.0, 1.0, pt.psi_y)
    cx = mink_inner(ii_eval(sf, x, psi_x), xi)
    cy = mink_inner(ii_eval(sf, x, psi_y), xi)
    p, q = gram_solve2(ff.E, ff.F, ff.G, cx, cy)
    return TangentVec(p, q, p * pt.psi_x + q * pt.psi_y)


def compatibility_residuals(surf: SurfaceDef, point: tuple[float, float],
                            tol: float = 1e-9, h: float = 1e-4,
                            richardson: bool = True,
                            cache: PointCache | None = None,
                            z: Vec | None = None) -> dict[str, float]:
    """Residuals of the frame's structure relations at one point.

    r1(X): tangential derivative of the Zt field equals the shape
           operator of Zperp, for X in {psi_x, psi_y};
    r2(X): normal derivative of the Zperp field equals -II(Zt, X);
    r3:    the Zt flow is autoparallel (tangential D_Zt Zt = 0);
    r4:    the shape operator of Zperp kills Zt;
    r5:    the 1-form <., Zt> is closed;
    r6:    |H|^2 + <normal D_W H, Zperp> = 0.
    """
    if cache is None:
        cache = PointCache(surf, tol, z)
    pt = cache.framed(*point)
    frame, curv = pt.frame, pt.curv
    zt_f = zt_field(cache)
    zp_f = z_perp_field(cache)
    h_f = mean_curvature_field(cache)

    out: dict[str, float] = {}
    psi_dirs = {"x": (TangentVec(1.0, 0.0, pt.psi_x), (1.0, 0.0)),
                "y": (TangentVec(0.0, 1.0, pt.psi_y), (0.0, 1.0))}
    for name, (xvec, chart_dir) in psi_dirs.items():
        d_zt = ambient_fd_vectorfield(zt_f, point, chart_dir, h, richardson)
        a_x = shape_operator(pt, xvec, frame.z_perp)
        out[f"r1_{name}"] = float(np.linalg.norm(pt.tangential(d_zt) - a_x.ambient))
        d_zp = ambient_fd_vectorfield(zp_f, point, chart_dir, h, richardson)
        out[f"r2_{name}"] = float(np.linalg.norm(
            pt.normal(d_zp) + ii_eval(pt.sf, frame.zt, xvec)))

    d_zt_along_zt = ambient_fd_vectorfield(zt_f, point, (frame.zt.p, frame.zt.q),
                                           h, richardson)
    out["r3"] = float(np.linalg.norm(pt.tangential(d_zt_along_zt)))

    a_zt = shape_operator(pt, frame.zt, frame.z_perp)
    out["r4"] = max(abs(mink_inner(a_zt.ambient, pt.psi_x)),
                    abs(mink_inner(a_zt.ambient, pt.psi_y)))

    def theta_x(u: float, v: float) -> float:
        p = cache.at(u, v)
        return mink_inner(p.psi_x, zt_f(u, v))

    def theta_y(u: float, v: float) -> float:
        p = cache.at(u, v)
        return mink_inner(p.psi_y, zt_f(u, v))

    out["r5"] = abs(fd_directional(theta_y, point, (1.0, 0.0), h, richardson)
                    - fd_directional(theta_x, point, (0.0, 1.0), h, richardson))

    d_h = ambient_fd_vectorfield(h_f, point, (frame.w.p, frame.w.q), h, richardson)
    out["r6"] = abs(mink_norm2(curv.H) + mink_inner(pt.normal(d_h), frame.z_perp))
    return out


# --- curvature identity residuals ------------------------------------------


def identity_residuals(surf: SurfaceDef, point: tuple[float, float],
                       tol: float = 1e-9, h: float = 1e-4,
                       richardson: bool = True,
                       cache: PointCache | None = None,
                       z: Vec | None = None) -> dict[str, float]:
    """Pointwise curvature identity residuals.

    - K equals the derivative of a along Zt;
    - K equals |H|^2 - <II(W,W), II(Zt,Zt)>;
    - Laplacian of a equals -2Ka - 2W(K);
    - II(W,W)*|IIZZ| decomposes as KN*Zperp + (|H|^2-K)*nu (when nu exists).
    """
    if cache is None:
        cache = PointCache(surf, tol, z)
    pt = cache.framed(*point)
    frame, curv = pt.frame, pt.curv
    a_f = a_field(cache, frame.seed)
    k_f = gauss_field(cache)

    out: dict[str, float] = {}
    zt_a = fd_directional(a_f, point, (frame.zt.p, frame.zt.q), h, richardson)
    out["k_vs_zt_a"] = abs(curv.K - zt_a)
    out["k_vs_h2_products"] = abs(curv.K - mink_norm2(curv.H)
                                  + mink_inner(curv.IIWW, curv.IIZZ))
    lap_a = laplace_beltrami(surf, a_f, point, h, richardson, cache=cache)
    w_k = fd_directional(k_f, point, (frame.w.p, frame.w.q), h, richardson)
    out["laplace_a"] = abs(lap_a + 2.0 * curv.K * curv.a + 2.0 * w_k)
    if curv.nu is not None:
        lhs = curv.IIWW * curv.IIZZ_norm
        rhs = curv.KN * frame.z_perp + (mink_norm2(curv.H) - curv.K) * curv.nu
        out["ii_ww_decomposition"] = float(np.linalg.norm(lhs - rhs))
    return out


def grad_chart(pt: SurfacePoint, f_x: float, f_y: float) -> TangentVec:
    """Metric gradient (chart coefficients) from chart partials of a scalar."""
    p, q = gram_solve2(pt.ff.E, pt.ff.F, pt.ff.G, f_x, f_y)
    return TangentVec(p, q, p * pt.psi_x + q * pt.psi_y)


def laplace_beltrami(surf: SurfaceDef, field: Callable[[float, float], float],
                     point: tuple[float, float], h: float = 1e-4,
                     richardson: bool = True,
                     cache: PointCache | None = None) -> float:
    """Chart-form Laplace-Beltrami value div(grad f) at the point.

    Metric quantities come from jets; the inner gradient and the outer
    divergence derivative both go through finite differences.  Works on
    any chart with a nondegenerate first form (not only timelike ones).
    """
    ff_memo: dict[tuple[float, float], FirstForm] = {}

    def ff_at(u: float, v: float) -> FirstForm:
        key = (u, v)
        got = ff_memo.get(key)
        if got is None:
            if cache is not None:
                try:
                    got = cache.at(u, v).ff
                except DegenerateMetricError:
                    got = first_form(eval_immersion_jet(surf, u, v))
            else:
                got = first_form(eval_immersion_jet(surf, u, v))
            ff_memo[key] = got
        return got

    def flux(i: int) -> Callable[[float, float], float]:
        def value(u: float, v: float) -> float:
            ff = ff_at(u, v)
            sqrt_g = math.sqrt(abs(ff.det))
            f_x = fd_directional(field, (u, v), (1.0, 0.0), h, richardson)
            f_y = fd_directional(field, (u, v), (0.0, 1.0), h, richardson)
            gi_x = (ff.G * f_x - ff.F * f_y) / ff.det
            gi_y = (-ff.F * f_x + ff.E * f_y) / ff.det
            return sqrt_g * (gi_x if i == 0 else gi_y)
        return value

    div = (fd_directional(flux(0), point, (1.0, 0.0), h, richardson)
           + fd_directional(flux(1), point, (0.0, 1.0), h, richardson))
    return div / math.sqrt(abs(ff_at(*point).det))


@dataclass(frozen=True)
class GeodesicCheck:
    status: str  # "ok", "not_lightlike", or "zero_gradient"
    grad_norm2: float
    residual: float | None


def geodesic_residual(surf_base: SurfaceDef, f_ast, point: tuple[float, float],
                      h: float = 1e-4, tol: float = 1e-9,
                      richardson: bool = True) -> GeodesicCheck:
    """Autoparallelism of the gradient flow of f on the base surface.

    Only meaningful when grad f is lightlike; otherwise returns a
    precondition record instead of raising.  Needs only a nondegenerate
    first form, so Riemannian charts are accepted (and then report
    "not_lightlike").
    """
    from .expr import eval_jet
    from .jets import jet_var

    memo: dict[tuple[float, float], tuple[list[Jet2], FirstForm]] = {}

    def parts_at(u: float, v: float):
        key = (u, v)
        got = memo.get(key)
        if got is None:
            jets = eval_immersion_jet(surf_base, u, v)
            got = (jets, first_form(jets))
            memo[key] = got
        return got

    def grad_at(u: float, v: float) -> TangentVec:
        jets, ff = parts_at(u, v)
        fj = eval_jet(f_ast, jet_var("x", u), jet_var("y", v))
        psi_x, psi_y = tangents(jets)
        p, q = gram_solve2(ff.E, ff.F, ff.G, fj.dx, fj.dy)
        return TangentVec(p, q, p * psi_x + q * psi_y)

    g0 = grad_at(*point)
    jets0, ff0 = parts_at(*point)
    euclid2 = float(np.dot(g0.ambient, g0.ambient))
    if euclid2 <= (tol * ff0.scale) ** 2:
        return GeodesicCheck("zero_gradient", 0.0, None)
    q = mink_norm2(g0.ambient)
    if abs(q) > tol * euclid2:
        return GeodesicCheck("not_lightlike", q, None)

    def grad_ambient(u: float, v: float) -> Vec:
        return grad_at(u, v).ambient

    deriv = ambient_fd_vectorfield(grad_ambient, point, (g0.p, g0.q), h, richardson)
    psi_x, psi_y = tangents(jets0)
    tp, tq = gram_solve2(ff0.E, ff0.F, ff0.G,
                         mink_inner(deriv, psi_x), mink_inner(deriv, psi_y))
    residual = float(np.linalg.norm(tp * psi_x + tq * psi_y))
    return GeodesicCheck("ok", q, residual)


# --- normal curvature via the Ricci route (independent of a*|IIZZ|) --------


def normal_curvature_fd(surf: SurfaceDef, point: tuple[float, float],
                        h: float = 1e-4, tol: float = 1e-9,
                        cache: PointCache | None = None,
                        z: Vec | None = None) -> float:
    """<R_perp(Zt, W) Zperp, nu> assembled purely from finite differences
    of the normal connection (curvature convention matching K = Zt(a))."""
    if cache is None:
        cache = PointCache(surf, tol, z)
    center = cache.framed(*point)
    seed = center.frame.seed
    zp_f = z_perp_field(cache)

    def chart_zt(u: float, v: float) -> tuple[float, float]:
        fr = cache.framed(u, v, seed).frame
        return (fr.zt.p, fr.zt.q)

    def chart_w(u: float, v: float) -> tuple[float, float]:
        fr = cache.framed(u, v, seed).frame
        return (fr.w.p, fr.w.q)

    def nabla_perp(direction_of, u: float, v: float) -> Vec:
        pt = cache.framed(u, v, seed)
        d = ambient_fd_vectorfield(zp_f, (u, v), direction_of(u, v), h, False)
        return pt.normal(d)

    def field_u(u: float, v: float) -> Vec:  # normal D_Zt Zperp
        return nabla_perp(chart_zt, u, v)

    def field_v(u: float, v: float) -> Vec:  # normal D_W Zperp
        return nabla_perp(chart_w, u, v)

    zt_dir = chart_zt(*point)
    w_dir = chart_w(*point)
    dv_along_zt = ambient_fd_vectorfield(field_v, point, zt_dir, h, False)
    du_along_w = ambient_fd_vectorfield(field_u, point, w_dir, h, False)

    # chart components of the commutator [Zt, W]
    def zt_p(u, v): return chart_zt(u, v)[0]
    def zt_q(u, v): return chart_zt(u, v)[1]
    def w_p(u, v): return chart_w(u, v)[0]
    def w_q(u, v): return chart_w(u, v)[1]

    br_p = (fd_directional(w_p, point, zt_dir, h, False)
            - fd_directional(zt_p, point, w_dir, h, False))
    br_q = (fd_directional(w_q, point, zt_dir, h, False)
            - fd_directional(zt_q, point, w_dir, h, False))
    d_br = ambient_fd_vectorfield(zp_f, point, (br_p, br_q), h, False)

    # curvature with the convention R(X,Y) = D_Y D_X - D_X D_Y + D_[X,Y]
    r_perp = center.normal(du_along_w) - center.normal(dv_along_zt) \
        + center.normal(d_br)
    if center.curv.nu is None:
        return 0.0
    return mink_inner(r_perp, center.curv.nu)
