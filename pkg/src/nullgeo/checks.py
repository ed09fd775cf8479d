"""Grid check suites: every identity quantified as a residual record.

Each suite walks a grid over the surface domain, evaluates pointwise
residuals (skipping points whose finite-difference stencils leave the
domain, lose the null direction, or switch the frame seed), and reports
the worst point per identity.  The worker count is capped by the
NULLGEO_THREADS environment variable; the merge order is row-major and
deterministic either way.
"""

from __future__ import annotations

import math
import os
from typing import Callable

import numpy as np

from .catalog import CatalogEntry, validate_entry
from .curvature import (PointCache, SeedSwitch, compatibility_residuals,
                        identity_residuals, laplace_beltrami,
                        normal_curvature_fd)
from .errors import (ConsistencyError, DegenerateMetricError, DomainRangeError,
                     FrameError, UnsupportedPointError)
from .fd import fd_directional
from .frames import TangentVec
from .gaussmap import (asymptotic_directions_at, basis_self_test, dgauss_at,
                       delta_and_Delta_at, gauss_map_at, h_form, n1n2_at,
                       pullback_gh_at, wedge4, volume_unit)
from .minkowski import Vec, gram_solve2, mink_inner, mink_norm2
from .report import CheckReport, IdentityRecord
from .surface import SurfaceDef

_SKIPPABLE = (DomainRangeError, SeedSwitch, DegenerateMetricError, FrameError)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("NULLGEO_THREADS", "1")))
    except ValueError:
        return 1


def map_points(fn: Callable, points: list) -> list:
    count = _workers()
    if count == 1:
        return [fn(p) for p in points]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, points))


def _collect(surf: SurfaceDef, nx: int, ny: int, fn: Callable,
             formulas: dict[str, tuple[str, float]],
             skip_also: tuple = ()) -> list[IdentityRecord]:
    """Run fn over the grid; fn(point) -> dict of named residuals."""
    points = surf.domain.grid(nx, ny)

    def safe(point):
        try:
            return ("ok", fn(point))
        except _SKIPPABLE + skip_also as exc:
            return ("skip", str(exc))

    results = map_points(safe, points)
    worst: dict[str, tuple[tuple[float, float], float]] = {}
    counts: dict[str, int] = {name: 0 for name in formulas}
    skipped = 0
    for point, (status, payload) in zip(points, results):
        if status == "skip":
            skipped += 1
            continue
        for name, value in payload.items():
            counts[name] = counts.get(name, 0) + 1
            if name not in worst or value > worst[name][1]:
                worst[name] = (point, value)
    records = []
    for name, (formula, tol) in formulas.items():
        if name in worst:
            point, value = worst[name]
            records.append(IdentityRecord(name, formula, value, point, tol,
                                          value <= tol, counts[name], skipped))
        else:
            records.append(IdentityRecord(name, formula, float("nan"), None,
                                          tol, False, 0, skipped,
                                          "no points evaluated"))
    return records


def inset_grid(surf: SurfaceDef, nx: int, ny: int,
               frac: float = 0.05) -> list[tuple[float, float]]:
    d = surf.domain
    mx = frac * (d.x_hi - d.x_lo)
    my = frac * (d.y_hi - d.y_lo)
    xs = np.linspace(d.x_lo + mx, d.x_hi - mx, nx)
    ys = np.linspace(d.y_lo + my, d.y_hi - my, ny)
    return [(float(u), float(v)) for v in ys for u in xs]


# --- frame invariants -------------------------------------------------------


def run_frame_suite(surf: SurfaceDef, nx: int = 11, ny: int = 11,
                    tol: float = 1e-9, z: Vec | None = None) -> list[IdentityRecord]:
    cache = PointCache(surf, z=z)

    def fn(point):
        pt = cache.framed(*point)
        frame, sf = pt.frame, pt.sf
        out = {
            "zt_null": abs(mink_norm2(frame.zt.ambient)),
            "w_null": abs(mink_norm2(frame.w.ambient)),
            "zt_w_pairing": abs(mink_inner(frame.zt.ambient, frame.w.ambient) + 1.0),
            "z_perp_unit": abs(mink_norm2(frame.z_perp) - 1.0),
            "z_perp_tangent_orthogonal": max(
                abs(mink_inner(frame.z_perp, pt.psi_x)),
                abs(mink_inner(frame.z_perp, pt.psi_y))),
            "second_form_tangency": max(
                abs(mink_inner(ii, t))
                for ii in (sf.II_xx, sf.II_xy, sf.II_yy)
                for t in (pt.psi_x, pt.psi_y)),
            "mean_curvature_two_routes": float(
                np.linalg.norm(pt.curv.H - pt.H)),
        }
        if frame.nu is not None:
            out["nu_relations"] = max(
                abs(mink_norm2(frame.nu) - 1.0),
                abs(mink_inner(frame.nu, frame.z_perp)))
        return out

    formulas = {
        "zt_null": ("<Zt, Zt> = 0", tol),
        "w_null": ("<W, W> = 0", tol),
        "zt_w_pairing": ("<Zt, W> = -1", tol),
        "z_perp_unit": ("<Zperp, Zperp> = 1", tol),
        "z_perp_tangent_orthogonal": ("<Zperp, psi_x> = <Zperp, psi_y> = 0", tol),
        "second_form_tangency": ("II values are normal", tol),
        "mean_curvature_two_routes": ("-II(Zt, W) = metric trace of II / 2", tol),
        "nu_relations": ("<nu, nu> = 1 and <nu, Zperp> = 0", tol),
    }
    records = _collect(surf, nx, ny, fn, formulas)
    # nu may legitimately be absent everywhere (ruled surfaces)
    return [r for r in records
            if not (r.name == "nu_relations" and r.evaluated == 0)]


# --- compatibility and curvature identities --------------------------------


def run_compatibility_suite(surf: SurfaceDef, nx: int = 11, ny: int = 11,
                            tol: float = 1e-6, h: float = 1e-4,
                            richardson: bool = True,
                            z: Vec | None = None) -> list[IdentityRecord]:
    cache = PointCache(surf, z=z)

    def fn(point):
        raw = compatibility_residuals(surf, point, h=h, richardson=richardson,
                                      cache=cache, z=z)
        return {
            "r1_zt_derivative": max(raw["r1_x"], raw["r1_y"]),
            "r2_z_perp_derivative": max(raw["r2_x"], raw["r2_y"]),
            "r3_zt_autoparallel": raw["r3"],
            "r4_shape_operator_kills_zt": raw["r4"],
            "r5_zt_form_closed": raw["r5"],
            "r6_mean_curvature_pairing": raw["r6"],
        }

    formulas = {
        "r1_zt_derivative": ("tangential D_X Zt = A_{Zperp} X", tol),
        "r2_z_perp_derivative": ("normal D_X Zperp = -II(Zt, X)", tol),
        "r3_zt_autoparallel": ("tangential D_Zt Zt = 0", tol),
        "r4_shape_operator_kills_zt": ("A_{Zperp} Zt = 0", tol),
        "r5_zt_form_closed": ("d<., Zt> = 0", tol),
        "r6_mean_curvature_pairing": ("|H|^2 + <normal D_W H, Zperp> = 0", tol),
    }
    return _collect(surf, nx, ny, fn, formulas)


def run_identity_suite(surf: SurfaceDef, nx: int = 11, ny: int = 11,
                       tol: float = 1e-6, tol2: float = 1e-4, h: float = 1e-4,
                       richardson: bool = True,
                       z: Vec | None = None) -> list[IdentityRecord]:
    cache = PointCache(surf, z=z)

    def fn(point):
        return identity_residuals(surf, point, h=h, richardson=richardson,
                                  cache=cache, z=z)

    formulas = {
        "k_vs_zt_a": ("K = Zt(a)", tol2),
        "k_vs_h2_products": ("K = |H|^2 - <II(W,W), II(Zt,Zt)>", tol),
        "laplace_a": ("Lap(a) = -2Ka - 2W(K)", tol2),
        "ii_ww_decomposition":
            ("II(W,W) |II(Zt,Zt)| = K_N Zperp + (|H|^2 - K) nu", tol),
    }
    records = _collect(surf, nx, ny, fn, formulas)
    records = [r for r in records
               if not (r.name == "ii_ww_decomposition" and r.evaluated == 0)]
    records += _conditional_records(surf, cache, nx, ny, tol, tol2, h, richardson)
    records += _ricci_record(surf, cache, tol2, h)
    return records


def _conditional_records(surf, cache, nx, ny, tol, tol2, h, richardson):
    """Grid-level conditionals: a == 0 forces K == 0; K == 0 forces the
    gradient of a to follow Zt with a harmonic factor."""
    max_a = 0.0
    max_k = 0.0
    evaluated = 0
    for point in surf.domain.grid(nx, ny):
        try:
            pt = cache.framed(*point)
        except _SKIPPABLE:
            continue
        evaluated += 1
        max_a = max(max_a, abs(pt.curv.a))
        max_k = max(max_k, abs(pt.curv.K))
    records = []
    if evaluated == 0:
        return records

    if max_a <= tol:
        records.append(IdentityRecord(
            "a_zero_implies_flat", "a = 0 everywhere forces K = 0",
            max_k, None, tol, max_k <= tol, evaluated))
    else:
        records.append(IdentityRecord(
            "a_zero_implies_flat", "a = 0 everywhere forces K = 0",
            max_a, None, tol, True, evaluated, 0,
            "vacuous: a is not identically zero (value shown is max |a|)"))

    if max_k <= tol:
        from .curvature import a_field
        inner = inset_grid(surf, min(nx, 5), min(ny, 5))
        # the factor a1 is differentiated twice more below; larger steps
        # keep the 1/h^2 noise amplification of the nesting in check
        h_grad = max(h, 1e-3)

        def grad_a(point):
            pt = cache.framed(*point)
            seed = pt.frame.seed
            af = a_field(cache, seed)
            a_x = fd_directional(af, point, (1.0, 0.0), h_grad, richardson)
            a_y = fd_directional(af, point, (0.0, 1.0), h_grad, richardson)
            p, q = gram_solve2(pt.ff.E, pt.ff.F, pt.ff.G, a_x, a_y)
            return pt, p, q

        cross_vals = []
        skipped = 0
        for point in inner:
            try:
                pt, p, q = grad_a(point)
            except _SKIPPABLE:
                skipped += 1
                continue
            zt = pt.frame.zt
            cross_vals.append((point, abs(p * zt.q - q * zt.p)))
        if cross_vals:
            worst = max(cross_vals, key=lambda kv: kv[1])
            records.append(IdentityRecord(
                "flat_implies_grad_a_along_zt",
                "K = 0 everywhere forces grad a parallel to Zt",
                worst[1], worst[0], tol2, worst[1] <= tol2,
                len(cross_vals), skipped))

        def a1_field(u, v):
            pt, p, q = grad_a((u, v))
            zt = pt.frame.zt
            denom = zt.p * zt.p + zt.q * zt.q
            return (p * zt.p + q * zt.q) / denom

        h_lap = max(80.0 * h, 8e-3)
        lap_vals = []
        skipped = 0
        for point in inset_grid(surf, 3, 3, frac=0.15):
            try:
                lap_vals.append((point, abs(laplace_beltrami(
                    surf, a1_field, point, h_lap, richardson=True, cache=cache))))
            except _SKIPPABLE:
                skipped += 1
        if lap_vals:
            worst = max(lap_vals, key=lambda kv: kv[1])
            records.append(IdentityRecord(
                "a1_harmonic", "K = 0: the factor a1 in grad a = a1 Zt is harmonic",
                worst[1], worst[0], tol2, worst[1] <= tol2,
                len(lap_vals), skipped))
    else:
        records.append(IdentityRecord(
            "flat_implies_grad_a_along_zt",
            "K = 0 everywhere forces grad a parallel to Zt",
            max_k, None, tol, True, evaluated, 0,
            "vacuous: K is not identically zero (value shown is max |K|)"))
    return records


def _ricci_record(surf, cache, tol2, h):
    """Closed-form normal curvature against the finite-difference Ricci route."""
    if surf.dim != 4:
        return []
    vals = []
    skipped = 0
    for point in inset_grid(surf, 3, 3, frac=0.1):
        try:
            pt = cache.framed(*point)
            if pt.curv.nu is None:
                skipped += 1
                continue
            kn_fd = normal_curvature_fd(surf, point, h=h, cache=cache)
            vals.append((point, abs(pt.curv.KN - kn_fd)))
        except _SKIPPABLE:
            skipped += 1
    if not vals:
        return []
    worst = max(vals, key=lambda kv: kv[1])
    return [IdentityRecord(
        "kn_closed_vs_ricci_fd",
        "a |II(Zt,Zt)| = <R_perp(Zt, W) Zperp, nu>",
        worst[1], worst[0], tol2, worst[1] <= tol2, len(vals), skipped)]


# --- Gauss-map suite --------------------------------------------------------


def run_gauss_suite(surf: SurfaceDef, nx: int = 11, ny: int = 11,
                    tol_exact: float = 1e-9, tol_fd: float = 1e-5,
                    tol_form: float = 1e-6, h: float = 1e-4,
                    z: Vec | None = None) -> list[IdentityRecord]:
    if surf.dim != 4:
        return []
    records = []
    self_test = basis_self_test()
    records.append(IdentityRecord(
        "bivector_self_test", "star^2 = -id; (3,3) signature; H basis values",
        max(self_test.values()), None, 1e-12, True, 1))

    cache = PointCache(surf, z=z)

    def fn(point):
        pt = cache.framed(*point)
        if pt.curv.nu is None:
            raise UnsupportedPointError("ruled point")
        frame, curv = pt.frame, pt.curv
        s = frame.orientation_sign
        g = gauss_map_at(pt)
        n1, n2 = n1n2_at(pt)
        out = {
            "h_gg_plus_one": abs(h_form(g.coeffs, g.coeffs, s) + 1.0),
            "gauss_map_simple": abs(wedge4(g.coeffs, g.coeffs, s)),
            "h_n1n2_plus_one": abs(h_form(n1, n2, s) + 1.0),
            "volume_normalization": abs(volume_unit(pt) - 1.0),
        }
        fd_res = 0.0
        for xvec in (frame.zt, frame.w):
            formula = dgauss_at(pt, xvec)
            fd = dgauss_at(pt, xvec, route="fd", h=h, cache=cache)
            fd_res = max(fd_res, float(np.linalg.norm(formula - fd)))
        out["dgauss_formula_vs_fd"] = fd_res

        pull = pullback_gh_at(pt)
        out["pullback_routes_agree"] = max(
            abs(pull.direct.qZZ - pull.closed.qZZ),
            abs(pull.direct.qZW - pull.closed.qZW),
            abs(pull.direct.qWW - pull.closed.qWW))
        disc_target = -((curv.K + 1j * curv.KN) ** 2)
        out["disc_identity"] = abs(pull.disc - disc_target)

        delta = delta_and_Delta_at(pt)
        out["invariant_delta"] = abs(delta.big_delta + curv.KN ** 2)
        out["zt_asymptotic"] = abs(delta.delta_zz)

        asym = asymptotic_directions_at(pt)
        if not asym.all_directions and abs(curv.Hnu * curv.KN) > 1e-6:
            second = [d for d in asym.directions
                      if not _parallel(d, frame.zt)]
            closed = TangentVec(
                (curv.Hnu / curv.IIZZ_norm) * frame.zt.p + frame.w.p,
                (curv.Hnu / curv.IIZZ_norm) * frame.zt.q + frame.w.q,
                (curv.Hnu / curv.IIZZ_norm) * frame.zt.ambient + frame.w.ambient)
            if len(second) != 1:
                out["second_asymptotic_direction"] = 1.0
            else:
                out["second_asymptotic_direction"] = _direction_residual(
                    second[0], closed)
        return out

    formulas = {
        "h_gg_plus_one": ("H(G, G) = -1", tol_exact),
        "gauss_map_simple": ("G ^ G = 0", tol_exact),
        "h_n1n2_plus_one": ("H(N1, N2) = -1", tol_exact),
        "volume_normalization": ("-i N1 ^ N2 = 1", tol_exact),
        "dgauss_formula_vs_fd": ("closed dG matches finite differences", tol_fd),
        "pullback_routes_agree": ("pullback of H: direct = closed forms", tol_form),
        "disc_identity": ("disc of the pullback = -(K + i K_N)^2", tol_form),
        "invariant_delta": ("asymptotic invariant = -K_N^2", tol_form),
        "zt_asymptotic": ("delta(Zt) = 0", tol_exact),
        "second_asymptotic_direction":
            ("second asymptotic direction = (<H,nu>/|II(Zt,Zt)|) Zt + W", tol_form),
    }
    grid_records = _collect(surf, nx, ny, fn, formulas,
                            skip_also=(UnsupportedPointError,))
    supported = any(r.evaluated > 0 for r in grid_records)
    if not supported:
        return records + [IdentityRecord(
            "gauss_map_not_applicable",
            "II(Zt,Zt) = 0 on the whole grid (ruled): Gauss-map suite skipped",
            0.0, None, 1.0, True, 0, grid_records[0].skipped)]
    grid_records = [r for r in grid_records
                    if not (r.name == "second_asymptotic_direction"
                            and r.evaluated == 0)]
    return records + grid_records


def _parallel(a: TangentVec, b: TangentVec) -> bool:
    return abs(a.p * b.q - a.q * b.p) <= 1e-9 * max(
        1.0, abs(a.p) + abs(a.q)) * max(1.0, abs(b.p) + abs(b.q))


def _direction_residual(a: TangentVec, b: TangentVec) -> float:
    na = math.hypot(a.p, a.q)
    nb = math.hypot(b.p, b.q)
    return abs(a.p * b.q - a.q * b.p) / (na * nb)


# --- full report ------------------------------------------------------------


def has_any_null_direction(surf: SurfaceDef, nx: int, ny: int) -> bool:
    if surf.z_dir is None:
        return False
    from .frames import detect_null_direction
    for point in surf.domain.grid(nx, ny):
        try:
            if detect_null_direction(surf, point).has_cnd:
                return True
        except (DomainRangeError, DegenerateMetricError):
            continue
    return False


def check_surface(surf: SurfaceDef, nx: int = 11, ny: int = 11,
                  tol: float = 1e-6, tol2: float = 1e-4, h: float = 1e-4,
                  richardson: bool = True,
                  entry: CatalogEntry | None = None) -> CheckReport:
    """Run every applicable suite and assemble the report."""
    report = CheckReport(surf.label, (nx, ny))
    if entry is not None:
        report.expected_fail = bool(entry.expected_fail)
        report.extend(validate_entry(entry, nx, ny))
        if entry.expected_fail:
            report.notes.append(
                "expected-fail fixture: only the declared failing hypotheses "
                "are checked; the entry passes when they fail as declared")
            return report
        if not entry.params.get("frame_suites", True):
            report.notes.append(
                "witness fixture: the null-direction set has empty interior, "
                "so the frame-field identity suites do not apply")
            return report
    if has_any_null_direction(surf, nx, ny):
        report.extend(run_frame_suite(surf, nx, ny))
        report.extend(run_compatibility_suite(surf, nx, ny, tol, h, richardson))
        report.extend(run_identity_suite(surf, nx, ny, tol, tol2, h, richardson))
        report.extend(run_gauss_suite(surf, nx, ny, h=h))
    else:
        report.notes.append("no null tangent direction anywhere on the grid; "
                            "frame suites skipped")
    return report
