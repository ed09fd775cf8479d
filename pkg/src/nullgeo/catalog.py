"""Built-in surface families and their hypothesis validators.

Each constructor assembles a :class:`SurfaceDef` from curve/function
expressions and records the hypotheses the family must satisfy on its
domain together with the behaviour it is expected to exhibit.  The
validators quantify every hypothesis as a residual record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import PointCache, analyze_point
from .errors import DegenerateMetricError, DomainRangeError, UsageError
from .expr import parse_expr, vars_used
from .frames import detect_null_direction
from .jets import jet_const, jet_var
from .minkowski import Vec, as_vec, mink_inner, mink_norm2
from .report import IdentityRecord
from .surface import Domain, SurfaceDef, make_surface

E3_4D = np.array([0.0, 0.0, 1.0, 0.0])
E4_4D = np.array([0.0, 0.0, 0.0, 1.0])

NONZERO_MARGIN = 1e-6  # "is nonzero" hypotheses must clear this


@dataclass
class CatalogEntry:
    id: str
    family: str
    surface: SurfaceDef
    expected: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    expected_fail: dict | None = None  # record name -> declared residual


def _check_vars(exprs: list[str], allowed: str, what: str) -> None:
    for text in exprs:
        used = vars_used(parse_expr(text))
        if not used <= {allowed}:
            raise UsageError(f"{what} expressions may only use {allowed!r}: {text!r}")


def _curve_eval(asts, var: str, t: float):
    """Value, first and second derivative vectors of a curve of expressions."""
    if var == "x":
        xj, yj = jet_var("x", t), jet_const(0.0)
    else:
        xj, yj = jet_const(0.0), jet_var("y", t)
    from .expr import eval_jet
    jets = [eval_jet(a, xj, yj) for a in asts]
    val = np.array([j.v for j in jets])
    if var == "x":
        d1 = np.array([j.dx for j in jets])
        d2 = np.array([j.dxx for j in jets])
    else:
        d1 = np.array([j.dy for j in jets])
        d2 = np.array([j.dyy for j in jets])
    return val, d1, d2


# --- constructors -----------------------------------------------------------


def make_ruled_4d(entry_id: str, alpha: list[str], zt: list[str], z: Vec,
                  domain: Domain) -> CatalogEntry:
    """Ruled surface alpha(x) + y * T(x) with lightlike directrix and rules."""
    _check_vars(alpha, "x", "directrix")
    _check_vars(zt, "x", "ruling field")
    coords = [f"({a})+y*({t})" for a, t in zip(alpha, zt)]
    surf = make_surface(entry_id, coords, domain, [float(c) for c in z])
    return CatalogEntry(
        entry_id, "ruled_4d", surf,
        expected={"ruled": True, "umbilic_relation": True},
        params={"alpha": [parse_expr(a) for a in alpha],
                "zt": [parse_expr(t) for t in zt]})


def make_ruled_3d(entry_id: str, alpha: list[str], t0, z, domain: Domain) -> CatalogEntry:
    """Flat minimal ruled surface alpha(x) + y * T0 in R^{2,1}."""
    _check_vars(alpha, "x", "directrix")
    t0 = as_vec(t0)
    coords = [f"({a})+y*({float(c)!r})" for a, c in zip(alpha, t0)]
    surf = make_surface(entry_id, coords, domain, [float(c) for c in z])
    return CatalogEntry(
        entry_id, "ruled_3d", surf,
        expected={"ruled": True, "flat": True, "minimal": True},
        params={"alpha": [parse_expr(a) for a in alpha], "t0": t0})


def make_sum_of_curves(entry_id: str, alpha: list[str], beta: list[str],
                       domain: Domain,
                       kn_positive_on: tuple[float, float] | None = None,
                       expected_fail: dict | None = None) -> CatalogEntry:
    """Sum of two lightlike curves: alpha(x) orthogonal to e4, beta(y) to e3.

    ``kn_positive_on`` optionally declares a square on which the normal
    curvature must stay at or above 0.1 (the sign of K_N is not a family
    property, so the bound is opt-in per fixture).
    """
    _check_vars(alpha, "x", "first curve")
    _check_vars(beta, "y", "second curve")
    coords = [f"({a})+({b})" for a, b in zip(alpha, beta)]
    surf = make_surface(entry_id, coords, domain, [0.0, 0.0, 1.0, 0.0])
    expected = {"minimal": True, "non_ruled": True}
    if kn_positive_on is not None:
        expected["kn_positive_on"] = kn_positive_on
    return CatalogEntry(
        entry_id, "sum_of_curves", surf,
        expected=expected,
        params={"alpha": [parse_expr(a) for a in alpha],
                "beta": [parse_expr(b) for b in beta]},
        expected_fail=expected_fail)


def make_graph_fg(entry_id: str, f: str, g: str, domain: Domain,
                  which: str = "both", witness: bool = False) -> CatalogEntry:
    """Graph surface (f(x,y), g(x,y), x, y).

    ``witness=True`` marks a deliberately hypothesis-breaking fixture:
    the coordinate curves are not lightlike, so only the equivalence and
    biconditional checks apply (the frame identities need a null
    direction on an open set).
    """
    if which not in ("e3", "e4", "both"):
        raise UsageError("which must be 'e3', 'e4' or 'both'")
    coords = [f, g, "x", "y"]
    z = [0.0, 0.0, 0.0, 1.0] if which in ("e4", "both") else [0.0, 0.0, 1.0, 0.0]
    surf = make_surface(entry_id, coords, domain, z)
    return CatalogEntry(
        entry_id, "graph_fg", surf,
        expected={"which": which, "witness": witness},
        params={"f": parse_expr(f), "g": parse_expr(g),
                "frame_suites": not witness})


def make_graph_over_lorentz(entry_id: str, chart: list[str], f: str,
                            domain: Domain) -> CatalogEntry:
    """Graph of f over a Lorentzian base surface embedded in (e4)-orthogonal
    R^{2,1}; coordinates (chart, f)."""
    coords = list(chart) + [f]
    if len(coords) != 4:
        raise UsageError("chart must have 3 coordinates")
    surf = make_surface(entry_id, coords, domain, [0.0, 0.0, 0.0, 1.0])
    base = make_surface(entry_id + "_base", list(chart), domain, None)
    return CatalogEntry(
        entry_id, "graph_over_lorentz", surf,
        expected={"harmonic_f": True, "lightlike_gradient": True},
        params={"base": base, "f": parse_expr(f)})


def make_minimal_flat_normal(entry_id: str, alpha: list[str], w0, z,
                             domain: Domain) -> CatalogEntry:
    """Minimal surface with flat normal bundle: alpha(x) + y * W0."""
    _check_vars(alpha, "x", "directrix")
    w0 = as_vec(w0)
    coords = [f"({a})+y*({float(c)!r})" for a, c in zip(alpha, w0)]
    surf = make_surface(entry_id, coords, domain, [float(c) for c in z])
    return CatalogEntry(
        entry_id, "minimal_flat_normal", surf,
        expected={"minimal": True, "flat_normal": True, "non_ruled": True},
        params={"alpha": [parse_expr(a) for a in alpha], "w0": w0})


# --- built-in entries -------------------------------------------------------


def built_in() -> dict[str, CatalogEntry]:
    """The shipped fixtures, in stable order."""
    entries: list[CatalogEntry] = []

    entries.append(make_ruled_4d(
        "ruled_4d",
        alpha=["x", "0", "0", "x"],
        zt=["1", "cos(x)", "sin(x)", "0"],
        z=E4_4D,
        domain=Domain(-1.0, 1.0, 0.5, 1.5)))

    # directrix is parallel to the ruling at x = 0; domain keeps a margin
    entries.append(make_ruled_3d(
        "ruled_3d",
        alpha=["x", "sin(x)", "1-cos(x)"],
        t0=[1.0, 1.0, 0.0],
        z=[1.0, 1.0, 1.0],
        domain=Domain(0.5, 1.5, -1.0, 1.0)))

    entries.append(make_sum_of_curves(
        "sum_of_curves",
        alpha=["sinh(x)", "cosh(x)", "x", "0"],
        beta=["sinh(y)", "y", "0", "cosh(y)"],
        domain=Domain(-0.8, 0.8, -0.8, 0.8),
        kn_positive_on=(-0.5, 0.5)))

    # Both curve speeds have squared Minkowski length exactly 2, so the
    # lightlikeness hypothesis fails by construction; kept as a permanent
    # regression fixture (the corrected pair above swaps sinh/cosh in the
    # first coordinate).
    entries.append(make_sum_of_curves(
        "sum_of_curves_paper_literal",
        alpha=["cosh(x)", "sinh(x)", "x", "0"],
        beta=["cosh(y)", "y", "0", "sinh(y)"],
        domain=Domain(-0.8, 0.8, -0.8, 0.8),
        expected_fail={"alpha_prime_lightlike": 2.0,
                       "beta_prime_lightlike": 2.0}))

    entries.append(make_minimal_flat_normal(
        "minimal_flat_normal",
        alpha=["sinh(x)", "cosh(x)", "x", "0"],
        w0=[1.0, 0.0, 0.0, 1.0],
        z=E4_4D,
        domain=Domain(-1.0, 1.0, -1.0, 1.0)))

    entries.append(make_graph_over_lorentz(
        "cylinder_graph",
        chart=["x", "cos(y)", "sin(y)"],
        f="y-x",
        domain=Domain(-1.0, 1.0, 0.5, 5.5)))

    entries.append(make_graph_fg(
        "graph_fg",
        f="1.4142135623730951*(x+y)",
        g="x-y",
        domain=Domain(-0.8, 0.8, -0.8, 0.8),
        which="both"))

    # Minimality fails together with the mixed-partial condition.
    entries.append(make_graph_fg(
        "graph_fg_twist",
        f="1.4142135623730951*(x+y)+0.1*x*y",
        g="x-y",
        domain=Domain(-0.8, 0.8, -0.8, 0.8),
        which="both",
        witness=True))

    # Null coordinate curves in both chart directions but not minimal.
    entries.append(make_graph_fg(
        "graph_fg_wave",
        f="sinh(x+y)",
        g="cosh(x+y)",
        domain=Domain(-0.6, 0.6, -0.6, 0.6),
        which="both"))

    # Non-minimal, non-ruled, nonzero normal curvature: the fixture the
    # asymptotic-direction checks need.
    entries.append(make_graph_fg(
        "graph_fg_nonminimal",
        f="sinh(x)+0.5*y^2",
        g="cosh(x)",
        domain=Domain(-0.8, 0.8, 0.3, 0.8),
        which="e4"))

    return {e.id: e for e in entries}


def get(entry_id: str) -> CatalogEntry:
    entries = built_in()
    if entry_id not in entries:
        raise UsageError(f"unknown catalog surface {entry_id!r}")
    return entries[entry_id]


# --- validators -------------------------------------------------------------


def _residual_record(name: str, formula: str, values, tol: float,
                     evaluated: int, skipped: int = 0, note: str = "") -> IdentityRecord:
    """Record for a 'must be small' hypothesis: pass iff max <= tol."""
    if values:
        worst = max(values, key=lambda kv: kv[1])
        return IdentityRecord(name, formula, worst[1], worst[0], tol,
                              worst[1] <= tol, evaluated, skipped, note)
    return IdentityRecord(name, formula, float("nan"), None, tol, False,
                          0, skipped, note or "no points evaluated")


def _nonzero_record(name: str, formula: str, values, margin: float,
                    evaluated: int, note: str = "") -> IdentityRecord:
    """Record for a 'must stay away from zero' hypothesis: pass iff min > margin."""
    if values:
        worst = min(values, key=lambda kv: kv[1])
        return IdentityRecord(name, formula, worst[1], worst[0], margin,
                              worst[1] > margin, evaluated, 0,
                              note or "nonzero check: value must exceed tolerance")
    return IdentityRecord(name, formula, float("nan"), None, margin, False,
                          0, 0, "no points evaluated")


def _axis_samples(domain: Domain, var: str, n: int) -> list[float]:
    lo, hi = (domain.x_lo, domain.x_hi) if var == "x" else (domain.y_lo, domain.y_hi)
    return [float(t) for t in np.linspace(lo, hi, n)]


def _curve_records(asts, var: str, domain: Domain, n: int, tag: str,
                   tol: float) -> tuple[list[IdentityRecord], dict]:
    """Lightlikeness record for a curve plus cached samples for reuse."""
    samples = {}
    vals = []
    for t in _axis_samples(domain, var, n):
        val, d1, d2 = _curve_eval(asts, var, t)
        samples[t] = (val, d1, d2)
        point = (t, domain.y_lo) if var == "x" else (domain.x_lo, t)
        vals.append((point, abs(mink_norm2(d1))))
    rec = _residual_record(f"{tag}_lightlike", f"<{tag}', {tag}'> = 0",
                           vals, tol, len(vals))
    return [rec], samples


def _grid_minmax(surf: SurfaceDef, nx: int, ny: int, fn):
    """Evaluate fn(point) over the grid; returns (values, skipped)."""
    values = []
    skipped = 0
    for point in surf.domain.grid(nx, ny):
        try:
            values.append((point, fn(point)))
        except (DomainRangeError, DegenerateMetricError):
            skipped += 1
    return values, skipped


def validate_entry(entry: CatalogEntry, nx: int = 11, ny: int = 11,
                   tol: float = 1e-9) -> list[IdentityRecord]:
    """Quantify every hypothesis and expectation of a catalog entry."""
    fn = {
        "ruled_4d": _validate_ruled_4d,
        "ruled_3d": _validate_ruled_3d,
        "sum_of_curves": _validate_sum_of_curves,
        "graph_fg": _validate_graph_fg,
        "graph_over_lorentz": _validate_graph_over_lorentz,
        "minimal_flat_normal": _validate_minimal_flat_normal,
    }[entry.family]
    records = fn(entry, nx, ny, tol)
    if entry.expected_fail:
        records = _apply_expected_fail(entry, records)
    return records


def _apply_expected_fail(entry: CatalogEntry,
                         records: list[IdentityRecord]) -> list[IdentityRecord]:
    """Keep only the declared-failure records; they pass when the failure is
    reproduced at the declared magnitude."""
    out = []
    for rec in records:
        declared = entry.expected_fail.get(rec.name)
        if declared is None:
            continue
        reproduced = (not rec.passed) and abs(rec.max_residual - declared) <= 1e-9
        out.append(IdentityRecord(
            rec.name, rec.formula, rec.max_residual, rec.worst_point,
            rec.tolerance, reproduced, rec.evaluated, rec.skipped,
            f"expected-fail: declared residual {declared!r}"))
    return out


def _timelike_record(surf: SurfaceDef, nx: int, ny: int) -> IdentityRecord:
    vals, skipped = _grid_minmax(surf, nx, ny,
                                 lambda p: -first_form_at(surf, p).det)
    return _nonzero_record("timelike", "EG - F^2 < 0", vals, 0.0,
                           len(vals), note="determinant must be negative")


def first_form_at(surf: SurfaceDef, point):
    from .frames import first_form
    from .surface import eval_immersion_jet
    return first_form(eval_immersion_jet(surf, *point))


def _cnd_record(surf: SurfaceDef, nx: int, ny: int, tol: float,
                z: Vec | None = None, name: str = "has_null_direction") -> IdentityRecord:
    def val(point):
        det = detect_null_direction(surf, point, tol, z)
        return 0.0 if det.has_cnd else 1.0
    vals, skipped = _grid_minmax(surf, nx, ny, val)
    return _residual_record(name, "tangent part of Z is nonzero lightlike",
                            vals, 0.5, len(vals), skipped)


def _validate_ruled_4d(entry, nx, ny, tol):
    surf = entry.surface
    alpha, zt = entry.params["alpha"], entry.params["zt"]
    z = surf.z_dir
    records, a_samples = _curve_records(alpha, "x", surf.domain, nx, "alpha_prime", tol)

    zt_vals, zt_orth, z_alpha, indep = [], [], [], []
    for t in _axis_samples(surf.domain, "x", nx):
        _, a1, _ = a_samples[t]
        tv, t1, _ = _curve_eval(zt, "x", t)
        pt = (t, surf.domain.y_lo)
        zt_vals.append((pt, abs(mink_norm2(tv))))
        zt_orth.append((pt, abs(mink_inner(z, tv))))
        z_alpha.append((pt, abs(mink_inner(z, a1))))
        wedge = np.outer(a1, tv) - np.outer(tv, a1)
        denom = np.linalg.norm(a1) * np.linalg.norm(tv)
        indep.append((pt, float(np.linalg.norm(wedge)) / denom))
    n = len(zt_vals)
    records += [
        _residual_record("ruling_lightlike", "<T(x), T(x)> = 0", zt_vals, tol, n),
        _residual_record("ruling_orthogonal_to_Z", "<Z, T(x)> = 0", zt_orth, tol, n),
        _nonzero_record("z_not_orthogonal_to_alpha_prime", "<Z, alpha'> != 0",
                        z_alpha, NONZERO_MARGIN, n),
        _nonzero_record("alpha_prime_independent_of_ruling",
                        "alpha' and T(x) linearly independent", indep,
                        NONZERO_MARGIN, n),
        _timelike_record(surf, nx, ny),
        _cnd_record(surf, nx, ny, tol),
    ]
    records += _ruled_expectation_records(surf, nx, ny, tol)
    return records


def _ruled_expectation_records(surf, nx, ny, tol):
    def framed(point):
        pt = analyze_point(surf, *point)
        if pt.curv is None:
            raise DomainRangeError("no frame")
        return pt

    def iizz(point):
        return float(np.linalg.norm(framed(point).curv.IIZZ))

    def umbilic(point):
        pt = framed(point)
        return abs(mink_norm2(pt.curv.H) - pt.curv.K)

    def kn_proxy(point):
        pt = framed(point)
        return abs(pt.curv.a) * float(np.linalg.norm(pt.curv.IIZZ))

    v1, s1 = _grid_minmax(surf, nx, ny, iizz)
    v2, s2 = _grid_minmax(surf, nx, ny, umbilic)
    v3, s3 = _grid_minmax(surf, nx, ny, kn_proxy)
    return [
        _residual_record("ruled_ii_zz_zero", "II(Zt, Zt) = 0", v1, 1e-9, len(v1), s1),
        _residual_record("umbilic_relation", "|H|^2 - K = 0", v2, 1e-7, len(v2), s2),
        _residual_record("normal_curvature_proxy_zero", "a * |II(Zt,Zt)| = 0",
                         v3, 1e-9, len(v3), s3),
    ]


def _validate_ruled_3d(entry, nx, ny, tol):
    surf = entry.surface
    alpha, t0 = entry.params["alpha"], entry.params["t0"]
    z = surf.z_dir
    records, a_samples = _curve_records(alpha, "x", surf.domain, nx, "alpha_prime", tol)

    t0_light = abs(mink_norm2(t0))
    zt0 = abs(mink_inner(z, t0))
    indep = []
    for t in _axis_samples(surf.domain, "x", nx):
        _, a1, _ = a_samples[t]
        wedge = np.outer(a1, t0) - np.outer(t0, a1)
        denom = np.linalg.norm(a1) * np.linalg.norm(t0)
        indep.append(((t, surf.domain.y_lo), float(np.linalg.norm(wedge)) / denom))
    records += [
        IdentityRecord("t0_lightlike", "<T0, T0> = 0", t0_light, None, tol,
                       t0_light <= tol, 1),
        IdentityRecord("z_orthogonal_to_t0", "<Z, T0> = 0", zt0, None, tol,
                       zt0 <= tol, 1),
        _nonzero_record("alpha_prime_independent_of_t0",
                        "alpha' and T0 linearly independent", indep,
                        NONZERO_MARGIN, len(indep)),
        _timelike_record(surf, nx, ny),
        _cnd_record(surf, nx, ny, tol),
    ]

    def k_abs(point):
        return abs(analyze_point(surf, *point).K)

    def h_norm(point):
        return float(np.linalg.norm(analyze_point(surf, *point).H))

    def iizz(point):
        pt = analyze_point(surf, *point)
        if pt.curv is None:
            raise DomainRangeError("no frame")
        return float(np.linalg.norm(pt.curv.IIZZ))

    v1, s1 = _grid_minmax(surf, nx, ny, k_abs)
    v2, s2 = _grid_minmax(surf, nx, ny, h_norm)
    v3, s3 = _grid_minmax(surf, nx, ny, iizz)
    records += [
        _residual_record("flat", "K = 0", v1, 1e-7, len(v1), s1),
        _residual_record("minimal", "H = 0", v2, 1e-7, len(v2), s2),
        _residual_record("ruled_ii_zz_zero", "II(Zt, Zt) = 0", v3, 1e-9, len(v3), s3),
    ]
    return records


def _validate_sum_of_curves(entry, nx, ny, tol):
    surf = entry.surface
    alpha, beta = entry.params["alpha"], entry.params["beta"]
    rec_a, a_samples = _curve_records(alpha, "x", surf.domain, nx, "alpha_prime", tol)
    rec_b, b_samples = _curve_records(beta, "y", surf.domain, ny, "beta_prime", tol)
    records = rec_a + rec_b

    a_plane = [((t, surf.domain.y_lo), abs(d1[3]))
               for t, (val, d1, d2) in a_samples.items()]
    b_plane = [((surf.domain.x_lo, t), abs(d1[2]))
               for t, (val, d1, d2) in b_samples.items()]
    records += [
        _residual_record("alpha_in_e4_hyperplane", "alpha'_4 = 0", a_plane,
                         tol, len(a_plane)),
        _residual_record("beta_in_e3_hyperplane", "beta'_3 = 0", b_plane,
                         tol, len(b_plane)),
    ]

    pair_vals, e3_alpha, b2_vals = [], [], []
    for tx, (_, a1, _) in a_samples.items():
        for ty, (_, b1, _) in b_samples.items():
            pair_vals.append(((tx, ty), abs(mink_inner(a1, b1))))
    for tx, (_, a1, _) in a_samples.items():
        e3_alpha.append(((tx, surf.domain.y_lo), abs(a1[2])))
    for ty, (_, b1, b2) in b_samples.items():
        b2_vals.append(((surf.domain.x_lo, ty),
                        abs(mink_norm2(b2)) / float(np.dot(b2, b2))
                        if np.dot(b2, b2) > 0 else 0.0))
    records += [
        _nonzero_record("alpha_beta_speeds_not_orthogonal", "<alpha', beta'> != 0",
                        pair_vals, NONZERO_MARGIN, len(pair_vals)),
        _nonzero_record("e3_not_orthogonal_to_alpha_prime", "<e3, alpha'> != 0",
                        e3_alpha, NONZERO_MARGIN, len(e3_alpha)),
        _nonzero_record("beta_second_derivative_not_lightlike",
                        "<beta'', beta''> != 0", b2_vals, NONZERO_MARGIN,
                        len(b2_vals)),
        _timelike_record(surf, nx, ny),
        _cnd_record(surf, nx, ny, tol),
    ]
    if entry.expected_fail:
        return records  # expectations are meaningless for the broken fixture

    # tangent part of e3 must be lambda * beta'(y)
    def lam_residual(point):
        pt = analyze_point(surf, *point)
        if pt.frame is None:
            raise DomainRangeError("no frame")
        _, a1, _ = _curve_eval(alpha, "x", point[0])
        _, b1, _ = _curve_eval(beta, "y", point[1])
        lam = a1[2] / mink_inner(a1, b1)
        return float(np.linalg.norm(pt.frame.zt.ambient - lam * b1))

    def h_norm(point):
        return float(np.linalg.norm(analyze_point(surf, *point).H))

    def iizz(point):
        pt = analyze_point(surf, *point)
        if pt.curv is None:
            raise DomainRangeError("no frame")
        return float(np.linalg.norm(pt.curv.IIZZ))

    v1, s1 = _grid_minmax(surf, nx, ny, lam_residual)
    v2, s2 = _grid_minmax(surf, nx, ny, h_norm)
    v3, s3 = _grid_minmax(surf, nx, ny, iizz)
    records += [
        _residual_record("zt_matches_scaled_beta_prime",
                         "e3 tangent part = lambda(x,y) beta'(y)", v1, tol,
                         len(v1), s1),
        _residual_record("minimal", "H = 0", v2, 1e-7, len(v2), s2),
        _nonzero_record("non_ruled", "II(Zt, Zt) != 0", v3, NONZERO_MARGIN, len(v3)),
    ]

    # normal curvature stays away from zero on the declared witness square
    if "kn_positive_on" in entry.expected:
        lo, hi = entry.expected["kn_positive_on"]
        d = surf.domain
        xs = np.linspace(max(lo, d.x_lo), min(hi, d.x_hi), nx)
        ys = np.linspace(max(lo, d.y_lo), min(hi, d.y_hi), ny)
        kn_vals = []
        for point in [(float(u), float(v)) for v in ys for u in xs]:
            pt = analyze_point(surf, *point)
            if pt.curv is not None:
                kn_vals.append((point, pt.curv.KN))
        records.append(_nonzero_record(
            "kn_lower_bound", "K_N >= 0.1 on the witness square", kn_vals, 0.1,
            len(kn_vals), note="minimum normal curvature over the witness square"))
    return records


def _validate_graph_fg(entry, nx, ny, tol):
    surf = entry.surface
    which = entry.expected["which"]
    witness = entry.expected.get("witness", False)
    records = [_timelike_record(surf, nx, ny)]

    cache: dict = {}

    def pt_at(point):
        if point not in cache:
            cache[point] = analyze_point(surf, *point, z=E4_4D)
        return cache[point]

    if not witness and which in ("e4", "both"):
        v, s = _grid_minmax(surf, nx, ny, lambda p: abs(pt_at(p).ff.E))
        records.append(_residual_record("psi_x_lightlike", "E = 0", v, tol, len(v), s))

        def e4_residual(point):
            pt = pt_at(point)
            if not pt.has_cnd:
                raise DomainRangeError("no null direction")
            return float(np.linalg.norm(pt.frame.zt.ambient - pt.psi_x / pt.ff.F))
        v, s = _grid_minmax(surf, nx, ny, e4_residual)
        records.append(_residual_record(
            "e4_tangent_part", "e4 tangent part = psi_x / F", v, tol, len(v), s))
    if not witness and which in ("e3", "both"):
        v, s = _grid_minmax(surf, nx, ny, lambda p: abs(first_form_at(surf, p).G))
        records.append(_residual_record("psi_y_lightlike", "G = 0", v, tol, len(v), s))

    # pointwise equivalence: E vanishes iff e4 projects to a null direction
    def equivalence(point):
        ff = first_form_at(surf, point)
        has = detect_null_direction(surf, point, tol, E4_4D).has_cnd
        e_small = abs(ff.E) <= tol * ff.scale ** 2
        return 0.0 if has == e_small else 1.0
    v, s = _grid_minmax(surf, nx, ny, equivalence)
    records.append(_residual_record(
        "e_vanishing_iff_null_direction",
        "E = 0 <=> e4 tangent part lightlike", v, 0.5, len(v), s))

    if which == "both":
        def h_norm(point):
            return float(np.linalg.norm(pt_at(point).H))

        def cross(point):
            jets = pt_at(point).jets
            return max(abs(jets[0].dxy), abs(jets[1].dxy))
        hv, _ = _grid_minmax(surf, nx, ny, h_norm)
        cv, _ = _grid_minmax(surf, nx, ny, cross)
        h_max = max(val for _, val in hv)
        c_max = max(val for _, val in cv)
        holds = (h_max <= 1e-9) == (c_max <= 1e-9)
        records.append(IdentityRecord(
            "minimal_iff_no_mixed_partials",
            "H = 0 <=> f_xy = g_xy = 0", 0.0 if holds else 1.0, None, 0.5,
            holds, len(hv), 0,
            f"max |H| = {h_max:.3e}, max mixed partial = {c_max:.3e}"))
    if entry.id == "graph_fg_nonminimal":
        def hnu_kn(point):
            pt = pt_at(point)
            if pt.curv is None or pt.curv.nu is None:
                raise DomainRangeError("no nu")
            return abs(pt.curv.Hnu * pt.curv.KN)
        v, s = _grid_minmax(surf, nx, ny, hnu_kn)
        records.append(_nonzero_record(
            "nonminimal_with_normal_curvature", "<H,nu> * K_N != 0", v,
            NONZERO_MARGIN, len(v)))
    return records


def _validate_graph_over_lorentz(entry, nx, ny, tol):
    from .curvature import geodesic_residual, laplace_beltrami, grad_chart
    from .expr import eval_jet

    surf = entry.surface
    base: SurfaceDef = entry.params["base"]
    f_ast = entry.params["f"]
    records = []

    def base_det(point):
        return -first_form_at(base, point).det
    v, s = _grid_minmax(base, nx, ny, base_det)
    records.append(_nonzero_record("base_lorentzian", "base EG - F^2 < 0", v,
                                   0.0, len(v), note="determinant must be negative"))
    records.append(_timelike_record(surf, nx, ny))
    records.append(_cnd_record(surf, nx, ny, tol))

    base_cache = PointCache(base)

    def grad_sq(point):
        pt = base_cache.at(*point)
        fj = eval_jet(f_ast, jet_var("x", point[0]), jet_var("y", point[1]))
        g = grad_chart(pt, fj.dx, fj.dy)
        return abs(mink_norm2(g.ambient))
    v, s = _grid_minmax(surf, nx, ny, grad_sq)
    records.append(_residual_record("gradient_lightlike",
                                    "<grad f, grad f> = 0 on the base", v, tol,
                                    len(v), s))

    def f_field(u, v_):
        return eval_jet(f_ast, jet_var("x", u), jet_var("y", v_)).v

    def lap(point):
        # larger step: nested differences amplify roundoff by 1/h^2
        return abs(laplace_beltrami(base, f_field, point, h=1e-3, cache=base_cache))
    v, s = _grid_minmax(surf, nx, ny, lap)
    records.append(_residual_record("f_harmonic", "Laplacian of f = 0", v, 1e-8,
                                    len(v), s))

    def geo(point):
        check = geodesic_residual(base, f_ast, point)
        if check.status != "ok":
            raise DomainRangeError(check.status)
        return check.residual
    v, s = _grid_minmax(surf, nx, ny, geo)
    records.append(_residual_record(
        "gradient_flow_geodesic", "tangential D_{grad f} grad f = 0", v, 1e-6,
        len(v), s))
    return records


def _validate_minimal_flat_normal(entry, nx, ny, tol):
    surf = entry.surface
    alpha, w0 = entry.params["alpha"], entry.params["w0"]
    z = surf.z_dir
    records, a_samples = _curve_records(alpha, "x", surf.domain, nx, "alpha_prime", tol)

    w0_light = abs(mink_norm2(w0))
    zw0 = abs(mink_inner(z, w0))
    z_alpha, indep = [], []
    for t in _axis_samples(surf.domain, "x", nx):
        _, a1, _ = a_samples[t]
        pt = (t, surf.domain.y_lo)
        z_alpha.append((pt, abs(mink_inner(z, a1))))
        wedge = np.outer(a1, w0) - np.outer(w0, a1)
        denom = np.linalg.norm(a1) * np.linalg.norm(w0)
        indep.append((pt, float(np.linalg.norm(wedge)) / denom))
    records += [
        IdentityRecord("w0_lightlike", "<W0, W0> = 0", w0_light, None, tol,
                       w0_light <= tol, 1),
        IdentityRecord("z_not_orthogonal_to_w0", "<Z, W0> != 0", zw0, None,
                       NONZERO_MARGIN, zw0 > NONZERO_MARGIN, 1, 0,
                       "nonzero check: value must exceed tolerance"),
        _residual_record("z_orthogonal_to_alpha_prime", "<Z, alpha'> = 0",
                         z_alpha, tol, len(z_alpha)),
        _nonzero_record("alpha_prime_independent_of_w0",
                        "alpha' and W0 linearly independent", indep,
                        NONZERO_MARGIN, len(indep)),
        _timelike_record(surf, nx, ny),
        _cnd_record(surf, nx, ny, tol),
    ]

    def h_norm(point):
        return float(np.linalg.norm(analyze_point(surf, *point).H))

    def kn_abs(point):
        pt = analyze_point(surf, *point)
        if pt.curv is None:
            raise DomainRangeError("no frame")
        return abs(pt.curv.KN)

    def iizz(point):
        pt = analyze_point(surf, *point)
        if pt.curv is None:
            raise DomainRangeError("no frame")
        return float(np.linalg.norm(pt.curv.IIZZ))

    def pregeodesic(point):
        # the x-curves follow the null flow: the cross-component of the
        # tangential acceleration must vanish
        pt = analyze_point(surf, *point)
        from .minkowski import gram_solve2
        d_xx = np.array([j.dxx for j in pt.jets])
        p, q = gram_solve2(pt.ff.E, pt.ff.F, pt.ff.G,
                           mink_inner(d_xx, pt.psi_x), mink_inner(d_xx, pt.psi_y))
        return abs(q)

    v1, s1 = _grid_minmax(surf, nx, ny, h_norm)
    v2, s2 = _grid_minmax(surf, nx, ny, kn_abs)
    v3, s3 = _grid_minmax(surf, nx, ny, iizz)
    v4, s4 = _grid_minmax(surf, nx, ny, pregeodesic)
    records += [
        _residual_record("minimal", "H = 0", v1, 1e-9, len(v1), s1),
        _residual_record("flat_normal_bundle", "K_N = 0", v2, 1e-9, len(v2), s2),
        _nonzero_record("non_ruled", "II(Zt, Zt) != 0", v3, NONZERO_MARGIN, len(v3)),
        _residual_record("alpha_pregeodesic",
                         "tangential alpha'' parallel to alpha'", v4, tol,
                         len(v4), s4),
    ]
    return records
