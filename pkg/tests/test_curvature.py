import math

import numpy as np
import pytest

from nullgeo.catalog import built_in
from nullgeo.curvature import (PointCache, analyze_point,
                               compatibility_residuals, geodesic_residual,
                               identity_residuals, ii_eval, laplace_beltrami,
                               normal_curvature_fd, second_form)
from nullgeo.expr import parse_expr
from nullgeo.fd import ambient_fd_vectorfield, fd_directional
from nullgeo.frames import TangentVec, first_form
from nullgeo.minkowski import mink_inner, mink_norm2
from nullgeo.surface import Domain, eval_immersion_jet, make_surface


def entry_surface(name):
    return built_in()[name].surface


class TestSecondForm:
    def test_sum_of_curves_origin(self):
        surf = entry_surface("sum_of_curves")
        jets = eval_immersion_jet(surf, 0.0, 0.0)
        sf = second_form(jets, first_form(jets))
        assert sf.II_xx == pytest.approx([1, 1, 1, 0])
        assert sf.II_xy == pytest.approx([0, 0, 0, 0])
        assert sf.II_yy == pytest.approx([0, 0, 0, 1])

    def test_minimal_flat_normal_origin(self):
        surf = entry_surface("minimal_flat_normal")
        jets = eval_immersion_jet(surf, 0.0, 0.0)
        sf = second_form(jets, first_form(jets))
        assert sf.II_xx == pytest.approx([0, 1, 0, 0])
        assert sf.II_xy == pytest.approx([0, 0, 0, 0])
        assert sf.II_yy == pytest.approx([0, 0, 0, 0])

    def test_flat_plane_zero(self):
        surf = make_surface("p", ["x", "y", "0", "0"], Domain(-1, 1, -1, 1), None)
        jets = eval_immersion_jet(surf, 0.3, 0.4)
        sf = second_form(jets, first_form(jets))
        for ii in (sf.II_xx, sf.II_xy, sf.II_yy):
            assert np.allclose(ii, 0.0)

    def test_tangency_on_catalog_grids(self):
        for name in ("sum_of_curves", "ruled_4d", "cylinder_graph", "ruled_3d"):
            surf = entry_surface(name)
            for point in surf.domain.grid(11, 11):
                pt = analyze_point(surf, *point)
                for ii in (pt.sf.II_xx, pt.sf.II_xy, pt.sf.II_yy):
                    assert abs(mink_inner(ii, pt.psi_x)) < 1e-9
                    assert abs(mink_inner(ii, pt.psi_y)) < 1e-9


class TestIIEval:
    def test_null_direction_squared(self):
        surf = entry_surface("sum_of_curves")
        pt = analyze_point(surf, 0.0, 0.0)
        out = ii_eval(pt.sf, pt.frame.zt, pt.frame.zt)
        assert out == pytest.approx([0, 0, 0, 1])

    def test_mixed_null_pair_vanishes(self):
        surf = entry_surface("sum_of_curves")
        pt = analyze_point(surf, 0.0, 0.0)
        out = ii_eval(pt.sf, pt.frame.zt, pt.frame.w)
        assert np.allclose(out, 0.0)

    def test_zero_vector(self):
        surf = entry_surface("sum_of_curves")
        pt = analyze_point(surf, 0.0, 0.0)
        zero = TangentVec(0.0, 0.0, np.zeros(4))
        assert np.allclose(ii_eval(pt.sf, zero, pt.frame.zt), 0.0)


class TestCurvatureData:
    def test_sum_of_curves_origin(self):
        pt = analyze_point(entry_surface("sum_of_curves"), 0.0, 0.0)
        c = pt.curv
        assert np.allclose(c.H, 0.0, atol=1e-12)
        assert c.K == pytest.approx(0.0, abs=1e-12)
        assert c.a == pytest.approx(1.0, abs=1e-12)
        assert c.IIZZ_norm == pytest.approx(1.0, abs=1e-12)
        assert c.KN == pytest.approx(1.0, abs=1e-12)
        assert c.Hnu == pytest.approx(0.0, abs=1e-12)

    def test_minimal_flat_normal_origin(self):
        pt = analyze_point(entry_surface("minimal_flat_normal"), 0.0, 0.0)
        c = pt.curv
        assert np.allclose(c.H, 0.0, atol=1e-12)
        assert c.K == pytest.approx(0.0, abs=1e-12)
        assert c.a == pytest.approx(0.0, abs=1e-12)
        assert c.IIZZ == pytest.approx([0, 1, 0, 0])
        assert c.KN == pytest.approx(0.0, abs=1e-12)

    def test_ruled_4d_has_no_nu(self):
        pt = analyze_point(entry_surface("ruled_4d"), 0.2, 1.0)
        assert pt.curv.nu is None
        assert np.allclose(pt.curv.IIZZ, 0.0, atol=1e-12)
        assert pt.curv.KN == 0.0

    def test_mean_curvature_routes_agree_on_grids(self):
        for name in ("sum_of_curves", "ruled_4d", "cylinder_graph",
                     "minimal_flat_normal", "ruled_3d", "graph_fg_nonminimal"):
            surf = entry_surface(name)
            for point in surf.domain.grid(11, 11):
                pt = analyze_point(surf, *point)
                assert np.allclose(pt.curv.H, pt.H, atol=1e-9), (name, point)


class TestFdOracle:
    def test_quadratic_exact(self):
        val = fd_directional(lambda u, v: u * u, (1.0, 0.0), (1.0, 0.0), 1e-4)
        assert val == pytest.approx(2.0, abs=1e-8)

    def test_sin_with_richardson(self):
        val = fd_directional(lambda u, v: math.sin(u), (0.0, 0.0), (1.0, 0.0),
                             1e-4, richardson=True)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_constant_field(self):
        assert fd_directional(lambda u, v: 7.5, (0.0, 0.0), (1.0, 1.0), 1e-4) == 0.0

    def test_vector_field_position_derivative(self):
        surf = entry_surface("sum_of_curves")

        def pos(u, v):
            return np.array([j.v for j in eval_immersion_jet(surf, u, v)])

        deriv = ambient_fd_vectorfield(pos, (0.1, -0.2), (1.0, 0.0), 1e-4)
        jets = eval_immersion_jet(surf, 0.1, -0.2)
        assert np.allclose(deriv, [j.dx for j in jets], atol=1e-8)

    def test_constant_vector_field(self):
        deriv = ambient_fd_vectorfield(lambda u, v: np.ones(4), (0.0, 0.0),
                                       (1.0, 2.0), 1e-4)
        assert np.allclose(deriv, 0.0)


class TestCompatibility:
    @pytest.mark.parametrize("name", ["sum_of_curves", "ruled_4d", "ruled_3d",
                                      "minimal_flat_normal", "cylinder_graph"])
    def test_residuals_small(self, name):
        surf = entry_surface(name)
        cache = PointCache(surf)
        d = surf.domain
        point = (0.5 * (d.x_lo + d.x_hi) + 0.05, 0.5 * (d.y_lo + d.y_hi) + 0.05)
        out = compatibility_residuals(surf, point, cache=cache)
        for key, value in out.items():
            assert value < 1e-6, (name, key, value)


class TestIdentities:
    def test_sum_of_curves_interior_point(self):
        surf = entry_surface("sum_of_curves")
        out = identity_residuals(surf, (0.2, -0.3), cache=PointCache(surf))
        assert out["k_vs_zt_a"] < 1e-4
        assert out["k_vs_h2_products"] < 1e-6
        assert out["laplace_a"] < 1e-4
        assert out["ii_ww_decomposition"] < 1e-6

    def test_minimal_flat_normal_all_zero(self):
        surf = entry_surface("minimal_flat_normal")
        for point in [(0.0, 0.0), (0.4, -0.3)]:
            pt = analyze_point(surf, *point)
            assert abs(pt.curv.a) < 1e-9
            assert abs(pt.curv.K) < 1e-9

    def test_ruled_3d_flat_minimal(self):
        surf = entry_surface("ruled_3d")
        for point in surf.domain.grid(7, 7):
            pt = analyze_point(surf, *point)
            assert abs(pt.curv.K) < 1e-7
            assert float(np.linalg.norm(pt.curv.H)) < 1e-7

    def test_ruled_umbilic_relation(self):
        for name in ("ruled_4d", "ruled_3d"):
            surf = entry_surface(name)
            for point in surf.domain.grid(7, 7):
                pt = analyze_point(surf, *point)
                assert abs(mink_norm2(pt.curv.H) - pt.curv.K) < 1e-7
                proxy = abs(pt.curv.a) * float(np.linalg.norm(pt.curv.IIZZ))
                assert proxy < 1e-9

    def test_normal_curvature_fd_cross_check(self):
        surf = entry_surface("sum_of_curves")
        cache = PointCache(surf)
        for point in [(0.0, 0.0), (0.25, -0.15)]:
            pt = cache.framed(*point)
            kn_fd = normal_curvature_fd(surf, point, cache=cache)
            assert kn_fd == pytest.approx(pt.curv.KN, abs=1e-4)

    def test_z_perp_parallel_iff_minimal(self):
        from nullgeo.curvature import z_perp_field

        def normal_derivatives(surf, point, cache):
            pt = cache.framed(*point)
            zp = z_perp_field(cache)
            out = []
            for x in (pt.frame.zt, pt.frame.w):
                d = ambient_fd_vectorfield(zp, point, (x.p, x.q), 1e-4)
                out.append(pt.normal(d))
            return pt, out

        # minimal ruled surface: the normal part of Z is parallel
        surf = entry_surface("ruled_3d")
        cache = PointCache(surf)
        for point in [(0.8, 0.0), (1.1, 0.4)]:
            pt, (d_zt, d_w) = normal_derivatives(surf, point, cache)
            assert float(np.linalg.norm(d_zt)) < 1e-6
            assert float(np.linalg.norm(d_w)) < 1e-6
            # and D_W Zperp recovers H on the nose
            assert np.allclose(d_w, pt.curv.H, atol=1e-6)

        # non-minimal surface: D_W Zperp equals H, hence Zperp not parallel
        surf = entry_surface("graph_fg_nonminimal")
        cache = PointCache(surf)
        pt, (d_zt, d_w) = normal_derivatives(surf, (0.1, 0.55), cache)
        assert np.allclose(d_zt, -pt.curv.IIZZ, atol=1e-6)  # non-ruled here
        assert np.allclose(d_w, pt.curv.H, atol=1e-6)
        assert float(np.linalg.norm(pt.curv.H)) > 1e-2  # not parallel


class TestLaplace:
    def test_lorentz_product_harmonic(self):
        base = built_in()["cylinder_graph"].params["base"]
        val = laplace_beltrami(base, lambda u, v: v - u, (0.0, 2.0), h=1e-3)
        assert abs(val) < 1e-8

    def test_euclidean_chart_quadratic(self):
        surf = make_surface("e", ["0", "x", "y"], Domain(-2, 2, -2, 2), None)
        val = laplace_beltrami(surf, lambda u, v: u * u, (0.3, -0.4))
        assert val == pytest.approx(2.0, abs=1e-6)

    def test_constant(self):
        surf = make_surface("e", ["0", "x", "y"], Domain(-2, 2, -2, 2), None)
        assert laplace_beltrami(surf, lambda u, v: 4.2, (0.0, 0.0)) == 0.0


class TestGeodesic:
    def test_cylinder_gradient_flow(self):
        base = built_in()["cylinder_graph"].params["base"]
        for point in [(0.0, 2.0), (0.5, 3.0), (-0.5, 1.0)]:
            check = geodesic_residual(base, parse_expr("y-x"), point)
            assert check.status == "ok"
            assert abs(check.grad_norm2) < 1e-9
            assert check.residual < 1e-6

    def test_spacelike_gradient_reports_precondition(self):
        surf = make_surface("e", ["0", "x", "y"], Domain(-2, 2, -2, 2), None)
        check = geodesic_residual(surf, parse_expr("x"), (0.0, 0.0))
        assert check.status == "not_lightlike"
        assert check.residual is None

    def test_zero_gradient_reports_degenerate(self):
        base = built_in()["cylinder_graph"].params["base"]
        check = geodesic_residual(base, parse_expr("2"), (0.0, 2.0))
        assert check.status == "zero_gradient"
