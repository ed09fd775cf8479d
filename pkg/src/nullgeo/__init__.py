"""Curvature analysis for timelike surfaces in Minkowski space whose
tangent projection of a constant spacelike direction is lightlike.

The package evaluates immersions through second-order jets, builds the
adapted null frame (Zt, W, Zperp, nu), computes every curvature
invariant in that frame, constructs the standard surface families, and
verifies each structural identity against an independent
finite-difference oracle.
"""

from .catalog import (CatalogEntry, built_in, get, make_graph_fg,
                      make_graph_over_lorentz, make_minimal_flat_normal,
                      make_ruled_3d, make_ruled_4d, make_sum_of_curves,
                      validate_entry)
from .checks import (check_surface, run_compatibility_suite, run_frame_suite,
                     run_gauss_suite, run_identity_suite)
from .curvature import (CurvatureData, SecondForm, SurfacePoint, analyze_point,
                        curvature_data, geodesic_residual, ii_eval,
                        laplace_beltrami, second_form)
from .errors import (ConsistencyError, DegenerateInputError,
                     DegenerateMetricError, DomainRangeError, EvalDomainError,
                     ExprSyntaxError, FrameError, NullGeoError,
                     UnknownIdentifierError, UnsupportedPointError, UsageError)
from .expr import parse_expr, to_text
from .fd import ambient_fd_vectorfield, fd_directional
from .frames import (AdaptedFrame, FirstForm, TangentVec, build_adapted_frame,
                     detect_null_direction, first_form, tangent_project)
from .gaussmap import (asymptotic_directions, basis_self_test, cpx_mul_i,
                       delta_and_Delta, dgauss, gauss_map, h_form,
                       lambda2_inner, n1n2, pullback_gh, star, wedge, wedge4)
from .jets import Jet2, jet_combine, jet_const, jet_elementary, jet_var
from .minkowski import (CausalClass, causal_classify, gram_solve2, mink_inner,
                        normal_complement)
from .report import CheckReport, IdentityRecord, report_to_json
from .surface import (Domain, SurfaceDef, eval_immersion_jet, load_surface,
                      make_surface, surface_from_obj, surface_to_obj)

__version__ = "0.1.0"
