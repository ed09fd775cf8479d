import json
import math

import numpy as np
import pytest

from nullgeo.catalog import built_in
from nullgeo.errors import DomainRangeError, UsageError
from nullgeo.fd import fd_directional
from nullgeo.surface import (Domain, eval_immersion_jet, make_surface,
                             surface_from_obj, surface_to_obj)


def jets_slots(jets, name):
    return [getattr(j, name) for j in jets]


class TestEval:
    def test_sum_of_curves_at_origin(self):
        surf = built_in()["sum_of_curves"].surface
        jets = eval_immersion_jet(surf, 0.0, 0.0)
        assert jets_slots(jets, "v") == pytest.approx([0, 1, 0, 1])
        assert jets_slots(jets, "dx") == pytest.approx([1, 0, 1, 0])
        assert jets_slots(jets, "dy") == pytest.approx([1, 1, 0, 0])
        assert jets_slots(jets, "dxx") == pytest.approx([0, 1, 0, 0])
        assert jets_slots(jets, "dyy") == pytest.approx([0, 0, 0, 1])
        assert jets_slots(jets, "dxy") == pytest.approx([0, 0, 0, 0])

    def test_flat_plane(self):
        surf = make_surface("plane", ["x", "y", "0"], Domain(-5, 5, -5, 5), None)
        jets = eval_immersion_jet(surf, 3.0, 4.0)
        assert jets_slots(jets, "v") == pytest.approx([3, 4, 0])
        assert jets_slots(jets, "dx") == pytest.approx([1, 0, 0])
        assert jets_slots(jets, "dy") == pytest.approx([0, 1, 0])
        for name in ("dxx", "dxy", "dyy"):
            assert jets_slots(jets, name) == pytest.approx([0, 0, 0])

    def test_cylinder_graph_at_quarter_turn(self):
        surf = built_in()["cylinder_graph"].surface
        jets = eval_immersion_jet(surf, 0.0, math.pi / 2)
        assert jets_slots(jets, "v") == pytest.approx([0, 0, 1, math.pi / 2])
        assert jets_slots(jets, "dy") == pytest.approx([0, -1, 0, 1])

    def test_out_of_domain(self):
        surf = built_in()["sum_of_curves"].surface
        with pytest.raises(DomainRangeError):
            eval_immersion_jet(surf, 2.0, 0.0)

    def test_domain_is_closed(self):
        surf = built_in()["sum_of_curves"].surface
        eval_immersion_jet(surf, 0.8, -0.8)  # boundary points are valid


class TestJetVsFiniteDifference:
    def test_first_partials_on_catalog_grids(self):
        for entry in built_in().values():
            surf = entry.surface
            d = surf.domain
            mx = 0.02 * (d.x_hi - d.x_lo)
            my = 0.02 * (d.y_hi - d.y_lo)
            xs = np.linspace(d.x_lo + mx, d.x_hi - mx, 9)
            ys = np.linspace(d.y_lo + my, d.y_hi - my, 9)
            for k in range(surf.dim):
                def value(u, v, k=k):
                    return eval_immersion_jet(surf, u, v)[k].v
                for u in xs[::4]:
                    for v in ys[::4]:
                        jets = eval_immersion_jet(surf, float(u), float(v))
                        fx = fd_directional(value, (float(u), float(v)),
                                            (1.0, 0.0), 1e-4)
                        fy = fd_directional(value, (float(u), float(v)),
                                            (0.0, 1.0), 1e-4)
                        scale = max(1.0, abs(jets[k].dx), abs(jets[k].dy))
                        assert abs(fx - jets[k].dx) <= 1e-6 * scale
                        assert abs(fy - jets[k].dy) <= 1e-6 * scale


class TestZDirection:
    def test_z_normalized_on_load(self):
        surf = make_surface("s", ["x", "y", "0"], Domain(-1, 1, -1, 1),
                            [0.0, 3.0, 0.0])
        assert np.allclose(surf.z_dir, [0.0, 1.0, 0.0])

    def test_non_spacelike_z_rejected(self):
        with pytest.raises(UsageError):
            make_surface("s", ["x", "y", "0"], Domain(-1, 1, -1, 1), [1, 0, 0])

    def test_lightlike_z_rejected(self):
        with pytest.raises(UsageError):
            make_surface("s", ["x", "y", "0"], Domain(-1, 1, -1, 1), [1, 1, 0])


class TestJson:
    OBJ = {
        "label": "demo",
        "dim": 4,
        "coords": ["sinh(x)+sinh(y)", "cosh(x)+y", "x", "cosh(y)"],
        "domain": {"x": [-0.8, 0.8], "y": [-0.8, 0.8]},
        "Z": [0, 0, 1, 0],
    }

    def test_round_trip(self):
        surf = surface_from_obj(self.OBJ)
        again = surface_from_obj(surface_to_obj(surf))
        assert again.coords == surf.coords
        assert again.domain == surf.domain
        assert np.allclose(again.z_dir, surf.z_dir)

    def test_missing_key(self):
        bad = dict(self.OBJ)
        del bad["domain"]
        with pytest.raises(UsageError):
            surface_from_obj(bad)

    def test_dim_mismatch(self):
        bad = dict(self.OBJ)
        bad["dim"] = 3
        with pytest.raises(UsageError):
            surface_from_obj(bad)

    def test_catalog_entries_export(self):
        for entry in built_in().values():
            obj = surface_to_obj(entry.surface)
            text = json.dumps(obj)
            again = surface_from_obj(json.loads(text))
            assert again.dim == entry.surface.dim
