import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzcomp import comparison as cmp
from lorentzcomp import hypersurface as hs
from lorentzcomp.hypersurface import NonConstantMeanCurvatureError, NonSpacelikeError
from lorentzcomp.lorentz_distance import PointDistance, SliceDistance
from lorentzcomp.spacetime import make_de_sitter, make_grw, make_minkowski, make_warping

MINK = make_minkowski(2)
DS = make_de_sitter(2, 1.0)
GRW = make_grw(2, make_warping("sin", amplitude=0.1))


def _point(model):
    return PointDistance(model, np.zeros(model.dim))


def test_hyperboloid_mean_curvature():
    imm = hs.level_set(MINK, s=2.0)
    geo = hs.induced_geometry(MINK, imm, imm.sample(np.random.default_rng(0), 20))
    assert np.allclose(geo.H, 0.5, atol=1e-9)
    # A = -I/s with the future normal
    assert np.allclose(geo.shape, -0.5 * np.eye(2), atol=1e-8)


@pytest.mark.parametrize("c,s", [(1.0, 0.7), (2.0, 0.5)])
def test_de_sitter_level_set_mean_curvature(c, s):
    model = make_de_sitter(2, c)
    imm = hs.level_set(model, s=s)
    geo = hs.induced_geometry(model, imm, imm.sample(np.random.default_rng(1), 16))
    assert np.max(np.abs(geo.H - cmp.f_c(c, s))) < 1e-5


def test_grw_slice_mean_curvature():
    imm = hs.coordinate_slice(GRW, 0.8)
    geo = hs.induced_geometry(GRW, imm, imm.sample(np.random.default_rng(1), 8))
    w = GRW.warping
    assert np.allclose(geo.H, w.da(0.8) / w.a(0.8), atol=1e-8)


def test_normal_is_future_unit_and_orthogonal():
    imm = hs.graph(DS, t0=1.2, half_width=0.2)
    geo = hs.induced_geometry(DS, imm, imm.sample(np.random.default_rng(2), 10))
    assert np.allclose(DS.inner(geo.event, geo.normal, geo.normal), -1.0)
    for i in range(2):
        assert np.allclose(DS.inner(geo.event, geo.normal, geo.tangents[:, i]), 0.0, atol=1e-12)
    assert np.all(DS.inner(geo.event, geo.normal, DS.time_orientation(geo.event)) < 0)


def test_non_spacelike_graph_is_rejected():
    imm = hs.graph(MINK, t0=2.0, amplitude=3.0)
    with pytest.raises(NonSpacelikeError):
        hs.induced_geometry(MINK, imm, imm.sample(np.random.default_rng(0), 20))


def test_catalog_lookup():
    assert set(hs.IMMERSIONS) >= {"level-set", "shifted-hyperboloid", "tilted-plane",
                                  "graph", "slice"}
    with pytest.raises(ValueError):
        hs.make_immersion(MINK, "torus")


@pytest.mark.parametrize("model,imm,field", [
    (MINK, hs.level_set(MINK, s=2.0), _point(MINK)),
    (MINK, hs.shifted_hyperboloid(MINK, s=2.0, tau=1.0), _point(MINK)),
    (MINK, hs.tilted_plane(MINK, t1=2.0, slope=[0.3, 0.1]), _point(MINK)),
    (MINK, hs.graph(MINK, t0=1.5), _point(MINK)),
    (DS, hs.level_set(DS, s=0.7), _point(DS)),
    (DS, hs.graph(DS, t0=1.2, half_width=0.2), _point(DS)),
    (DS, hs.graph(DS, t0=0.6, amplitude=0.1), SliceDistance(DS, 0.0)),
    (DS, hs.coordinate_slice(DS, 0.5), SliceDistance(DS, 0.0)),
], ids=lambda x: getattr(x, "label", None) or repr(x))
def test_identity_suite(model, imm, field):
    g = hs.check_gradient_decomposition(model, imm, field, samples=24)
    h = hs.check_hessian_identity(model, imm, field, samples=24)
    lap = hs.check_laplacian_identity(model, imm, field, samples=24)
    assert g.passed and g.worst >= -1e-5, str(g)
    assert h.passed and h.worst >= -1e-4, str(h)
    assert lap.passed and lap.worst >= -1e-4, str(lap)


@pytest.mark.parametrize("model,imm", [
    (MINK, hs.level_set(MINK, s=2.0)),
    (DS, hs.level_set(DS, s=0.7)),
    (GRW, hs.graph(GRW, t0=1.5, amplitude=0.1)),
])
def test_gauss_equation(model, imm):
    r = hs.check_gauss_equation(model, imm, samples=6)
    assert r.passed, str(r)


def test_intrinsic_curvature_of_hyperboloid():
    imm = hs.level_set(MINK, s=2.0)
    r = hs.check_ricci_lower_bound(MINK, imm, samples=6)
    assert r.passed
    R = hs.intrinsic_riemann(MINK, imm, np.array([0.1, -0.2]))
    geo = hs.induced_geometry(MINK, imm, np.array([0.1, -0.2]))
    # sectional curvature of the hyperbolic space of radius 2
    g = geo.metric
    Rlow = np.einsum("al,lbcd->abcd", g, R)
    K = Rlow[0, 1, 0, 1] / (g[0, 0] * g[1, 1] - g[0, 1] ** 2)
    assert K == pytest.approx(-0.25, rel=1e-4)


@pytest.mark.parametrize("which", hs.PROPOSITIONS)
def test_propositions_in_grw(which):
    imm = hs.graph(GRW, t0=1.5, amplitude=0.1)
    r = hs.check_proposition_bounds(GRW, imm, _point(GRW), which, samples=48)
    assert r.passed, str(r)
    assert r.metadata["c_source"] == "empirical"


def test_slice_propositions_guard_shape_operator_sign():
    # a'(0) > 0: lower-bound variants need A_N >= 0 and are out of scope
    imm = hs.graph(GRW, t0=1.0, amplitude=0.1)
    field = SliceDistance(GRW, 0.0)
    status = {w: hs.check_proposition_bounds(GRW, imm, field, w, samples=48).status
              for w in hs.PROPOSITIONS}
    assert status == {"laplacian-lower": "hypothesis-violation", "laplacian-upper": "pass",
                      "hessian-lower": "hypothesis-violation", "hessian-upper": "pass",
                      "ricci": "pass"}


def test_theorems_on_level_sets():
    imm = hs.level_set(MINK, s=2.0)
    for which in ("T41", "T42"):
        r = hs.check_mean_curvature_theorems(MINK, imm, _point(MINK), which)
        assert r.passed, str(r)


def test_shifted_hyperboloid_margin():
    imm = hs.shifted_hyperboloid(MINK, s=2.0, tau=1.0)
    r = hs.check_mean_curvature_theorems(MINK, imm, _point(MINK), "T42")
    assert r.passed and r.worst >= 1 / 6 - 1e-4
    # sup u is not attained on a patch of an unbounded hypersurface
    r = hs.check_mean_curvature_theorems(MINK, imm, _point(MINK), "T41")
    assert r.status == "hypothesis-violation"


def test_past_shifted_hyperboloid_is_out_of_scope():
    imm = hs.shifted_hyperboloid(MINK, s=2.0, tau=-0.5)
    r = hs.check_mean_curvature_theorems(MINK, imm, _point(MINK), "T42")
    assert r.status == "hypothesis-violation"


def test_slice_theorems_in_de_sitter():
    imm = hs.coordinate_slice(DS, 0.5)
    field = SliceDistance(DS, 0.0)
    # F_c increases for c > 0: a sampled infimum gives no sound lower bound
    r = hs.check_mean_curvature_theorems(DS, imm, field, "T5-lower")
    assert r.status in ("pass", "one-sided-not-checkable")
    r = hs.check_mean_curvature_theorems(DS, imm, field, "T5-upper")
    assert r.status in ("pass", "one-sided-not-checkable", "hypothesis-violation")
    with pytest.raises(ValueError):
        hs.check_mean_curvature_theorems(DS, imm, field, "T42")


def test_non_constant_mean_curvature_is_rejected():
    imm = hs.graph(MINK, t0=1.5)
    with pytest.raises(NonConstantMeanCurvatureError):
        hs.check_mean_curvature_theorems(MINK, imm, _point(MINK), "T42")


def test_outer_ball_and_rigidity_on_level_sets():
    for model, s in ((MINK, 2.0), (DS, 0.7)):
        imm = hs.level_set(model, s=s)
        r = hs.check_outer_ball(model, imm, _point(model))
        assert r.passed, str(r)
        r = hs.bernstein_rigidity_check(model, imm, _point(model))
        assert r.passed and r.metadata["oscillation"] <= 1e-8


def test_outer_ball_guard_for_planes():
    imm = hs.tilted_plane(MINK, t1=2.0, slope=[0.3, 0.1])
    r = hs.check_outer_ball(MINK, imm, _point(MINK))
    assert r.status == "hypothesis-violation"


@pytest.mark.parametrize("imm", [hs.tilted_plane(MINK, t1=2.0, slope=[0.3, 0.1]),
                                 hs.tilted_plane(MINK, t1=3.0, slope=[0.0, 0.0])],
                         ids=lambda i: i.label)
def test_maximal_surfaces_are_superharmonic(imm):
    r = hs.check_hyperbolicity_superharmonic(MINK, imm, _point(MINK), samples=64)
    assert r.passed, str(r)
    assert r.metadata["max_laplacian"] <= 1e-5


def test_hyperbolicity_hypothesis_guard():
    # on the hyperboloid u = s, H = 1/s; for n = 3 the threshold (2 sqrt(2)/3)/s is lower
    model = make_minkowski(3)
    imm = hs.level_set(model, s=2.0)
    r = hs.check_hyperbolicity_superharmonic(model, imm, _point(model), samples=16)
    assert r.status == "hypothesis-violation"


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 3.0))
def test_hyperboloid_h_is_reciprocal_radius(s):
    imm = hs.level_set(MINK, s=s)
    geo = hs.induced_geometry(MINK, imm, np.array([[0.2, -0.3]]))
    assert geo.H[0] == pytest.approx(1.0 / s, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-0.6, 0.6), min_size=2, max_size=2), st.floats(1.5, 3.0))
def test_tilted_planes_are_maximal(slope, t1):
    imm = hs.tilted_plane(MINK, t1=t1, slope=slope)
    geo = hs.induced_geometry(MINK, imm, np.zeros((1, 2)))
    assert abs(geo.H[0]) < 1e-8
    assert not math.isnan(geo.H[0])
