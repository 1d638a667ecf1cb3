import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzcomp import comparison as cmp
from lorentzcomp import geodesic as geo
from lorentzcomp.geodesic import ConjugatePointError
from lorentzcomp.hypersurface import coordinate_slice
from lorentzcomp.spacetime import (PreconditionError, make_anti_de_sitter, make_de_sitter,
                                   make_grw, make_minkowski, make_warping, random_unit_timelike)


def _rest(model, p):
    v = model.time_orientation(p)
    return v / np.sqrt(-model.inner(p, v, v))


def _push(model, p, v, h=1e-6):
    return (model.embedding(p + h * v) - model.embedding(p - h * v)) / (2 * h)


@pytest.mark.parametrize("c", [1.0, 2.0])
def test_de_sitter_geodesic_matches_embedding_oracle(c):
    model = make_de_sitter(2, c)
    rng = np.random.default_rng(3)
    p = np.array([0.2, -0.1, 0.3])
    v = random_unit_timelike(model, p, rng, 0.7)
    g = geo.integrate_geodesic(model, p, v, 1.5, step=5e-3)
    X0, V0 = model.embedding(p), _push(model, p, v)
    k = math.sqrt(c)
    exact = np.cos(0 * g.t)[:, None] * 0 + np.cosh(k * g.t)[:, None] * X0 \
        + (np.sinh(k * g.t) / k)[:, None] * V0
    assert np.max(np.abs(model.embedding(g.x) - exact)) < 1e-7
    assert g.energy_drift() < 1e-10


def test_minkowski_geodesic_is_straight():
    model = make_minkowski(3)
    p = np.array([0.1, 0.2, 0.3, 0.0])
    v = np.array([0.3, 0.0, 0.4, math.sqrt(1.25)])
    g = geo.integrate_geodesic(model, p, v, 2.0)
    assert np.allclose(g.x, p + g.t[:, None] * v, atol=1e-13)
    assert g.proper_length == pytest.approx(2.0)


def test_parallel_frame_stays_orthonormal_in_grw():
    model = make_grw(2, make_warping("sin", amplitude=0.1))
    p = np.array([0.0, 0.0, 0.5])
    rng = np.random.default_rng(0)
    v = random_unit_timelike(model, p, rng, 0.8)
    g = geo.integrate_geodesic(model, p, v, 2.0)
    gram = np.einsum("kia,kab,kjb->kij", g.frame, model.metric(g.x), g.frame)
    assert np.max(np.abs(gram - np.diag([1.0, 1.0, -1.0]))) < 1e-9


def test_initial_velocity_preconditions():
    model = make_minkowski(2)
    with pytest.raises(PreconditionError):
        geo.integrate_geodesic(model, np.zeros(3), np.array([0, 0, 2.0]), 1.0)
    with pytest.raises(PreconditionError):
        geo.integrate_geodesic(model, np.zeros(3), np.array([0, 0, -1.0]), 1.0)


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0, 2.0])
@pytest.mark.parametrize("kind", ["point", "slice"])
def test_jacobi_profiles(c, kind):
    model = make_minkowski(2) if c == 0 else (
        make_de_sitter(2, c) if c > 0 else make_anti_de_sitter(2, c))
    r = geo.check_jacobi_profile(model, kind, s=1.0)
    assert r.passed, str(r)
    assert r.worst >= -1e-6


@pytest.mark.parametrize("c", [-1.0, 1.0])
def test_index_closed_forms(c):
    model = make_de_sitter(2, c) if c > 0 else make_anti_de_sitter(2, c)
    for kind in ("point", "slice"):
        r = geo.check_index_closed_form(model, kind, s=1.0)
        assert r.passed, str(r)
        expected = -(cmp.f_c if kind == "point" else cmp.F_c)(c, 1.0)
        assert r.metadata["expected"] == pytest.approx(expected)


def test_index_closed_form_outside_domain_is_skipped():
    model = make_anti_de_sitter(2, -1.0)
    r = geo.check_index_closed_form(model, "slice", s=2.0)
    assert r.status == "domain-skip"


def test_index_form_rejects_tangential_fields():
    model = make_minkowski(2)
    g = geo.integrate_geodesic(model, np.zeros(3), np.array([0, 0, 1.0]), 1.0)
    comps = np.zeros((len(g.t), 3))
    comps[:, -1] = 1.0
    X = geo.field_from_components(g, comps)
    with pytest.raises(PreconditionError):
        geo.index_form_geodesic(g, X)


def test_index_form_bilinear_is_symmetric():
    model = make_de_sitter(2, 1.0)
    g = geo.integrate_geodesic(model, np.zeros(3), _rest(model, np.zeros(3)), 1.0)
    b, db = geo.bump(g.t, g.t_end)
    X = geo.field_from_components(g, np.stack([b, 0 * b, 0 * b], -1),
                                  np.stack([db, 0 * b, 0 * b], -1))
    Y = geo.field_from_components(g, np.stack([b * g.t, b, 0 * b], -1),
                                  np.stack([db * g.t + b, db, 0 * b], -1))
    a = geo.index_form_bilinear(g, X, Y).value
    assert a == pytest.approx(geo.index_form_bilinear(g, Y, X).value, rel=1e-12)


@pytest.mark.parametrize("model", [make_minkowski(2), make_de_sitter(2, 1.0),
                                   make_grw(2, make_warping("sin", amplitude=0.1))],
                         ids=lambda m: m.label)
def test_point_maximality(model):
    p = np.array([0.0, 0.0, 0.3])
    g = geo.integrate_geodesic(model, p, _rest(model, p), 1.0)
    J = geo.jacobi_to_endpoint(g, g.frame[-1, 0], "point")
    r = geo.check_index_maximality(g, J, perturbations=100)
    assert r.passed and r.samples == 100
    assert abs(r.metadata["defect_slope"] - 2.0) <= 0.1


def test_slice_maximality():
    model = make_de_sitter(2, 1.0)
    g, J = geo.n_jacobi_field(model, coordinate_slice(model, 0.0), np.zeros(2), 1.0)
    r = geo.check_index_maximality(g, J, kind="slice")
    assert r.passed
    assert abs(r.metadata["defect_slope"] - 2.0) <= 0.1


def test_maximality_past_conjugate_point():
    model = make_anti_de_sitter(2, -1.0)
    p = np.zeros(3)
    g = geo.integrate_geodesic(model, p, _rest(model, p), 3.5, step=1e-2)
    with pytest.raises(ConjugatePointError):
        geo.jacobi_to_endpoint(g, g.frame[-1, 0])
    comps = np.zeros((len(g.t), 3))
    J = geo.field_from_components(g, comps)
    assert geo.check_index_maximality(g, J).status == "domain-skip"


def test_ads_closure():
    r = geo.check_ads_closure(make_anti_de_sitter(2, -1.0))
    assert r.passed and r.worst >= -1e-4
    with pytest.raises(PreconditionError):
        geo.check_ads_closure(make_de_sitter(2, 1.0))


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 1.5), st.integers(0, 1000))
def test_jacobi_endpoint_interpolates(s, seed):
    model = make_de_sitter(2, 1.0)
    p = np.zeros(3)
    g = geo.integrate_geodesic(model, p, _rest(model, p), s, step=1e-2)
    d = np.random.default_rng(seed).normal(size=2)
    x_end = d @ g.frame[-1, :2]
    J = geo.jacobi_to_endpoint(g, x_end)
    assert np.allclose(J.values[-1], x_end, atol=1e-10)
    assert np.allclose(J.values[0], 0.0, atol=1e-12)
    assert J.normal_defect() < 1e-10
