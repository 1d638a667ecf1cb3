import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzcomp import spacetime as stm
from lorentzcomp.spacetime import (ChartDomainError, PreconditionError, UnsupportedModelError,
                                   make_anti_de_sitter, make_de_sitter, make_grw, make_minkowski,
                                   make_warping, model_from_config)

RNG = np.random.default_rng(7)


def _events(model, count=20, spread=0.6):
    x = RNG.uniform(-spread, spread, size=(count, model.dim))
    return x


MODELS = [
    ("minkowski", lambda: make_minkowski(2), 0.0),
    ("de_sitter_1", lambda: make_de_sitter(2, 1.0), 1.0),
    ("de_sitter_2", lambda: make_de_sitter(3, 2.0), 2.0),
    ("anti_de_sitter", lambda: make_anti_de_sitter(2, -0.5), -0.5),
]


@pytest.mark.parametrize("name,factory,c", MODELS)
def test_signature_and_time_orientation(name, factory, c):
    model = factory()
    assert model.check_signature(_events(model))


@pytest.mark.parametrize("name,factory,c", MODELS)
def test_space_form_curvature(name, factory, c):
    model = factory()
    X = _events(model, 10)
    rng = np.random.default_rng(1)
    Z = stm.random_unit_timelike(model, X, rng, 0.8)
    T = stm.tidal_operator(model, X, Z)
    ev = np.linalg.eigvalsh(T)
    tol = 1e-9 if name != "anti_de_sitter" else 1e-6
    assert np.max(np.abs(ev - c)) < tol
    ric = stm.ricci_timelike(model, X[0], Z[0], crosscheck_tol=1e-6)
    assert ric == pytest.approx(-model.n * c, abs=1e-5)


def test_sectional_curvature_of_grw_matches_warping():
    w = make_warping("sin", amplitude=0.1)
    model = make_grw(2, w)
    t = 0.7
    x = np.array([0.1, -0.2, t])
    v = np.array([0.0, 0.0, 1.0])
    e = np.array([1.0 / w.a(t), 0.0, 0.0])
    K = stm.sectional_timelike(model, x, v, e)
    assert K == pytest.approx(w.d2a(t) / w.a(t), rel=1e-10)


def test_sectional_requires_unit_vectors():
    model = make_minkowski(2)
    x = np.zeros(3)
    with pytest.raises(PreconditionError):
        stm.sectional_timelike(model, x, np.array([0, 0, 2.0]), np.array([1.0, 0, 0]))


@pytest.mark.parametrize("c", [1.0, 2.0])
def test_closed_form_and_finite_difference_christoffels_agree(c):
    a = make_de_sitter(2, c)
    b = make_de_sitter(2, c, christoffel_mode="finite_difference")
    X = _events(a, 8, 0.5)
    assert np.max(np.abs(a.christoffel(X) - b.christoffel(X))) < 1e-8
    assert np.max(np.abs(a.christoffel_derivative(X) - b.christoffel_derivative(X))) < 1e-5


def test_christoffel_symmetry_and_metric_compatibility():
    model = make_grw(3, make_warping("exp", rate=0.3))
    X = _events(model, 5)
    G = model.christoffel(X)
    assert np.allclose(G, np.swapaxes(G, -1, -2))
    # d_c g_ab = Gamma_{a,cb} + Gamma_{b,ca}
    g = model.metric(X)
    dg = model.metric_derivative(X)
    low = np.einsum("...ad,...dbc->...abc", g, G)
    rhs = np.einsum("...acb->...cab", low) + np.einsum("...bca->...cab", low)
    assert np.max(np.abs(dg - rhs)) < 1e-7


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 2.0), st.lists(st.floats(-0.8, 0.8), min_size=3, max_size=3))
def test_de_sitter_embedding_round_trip(c, x):
    model = make_de_sitter(2, c)
    x = np.asarray(x)
    X = model.embedding(x)
    sig = model.embedding_signature
    assert np.sum(sig * X * X) == pytest.approx(1.0 / c, rel=1e-12)
    assert np.allclose(model.from_embedding(X), x, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3))
def test_anti_de_sitter_embedding(x):
    model = make_anti_de_sitter(2, -1.0)
    x = np.asarray(x)
    X = model.embedding(x)
    assert np.sum(model.embedding_signature * X * X) == pytest.approx(-1.0, rel=1e-12)
    assert np.allclose(model.from_embedding(X, tau_ref=x[-1]), x, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_frames_are_orthonormal(seed):
    rng = np.random.default_rng(seed)
    model = make_de_sitter(3, 1.0)
    x = rng.uniform(-0.5, 0.5, size=model.dim)
    Z = stm.random_unit_timelike(model, x, rng, 1.5)
    E = stm.orthonormal_frame(model, x, Z)
    gram = np.einsum("ia,ab,jb->ij", E, model.metric(x), E)
    assert np.allclose(gram, np.diag([1.0] * model.n + [-1.0]), atol=1e-12)
    assert np.allclose(E[-1], Z)


def test_classify_causal():
    model = make_minkowski(2)
    x = np.zeros(3)
    assert stm.classify_causal(model, x, [0, 0, 1.0]) == ("timelike", "future")
    assert stm.classify_causal(model, x, [0, 0, -1.0]) == ("timelike", "past")
    assert stm.classify_causal(model, x, [1.0, 0, 1.0]).kind == "null"
    assert stm.classify_causal(model, x, [1.0, 0, 0]).kind == "spacelike"


def test_chronological_future_predicate():
    model = make_minkowski(2)
    p = np.zeros(3)
    assert stm.chronological_future_contains(model, p, [0.1, 0.2, 1.0])
    assert not stm.chronological_future_contains(model, p, [1.0, 0.0, 1.0])
    assert not stm.chronological_future_contains(model, p, [0.0, 0.0, -1.0])
    with pytest.raises(UnsupportedModelError):
        stm.chronological_future_contains(make_de_sitter(2), p, p)


def test_chart_domain_errors():
    model = make_de_sitter(2)
    with pytest.raises(ChartDomainError):
        model.check_chart(np.array([np.nan, 0.0, 0.0]))


def test_model_from_config():
    m = model_from_config({"kind": "grw", "n": 2, "warping": {"name": "sin", "amplitude": 0.1}})
    assert m.warping.params["amplitude"] == 0.1
    assert model_from_config({"kind": "de_sitter", "n": 3, "c": 2.0}).constant_curvature == 2.0
    with pytest.raises(ValueError, match="unknown model keys"):
        model_from_config({"kind": "minkowski", "n": 2, "bogus": 1})
    with pytest.raises(ValueError):
        model_from_config({"kind": "minkowski", "n": -1})
    with pytest.raises(ValueError):
        model_from_config({"kind": "nope", "n": 2})
    with pytest.raises(ValueError):
        make_warping("sin", amplitude=1.5)


def test_riemann_symmetries():
    model = make_grw(2, make_warping("sin", amplitude=0.2))
    R = model.riemann_tensor(_events(model, 4))
    g = model.metric(_events(model, 4))
    assert np.allclose(R, -np.swapaxes(R, -1, -2), atol=1e-12)
    # first Bianchi identity
    bianchi = R + np.einsum("...abcd->...acdb", R) + np.einsum("...abcd->...adbc", R)
    assert np.max(np.abs(bianchi)) < 1e-10
    assert np.isfinite(g).all()
    assert math.isfinite(float(np.max(np.abs(R))))
