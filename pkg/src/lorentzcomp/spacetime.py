"""Spacetime models and curvature kernels.

Every chart puts the time coordinate last: an event in an ``(n+1)``-dimensional
model is ``(x_1, ..., x_n, t)``.  Metric evaluators are vectorized over leading
axes, so ``model.metric(X)`` with ``X.shape == (..., n+1)`` returns an array of
shape ``(..., n+1, n+1)``.

Curvature convention.  ``R(X, Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z``, i.e. in
components ``R(x, y)z^a = R^a_{bcd} z^b x^c y^d`` with

    R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}.

With this choice a space form of curvature ``c`` satisfies
``-<R(x, v)v, x> = c`` for a unit timelike ``v`` and a unit spacelike ``x``
orthogonal to it, the Jacobi equation reads ``J'' + R(J, g')g' = 0`` and
``Ric(Z, Z) = -sum_i K(E_i, Z)`` for unit timelike ``Z``.  The test-suite pins
all of this against the flat embeddings of de Sitter and anti-de Sitter space.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

__all__ = [
    "ChartDomainError",
    "PreconditionError",
    "UnsupportedModelError",
    "CausalClass",
    "Warping",
    "WARPINGS",
    "make_warping",
    "MetricModel",
    "WarpedProduct",
    "AntiDeSitter",
    "make_minkowski",
    "make_de_sitter",
    "make_anti_de_sitter",
    "make_grw",
    "model_from_config",
    "christoffel",
    "riemann_tensor",
    "riemann",
    "sectional_timelike",
    "tidal_operator",
    "ricci_timelike",
    "classify_causal",
    "chronological_future_contains",
    "inner",
    "orthonormal_frame",
    "orthonormal_complement",
    "random_unit_timelike",
    "curvature_along",
]


class ChartDomainError(ValueError):
    """An event lies outside the chart of a model."""


class PreconditionError(ValueError):
    """A tangent vector does not satisfy the normalization an operation needs."""


class UnsupportedModelError(NotImplementedError):
    """The requested operation has no implementation for this model."""


class CausalClass(NamedTuple):
    kind: str  # 'timelike', 'null' or 'spacelike'
    orientation: str  # 'future', 'past' or 'none'


# ---------------------------------------------------------------------------
# warping functions


@dataclass(frozen=True)
class Warping:
    """A positive function ``a(t)`` with its first two derivatives."""

    name: str
    a: Callable
    da: Callable
    d2a: Callable
    params: dict = field(default_factory=dict)
    t_range: tuple = (-math.inf, math.inf)


def _const_warping(a0=1.0):
    a0 = float(a0)
    return Warping(
        "const",
        lambda t: np.full_like(np.asarray(t, dtype=float), a0),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        {"a0": a0},
    )


def _exp_warping(a0=1.0, rate=1.0):
    a0, k = float(a0), float(rate)
    return Warping(
        "exp",
        lambda t: a0 * np.exp(k * np.asarray(t, dtype=float)),
        lambda t: a0 * k * np.exp(k * np.asarray(t, dtype=float)),
        lambda t: a0 * k * k * np.exp(k * np.asarray(t, dtype=float)),
        {"a0": a0, "rate": k},
    )


def _sin_warping(amplitude=0.1, omega=1.0, phase=0.0):
    eps, w, ph = float(amplitude), float(omega), float(phase)
    if not abs(eps) < 1.0:
        raise ValueError("sin warping needs |amplitude| < 1 to stay positive")
    return Warping(
        "sin",
        lambda t: 1.0 + eps * np.sin(w * np.asarray(t, dtype=float) + ph),
        lambda t: eps * w * np.cos(w * np.asarray(t, dtype=float) + ph),
        lambda t: -eps * w * w * np.sin(w * np.asarray(t, dtype=float) + ph),
        {"amplitude": eps, "omega": w, "phase": ph},
    )


def _cosh_warping(c=1.0):
    # de Sitter radius function in global coordinates
    c = float(c)
    k = math.sqrt(c)
    return Warping(
        "cosh",
        lambda t: np.cosh(k * np.asarray(t, dtype=float)) / k,
        lambda t: np.sinh(k * np.asarray(t, dtype=float)),
        lambda t: k * np.cosh(k * np.asarray(t, dtype=float)),
        {"c": c},
    )


WARPINGS = {
    "const": _const_warping,
    "exp": _exp_warping,
    "sin": _sin_warping,
    "sin-perturbed": _sin_warping,
    "cosh": _cosh_warping,
}


def make_warping(name, **params):
    try:
        factory = WARPINGS[name]
    except KeyError:
        raise ValueError(f"unknown warping {name!r}; known: {sorted(WARPINGS)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# finite differences


_FD_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_FD_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def _central_diff(fn, x, h):
    """Fourth-order central differences of a batched function.

    ``x`` has shape ``(..., D)`` and ``h`` broadcasts against ``x[..., 0]``.
    Returns ``out[..., e, *shape] = d fn / d x_e``.
    """
    x = np.asarray(x, dtype=float)
    D = x.shape[-1]
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape[:-1])
    eye = np.eye(D)
    # (..., 4, D, D): stencil point k along axis e
    pts = x[..., None, None, :] + (
        _FD_OFFSETS[:, None, None] * eye[None, :, :]) * h[..., None, None, None]
    vals = fn(pts)  # (..., 4, D, *shape)
    extra = vals.ndim - (x.ndim + 1)
    w = _FD_WEIGHTS.reshape((4,) + (1,) * (1 + extra))
    hh = h.reshape(h.shape + (1,) * (1 + extra))
    return np.sum(w * vals, axis=x.ndim - 1) / hh


# ---------------------------------------------------------------------------
# models


class MetricModel:
    """A time-oriented Lorentzian metric on a single chart.

    Subclasses implement :meth:`metric`, :meth:`time_orientation` and
    :meth:`check_chart`; closed-form Christoffel symbols are optional.
    """

    kind = "generic"
    constant_curvature: Optional[float] = None

    def __init__(self, n, label, christoffel_mode="closed_form",
                 metric_fd_step=1e-5, curvature_fd_step=1e-3):
        if n < 1:
            raise ValueError("need n >= 1 spatial dimensions")
        if christoffel_mode not in ("closed_form", "finite_difference"):
            raise ValueError(f"unknown christoffel_mode {christoffel_mode!r}")
        self.n = int(n)
        self.dim = self.n + 1
        self.label = label
        self.christoffel_mode = christoffel_mode
        self.metric_fd_step = float(metric_fd_step)
        self.curvature_fd_step = float(curvature_fd_step)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"

    # -- to implement ------------------------------------------------------
    def metric(self, x):
        raise NotImplementedError

    def time_orientation(self, x):
        raise NotImplementedError

    def check_chart(self, x):
        """Raise :class:`ChartDomainError` unless every event is in the chart."""

    def _christoffel_closed(self, x):
        return None

    def _christoffel_derivative_closed(self, x):
        return None

    # -- generic machinery -------------------------------------------------
    def inverse_metric(self, x):
        return np.linalg.inv(self.metric(x))

    def inner(self, x, u, v):
        g = self.metric(x)
        return np.einsum("...a,...ab,...b->...", u, g, v)

    def lower(self, x, u):
        return np.einsum("...ab,...b->...a", self.metric(x), u)

    def _steps(self, x, rel):
        return rel * (1.0 + np.linalg.norm(np.asarray(x, dtype=float), axis=-1))

    def metric_derivative(self, x):
        """``dg[..., e, a, b] = d_e g_ab`` by fourth-order central differences."""
        return _central_diff(self.metric, x, self._steps(x, self.metric_fd_step))

    def christoffel(self, x):
        """``G[..., a, b, c] = Gamma^a_{bc}``."""
        x = np.asarray(x, dtype=float)
        self.check_chart(x)
        if self.christoffel_mode == "closed_form":
            G = self._christoffel_closed(x)
            if G is not None:
                return G
        return self._christoffel_fd(x, self.metric_fd_step)

    def _christoffel_fd(self, x, rel):
        dg = _central_diff(self.metric, x, self._steps(x, rel))
        return self._christoffel_from(self.inverse_metric(x), dg)

    @staticmethod
    def _christoffel_from(ginv, dg):
        low = 0.5 * (np.einsum("...bdc->...dbc", dg) + np.einsum("...cdb->...dbc", dg)
                     - dg)
        return np.einsum("...ad,...dbc->...abc", ginv, low)

    def christoffel_derivative(self, x):
        """``dG[..., e, a, b, c] = d_e Gamma^a_{bc}``."""
        x = np.asarray(x, dtype=float)
        self.check_chart(x)
        if self.christoffel_mode == "closed_form":
            dG = self._christoffel_derivative_closed(x)
            if dG is not None:
                return dG
        # differentiate Gamma built from a moderate metric step: the nested
        # quotient then loses ~eps/h^2 instead of eps/(h_g h)
        rel = self.curvature_fd_step
        return _central_diff(lambda y: self._christoffel_fd(y, rel), x,
                             self._steps(x, rel))

    def check_signature(self, x):
        """Raise unless the metric has signature ``(-,+,...,+)`` at every event."""
        ev = np.linalg.eigvalsh(self.metric(x))
        neg = np.sum(ev < 0, axis=-1)
        if np.any(neg != 1) or np.any(np.abs(ev) < 1e-14):
            raise ChartDomainError(f"{self.label}: metric is not Lorentzian")
        T = self.time_orientation(x)
        if np.any(self.inner(x, T, T) >= 0):
            raise ChartDomainError(f"{self.label}: time orientation is not timelike")
        return True

    def riemann_tensor(self, x, chunk=256):
        """``R[..., a, b, c, d] = R^a_{bcd}`` (see module docstring)."""
        x = np.asarray(x, dtype=float)
        if x.ndim > 1 and x.shape[0] > chunk:
            return np.concatenate([self.riemann_tensor(x[i:i + chunk], chunk)
                                   for i in range(0, x.shape[0], chunk)])
        G = self.christoffel(x)
        dG = self.christoffel_derivative(x)
        return (np.einsum("...cadb->...abcd", dG)
                - np.einsum("...dacb->...abcd", dG)
                + np.einsum("...ace,...edb->...abcd", G, G)
                - np.einsum("...ade,...ecb->...abcd", G, G))


class WarpedProduct(MetricModel):
    """``-dt^2 + a(t)^2 h`` with a flat or unit-round fibre ``h``.

    The round fibre is written in stereographic coordinates,
    ``h = 4 |dy|^2 / (1 + |y|^2)^2``.
    """

    def __init__(self, n, warping, fiber="flat", label=None, kind="grw",
                 constant_curvature=None, **kw):
        if fiber not in ("flat", "sphere"):
            raise ValueError(f"unknown fibre {fiber!r}")
        super().__init__(n, label or f"{kind}(n={n}, a={warping.name})", **kw)
        self.warping = warping
        self.fiber = fiber
        self.kind = kind
        self.constant_curvature = constant_curvature

    # conformal factor sigma of the fibre and phi = log sigma
    def _fiber_terms(self, y):
        if self.fiber == "flat":
            sig2 = np.ones(y.shape[:-1])
            dphi = np.zeros_like(y)
            ddphi = np.zeros(y.shape + (y.shape[-1],))
            return sig2, dphi, ddphi
        r2 = np.sum(y * y, axis=-1)
        q = 1.0 + r2
        sig2 = 4.0 / q**2
        dphi = -2.0 * y / q[..., None]
        eye = np.eye(y.shape[-1])
        ddphi = (-2.0 * eye / q[..., None, None]
                 + 4.0 * y[..., :, None] * y[..., None, :] / (q**2)[..., None, None])
        return sig2, dphi, ddphi

    def check_chart(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ChartDomainError(f"{self.label}: non-finite event")
        lo, hi = self.warping.t_range
        t = x[..., -1]
        if np.any(t <= lo) or np.any(t >= hi):
            raise ChartDomainError(f"{self.label}: t outside ({lo}, {hi})")

    def metric(self, x):
        x = np.asarray(x, dtype=float)
        y, t = x[..., :-1], x[..., -1]
        a = self.warping.a(t)
        sig2, _, _ = self._fiber_terms(y)
        g = np.zeros(x.shape + (self.dim,))
        idx = np.arange(self.n)
        g[..., idx, idx] = (a * a * sig2)[..., None]
        g[..., -1, -1] = -1.0
        return g

    def time_orientation(self, x):
        x = np.asarray(x, dtype=float)
        T = np.zeros_like(x)
        T[..., -1] = 1.0
        return T

    def _christoffel_closed(self, x):
        n, T = self.n, self.n
        y, t = x[..., :-1], x[..., -1]
        a, da = self.warping.a(t), self.warping.da(t)
        sig2, dphi, _ = self._fiber_terms(y)
        G = np.zeros(x.shape[:-1] + (self.dim,) * 3)
        eye = np.eye(n)
        G[..., T, :n, :n] = (a * da * sig2)[..., None, None] * eye
        hub = (da / a)[..., None, None] * eye
        G[..., :n, T, :n] = hub
        G[..., :n, :n, T] = hub
        # fibre Christoffels of sigma^2 delta
        G[..., :n, :n, :n] = (np.einsum("ij,...k->...ijk", eye, dphi)
                              + np.einsum("ik,...j->...ijk", eye, dphi)
                              - np.einsum("jk,...i->...ijk", eye, dphi))
        return G

    def _christoffel_derivative_closed(self, x):
        n, T = self.n, self.n
        y, t = x[..., :-1], x[..., -1]
        w = self.warping
        a, da, d2a = w.a(t), w.da(t), w.d2a(t)
        sig2, dphi, ddphi = self._fiber_terms(y)
        dG = np.zeros(x.shape[:-1] + (self.dim,) * 4)
        eye = np.eye(n)
        dG[..., T, T, :n, :n] = ((da * da + a * d2a) * sig2)[..., None, None] * eye
        dG[..., :n, T, :n, :n] = np.einsum(
            "...l,ij->...lij", 2.0 * (a * da * sig2)[..., None] * dphi, eye)
        hub = (d2a / a - (da / a) ** 2)[..., None, None] * eye
        dG[..., T, :n, T, :n] = hub
        dG[..., T, :n, :n, T] = hub
        dG[..., :n, :n, :n, :n] = (np.einsum("ij,...kl->...lijk", eye, ddphi)
                                   + np.einsum("ik,...jl->...lijk", eye, ddphi)
                                   - np.einsum("jk,...il->...lijk", eye, ddphi))
        return dG

    # -- de Sitter embedding ----------------------------------------------
    def _require_de_sitter(self):
        if self.kind != "de_sitter":
            raise UnsupportedModelError(f"{self.label} has no flat embedding")

    @property
    def embedding_signature(self):
        self._require_de_sitter()
        return np.array([1.0] * (self.n + 1) + [-1.0])

    def embedding(self, x):
        """Map chart events into ``R^{n+2}_1`` (time last), ``<X, X> = 1/c``."""
        self._require_de_sitter()
        x = np.asarray(x, dtype=float)
        c = self.constant_curvature
        k = math.sqrt(c)
        y, t = x[..., :-1], x[..., -1]
        r2 = np.sum(y * y, axis=-1)
        omega = np.concatenate([2.0 * y, (1.0 - r2)[..., None]], axis=-1) / (1.0 + r2)[..., None]
        return np.concatenate([(np.cosh(k * t) / k)[..., None] * omega,
                               (np.sinh(k * t) / k)[..., None]], axis=-1)

    def from_embedding(self, X):
        self._require_de_sitter()
        X = np.asarray(X, dtype=float)
        k = math.sqrt(self.constant_curvature)
        t = np.arcsinh(k * X[..., -1]) / k
        spatial = X[..., :-1]
        omega = spatial / np.linalg.norm(spatial, axis=-1, keepdims=True)
        y = omega[..., :-1] / (1.0 + omega[..., -1:])
        return np.concatenate([y, t[..., None]], axis=-1)

    def embedding_pushforward(self, x, v):
        """Differential of :meth:`embedding` applied to ``v`` (central differences)."""
        self._require_de_sitter()
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        h = 1e-3
        f = self.embedding
        return (-f(x + 2 * h * v) + 8 * f(x + h * v) - 8 * f(x - h * v)
                + f(x - 2 * h * v)) / (12 * h)


class AntiDeSitter(MetricModel):
    """Anti-de Sitter space in static coordinates ``(y, tau)``.

    ``g = |dy|^2 - (y.dy)^2 / (l^2 + |y|^2) - (1 + |y|^2/l^2) dtau^2`` with
    ``l = 1/sqrt(-c)``.  It is the pullback of the flat metric of
    ``R^{n+2}_2`` (signature ``(+,...,+,-,-)``) under
    ``(y, tau) -> (y, R cos(tau/l), R sin(tau/l))``, ``R = sqrt(l^2 + |y|^2)``,
    onto the quadric ``<X, X> = 1/c``.  Christoffel symbols come from finite
    differences of the metric.
    """

    kind = "anti_de_sitter"

    def __init__(self, n, c, label=None, christoffel_mode="finite_difference", **kw):
        if not c < 0:
            raise ValueError("anti-de Sitter needs c < 0")
        super().__init__(n, label or f"anti_de_sitter(n={n}, c={c:g})",
                         christoffel_mode=christoffel_mode, **kw)
        self.constant_curvature = float(c)
        self.ell = 1.0 / math.sqrt(-c)

    def check_chart(self, x):
        if not np.all(np.isfinite(np.asarray(x, dtype=float))):
            raise ChartDomainError(f"{self.label}: non-finite event")

    def metric(self, x):
        x = np.asarray(x, dtype=float)
        y = x[..., :-1]
        r2 = np.sum(y * y, axis=-1)
        l2 = self.ell**2
        g = np.zeros(x.shape + (self.dim,))
        n = self.n
        g[..., :n, :n] = np.eye(n) - y[..., :, None] * y[..., None, :] / (l2 + r2)[..., None, None]
        g[..., -1, -1] = -(1.0 + r2 / l2)
        return g

    def time_orientation(self, x):
        x = np.asarray(x, dtype=float)
        T = np.zeros_like(x)
        T[..., -1] = 1.0
        return T

    @property
    def embedding_signature(self):
        return np.array([1.0] * self.n + [-1.0, -1.0])

    def embedding(self, x):
        x = np.asarray(x, dtype=float)
        y, tau = x[..., :-1], x[..., -1]
        R = np.sqrt(self.ell**2 + np.sum(y * y, axis=-1))
        return np.concatenate([y, (R * np.cos(tau / self.ell))[..., None],
                               (R * np.sin(tau / self.ell))[..., None]], axis=-1)

    def from_embedding(self, X, tau_ref=0.0):
        """Inverse of :meth:`embedding`, choosing the ``tau`` branch nearest ``tau_ref``."""
        X = np.asarray(X, dtype=float)
        y = X[..., :-2]
        ang = np.arctan2(X[..., -1], X[..., -2])
        ref = np.asarray(tau_ref, dtype=float) / self.ell
        ang = ang + 2 * np.pi * np.round((ref - ang) / (2 * np.pi))
        return np.concatenate([y, (self.ell * ang)[..., None]], axis=-1)


# ---------------------------------------------------------------------------
# constructors


def make_minkowski(n, **kw):
    """Lorentz-Minkowski space ``dx_1^2 + ... + dx_n^2 - dt^2``."""
    return WarpedProduct(n, _const_warping(1.0), "flat", label=f"minkowski(n={n})",
                         kind="minkowski", constant_curvature=0.0, **kw)


def make_de_sitter(n, c=1.0, **kw):
    """de Sitter space of curvature ``c > 0``.

    Global chart ``-dt^2 + cosh^2(sqrt(c) t)/c dOmega^2``; the embedding into
    ``R^{n+2}_1`` is available through :meth:`WarpedProduct.embedding`.
    """
    if not c > 0:
        raise ValueError("de Sitter needs c > 0")
    return WarpedProduct(n, _cosh_warping(c), "sphere", label=f"de_sitter(n={n}, c={c:g})",
                         kind="de_sitter", constant_curvature=float(c), **kw)


def make_anti_de_sitter(n, c=-1.0, **kw):
    return AntiDeSitter(n, c, **kw)


def make_grw(n, warping, **kw):
    """Generalized Robertson-Walker spacetime ``-dt^2 + a(t)^2 |dx|^2``."""
    if isinstance(warping, str):
        warping = make_warping(warping)
    const = None
    if warping.name == "const":
        const = 0.0
    return WarpedProduct(n, warping, "flat", kind="grw", constant_curvature=const, **kw)


def model_from_config(cfg):
    """Build a model from a mapping such as ``{"kind": "grw", "n": 2, "warping": {...}}``."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    n = cfg.pop("n", None)
    if kind is None or n is None:
        raise ValueError("model config needs 'kind' and 'n'")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"model.n must be a positive integer, got {n!r}")
    kw = {k: cfg.pop(k) for k in ("christoffel_mode", "metric_fd_step", "curvature_fd_step")
          if k in cfg}
    if kind == "minkowski":
        model = make_minkowski(n, **kw)
    elif kind == "de_sitter":
        model = make_de_sitter(n, float(cfg.pop("c", 1.0)), **kw)
    elif kind == "anti_de_sitter":
        model = make_anti_de_sitter(n, float(cfg.pop("c", -1.0)), **kw)
    elif kind == "grw":
        w = dict(cfg.pop("warping", {"name": "const"}))
        name = w.pop("name", None)
        if name is None:
            raise ValueError("model.warping needs a 'name'")
        model = make_grw(n, make_warping(name, **w), **kw)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    if cfg:
        raise ValueError(f"unknown model keys: {sorted(cfg)}")
    return model


# ---------------------------------------------------------------------------
# functional interface


def inner(model, x, u, v):
    return model.inner(x, u, v)


def christoffel(model, event):
    return model.christoffel(event)


def riemann_tensor(model, event):
    return model.riemann_tensor(event)


def riemann(model, event, x, y, z):
    """``R(x, y)z`` at ``event``."""
    R = model.riemann_tensor(event)
    return np.einsum("...abcd,...b,...c,...d->...a", R, z, x, y)


def _check_unit(model, event, v, target, name, tol=1e-10):
    val = model.inner(event, v, v)
    if np.any(np.abs(val - target) > tol):
        raise PreconditionError(f"{name}: <v,v> = {val} but {target} is required")


def sectional_timelike(model, event, v, x, tol=1e-10):
    """Sectional curvature ``K = -<R(x, v)v, x>`` of the timelike plane ``v ^ x``."""
    _check_unit(model, event, v, -1.0, "timelike vector", tol)
    _check_unit(model, event, x, 1.0, "spacelike vector", tol)
    if np.any(np.abs(model.inner(event, x, v)) > tol):
        raise PreconditionError("x must be orthogonal to v")
    return -model.inner(event, riemann(model, event, x, v, v), x)


def orthonormal_complement(model, event, Z):
    """Orthonormal basis of ``Z^perp`` for unit timelike ``Z`` (batched).

    Returns ``E[..., i, :]`` for ``i = 0..n-1``.
    """
    event = np.asarray(event, dtype=float)
    Z = np.asarray(Z, dtype=float)
    g = model.metric(event)
    nZ = -np.einsum("...a,...ab,...b->...", Z, g, Z)
    Zu = Z / np.sqrt(nZ)[..., None]
    return _gram_schmidt_complement(g, Zu, model.n)


def _gram_schmidt_complement(g, Zu, n):
    D = n + 1
    shape = Zu.shape[:-1]
    out = []
    ip = lambda u, v: np.einsum("...a,...ab,...b->...", u, g, v)
    # project coordinate vectors onto Z^perp and keep, one at a time, the one
    # with the largest remaining norm
    cands = [np.broadcast_to(np.eye(D)[k], Zu.shape).copy() for k in range(D)]
    used = np.zeros(shape + (D,), dtype=bool)
    for _ in range(n):
        best = None
        best_nrm = None
        for k, e in enumerate(cands):
            w = e + ip(e, Zu)[..., None] * Zu
            for b in out:
                w = w - ip(w, b)[..., None] * b
            nrm = np.where(used[..., k], -np.inf, ip(w, w))
            if best is None:
                best, best_nrm, best_k = w, nrm, np.zeros(shape, dtype=int)
            else:
                take = nrm > best_nrm
                best = np.where(take[..., None], w, best)
                best_nrm = np.where(take, nrm, best_nrm)
                best_k = np.where(take, k, best_k)
        np.put_along_axis(used, best_k[..., None], True, axis=-1)
        out.append(best / np.sqrt(best_nrm)[..., None])
    return np.stack(out, axis=-2)


def orthonormal_frame(model, event, Z=None):
    """Frame ``E[..., i, :]`` with spatial ``E_0..E_{n-1}`` and ``E_n = Z``.

    ``Z`` defaults to the normalized time orientation.
    """
    event = np.asarray(event, dtype=float)
    if Z is None:
        Z = model.time_orientation(event)
    Z = np.asarray(Z, dtype=float)
    nZ = -model.inner(event, Z, Z)
    if np.any(nZ <= 0):
        raise PreconditionError("frame generator must be timelike")
    Zu = Z / np.sqrt(nZ)[..., None]
    E = orthonormal_complement(model, event, Zu)
    return np.concatenate([E, Zu[..., None, :]], axis=-2)


def tidal_operator(model, event, Z):
    """Matrix ``T_ij = -<R(e_i, Z)Z, e_j>`` on an orthonormal basis of ``Z^perp``.

    Its eigenvalues are the extreme sectional curvatures of timelike planes
    containing ``Z``; ``Ric(Z, Z) = -trace(T)``.
    """
    event = np.asarray(event, dtype=float)
    E = orthonormal_complement(model, event, Z)
    R = model.riemann_tensor(event)
    g = model.metric(event)
    # R(e_i, Z)Z^a = R^a_{bcd} Z^b e_i^c Z^d
    Re = np.einsum("...abcd,...b,...ic,...d->...ia", R, Z, E, Z)
    T = -np.einsum("...ia,...ab,...jb->...ij", Re, g, E)
    return 0.5 * (T + np.swapaxes(T, -1, -2))


def ricci_timelike(model, event, Z, tol=1e-10, crosscheck_tol=1e-8):
    """``Ric(Z, Z)`` for unit timelike ``Z``.

    Evaluated as the trace ``R^a_{bad} Z^b Z^d`` and cross-checked against
    ``-sum_i K(E_i, Z)`` over an orthonormal completion of ``Z``.
    """
    _check_unit(model, event, Z, -1.0, "timelike vector", tol)
    R = model.riemann_tensor(event)
    trace = np.einsum("...abad,...b,...d->...", R, Z, Z)
    frame_sum = -np.trace(tidal_operator(model, event, Z), axis1=-2, axis2=-1)
    if np.any(np.abs(trace - frame_sum) > crosscheck_tol * (1 + np.abs(trace))):
        raise RuntimeError(f"Ricci cross-check failed: {trace} vs {frame_sum}")
    return trace


def classify_causal(model, event, v):
    v = np.asarray(v, dtype=float)
    q = float(model.inner(event, v, v))
    band = 1e-12 * float(np.dot(v, v))
    if abs(q) <= band:
        kind = "null"
    elif q < 0:
        kind = "timelike"
    else:
        kind = "spacelike"
    if kind == "spacelike" or not np.any(v):
        return CausalClass(kind, "none")
    s = float(model.inner(event, v, model.time_orientation(event)))
    return CausalClass(kind, "future" if s < 0 else "past")


def chronological_future_contains(model, p, q):
    """``q in I^+(p)`` in Minkowski space (exact predicate)."""
    if getattr(model, "kind", None) != "minkowski":
        raise UnsupportedModelError("exact chronology predicate only for Minkowski space")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    eta = np.ones(model.dim)
    eta[-1] = -1.0
    return bool(np.sum(eta * d * d) < 0 and -d[-1] < 0)


def random_unit_timelike(model, event, rng, max_rapidity=1.0, size=None):
    """Future unit timelike vectors boosted from the time orientation.

    Rapidity is uniform on ``[0, max_rapidity]`` in a uniformly random spatial
    direction of the orthonormal frame at ``event``.
    """
    event = np.asarray(event, dtype=float)
    shape = event.shape[:-1] if size is None else (size,) + event.shape[:-1]
    E = orthonormal_frame(model, event)
    d = rng.normal(size=shape + (model.n,))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    b = rng.uniform(0.0, max_rapidity, size=shape)
    comps = np.concatenate([np.sinh(b)[..., None] * d, np.cosh(b)[..., None]], axis=-1)
    return np.einsum("...i,...ia->...a", comps, E)


def curvature_along(model, events, velocities):
    """Extreme timelike sectional curvatures and minimum Ricci curvature.

    ``events``/``velocities`` are batches of points and unit timelike vectors
    (e.g. samples of geodesics).  Returns ``(K_min, K_max, ric_min)`` over the
    planes containing each velocity.
    """
    events = np.asarray(events, dtype=float).reshape(-1, model.dim)
    velocities = np.asarray(velocities, dtype=float).reshape(-1, model.dim)
    T = tidal_operator(model, events, velocities)
    ev = np.linalg.eigvalsh(T)
    ric = -np.trace(T, axis1=-2, axis2=-1)
    return float(ev.min()), float(ev.max()), float(ric.min())
