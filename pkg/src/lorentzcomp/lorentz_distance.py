"""Lorentzian distance fields and the Hessian/Laplacian comparison checks.

Two kinds of fields are provided:

* :class:`PointDistance` -- ``d_p(q)``, the Lorentzian distance from a point.
  Exact in Minkowski and de Sitter space; in flat-fibre GRW spacetimes it is
  obtained from the conserved momentum of the connecting geodesic.
* :class:`SliceDistance` -- ``d_N(q)`` for a slice ``N = {t = t0}`` of a warped
  product (``d_N = t - t0``) or the totally geodesic slice ``{tau = 0}`` of
  anti-de Sitter space.

Derivatives are taken by central differences of the value with step
``fd_step * (1 + d)`` and one Richardson extrapolation step (halved
step) unless disabled; the covariant Hessian is
``d_a d_b d - Gamma^c_ab d_c d``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import comparison as cmp
from .geodesic import integrate_batch
from .reports import make_report
from .spacetime import (AntiDeSitter, PreconditionError, UnsupportedModelError, WarpedProduct,
                        orthonormal_complement, orthonormal_frame, random_unit_timelike,
                        tidal_operator)

__all__ = [
    "NotInFutureError",
    "DomainMarginError",
    "DistanceField",
    "PointDistance",
    "SliceDistance",
    "SampleSpec",
    "distance_from_point",
    "distance_from_slice",
    "gradient_distance",
    "hessian_distance",
    "laplacian_distance",
    "sample_events",
    "radial_curvature",
    "check_hessian_lower_point",
    "check_hessian_upper_point",
    "check_laplacian_lower_point",
    "check_hessian_from_slice",
    "check_laplacian_from_slice",
    "check_space_form_equalities",
    "CURVATURE_PAD",
    "HYPOTHESIS_TOL",
]

CURVATURE_PAD = 1e-9
HYPOTHESIS_TOL = 1e-8

_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)


class NotInFutureError(ValueError):
    """The event is not in the chronological future of the source."""


class DomainMarginError(ValueError):
    """A finite-difference stencil leaves the domain of the field."""


# ---------------------------------------------------------------------------
# exact distances


def _minkowski_distance(p, q):
    d = q - p
    q2 = np.sum(d[..., :-1] ** 2, axis=-1) - d[..., -1] ** 2
    if np.any(q2 >= 0) or np.any(d[..., -1] <= 0):
        raise NotInFutureError("q is not in the chronological future of p")
    return np.sqrt(-q2)


def _de_sitter_distance(model, p, q):
    P = model.embedding(p)
    Q = model.embedding(q)
    D = Q - P
    sig = model.embedding_signature
    q2 = np.sum(sig * D * D, axis=-1)
    if np.any(q2 >= 0) or np.any(D[..., -1] <= 0):
        raise NotInFutureError("q is not in the chronological future of p")
    k = math.sqrt(model.constant_curvature)
    # <Q-P, Q-P> = -(4/c) sinh^2(k d / 2); stable for small d
    return (2.0 / k) * np.arcsinh(0.5 * k * np.sqrt(-q2))


def _grw_distance(warping, p, q, max_iter=200):
    """Distance in ``-dt^2 + a(t)^2 |dx|^2``.

    Along a geodesic ``L = a^2 |dx/dtau|`` is conserved, so
    ``|dx| = int L / (a sqrt(a^2 + L^2)) dt`` and
    ``tau = int a / sqrt(a^2 + L^2) dt``.  The first relation is solved for
    ``L`` by Newton's method, which converges monotonically because the
    right-hand side is increasing and concave in ``L``.
    """
    dx = np.linalg.norm(q[..., :-1] - p[..., :-1], axis=-1)
    t0, t1 = p[..., -1], q[..., -1]
    half = 0.5 * (t1 - t0)
    if np.any(half <= 0):
        raise NotInFutureError("q is not in the chronological future of p")
    tt = (0.5 * (t1 + t0))[..., None] + half[..., None] * _GL_X
    a = warping.a(tt)
    W = half[..., None] * _GL_W
    reach = np.sum(W / a, axis=-1)
    if np.any(dx >= reach):
        raise NotInFutureError("q is not in the chronological future of p")
    r = dx / reach
    A = 2.0 * half / reach
    L = A * r / np.sqrt(1.0 - r * r)
    a2 = a * a
    for _ in range(max_iter):
        Lb = L[..., None]
        root = np.sqrt(a2 + Lb * Lb)
        f = np.sum(W * Lb / (a * root), axis=-1) - dx
        df = np.sum(W * a / root**3, axis=-1)
        step = f / df
        L = np.maximum(L - step, 0.0)
        if np.all(np.abs(step) <= 4e-16 * (1.0 + L)):
            break
    Lb = L[..., None]
    return np.sum(W * a / np.sqrt(a2 + Lb * Lb), axis=-1)


def distance_from_point(model, p, q):
    """``d_p(q)`` for ``q`` in the chronological future of ``p``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    kind = getattr(model, "kind", None)
    if kind == "minkowski":
        return _minkowski_distance(p, q)
    if kind == "de_sitter":
        return _de_sitter_distance(model, p, q)
    if kind == "grw" and isinstance(model, WarpedProduct) and model.fiber == "flat":
        return _grw_distance(model.warping, p, q)
    if kind == "anti_de_sitter":
        raise UnsupportedModelError(
            "anti-de Sitter point distance is not finite-valued on the chronological future")
    raise UnsupportedModelError(f"no point distance for {model!r}")


def distance_from_slice(model, t0, q):
    """``d_N(q)`` for the slice ``N = {t = t0}``.

    Warped products: ``t - t0``.  Anti-de Sitter (``t0 = 0`` only):
    ``arcsin(sqrt(-c) V)/sqrt(-c)`` with ``V`` the embedding coordinate
    normal to the totally geodesic slice.
    """
    q = np.asarray(q, dtype=float)
    if isinstance(model, WarpedProduct):
        d = q[..., -1] - t0
        if np.any(d <= 0):
            raise NotInFutureError("q must lie strictly above the slice")
        return d
    if isinstance(model, AntiDeSitter):
        if t0 != 0:
            raise UnsupportedModelError("anti-de Sitter slice distance only for tau = 0")
        k = 1.0 / model.ell
        X = model.embedding(q)
        V, U = X[..., -1], X[..., -2]
        if np.any(V <= 0) or np.any(U <= 0) or np.any(k * V >= 1):
            raise NotInFutureError("q must lie in the normal neighbourhood above tau = 0")
        return np.arcsin(k * V) / k
    raise UnsupportedModelError(f"no slice distance for {model!r}")


# ---------------------------------------------------------------------------
# fields


class DistanceField:
    """Value, gradient, Hessian and Laplacian of a Lorentzian distance."""

    kind = "abstract"

    def __init__(self, model, fd_step=1e-4, richardson=True):
        self.model = model
        self.fd_step = float(fd_step)
        self.richardson = bool(richardson)

    def value(self, q):
        raise NotImplementedError

    def __call__(self, q):
        return self.value(q)

    def _step(self, d):
        return self.fd_step * (1.0 + d)

    def _stencil_values(self, q, h):
        """Values on the second-order stencil around each event.

        Returns ``(f0, fp, fm, fpp, fpm, fmp, fmm)`` with ``fp[..., a]`` at
        ``q + h e_a`` and ``fpm[..., a, b]`` at ``q + h e_a - h e_b``.
        """
        D = q.shape[-1]
        eye = np.eye(D)
        hh = h[..., None, None, None]
        sgn = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        pts_1 = q[..., None, None, :] + (np.array([1.0, -1.0])[:, None, None] * eye) * hh
        off2 = (sgn[:, 0, None, None, None] * eye[None, :, None, :]
                + sgn[:, 1, None, None, None] * eye[None, None, :, :])
        pts_2 = q[..., None, None, None, :] + off2 * hh[..., None]
        try:
            v1 = self.value(pts_1)
            v2 = self.value(pts_2)
        except NotInFutureError as exc:
            raise DomainMarginError(f"stencil leaves the field domain: {exc}") from None
        return self.value(q), v1[..., 0, :], v1[..., 1, :], v2[..., 0, :, :], v2[..., 1, :, :], \
            v2[..., 2, :, :], v2[..., 3, :, :]

    def _partials(self, q, h):
        f0, fp, fm, fpp, fpm, fmp, fmm = self._stencil_values(q, h)
        hb = h[..., None]
        grad = (fp - fm) / (2 * hb)
        hess = (fpp - fpm - fmp + fmm) / (4 * hb[..., None] ** 2)
        diag = (fp - 2 * f0[..., None] + fm) / hb**2
        D = q.shape[-1]
        idx = np.arange(D)
        hess[..., idx, idx] = diag
        return f0, grad, 0.5 * (hess + np.swapaxes(hess, -1, -2))

    def derivatives(self, q):
        """``(d, dd, DDd)``: value, coordinate gradient ``d_a d`` and covariant Hessian."""
        q = np.asarray(q, dtype=float)
        d = self.value(q)
        h = self._step(d)
        f0, grad, hess = self._partials(q, h)
        if self.richardson:
            _, g2, h2 = self._partials(q, 0.5 * h)
            grad = (4 * g2 - grad) / 3
            hess = (4 * h2 - hess) / 3
        G = self.model.christoffel(q)
        cov = hess - np.einsum("...cab,...c->...ab", G, grad)
        return f0, grad, cov

    def gradient(self, q):
        """Raised gradient ``g^{ab} d_b d``."""
        _, grad, _ = self.derivatives(q)
        return np.einsum("...ab,...b->...a", self.model.inverse_metric(q), grad)

    def hessian(self, q):
        return self.derivatives(q)[2]

    def laplacian(self, q, Z=None):
        """Trace of the Hessian, ``sum_i eps_i DDd(e_i, e_i)``.

        The orthonormal frame is generated by the timelike vector ``Z``
        (default: the time orientation).
        """
        q = np.asarray(q, dtype=float)
        cov = self.derivatives(q)[2]
        E = orthonormal_frame(self.model, q, Z)
        vals = np.einsum("...ab,...ia,...ib->...i", cov, E, E)
        return np.sum(vals[..., :-1], axis=-1) - vals[..., -1]


class PointDistance(DistanceField):
    kind = "point"

    def __init__(self, model, p, **kw):
        super().__init__(model, **kw)
        self.p = np.asarray(p, dtype=float)
        distance_from_point(model, self.p, self.p + np.r_[np.zeros(model.n), 1.0])

    def value(self, q):
        return distance_from_point(self.model, self.p, q)

    def __repr__(self):
        return f"PointDistance({self.model.label}, p={self.p.tolist()})"


class SliceDistance(DistanceField):
    kind = "slice"

    def __init__(self, model, t0=0.0, **kw):
        super().__init__(model, **kw)
        self.t0 = float(t0)
        if isinstance(model, AntiDeSitter) and self.t0 != 0:
            raise UnsupportedModelError("anti-de Sitter slice distance only for tau = 0")
        if not isinstance(model, (WarpedProduct, AntiDeSitter)):
            raise UnsupportedModelError(f"no slice distance for {model!r}")

    def value(self, q):
        return distance_from_slice(self.model, self.t0, q)

    def immersion(self):
        """The slice as an immersion (for its shape operator and ``H_N``)."""
        from .hypersurface import slice_immersion
        return slice_immersion(self.model, self.t0)

    def projection(self, q):
        """Chart point on ``N`` whose normal geodesic reaches ``q``."""
        q = np.asarray(q, dtype=float)
        if isinstance(self.model, WarpedProduct):
            return q[..., :-1].copy()
        s = self.value(q)
        k = 1.0 / self.model.ell
        return q[..., :-1] / np.cos(k * s)[..., None]

    def __repr__(self):
        return f"SliceDistance({self.model.label}, t0={self.t0})"


def gradient_distance(field, q):
    return field.gradient(q)


def hessian_distance(field, q, x, y):
    """``DDd(x, y)`` at ``q``."""
    return np.einsum("...ab,...a,...b->...", field.hessian(q), x, y)


def laplacian_distance(field, q):
    return field.laplacian(q)


# ---------------------------------------------------------------------------
# sampling


@dataclass
class SampleSpec:
    """Which events a check looks at.

    Point fields: events ``exp_p(r v)`` with ``r`` uniform in ``r_range`` and
    ``v`` boosted up to ``max_rapidity``.  Slice fields: spatial coordinates
    uniform in ``[-box, box]^n`` and ``d_N`` uniform in ``r_range``.
    """

    count: int = 1000
    directions: int = 8
    seed: int = 0
    r_range: tuple = (0.3, 2.0)
    max_rapidity: float = 1.0
    box: float = 1.0
    radial_nodes: int = 16


def sample_events(field, spec):
    model = field.model
    rng = np.random.default_rng(spec.seed)
    r = rng.uniform(spec.r_range[0], spec.r_range[1], size=spec.count)
    if field.kind == "point":
        P = np.broadcast_to(field.p, (spec.count, model.dim)).copy()
        V = random_unit_timelike(model, P, rng, spec.max_rapidity)
        x, _ = integrate_batch(model, P, V, r, steps=64)
        return x[-1]
    y = rng.uniform(-spec.box, spec.box, size=(spec.count, model.n))
    if isinstance(model, WarpedProduct):
        return np.concatenate([y, (field.t0 + r)[:, None]], axis=1)
    # anti-de Sitter: walk up the normal geodesic in the embedding
    k = 1.0 / model.ell
    s = np.minimum(r, 0.95 * cmp.focal_radius(model.constant_curvature))
    P = model.embedding(np.concatenate([y, np.zeros((spec.count, 1))], axis=1))
    Q = np.cos(k * s)[:, None] * P
    Q[:, -1] += np.sin(k * s) / k
    return model.from_embedding(Q)


def _random_orthogonal(field, Q, grad_up, k, rng):
    """``k`` random unit spacelike vectors orthogonal to the gradient at each event."""
    E = orthonormal_complement(field.model, Q, -grad_up)
    coef = rng.normal(size=Q.shape[:-1] + (k, field.model.n))
    coef /= np.linalg.norm(coef, axis=-1, keepdims=True)
    return np.einsum("...ki,...ia->...ka", coef, E), E


def radial_curvature(field, Q, grad_up=None, nodes=16):
    """Curvature along the radial geodesics reaching the events ``Q``.

    The geodesic through ``q`` with velocity ``-grad d`` is integrated back to
    the source for time ``d(q)``; at every node the tidal operator of its
    velocity is diagonalized.  Returns ``(K_min, K_max, ric_min)``; these are
    the sectional and Ricci curvatures entering the comparison arguments.
    """
    model = field.model
    Q = np.asarray(Q, dtype=float)
    d = field.value(Q)
    if grad_up is None:
        grad_up = field.gradient(Q)
    Z = grad_up / np.sqrt(-model.inner(Q, grad_up, grad_up))[..., None]
    x, v = integrate_batch(model, Q, Z, d, steps=nodes)
    x = x.reshape(-1, model.dim)
    v = -v.reshape(-1, model.dim)
    v = v / np.sqrt(-model.inner(x, v, v))[..., None]
    T = tidal_operator(model, x, v)
    ev = np.linalg.eigvalsh(T)
    ric = -np.trace(T, axis1=-2, axis2=-1)
    return float(ev.min()), float(ev.max()), float(ric.min())


def _curvature_meta(field, spec, Q, grad_up):
    K_min, K_max, ric_min = radial_curvature(field, Q, grad_up, spec.radial_nodes)
    return {"K_min": K_min, "K_max": K_max, "ric_min": ric_min}


def _base_meta(field, spec):
    return {"seed": spec.seed, "samples": spec.count, "directions": spec.directions,
            "fd_step": field.fd_step, "richardson": field.richardson,
            "model": field.model.label, "field": repr(field)}


def _resolve_bound(user_c, empirical, hypothesis_ok):
    """Return ``(c, status)``: the bound used and a status override if any."""
    if user_c is None:
        return empirical, None
    if not hypothesis_ok(float(user_c)):
        return float(user_c), "hypothesis-violation"
    return float(user_c), None


def _prepare(field, spec):
    Q = sample_events(field, spec)
    d, grad, cov = field.derivatives(Q)
    grad_up = np.einsum("...ab,...b->...a", field.model.inverse_metric(Q), grad)
    return Q, d, grad_up, cov


def _hessian_check(field, spec, c, tolerance, upper, check_id):
    spec = spec or SampleSpec()
    Q, d, grad_up, cov = _prepare(field, spec)
    meta = _base_meta(field, spec)
    curv = _curvature_meta(field, spec, Q, grad_up)
    meta.update(curv)
    if upper:
        emp = curv["K_min"] - CURVATURE_PAD
        c_used, status = _resolve_bound(c, emp, lambda cc: curv["K_min"] >= cc - HYPOTHESIS_TOL)
    else:
        emp = curv["K_max"] + CURVATURE_PAD
        c_used, status = _resolve_bound(c, emp, lambda cc: curv["K_max"] <= cc + HYPOTHESIS_TOL)
    meta["c"] = c_used
    meta["c_source"] = "empirical" if c is None else "supplied"
    if status:
        return make_report(check_id, "inequality", [], tolerance, status=status, metadata=meta,
                           notes="sampled curvature contradicts the supplied bound")
    rng = np.random.default_rng(spec.seed + 1)
    X, _ = _random_orthogonal(field, Q, grad_up, spec.directions, rng)
    hxx = np.einsum("kab,kia,kib->ki", cov, X, X)
    margins = np.empty_like(hxx)
    skipped = 0
    notes = []
    for k in range(len(Q)):
        s = float(d[k])
        if field.kind == "point":
            limit = cmp.conjugate_radius(c_used)
            if s < limit:
                bound = -cmp.f_c(c_used, s)
            elif upper:
                margins[k] = np.nan
                skipped += 1
                continue
            else:
                bound = -1.0 / s
        else:
            limit = cmp.focal_radius(c_used)
            if s < limit:
                bound = -cmp.F_c(c_used, s)
            elif upper:
                margins[k] = np.nan
                skipped += 1
                continue
            else:
                bound = 0.0
        margins[k] = (bound - hxx[k]) if upper else (hxx[k] - bound)
    if skipped:
        notes.append(f"{skipped} samples beyond the comparison domain were excluded")
    margins = margins[np.isfinite(margins).all(axis=-1)]
    meta["excluded"] = skipped
    return make_report(check_id, "inequality", margins, tolerance, metadata=meta,
                       notes="; ".join(notes))


def check_hessian_lower_point(field, spec=None, c=None, tolerance=1e-5):
    """``DDd_p(x, x) >= -f_c(d_p) <x, x>`` under ``K <= c`` (fallback ``-1/d_p``)."""
    return _hessian_check(field, spec, c, tolerance, False, "hessian-lower-point")


def check_hessian_upper_point(field, spec=None, c=None, tolerance=1e-5):
    """``DDd_p(x, x) <= -f_c(d_p) <x, x>`` under ``K >= c``."""
    return _hessian_check(field, spec, c, tolerance, True, "hessian-upper-point")


def check_laplacian_lower_point(field, spec=None, c=None, tolerance=1e-4):
    """``Lap d_p >= -n f_c(d_p)`` under ``Ric(Z, Z) >= -n c`` (fallback ``-n/d_p``)."""
    spec = spec or SampleSpec()
    n = field.model.n
    Q, d, grad_up, cov = _prepare(field, spec)
    meta = _base_meta(field, spec)
    curv = _curvature_meta(field, spec, Q, grad_up)
    meta.update(curv)
    emp = -curv["ric_min"] / n + CURVATURE_PAD
    c_used, status = _resolve_bound(
        c, emp, lambda cc: curv["ric_min"] >= -n * cc - HYPOTHESIS_TOL)
    meta["c"] = c_used
    meta["c_source"] = "empirical" if c is None else "supplied"
    if status:
        return make_report("laplacian-lower-point", "inequality", [], tolerance,
                           status=status, metadata=meta)
    lap = np.einsum("...ab,...ab->...", field.model.inverse_metric(Q), cov)
    margins = np.empty(len(Q))
    for k, s in enumerate(d):
        if s < cmp.conjugate_radius(c_used):
            margins[k] = lap[k] + n * cmp.f_c(c_used, s)
        else:
            margins[k] = lap[k] + n / s
    return make_report("laplacian-lower-point", "inequality", margins, tolerance, metadata=meta)


def _slice_shape(field, Q):
    """Shape operator eigenvalues and ``H_N`` at the projections of ``Q``."""
    from .hypersurface import induced_geometry
    N = field.immersion()
    U = field.projection(Q)
    geo = induced_geometry(field.model, N, U)
    ev = np.linalg.eigvals(geo.shape).real
    return ev, geo.H


def check_hessian_from_slice(field, direction="lower", spec=None, c=None, tolerance=1e-5):
    """Hessian comparison for ``d_N``.

    ``direction='lower'``: ``DDd_N(x, x) >= -F_c(d_N)<x, x>`` under ``K <= c``
    and ``A_N >= 0`` (fallback ``>= 0`` past the focal radius).
    ``direction='upper'``: ``<=`` under ``K >= c`` and ``A_N <= 0``.
    """
    if direction not in ("lower", "upper"):
        raise ValueError("direction must be 'lower' or 'upper'")
    spec = spec or SampleSpec()
    check_id = f"hessian-{direction}-slice"
    Q = sample_events(field, spec)
    ev, _ = _slice_shape(field, Q)
    meta_extra = {"A_N_min": float(ev.min()), "A_N_max": float(ev.max())}
    ok = ev.min() >= -HYPOTHESIS_TOL if direction == "lower" else ev.max() <= HYPOTHESIS_TOL
    if not ok:
        meta = _base_meta(field, spec)
        meta.update(meta_extra)
        meta.update({"c": c, "c_source": "not evaluated"})
        return make_report(check_id, "inequality", [], tolerance, status="hypothesis-violation",
                           metadata=meta, notes="shape operator of N has the wrong sign")
    rep = _hessian_check(field, spec, c, tolerance, direction == "upper", check_id)
    rep.metadata.update(meta_extra)
    return rep


def check_laplacian_from_slice(field, spec=None, c=None, tolerance=1e-4):
    """``Lap d_N >= -n F_c(d_N) - n c_c(0)^2 H_N(p)`` under ``Ric >= -n c``.

    Past the focal radius (``c < 0``) the bound ``Lap d_N >= -n H_N(p)`` is used.
    """
    spec = spec or SampleSpec()
    n = field.model.n
    Q, d, grad_up, cov = _prepare(field, spec)
    meta = _base_meta(field, spec)
    curv = _curvature_meta(field, spec, Q, grad_up)
    meta.update(curv)
    emp = -curv["ric_min"] / n + CURVATURE_PAD
    c_used, status = _resolve_bound(
        c, emp, lambda cc: curv["ric_min"] >= -n * cc - HYPOTHESIS_TOL)
    meta["c"] = c_used
    meta["c_source"] = "empirical" if c is None else "supplied"
    if status:
        return make_report("laplacian-slice", "inequality", [], tolerance, status=status,
                           metadata=meta)
    _, HN = _slice_shape(field, Q)
    meta["H_N_range"] = [float(np.min(HN)), float(np.max(HN))]
    lap = np.einsum("...ab,...ab->...", field.model.inverse_metric(Q), cov)
    margins = np.empty(len(Q))
    for k, s in enumerate(d):
        if s < cmp.focal_radius(c_used):
            cc0 = cmp.c_c(c_used, s, 0.0)
            margins[k] = lap[k] + n * cmp.F_c(c_used, s) + n * cc0 * cc0 * HN[k]
        else:
            margins[k] = lap[k] + n * HN[k]
    return make_report("laplacian-slice", "inequality", margins, tolerance, metadata=meta)


def check_space_form_equalities(field, spec=None, hessian_tolerance=1e-5,
                                laplacian_tolerance=1e-4):
    """Pinched equalities in a space form of curvature ``c``:

    ``DDd_p(x, x) = -f_c(d_p)<x, x>`` for ``x`` orthogonal to ``grad d_p`` and
    ``Lap d_p = -n f_c(d_p)``.  Returns two equality reports.
    """
    spec = spec or SampleSpec()
    model = field.model
    c = model.constant_curvature
    if field.kind != "point" or c is None:
        raise PreconditionError("pinched equalities need a point field in a space form")
    n = model.n
    Q, d, grad_up, cov = _prepare(field, spec)
    meta = _base_meta(field, spec)
    meta["c"] = c
    meta["c_source"] = "model"
    keep = d < cmp.conjugate_radius(c)
    meta["excluded"] = int(np.sum(~keep))
    f = np.array([cmp.f_c(c, s) if k else np.nan for s, k in zip(d, keep)])
    rng = np.random.default_rng(spec.seed + 1)
    X, _ = _random_orthogonal(field, Q, grad_up, spec.directions, rng)
    hxx = np.einsum("kab,kia,kib->ki", cov, X, X)
    xx = model.inner(Q[:, None, :], X, X)
    hres = np.abs(hxx + f[:, None] * xx)[keep]
    lap = np.einsum("...ab,...ab->...", model.inverse_metric(Q), cov)
    lres = np.abs(lap + n * f)[keep]
    return (make_report("hessian-equality-point", "equality", -hres, hessian_tolerance,
                        metadata=dict(meta)),
            make_report("laplacian-equality-point", "equality", -lres, laplacian_tolerance,
                        metadata=dict(meta)))
