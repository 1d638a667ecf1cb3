"""Timelike geodesics, parallel frames, Jacobi fields and index forms.

Geodesics are integrated with fixed-step classical RK4 on an augmented state
that carries, besides position and velocity, a parallel orthonormal frame
``E_0..E_n`` (``E_n = g'``) and optionally a set of Jacobi pairs ``(J, DJ/dt)``.
Vector fields along a geodesic are stored both in coordinates and as
components in the parallel frame, ``X = sum_i lam_i E_i``; index forms are
evaluated from those scalar components so that Christoffel error never enters
the quadrature.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .spacetime import (ChartDomainError, PreconditionError, orthonormal_complement,
                        orthonormal_frame)
from .reports import make_report

__all__ = [
    "Geodesic",
    "TransportedField",
    "IndexFormResult",
    "ConjugatePointError",
    "integrate_geodesic",
    "integrate_batch",
    "parallel_transport",
    "integrate_jacobi",
    "jacobi_basis",
    "jacobi_to_endpoint",
    "field_from_components",
    "n_jacobi_field",
    "index_form_geodesic",
    "index_form_bilinear",
    "index_form_hypersurface",
    "check_index_maximality",
    "check_index_closed_form",
    "check_jacobi_profile",
    "check_ads_closure",
    "bump",
]

DEFAULT_STEP = 1e-3


class ConjugatePointError(RuntimeError):
    """A Jacobi basis degenerates along the geodesic."""


# ---------------------------------------------------------------------------
# RK4 core


def _rhs(model, x, v, E, J, W):
    G = model.christoffel(x)
    dv = -np.einsum("...ijk,...j,...k->...i", G, v, v)
    dE = -np.einsum("...ijk,...j,...mk->...mi", G, v, E) if E is not None else None
    if J is None:
        return v, dv, dE, None, None
    R = model.riemann_tensor(x)
    # R(J, v)v^a = R^a_{bcd} v^b J^c v^d
    RJvv = np.einsum("...abcd,...b,...mc,...d->...ma", R, v, J, v)
    dJ = W - np.einsum("...ijk,...j,...mk->...mi", G, v, J)
    dW = -np.einsum("...ijk,...j,...mk->...mi", G, v, W) - RJvv
    return v, dv, dE, dJ, dW


def _rk4(model, x0, v0, t_end, steps, E0=None, J0=None, W0=None):
    """Integrate a batch of augmented states; returns per-node arrays.

    Leading axis of every output is the node index ``0..steps``.
    """
    h = t_end / steps
    state = [np.asarray(a, dtype=float) if a is not None else None
             for a in (x0, v0, E0, J0, W0)]

    def add(s, k, f):
        return [None if a is None else a + f * b for a, b in zip(s, k)]

    out = [[a.copy()] if a is not None else None for a in state]
    for _ in range(steps):
        k1 = _rhs(model, *state)
        k2 = _rhs(model, *add(state, k1, 0.5 * h))
        k3 = _rhs(model, *add(state, k2, 0.5 * h))
        k4 = _rhs(model, *add(state, k3, h))
        state = [None if a is None else
                 a + (h / 6.0) * (b1 + 2 * b2 + 2 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(state, k1, k2, k3, k4)]
        if not np.all(np.isfinite(state[0])):
            raise ChartDomainError("geodesic left the chart (non-finite state)")
        for lst, a in zip(out, state):
            if lst is not None:
                lst.append(a.copy())
    return [None if lst is None else np.stack(lst) for lst in out]


def _n_steps(t_end, step):
    # Simpson with an S_2h error estimate needs a multiple of 4 intervals
    n = max(4, int(math.ceil(t_end / step - 1e-9)))
    return n + (-n) % 4


# ---------------------------------------------------------------------------
# data types


class Geodesic:
    """An affinely parametrized timelike geodesic with a parallel frame.

    Attributes
    ----------
    t : (N,) node parameters
    x, v : (N, D) events and velocities
    frame : (N, D, D) parallel orthonormal frame, ``frame[k, i]`` is ``E_i``
        and ``E_n`` is the unit velocity
    """

    def __init__(self, model, t, x, v, frame, step, boundary_form=None):
        self.model = model
        self.t = t
        self.x = x
        self.v = v
        self.frame = frame
        self.step = step
        self.boundary_form = boundary_form
        self.signs = np.r_[np.ones(model.n), -1.0]
        self._tidal = None
        acc = -np.einsum("kijl,kj,kl->ki", model.christoffel(x), v, v)
        self._xs = CubicHermiteSpline(t, x, v, axis=0)
        self._vs = CubicHermiteSpline(t, v, acc, axis=0)

    @property
    def t_end(self):
        return float(self.t[-1])

    @property
    def proper_length(self):
        return self.t_end * math.sqrt(-float(self.model.inner(self.x[0], self.v[0], self.v[0])))

    def event(self, s):
        return self._xs(s)

    def velocity(self, s):
        return self._vs(s)

    def energy_drift(self):
        """``max_t |<g', g'> - <g'(0), g'(0)>|``."""
        q = self.model.inner(self.x, self.v, self.v)
        return float(np.max(np.abs(q - q[0])))

    def tidal_matrices(self):
        """``Q[k, i, j] = <R(E_i, g')g', E_j>`` for spatial frame indices."""
        if self._tidal is None:
            R = self.model.riemann_tensor(self.x)
            g = self.model.metric(self.x)
            n = self.model.n
            Es = self.frame[:, :n]
            Rv = np.einsum("kabcd,kb,kic,kd->kia", R, self.v, Es, self.v)
            self._tidal = np.einsum("kia,kab,kjb->kij", Rv, g, Es)
        return self._tidal

    def components(self, X):
        """Frame components ``lam_i = eps_i <X, E_i>`` of vectors at the nodes."""
        g = self.model.metric(self.x)
        return self.signs * np.einsum("k...a,kab,kib->k...i", X, g, self.frame)


@dataclass
class TransportedField:
    """A vector field along a geodesic, sampled at the geodesic nodes.

    ``comps``/``dcomps`` are frame components of the field and of its
    covariant derivative; ``kind`` is ``'parallel'``, ``'jacobi'`` or
    ``'generic'``.
    """

    geodesic: Geodesic
    values: np.ndarray
    comps: np.ndarray
    dcomps: Optional[np.ndarray]
    kind: str = "generic"
    derivatives: Optional[np.ndarray] = None

    def amplitude(self):
        """``sqrt(<X, X>)`` (spacelike fields)."""
        return np.sqrt(np.maximum(np.sum(self.geodesic.signs * self.comps**2, axis=-1), 0.0))

    def normal_defect(self):
        """``max_t |<X, g'>|`` for a unit-speed geodesic."""
        return float(np.max(np.abs(self.comps[:, -1])))

    def derivative_components(self):
        if self.dcomps is not None:
            return self.dcomps
        spl = CubicSpline(self.geodesic.t, self.comps, axis=0)
        return spl(self.geodesic.t, 1)

    def __add__(self, other):
        d = None
        if self.dcomps is not None and other.dcomps is not None:
            d = self.dcomps + other.dcomps
        return field_from_components(self.geodesic, self.comps + other.comps, d)

    def __rmul__(self, a):
        a = float(a)
        d = None if self.dcomps is None else a * self.dcomps
        return field_from_components(self.geodesic, a * self.comps, d)


@dataclass(frozen=True)
class IndexFormResult:
    value: float
    quadrature_error_estimate: float


# ---------------------------------------------------------------------------
# integration


def _check_timelike_unit(model, p, v, tol=1e-10):
    q = float(model.inner(p, v, v))
    if abs(q + 1.0) > tol:
        raise PreconditionError(f"initial velocity must be unit timelike, <v,v> = {q!r}")
    if float(model.inner(p, v, model.time_orientation(p))) >= 0:
        raise PreconditionError("initial velocity must be future-directed")


def integrate_geodesic(model, p, v, t_end, steps=None, step=DEFAULT_STEP, frame=None,
                       check=True):
    """Integrate the timelike geodesic with ``g(0) = p``, ``g'(0) = v`` on ``[0, t_end]``.

    ``steps`` overrides ``step``; the count is rounded up to a multiple of 4.
    ``frame`` optionally prescribes the spatial part of the initial frame
    (rows orthonormal and orthogonal to ``v``).
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if check:
        model.check_chart(p)
        _check_timelike_unit(model, p, v)
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    n = _n_steps(t_end, t_end / steps if steps else step)
    if frame is None:
        E0 = orthonormal_frame(model, p, v)
    else:
        E0 = np.concatenate([np.asarray(frame, dtype=float), v[None]], axis=0)
    x, vv, E, _, _ = _rk4(model, p, v, t_end, n, E0)
    t = np.linspace(0.0, t_end, n + 1)
    return Geodesic(model, t, x, vv, E, t_end / n)


def integrate_batch(model, X0, V0, t_end, steps):
    """Integrate many geodesics together on ``[0, t_end]`` (no frames).

    ``t_end`` may be an array; each geodesic is then integrated on the unit
    interval with velocity ``t_end * V0`` and the returned velocities are
    rescaled back.  Returns ``(x, v)`` with node axis first.
    """
    X0 = np.asarray(X0, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    T = np.broadcast_to(np.asarray(t_end, dtype=float), X0.shape[:-1])
    x, v, _, _, _ = _rk4(model, X0, V0 * T[..., None], 1.0, int(steps))
    return x, v / T[..., None]


def field_from_components(geodesic, comps, dcomps=None, kind="generic"):
    comps = np.asarray(comps, dtype=float)
    values = np.einsum("ki,kia->ka", comps, geodesic.frame)
    return TransportedField(geodesic, values, comps,
                            None if dcomps is None else np.asarray(dcomps, dtype=float), kind)


def parallel_transport(geodesic, x0):
    """Parallel field with ``Y(0) = x0``; constant in the parallel frame."""
    x0 = np.asarray(x0, dtype=float)
    g = geodesic
    lam = g.signs * np.einsum("a,ab,ib->i", x0, g.model.metric(g.x[0]), g.frame[0])
    comps = np.broadcast_to(lam, (len(g.t), g.model.dim)).copy()
    return field_from_components(g, comps, np.zeros_like(comps), "parallel")


def _integrate_pairs(geodesic, J0, W0):
    """Jacobi pairs along ``geodesic`` (re-integrates the same RK4 trajectory)."""
    g = geodesic
    n = len(g.t) - 1
    x, v, E, J, W = _rk4(g.model, g.x[0], g.v[0], g.t_end, n, g.frame[0], J0, W0)
    return J, W


def integrate_jacobi(geodesic, J0, J0_prime):
    """Jacobi field with ``J(0) = J0`` and ``DJ/dt(0) = J0_prime``."""
    J0 = np.asarray(J0, dtype=float)
    W0 = np.asarray(J0_prime, dtype=float)
    J, W = _integrate_pairs(geodesic, J0[None], W0[None])
    J, W = J[:, 0], W[:, 0]
    f = TransportedField(geodesic, J, geodesic.components(J), geodesic.components(W),
                         "jacobi", W)
    return f


def jacobi_basis(geodesic, kind="point"):
    """Component matrices ``(Phi, dPhi)`` of a Jacobi basis, shape ``(N, n, n)``.

    ``kind='point'``: ``Phi(0) = 0``, ``Phi'(0) = I``.  ``kind='slice'``:
    ``Phi(0) = I``, ``Phi'(0) = -S`` with ``S`` the stored boundary form.
    Column ``j`` holds the spatial components of the ``j``-th field.
    """
    g = geodesic
    n = g.model.n
    Es = g.frame[0, :n]
    if kind == "point":
        J0 = np.zeros_like(Es)
        W0 = Es.copy()
    elif kind == "slice":
        S = np.zeros((n, n)) if g.boundary_form is None else g.boundary_form
        J0 = Es.copy()
        W0 = -S.T @ Es
    else:
        raise ValueError(f"unknown Jacobi basis kind {kind!r}")
    J, W = _integrate_pairs(g, J0, W0)
    lam = g.components(J)[..., :n]  # (N, field j, comp i)
    dlam = g.components(W)[..., :n]
    return np.swapaxes(lam, 1, 2), np.swapaxes(dlam, 1, 2)


def _check_nondegenerate(geodesic, Phi, dPhi=None, t_min=1e-3, tol=1e-8):
    """Smallest singular value of the Jacobi basis away from ``t = 0``.

    A zero of ``Phi`` between two nodes is caught by the linearized distance
    ``sigma_min(Phi) / |Phi'|`` to the nearest singular matrix: it drops
    below one step next to a conjugate (focal) point.
    """
    g = geodesic
    mask = g.t > max(t_min, 2 * g.step)
    sv = np.linalg.svd(Phi[mask], compute_uv=False)
    smin = sv.min(axis=-1) if sv.size else np.array([math.inf])
    bad = smin < tol
    if dPhi is not None and sv.size:
        speed = np.linalg.norm(dPhi[mask], ord=2, axis=(-2, -1))
        bad |= smin < g.step * speed
    if np.any(bad):
        k = int(np.argmax(bad))
        raise ConjugatePointError(
            f"Jacobi basis degenerates near t = {g.t[mask][k]:.6g} (sigma_min = {smin[k]:.3g})")
    return float(smin.min())


def jacobi_to_endpoint(geodesic, x_end, kind="point"):
    """The (N-)Jacobi field along ``geodesic`` with ``J(s) = x_end``.

    ``x_end`` is a coordinate vector at the endpoint orthogonal to ``g'``.
    """
    g = geodesic
    n = g.model.n
    Phi, dPhi = jacobi_basis(g, kind)
    _check_nondegenerate(g, Phi, dPhi)
    x_end = np.asarray(x_end, dtype=float)
    lam_end = g.signs * np.einsum("a,ab,ib->i", x_end, g.model.metric(g.x[-1]), g.frame[-1])
    coef = np.linalg.solve(Phi[-1], lam_end[:n])
    comps = np.zeros((len(g.t), g.model.dim))
    dcomps = np.zeros_like(comps)
    comps[:, :n] = Phi @ coef
    dcomps[:, :n] = dPhi @ coef
    return field_from_components(g, comps, dcomps, "jacobi")


def n_jacobi_field(model, N, p, s, x0=None, step=DEFAULT_STEP, seed=0):
    """Normal geodesic leaving ``N`` at chart point ``p`` and an N-Jacobi field.

    ``N`` is an immersion (see :mod:`lorentzcomp.hypersurface`).  The geodesic
    starts with the future unit normal; the spatial part of its frame is an
    orthonormal basis of ``T_pN`` and the shape operator of ``N`` is stored as
    ``geodesic.boundary_form[i, j] = <A E_i, E_j>``.  ``J(0) = x0`` (a unit
    tangent direction drawn from ``seed`` when omitted) and
    ``J'(0) = -A_N J(0)``.
    """
    from .hypersurface import induced_geometry

    geo = induced_geometry(model, N, p)
    Es = orthonormal_complement(model, geo.event, geo.normal)
    # A E_i in coordinates: write E_i = alpha_ij T_j
    alpha = np.linalg.solve(geo.metric, np.einsum("ja,ab,ib->ji", geo.tangents,
                                                  model.metric(geo.event), Es)).T
    AE = np.einsum("ij,kj,ka->ia", alpha, geo.shape, geo.tangents)
    S = np.einsum("ia,ab,jb->ij", AE, model.metric(geo.event), Es)
    S = 0.5 * (S + S.T)
    gamma = integrate_geodesic(model, geo.event, geo.normal, s, step=step, frame=Es)
    gamma.boundary_form = S
    if x0 is None:
        rng = np.random.default_rng(seed)
        d = rng.normal(size=model.n)
        x0 = (d / np.linalg.norm(d)) @ Es
    x0 = np.asarray(x0, dtype=float)
    lam0 = np.einsum("a,ab,ib->i", x0, model.metric(geo.event), Es)
    W0 = -(S @ lam0) @ Es
    return gamma, integrate_jacobi(gamma, x0, W0)


# ---------------------------------------------------------------------------
# index forms


def _quad(t, f):
    val = simpson(f, x=t)
    coarse = simpson(f[::2], x=t[::2])
    return float(val), abs(float(val) - float(coarse)) / 15.0


def _require_normal(X, tol=1e-8):
    scale = 1.0 + float(np.max(np.abs(X.comps)))
    if X.normal_defect() > tol * scale:
        raise PreconditionError(f"field is not normal to the geodesic "
                                f"(max |<X, g'>| = {X.normal_defect():.3g})")


def _integrand(geodesic, lx, dlx, ly, dly):
    n = geodesic.model.n
    Q = geodesic.tidal_matrices()
    kin = np.sum(dlx[..., :n] * dly[..., :n], axis=-1)
    pot = np.einsum("...ki,kij,...kj->...k", lx[..., :n], Q, ly[..., :n])
    return -(kin - pot)


def index_form_bilinear(geodesic, X, Y):
    """Symmetric bilinear index form ``I(X, Y)`` (no boundary term)."""
    _require_normal(X)
    _require_normal(Y)
    f = _integrand(geodesic, X.comps, X.derivative_components(),
                   Y.comps, Y.derivative_components())
    v, e = _quad(geodesic.t, f)
    return IndexFormResult(v, e)


def index_form_geodesic(geodesic, X):
    """``I(X, X) = -int_0^s (<X', X'> - <R(X, g')g', X>) dt`` by composite Simpson."""
    return index_form_bilinear(geodesic, X, X)


def index_form_hypersurface(model, N, geodesic, X):
    """``I_N(X, X)``: the geodesic index form plus ``<A_N X(0), X(0)>``.

    The boundary form is read from ``geodesic.boundary_form`` (set by
    :func:`n_jacobi_field`); ``N`` may instead be an explicit ``(n, n)``
    matrix ``<A E_i, E_j>`` in the initial frame.
    """
    res = index_form_geodesic(geodesic, X)
    S = geodesic.boundary_form
    if isinstance(N, np.ndarray):
        S = N
    if S is None:
        raise ValueError("geodesic has no boundary form; build it with n_jacobi_field")
    n = model.n
    lam0 = X.comps[0, :n]
    return IndexFormResult(res.value + float(lam0 @ S @ lam0), res.quadrature_error_estimate)


# ---------------------------------------------------------------------------
# maximality


def bump(t, s):
    """``t^2 (s - t)^2`` and its derivative."""
    return t * t * (s - t) ** 2, 2 * t * (s - t) ** 2 - 2 * t * t * (s - t)


def _tail_bump(t, s):
    # vanishes only at t = s, so the perturbation moves X(0) along N
    return (s - t) ** 2, -2 * (s - t)


def _index_values(geodesic, lam, dlam, S=None):
    """Index forms of a batch of component fields ``(B, N, D)``."""
    f = _integrand(geodesic, lam, dlam, lam, dlam)
    vals = simpson(f, x=geodesic.t, axis=-1)
    if S is not None:
        n = geodesic.model.n
        l0 = lam[:, 0, :n]
        vals = vals + np.einsum("bi,ij,bj->b", l0, S, l0)
    return vals


def check_index_maximality(geodesic, J, perturbations=100, seed=42, kind="point",
                           tolerance=1e-8, check_id="index-maximality"):
    """Compare ``I(J, J)`` with ``I(X, X)`` over random constraint-exact perturbations.

    ``X = J + eps * b(t) * Y`` with ``Y`` a random unit parallel normal field and
    ``eps`` log-uniform in ``[1e-2, 1]``.  In the point case ``b`` is the bump
    ``t^2 (s-t)^2``; in the slice case every other perturbation uses
    ``(s-t)^2`` so that ``X(0)`` moves along ``N`` as well.  The report also
    fits the log-log slope of the defect ``I(J,J) - I(J + eps B, J + eps B)``.
    """
    g = geodesic
    n = g.model.n
    S = g.boundary_form if kind == "slice" else None
    meta = {"seed": seed, "perturbations": perturbations, "kind": kind, "step": g.step}
    try:
        Phi, dPhi = jacobi_basis(g, kind)
        meta["sigma_min"] = _check_nondegenerate(g, Phi, dPhi)
    except ConjugatePointError as exc:
        return make_report(check_id, "inequality", [], tolerance, status="domain-skip",
                           metadata=meta, notes=str(exc))
    rng = np.random.default_rng(seed)
    s = g.t_end
    t = g.t
    dirs = rng.normal(size=(perturbations, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    eps = 10.0 ** rng.uniform(-2.0, 0.0, size=perturbations)
    b, db = bump(t, s)
    tb, dtb = _tail_bump(t, s)
    use_tail = np.zeros(perturbations, dtype=bool)
    if kind == "slice":
        use_tail[1::2] = True
    B = np.where(use_tail[:, None], tb, b)
    dB = np.where(use_tail[:, None], dtb, db)
    lamJ, dlamJ = J.comps, J.derivative_components()
    lam = lamJ[None].copy()
    dlam = dlamJ[None].copy()
    lam = np.repeat(lam, perturbations, axis=0)
    dlam = np.repeat(dlam, perturbations, axis=0)
    lam[..., :n] += (eps[:, None] * B)[..., None] * dirs[:, None, :]
    dlam[..., :n] += (eps[:, None] * dB)[..., None] * dirs[:, None, :]
    IJ = float(_index_values(g, lamJ[None], dlamJ[None], S)[0])
    IX = _index_values(g, lam, dlam, S)
    margins = IJ - IX
    # second-order scaling of the defect along one fixed direction
    grid = np.logspace(-2, 0, 9)
    lam_s = np.repeat(lamJ[None], len(grid), axis=0)
    dlam_s = np.repeat(dlamJ[None], len(grid), axis=0)
    lam_s[..., :n] += (grid[:, None] * b)[..., None] * dirs[0]
    dlam_s[..., :n] += (grid[:, None] * db)[..., None] * dirs[0]
    defect = IJ - _index_values(g, lam_s, dlam_s, S)
    slope = float(np.polyfit(np.log(grid), np.log(np.abs(defect)), 1)[0])
    meta.update({"I_JJ": IJ, "defect_slope": slope, "eps_range": [1e-2, 1.0]})
    return make_report(check_id, "inequality", margins, tolerance, metadata=meta)


# ---------------------------------------------------------------------------
# space-form closed forms

# RK4 and Simpson errors both scale like step**4; 4e-3 keeps them near 1e-10
CLOSED_FORM_STEP = 4e-3


def _space_form_setup(model, kind, s, p, seed, step):
    """Geodesic of length ``s`` and a unit normal field normalized at ``t = s``."""
    from . import comparison as cmp
    c = model.constant_curvature
    if c is None:
        raise PreconditionError("closed forms need a model of constant curvature")
    n = model.n
    rng = np.random.default_rng(seed)
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    if kind == "point":
        limit = cmp.conjugate_radius(c)
        p = np.zeros(model.dim) if p is None else np.asarray(p, dtype=float)
        v = model.time_orientation(p)
        v = v / np.sqrt(-model.inner(p, v, v))
        if not s < limit:
            return None
        g = integrate_geodesic(model, p, v, s, step=step)
        J = jacobi_to_endpoint(g, d @ g.frame[-1, :n], "point")
        return c, g, J
    if kind != "slice":
        raise ValueError(f"unknown kind {kind!r}")
    from .hypersurface import coordinate_slice
    if not s < cmp.focal_radius(c):
        return None
    N = coordinate_slice(model, 0.0)
    u = rng.uniform(-0.3, 0.3, size=n) if p is None else np.asarray(p, dtype=float)
    g, J = n_jacobi_field(model, N, u, s, step=step, seed=seed)
    return c, g, (1.0 / J.amplitude()[-1]) * J


def check_index_closed_form(model, kind="point", s=1.0, p=None, seed=0, tolerance=1e-6,
                            step=CLOSED_FORM_STEP):
    """``I(J, J) = -f_c(s)`` (point) or ``I_N(J, J) = -F_c(s)`` (slice) for the
    (N-)Jacobi field with ``|J(s)| = 1`` in a space form of curvature ``c``."""
    from . import comparison as cmp
    check_id = f"index-closed-form-{kind}"
    meta = {"model": model.label, "kind": kind, "s": s, "seed": seed, "step": step}
    setup = _space_form_setup(model, kind, s, p, seed, step)
    if setup is None:
        return make_report(check_id, "equality", [], tolerance, status="domain-skip",
                           metadata=meta, notes="length beyond the comparison domain")
    c, g, J = setup
    meta["c"] = c
    if kind == "point":
        res = index_form_geodesic(g, J)
        expected = -cmp.f_c(c, s)
    else:
        res = index_form_hypersurface(model, None, g, J)
        expected = -cmp.F_c(c, s)
    meta.update({"I": res.value, "expected": expected,
                 "quadrature_error": res.quadrature_error_estimate})
    return make_report(check_id, "equality", [-abs(res.value - expected)], tolerance,
                       metadata=meta)


def check_jacobi_profile(model, kind="point", s=1.0, p=None, seed=0, tolerance=1e-6,
                         step=CLOSED_FORM_STEP):
    """Normalized amplitude ``|J(t)|/|J(s)|`` against ``s_c`` (point) or ``c_c`` (slice)."""
    from . import comparison as cmp
    check_id = f"jacobi-profile-{kind}"
    meta = {"model": model.label, "kind": kind, "s": s, "seed": seed, "step": step}
    setup = _space_form_setup(model, kind, s, p, seed, step)
    if setup is None:
        return make_report(check_id, "equality", [], tolerance, status="domain-skip",
                           metadata=meta, notes="length beyond the comparison domain")
    c, g, J = setup
    meta["c"] = c
    amp = J.amplitude()
    amp = amp / amp[-1]
    prof = cmp.s_c if kind == "point" else cmp.c_c
    ref = np.array([prof(c, s, min(t, s)) for t in g.t])
    return make_report(check_id, "equality", -np.abs(amp - ref), tolerance, metadata=meta)


def check_ads_closure(model, p=None, tolerance=1e-4, step=CLOSED_FORM_STEP):
    """A timelike geodesic of anti-de Sitter space returns to its start after
    ``2 pi/sqrt(-c)``; compared in the embedding (the chart unwraps time)."""
    c = model.constant_curvature
    if c is None or c >= 0 or not hasattr(model, "embedding"):
        raise PreconditionError("closure needs anti-de Sitter space")
    p = np.zeros(model.dim) if p is None else np.asarray(p, dtype=float)
    v = model.time_orientation(p)
    v = v / np.sqrt(-model.inner(p, v, v))
    T = 2.0 * math.pi / math.sqrt(-c)
    g = integrate_geodesic(model, p, v, T, step=step)
    gap = float(np.linalg.norm(model.embedding(g.x[-1]) - model.embedding(p)))
    meta = {"model": model.label, "period": T, "step": step, "energy_drift": g.energy_drift()}
    return make_report("ads-closure", "equality", [-gap], tolerance, metadata=meta)
