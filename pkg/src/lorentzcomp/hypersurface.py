"""Spacelike hypersurfaces, their induced geometry and the checks living on them.

An :class:`Immersion` is a batched map ``psi`` from a chart box in ``R^n`` into
a model.  Derivatives of ``psi`` come from closed forms when given, otherwise
from fourth-order central differences.

Conventions.  ``nu`` is the future unit normal.  The second fundamental form is
``h(X, Y) = <D_X Y, nu>`` and the shape operator ``A`` is defined by
``<AX, Y> = h(X, Y)``, i.e. ``AX = -(D_X nu)``.  The future mean curvature is
``H = -tr(A)/n``; with these choices the hyperboloid ``d_p = s`` of Minkowski
space has ``A = -I/s`` and ``H = 1/s``.  Curvature of the hypersurface follows
the ambient convention (see :mod:`lorentzcomp.spacetime`), which makes the
Gauss equation read

    R_S(X, Y)Z = (R(X, Y)Z)^T - <AY, Z> AX + <AX, Z> AY.
"""

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import comparison as cmp
from .lorentz_distance import CURVATURE_PAD, HYPOTHESIS_TOL, radial_curvature
from .reports import make_report
from .spacetime import AntiDeSitter, WarpedProduct, _central_diff

__all__ = [
    "NonSpacelikeError",
    "NonConstantMeanCurvatureError",
    "Immersion",
    "InducedGeometry",
    "RestrictedDistance",
    "induced_geometry",
    "restricted_distance",
    "intrinsic_riemann",
    "slice_immersion",
    "level_set",
    "shifted_hyperboloid",
    "tilted_plane",
    "graph",
    "coordinate_slice",
    "IMMERSIONS",
    "make_immersion",
    "check_gradient_decomposition",
    "check_hessian_identity",
    "check_laplacian_identity",
    "PROPOSITIONS",
    "THEOREMS",
    "check_proposition_bounds",
    "check_gauss_equation",
    "check_ricci_lower_bound",
    "check_mean_curvature_theorems",
    "check_outer_ball",
    "check_hyperbolicity_superharmonic",
    "bernstein_rigidity_check",
]


class NonSpacelikeError(ValueError):
    """The induced metric is not positive definite."""


class NonConstantMeanCurvatureError(ValueError):
    """A family declared to have constant mean curvature does not."""


@dataclass
class Immersion:
    """A parametrized hypersurface ``psi: [lo, hi]^n -> M``.

    The flags describe the complete hypersurface the patch is cut from,
    relative to the source of the distance function it is paired with:

    ``constant_H``
        declared constant mean curvature (``None`` if not constant);
    ``contained_in_future``
        the whole hypersurface lies in the chronological future of the source;
    ``bounded_above``
        the distance along the hypersurface is bounded above by a level set;
    ``extrema_exact``
        ``sup u`` and ``inf u`` are attained at sampled chart points.
    """

    psi: object
    n: int
    lo: np.ndarray
    hi: np.ndarray
    label: str
    jacobian_fn: object = None
    fd_step: float = 1e-3
    constant_H: Optional[float] = None
    contained_in_future: bool = False
    bounded_above: bool = False
    extrema_exact: bool = False
    complete: bool = True
    params: dict = field(default_factory=dict)

    def __call__(self, u):
        return self.psi(np.asarray(u, dtype=float))

    def jacobian(self, u):
        """``T[..., i, :] = d psi / d u_i``."""
        u = np.asarray(u, dtype=float)
        if self.jacobian_fn is not None:
            return self.jacobian_fn(u)
        return _central_diff(self.psi, u, self.fd_step)

    def second(self, u):
        """``S[..., i, j, :] = d^2 psi / du_i du_j``."""
        u = np.asarray(u, dtype=float)
        S = _central_diff(self.jacobian, u, self.fd_step)
        return 0.5 * (S + np.swapaxes(S, -2, -3))

    def sample(self, rng, count, include_center=True):
        """Uniform chart points; the first one is the box centre when requested."""
        U = rng.uniform(self.lo, self.hi, size=(count, self.n))
        if include_center and count:
            U[0] = 0.5 * (self.lo + self.hi)
        return U


@dataclass
class InducedGeometry:
    """Induced geometry at a batch of chart points (leading axes of ``u``)."""

    u: np.ndarray
    event: np.ndarray
    tangents: np.ndarray      # (..., n, D)
    metric: np.ndarray        # (..., n, n)
    inverse: np.ndarray
    normal: np.ndarray        # (..., D), future unit
    second_ff: np.ndarray     # (..., n, n), h_ij = <D_i T_j, nu>
    shape: np.ndarray         # (..., n, n), A^k_j
    H: np.ndarray             # (...,)
    christoffel: np.ndarray   # (..., n, n, n), Gamma^k_ij


def induced_geometry(model, imm, u):
    u = np.asarray(u, dtype=float)
    X = imm(u)
    model.check_chart(X)
    T = imm.jacobian(u)
    S = imm.second(u)
    g_amb = model.metric(X)
    g = np.einsum("...ia,...ab,...jb->...ij", T, g_amb, T)
    g = 0.5 * (g + np.swapaxes(g, -1, -2))
    if np.any(np.linalg.eigvalsh(g)[..., 0] <= 0):
        raise NonSpacelikeError(f"{imm.label}: induced metric is not positive definite")
    ginv = np.linalg.inv(g)
    # normal covector: the null direction of the (n x D) tangent matrix
    _, _, vh = np.linalg.svd(T)
    N = vh[..., -1, :]
    nu = np.einsum("...ab,...b->...a", np.linalg.inv(g_amb), N)
    nn = np.einsum("...a,...ab,...b->...", nu, g_amb, nu)
    if np.any(nn >= 0):
        raise NonSpacelikeError(f"{imm.label}: normal is not timelike")
    nu = nu / np.sqrt(-nn)[..., None]
    orient = np.einsum("...a,...ab,...b->...", nu, g_amb, model.time_orientation(X))
    nu = np.where((orient > 0)[..., None], -nu, nu)
    G = model.christoffel(X)
    DT = S + np.einsum("...abc,...ib,...jc->...ija", G, T, T)
    h = np.einsum("...ija,...ab,...b->...ij", DT, g_amb, nu)
    h = 0.5 * (h + np.swapaxes(h, -1, -2))
    A = np.einsum("...ki,...ij->...kj", ginv, h)
    H = -np.trace(A, axis1=-2, axis2=-1) / imm.n
    low = np.einsum("...ija,...ab,...lb->...lij", DT, g_amb, T)
    chris = np.einsum("...kl,...lij->...kij", ginv, low)
    return InducedGeometry(u, X, T, g, ginv, nu, h, A, H, chris)


def intrinsic_riemann(model, imm, u, step=5e-3):
    """``R[..., l, i, j, k]`` of the induced metric (ambient sign convention)."""
    u = np.asarray(u, dtype=float)
    G = induced_geometry(model, imm, u).christoffel
    dG = _central_diff(lambda w: induced_geometry(model, imm, w).christoffel, u, step)
    return (np.einsum("...cadb->...abcd", dG) - np.einsum("...dacb->...abcd", dG)
            + np.einsum("...ace,...edb->...abcd", G, G)
            - np.einsum("...ade,...ecb->...abcd", G, G))


# ---------------------------------------------------------------------------
# restricted distance


@dataclass
class RestrictedDistance:
    geometry: InducedGeometry
    u: np.ndarray
    du: np.ndarray          # chart partials
    grad: np.ndarray        # raised, chart components
    grad_norm2: np.ndarray  # |grad u|^2
    hess: np.ndarray        # intrinsic Hessian, chart components
    lap: np.ndarray

    def grad_pushed(self):
        return np.einsum("...i,...ia->...a", self.grad, self.geometry.tangents)


def restricted_distance(model, imm, field, u, step=1e-3):
    """``u = d o psi`` with intrinsic derivatives from chart finite differences."""
    u = np.asarray(u, dtype=float)
    geo = induced_geometry(model, imm, u)

    def val(w):
        return field.value(imm(w))

    def grad_fn(w):
        return _central_diff(val, w, step)

    r = val(u)
    du = grad_fn(u)
    dd = _central_diff(grad_fn, u, step)
    dd = 0.5 * (dd + np.swapaxes(dd, -1, -2))
    hess = dd - np.einsum("...kij,...k->...ij", geo.christoffel, du)
    grad = np.einsum("...ij,...j->...i", geo.inverse, du)
    gn2 = np.einsum("...i,...i->...", grad, du)
    lap = np.einsum("...ij,...ij->...", geo.inverse, hess)
    return RestrictedDistance(geo, r, du, grad, gn2, hess, lap)


# ---------------------------------------------------------------------------
# catalog


def _box(n, half):
    half = np.broadcast_to(np.asarray(half, dtype=float), (n,))
    return -half.copy(), half.copy()


def _unit_frame_at(model, p):
    """Orthonormal frame at ``p`` pushed into the flat embedding (rows)."""
    from .spacetime import orthonormal_frame
    E = orthonormal_frame(model, p)
    if model.kind == "minkowski":
        return p.copy(), E
    return model.embedding(p), np.stack([model.embedding_pushforward(p, e) for e in E])


def level_set(model, p=None, s=1.0, half_width=1.0):
    """The level set ``d_p = s`` through the exponential map at ``p``.

    Chart ``y -> exp_p(s (sqrt(1+|y|^2) e_0 + y_i e_i))``, written in closed
    form through the flat embedding (Minkowski and de Sitter).
    """
    n = model.n
    p = np.zeros(model.dim) if p is None else np.asarray(p, dtype=float)
    if model.kind not in ("minkowski", "de_sitter"):
        raise ValueError("level sets are available in Minkowski and de Sitter space")
    P, E = _unit_frame_at(model, p)
    e0, Es = E[-1], E[:-1]

    def direction(y):
        w = np.sqrt(1.0 + np.sum(y * y, axis=-1))
        return w[..., None] * e0 + np.einsum("...i,ia->...a", y, Es)

    if model.kind == "minkowski":
        def psi(y):
            return P + s * direction(y)

        def jac(y):
            w = np.sqrt(1.0 + np.sum(y * y, axis=-1))
            return s * ((y / w[..., None])[..., :, None] * e0 + Es)
        H = cmp.f_c(0.0, s)
    else:
        k = math.sqrt(model.constant_curvature)

        def psi(y):
            Q = math.cosh(k * s) * P + (math.sinh(k * s) / k) * direction(y)
            return model.from_embedding(Q)
        jac = None
        H = cmp.f_c(model.constant_curvature, s)
    lo, hi = _box(n, half_width)
    return Immersion(psi, n, lo, hi, f"level-set(s={s:g})", jac, constant_H=H,
                     contained_in_future=True, bounded_above=True, extrema_exact=True,
                     params={"p": p.tolist(), "s": s})


def shifted_hyperboloid(model, p=None, s=2.0, tau=1.0, half_width=1.0):
    """Hyperboloid of radius ``s`` centred at ``p + tau e_t`` (Minkowski).

    For ``tau > 0`` it lies in the future of ``p`` with ``inf d_p = s + tau``
    attained at the chart origin and ``d_p`` unbounded above; for ``tau < 0``
    the complete surface leaves the future of ``p``.
    """
    if model.kind != "minkowski":
        raise ValueError("shifted hyperboloids are defined in Minkowski space")
    n = model.n
    p = np.zeros(model.dim) if p is None else np.asarray(p, dtype=float)
    centre = p + tau * np.r_[np.zeros(n), 1.0]
    base = level_set(model, centre, s, half_width)
    base.label = f"shifted-hyperboloid(s={s:g}, tau={tau:g})"
    base.contained_in_future = tau >= 0
    base.bounded_above = tau == 0
    base.extrema_exact = tau == 0
    base.params = {"p": p.tolist(), "s": s, "tau": tau}
    return base


def tilted_plane(model, t1=2.0, slope=None, half_width=0.5):
    """The maximal plane ``t = t1 + k.x`` in Minkowski space (``|k| < 1``)."""
    if model.kind != "minkowski":
        raise ValueError("tilted planes are defined in Minkowski space")
    n = model.n
    k = np.zeros(n) if slope is None else np.asarray(slope, dtype=float)
    if not np.linalg.norm(k) < 1:
        raise ValueError("a spacelike plane needs |slope| < 1")

    def psi(x):
        return np.concatenate([x, (t1 + x @ k)[..., None]], axis=-1)

    def jac(x):
        T = np.concatenate([np.eye(n), k[:, None]], axis=1)
        return np.broadcast_to(T, x.shape[:-1] + T.shape).copy()

    lo, hi = _box(n, half_width)
    return Immersion(psi, n, lo, hi, f"tilted-plane(t1={t1:g}, |k|={np.linalg.norm(k):.3g})",
                     jac, constant_H=0.0, contained_in_future=False,
                     params={"t1": t1, "slope": k.tolist()})


def graph(model, t0=1.5, amplitude=0.2, wave=None, phase=0.3, half_width=0.5):
    """The graph ``t = t0 + amplitude * sin(w.x + phase)`` over the chart box."""
    n = model.n
    w = np.ones(n) if wave is None else np.asarray(wave, dtype=float)

    def F(x):
        return t0 + amplitude * np.sin(x @ w + phase)

    def psi(x):
        return np.concatenate([x, F(x)[..., None]], axis=-1)

    def jac(x):
        dF = amplitude * np.cos(x @ w + phase)[..., None] * w
        T = np.broadcast_to(np.eye(n), x.shape[:-1] + (n, n))
        return np.concatenate([T, dF[..., :, None]], axis=-1)

    lo, hi = _box(n, half_width)
    return Immersion(psi, n, lo, hi,
                     f"graph(t0={t0:g}, |DF|<={amplitude * np.linalg.norm(w):.3g})", jac,
                     params={"t0": t0, "amplitude": amplitude, "wave": w.tolist(),
                             "phase": phase})


def coordinate_slice(model, t1=1.0, half_width=0.5):
    """The slice ``{t = t1}`` of a warped product (or ``{tau = t1}`` in anti-de Sitter)."""
    n = model.n

    def psi(x):
        return np.concatenate([x, np.full(x.shape[:-1] + (1,), float(t1))], axis=-1)

    def jac(x):
        T = np.concatenate([np.eye(n), np.zeros((n, 1))], axis=1)
        return np.broadcast_to(T, x.shape[:-1] + T.shape).copy()

    H = None
    if isinstance(model, WarpedProduct):
        w = model.warping
        H = float(w.da(t1) / w.a(t1))
    elif isinstance(model, AntiDeSitter) and t1 == 0:
        H = 0.0
    lo, hi = _box(n, half_width)
    return Immersion(psi, n, lo, hi, f"slice(t={t1:g})", jac, constant_H=H,
                     contained_in_future=True, bounded_above=True, extrema_exact=True,
                     params={"t1": t1})


def slice_immersion(model, t0):
    return coordinate_slice(model, t0, half_width=1.0)


IMMERSIONS = {
    "level-set": level_set,
    "shifted-hyperboloid": shifted_hyperboloid,
    "tilted-plane": tilted_plane,
    "graph": graph,
    "slice": coordinate_slice,
}


def make_immersion(model, name, **params):
    try:
        factory = IMMERSIONS[name]
    except KeyError:
        raise ValueError(f"unknown immersion {name!r}; known: {sorted(IMMERSIONS)}") from None
    return factory(model, **params)


# ---------------------------------------------------------------------------
# helpers for checks


@dataclass
class _Bundle:
    U: np.ndarray
    rd: RestrictedDistance
    amb_grad: np.ndarray     # raised ambient gradient at psi(U)
    amb_hess: np.ndarray     # covariant ambient Hessian
    meta: dict


_BUNDLE_CACHE = OrderedDict()
_BUNDLE_CACHE_SIZE = 8


def _bundle(model, imm, field, count, seed):
    """Restricted distance and ambient derivatives at sampled chart points.

    Several checks usually run on the same sample set, so the last few
    bundles are memoized (keyed on object identity; metadata is copied).
    """
    key = (id(model), id(imm), id(field), int(count), int(seed))
    hit = _BUNDLE_CACHE.get(key)
    if hit is not None and hit[0][0] is model and hit[0][1] is imm and hit[0][2] is field:
        b = hit[1]
        return _Bundle(b.U, b.rd, b.amb_grad, b.amb_hess, dict(b.meta))
    b = _compute_bundle(model, imm, field, count, seed)
    _BUNDLE_CACHE[key] = ((model, imm, field), b)
    while len(_BUNDLE_CACHE) > _BUNDLE_CACHE_SIZE:
        _BUNDLE_CACHE.popitem(last=False)
    return _Bundle(b.U, b.rd, b.amb_grad, b.amb_hess, dict(b.meta))


def _compute_bundle(model, imm, field, count, seed):
    rng = np.random.default_rng(seed)
    U = imm.sample(rng, count)
    rd = restricted_distance(model, imm, field, U)
    X = rd.geometry.event
    _, grad, hess = field.derivatives(X)
    grad_up = np.einsum("...ab,...b->...a", model.inverse_metric(X), grad)
    meta = {"seed": seed, "samples": count, "immersion": imm.label, "model": model.label,
            "field": repr(field), "fd_step": field.fd_step}
    return _Bundle(U, rd, grad_up, hess, meta)


def _random_unit_tangents(geo, k, rng):
    """``k`` random unit tangent vectors (chart components) per sample."""
    n = geo.metric.shape[-1]
    L = np.linalg.cholesky(geo.inverse)
    z = rng.normal(size=geo.metric.shape[:-2] + (k, n))
    z /= np.linalg.norm(z, axis=-1, keepdims=True)
    # if z is unit in the Euclidean sense then L z is unit for g
    return np.einsum("...ij,...kj->...ki", L, z)


def _comparison(field):
    return cmp.f_c if field.kind == "point" else cmp.F_c


def _domain_limit(field, c):
    return cmp.conjugate_radius(c) if field.kind == "point" else cmp.focal_radius(c)


def _curvature(field, b):
    K_min, K_max, ric_min = radial_curvature(field, b.rd.geometry.event, b.amb_grad)
    return {"K_min": K_min, "K_max": K_max, "ric_min": ric_min}


def _slice_terms(field, events):
    """Shape operator eigenvalues of ``N`` and ``H_N`` at the projections."""
    N = field.immersion()
    geo = induced_geometry(field.model, N, field.projection(events))
    return np.linalg.eigvals(geo.shape).real, geo.H


# ---------------------------------------------------------------------------
# identities


def check_gradient_decomposition(model, imm, field, samples=64, seed=0, tolerance=1e-5):
    """``grad r = grad u - sqrt(1 + |grad u|^2) nu`` along the hypersurface."""
    b = _bundle(model, imm, field, samples, seed)
    rd = b.rd
    rhs = rd.grad_pushed() - np.sqrt(1.0 + rd.grad_norm2)[..., None] * rd.geometry.normal
    res = np.linalg.norm(b.amb_grad - rhs, axis=-1)
    nr = model.inner(rd.geometry.event, b.amb_grad, rd.geometry.normal)
    b.meta["min_grad_r_dot_nu"] = float(nr.min())
    b.meta["eikonal_defect"] = float(np.max(np.abs(nr - np.sqrt(1.0 + rd.grad_norm2))))
    return make_report("gradient-decomposition", "equality", -res, tolerance, metadata=b.meta)


def check_hessian_identity(model, imm, field, samples=64, seed=0, directions=4, tolerance=1e-4):
    """``Hess u(X, X) = Hess r(X, X) - sqrt(1 + |grad u|^2) <AX, X>`` for unit ``X``."""
    b = _bundle(model, imm, field, samples, seed)
    rd, geo = b.rd, b.rd.geometry
    rng = np.random.default_rng(seed + 1)
    Xc = _random_unit_tangents(geo, directions, rng)
    Xa = np.einsum("...ki,...ia->...ka", Xc, geo.tangents)
    lhs = np.einsum("...ij,...ki,...kj->...k", rd.hess, Xc, Xc)
    amb = np.einsum("...ab,...ka,...kb->...k", b.amb_hess, Xa, Xa)
    hxx = np.einsum("...ij,...ki,...kj->...k", geo.second_ff, Xc, Xc)
    rhs = amb - np.sqrt(1.0 + rd.grad_norm2)[..., None] * hxx
    return make_report("hessian-identity", "equality", -np.abs(lhs - rhs), tolerance,
                       metadata=b.meta)


def check_laplacian_identity(model, imm, field, samples=64, seed=0, tolerance=1e-4):
    """``Lap u = Lap r + Hess r(nu, nu) + n H sqrt(1 + |grad u|^2)``."""
    b = _bundle(model, imm, field, samples, seed)
    rd, geo = b.rd, b.rd.geometry
    X = geo.event
    lap_r = field.laplacian(X)
    hnn = np.einsum("...ab,...a,...b->...", b.amb_hess, geo.normal, geo.normal)
    rhs = lap_r + hnn + imm.n * geo.H * np.sqrt(1.0 + rd.grad_norm2)
    return make_report("laplacian-identity", "equality", -np.abs(rd.lap - rhs), tolerance,
                       metadata=b.meta)


# ---------------------------------------------------------------------------
# propositions


PROPOSITIONS = ("laplacian-lower", "laplacian-upper", "hessian-lower", "hessian-upper", "ricci")


def check_proposition_bounds(model, imm, field, which, samples=64, seed=0, c=None,
                             directions=4, tolerance=1e-4):
    """Comparison bounds for ``Hess u`` and ``Lap u`` along the hypersurface.

    ``which``:

    * ``'laplacian-lower'``: ``Lap u >= -g(u)(n + |grad u|^2) + n H sqrt(1 + |grad u|^2)``
      under ``K <= c`` (``A_N >= 0`` for slice fields);
    * ``'laplacian-upper'``: the reverse inequality under ``K >= c`` (``A_N <= 0``);
    * ``'hessian-lower'``/``'hessian-upper'``: the unit-vector forms
      ``Hess u(X, X) >=/<= -g(u)(1 + <X, grad u>^2) - sqrt(1 + |grad u|^2)<AX, X>``;
    * ``'ricci'``: ``Lap u >= -n g(u) + Hess r(nu, nu) + n H sqrt(1 + |grad u|^2)``
      (minus ``n c_c(0)^2 H_N`` for slice fields) under ``Ric >= -n c``.

    ``g`` is ``f_c`` for point fields and ``F_c`` for slice fields.  When ``c``
    is omitted the sampled curvature along the radial geodesics, padded by
    ``1e-9``, is used; a supplied ``c`` is verified against it.
    """
    if which not in PROPOSITIONS:
        raise ValueError(f"unknown proposition {which!r}; choose from {PROPOSITIONS}")
    n = imm.n
    b = _bundle(model, imm, field, samples, seed)
    rd, geo = b.rd, b.rd.geometry
    check_id = f"proposition-{which}-{field.kind}"
    curv = _curvature(field, b)
    b.meta.update(curv)
    upper = which.endswith("upper")
    if which == "ricci":
        emp = -curv["ric_min"] / n + CURVATURE_PAD
        holds = lambda cc: curv["ric_min"] >= -n * cc - HYPOTHESIS_TOL
    elif upper:
        emp = curv["K_min"] - CURVATURE_PAD
        holds = lambda cc: curv["K_min"] >= cc - HYPOTHESIS_TOL
    else:
        emp = curv["K_max"] + CURVATURE_PAD
        holds = lambda cc: curv["K_max"] <= cc + HYPOTHESIS_TOL
    c_used = emp if c is None else float(c)
    b.meta["c"] = c_used
    b.meta["c_source"] = "empirical" if c is None else "supplied"
    if c is not None and not holds(c_used):
        return make_report(check_id, "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=b.meta,
                           notes="sampled curvature contradicts the supplied bound")
    HN = None
    if field.kind == "slice":
        ev, HN = _slice_terms(field, geo.event)
        b.meta["A_N_range"] = [float(ev.min()), float(ev.max())]
        if which != "ricci":
            ok = ev.min() >= -HYPOTHESIS_TOL if not upper else ev.max() <= HYPOTHESIS_TOL
            if not ok:
                return make_report(check_id, "inequality", [], tolerance,
                                   status="hypothesis-violation", metadata=b.meta,
                                   notes="shape operator of N has the wrong sign")
    gfun = _comparison(field)
    limit = _domain_limit(field, c_used)
    keep = rd.u < limit
    b.meta["excluded"] = int(np.sum(~keep))
    gval = np.array([gfun(c_used, s) if k else np.nan for s, k in zip(rd.u, keep)])
    root = np.sqrt(1.0 + rd.grad_norm2)
    if which.startswith("laplacian"):
        bound = -gval * (n + rd.grad_norm2) + n * geo.H * root
        margins = (bound - rd.lap) if upper else (rd.lap - bound)
    elif which.startswith("hessian"):
        rng = np.random.default_rng(seed + 1)
        Xc = _random_unit_tangents(geo, directions, rng)
        hxx = np.einsum("...ij,...ki,...kj->...k", rd.hess, Xc, Xc)
        xg = np.einsum("...ki,...ij,...j->...k", Xc, geo.metric, rd.grad)
        axx = np.einsum("...ij,...ki,...kj->...k", geo.second_ff, Xc, Xc)
        bound = -gval[:, None] * (1.0 + xg**2) - root[:, None] * axx
        margins = (bound - hxx) if upper else (hxx - bound)
    else:
        hnn = np.einsum("...ab,...a,...b->...", b.amb_hess, geo.normal, geo.normal)
        bound = -n * gval + hnn + n * geo.H * root
        if HN is not None:
            cc0 = np.array([cmp.c_c(c_used, s, 0.0) if k else np.nan
                            for s, k in zip(rd.u, keep)])
            bound = bound - n * cc0**2 * HN
        margins = rd.lap - bound
    margins = np.asarray(margins)[keep]
    return make_report(check_id, "inequality", margins, tolerance, metadata=b.meta)


# ---------------------------------------------------------------------------
# Gauss equation and Ricci bound


def check_gauss_equation(model, imm, samples=16, seed=0, triples=4, tolerance=1e-3):
    """Residual of the Gauss equation on random tangent triples."""
    rng = np.random.default_rng(seed)
    U = imm.sample(rng, samples)
    geo = induced_geometry(model, imm, U)
    Rs = intrinsic_riemann(model, imm, U)
    Rm = model.riemann_tensor(geo.event)
    g_amb = model.metric(geo.event)
    res = np.empty((samples, triples))
    for k in range(triples):
        X, Y, Z = (_random_unit_tangents(geo, 1, rng)[:, 0] for _ in range(3))
        lhs = np.einsum("slijk,si,sj,sk->sl", Rs, Z, X, Y)
        Xa, Ya, Za = (np.einsum("si,sia->sa", V, geo.tangents) for V in (X, Y, Z))
        amb = np.einsum("sabcd,sb,sc,sd->sa", Rm, Za, Xa, Ya)
        proj = np.einsum("skl,sla->ska", geo.inverse,
                         np.einsum("sla,sab->slb", geo.tangents, g_amb))
        tang = np.einsum("ska,sa->sk", proj, amb)
        AX = np.einsum("skj,sj->sk", geo.shape, X)
        AY = np.einsum("skj,sj->sk", geo.shape, Y)
        hYZ = np.einsum("sij,si,sj->s", geo.second_ff, Y, Z)
        hXZ = np.einsum("sij,si,sj->s", geo.second_ff, X, Z)
        rhs = tang - hYZ[:, None] * AX + hXZ[:, None] * AY
        d = lhs - rhs
        res[:, k] = np.sqrt(np.einsum("si,sij,sj->s", d, geo.metric, d))
    meta = {"seed": seed, "samples": samples, "immersion": imm.label, "model": model.label}
    return make_report("gauss-equation", "equality", -res, tolerance, metadata=meta)


def check_ricci_lower_bound(model, imm, samples=16, seed=0, directions=4, tolerance=1e-3):
    """``Ric_S(X, X) >= ((n-1)c - n^2 H^2/4)|X|^2`` in a space form of curvature ``c``."""
    c = model.constant_curvature
    meta = {"seed": seed, "samples": samples, "immersion": imm.label, "model": model.label}
    if c is None:
        return make_report("ricci-lower-bound", "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=meta,
                           notes="the bound is stated for space forms")
    rng = np.random.default_rng(seed)
    U = imm.sample(rng, samples)
    geo = induced_geometry(model, imm, U)
    Rs = intrinsic_riemann(model, imm, U)
    ric = np.einsum("...abad->...bd", Rs)
    X = _random_unit_tangents(geo, directions, rng)
    rxx = np.einsum("sbd,skb,skd->sk", ric, X, X)
    n = imm.n
    bound = (n - 1) * c - n * n * geo.H**2 / 4.0
    meta["c"] = c
    return make_report("ricci-lower-bound", "inequality", rxx - bound[:, None], tolerance,
                       metadata=meta)


# ---------------------------------------------------------------------------
# theorems and corollaries


THEOREMS = ("T41", "T42", "T5-upper", "T5-lower")


def _constant_H(imm, geo, spread_tol=1e-6):
    H = geo.H
    spread = float(H.max() - H.min())
    if spread > spread_tol:
        raise NonConstantMeanCurvatureError(
            f"{imm.label}: sampled H varies by {spread:.3g} (> {spread_tol:g})")
    return float(np.mean(H)), spread


def _space_form_c(model, field, c, b, which):
    if c is not None:
        return float(c)
    if model.constant_curvature is not None:
        return float(model.constant_curvature)
    curv = _curvature(field, b)
    if which in ("T41", "T5-upper"):
        return -curv["ric_min"] / model.n + CURVATURE_PAD
    return curv["K_min"] - CURVATURE_PAD


def check_mean_curvature_theorems(model, imm, field, which, samples=64, seed=0, c=None,
                                  tolerance=1e-6):
    """Finite-sample checks of the mean curvature bounds on constant-H hypersurfaces.

    ``T41``: ``inf H <= f_c(sup u)``; ``T42``: ``sup H >= f_c(inf u)``;
    ``T5-upper``: ``inf H <= F_c(sup v) + c_c(0)^2 sup H_N``;
    ``T5-lower``: ``sup H >= F_c(inf v)``.

    Sampled extrema are inner approximations of the true ones, so a bound
    evaluated at them is implied by the true statement only in one direction.
    ``f_c`` decreases, hence ``T42`` at the sampled infimum is always
    checkable while ``T41`` is not.  ``F_c`` increases for ``c > 0`` and
    decreases for ``c < 0``, hence ``T5-lower`` at the sampled infimum is
    checkable for ``c <= 0`` only.  Otherwise the check needs the extrema to
    be attained at sampled points (``imm.extrema_exact``) and reports
    ``one-sided-not-checkable`` when they are not.
    """
    if which not in THEOREMS:
        raise ValueError(f"unknown theorem {which!r}; choose from {THEOREMS}")
    want = "point" if which in ("T41", "T42") else "slice"
    if field.kind != want:
        raise ValueError(f"{which} needs a {want} distance field")
    b = _bundle(model, imm, field, samples, seed)
    geo = b.rd.geometry
    H, spread = _constant_H(imm, geo)
    c_used = _space_form_c(model, field, c, b, which)
    u = b.rd.u
    b.meta.update({"H": H, "H_spread": spread, "c": c_used, "sup_u": float(u.max()),
                   "inf_u": float(u.min()), "theorem": which})
    check_id = f"theorem-{which}"
    if not imm.contained_in_future:
        return make_report(check_id, "inequality", [], tolerance, status="hypothesis-violation",
                           metadata=b.meta, notes="hypersurface leaves the future of the source")
    if which in ("T41", "T5-upper") and not imm.bounded_above:
        return make_report(check_id, "inequality", [], tolerance, status="hypothesis-violation",
                           metadata=b.meta, notes="distance is not bounded above on the "
                                                  "hypersurface")
    b.meta["direction_sound"] = which == "T42" or (which == "T5-lower" and c_used <= 0)
    if not (b.meta["direction_sound"] or imm.extrema_exact):
        return make_report(check_id, "inequality", [], tolerance,
                           status="one-sided-not-checkable", metadata=b.meta,
                           notes="sampled extrema do not bound the true ones in this direction")
    if which == "T41":
        margin = cmp.f_c(c_used, float(u.max())) - H
    elif which == "T42":
        margin = H - cmp.f_c(c_used, float(u.min()))
    elif which == "T5-upper":
        _, HN = _slice_terms(field, geo.event)
        s = float(u.max())
        cc0 = cmp.c_c(c_used, s, 0.0)
        b.meta["sup_H_N"] = float(HN.max())
        margin = cmp.F_c(c_used, s) + cc0 * cc0 * float(HN.max()) - H
    else:
        ev, _ = _slice_terms(field, geo.event)
        if ev.max() > HYPOTHESIS_TOL:
            return make_report(check_id, "inequality", [], tolerance,
                               status="hypothesis-violation", metadata=b.meta,
                               notes="second fundamental form of N is not negative semi-definite")
        margin = H - cmp.F_c(c_used, float(u.min()))
    return make_report(check_id, "inequality", [margin], tolerance, metadata=b.meta)


def check_outer_ball(model, imm, field, samples=64, seed=0, c=None, tolerance=1e-6):
    """``inf u >= f_c^{-1}(sup H)``: the hypersurface avoids the inner ball."""
    b = _bundle(model, imm, field, samples, seed)
    H, spread = _constant_H(imm, b.rd.geometry)
    c_used = _space_form_c(model, field, c, b, "T42")
    b.meta.update({"H": H, "c": c_used, "inf_u": float(b.rd.u.min())})
    if not (imm.contained_in_future and imm.complete):
        return make_report("outer-ball", "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=b.meta,
                           notes="complete hypersurface not contained in the future of p")
    try:
        delta = cmp.f_c_inverse(c_used, H)
    except cmp.ComparisonDomainError as exc:
        return make_report("outer-ball", "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=b.meta, notes=str(exc))
    b.meta["delta"] = delta
    return make_report("outer-ball", "inequality", [float(b.rd.u.min()) - delta], tolerance,
                       metadata=b.meta)


def bernstein_rigidity_check(model, imm, field, samples=64, seed=0, tolerance=1e-6,
                             level_tolerance=1e-8):
    """Constant-H hypersurfaces bounded above by a level set are level sets.

    Margins: ``f_c^{-1}(H)`` inside ``[inf u, sup u]`` (two one-sided margins)
    and, for declared level sets, ``sup u - inf u <= level_tolerance``.
    """
    c = model.constant_curvature
    b = _bundle(model, imm, field, samples, seed)
    H, spread = _constant_H(imm, b.rd.geometry)
    u = b.rd.u
    b.meta.update({"H": H, "c": c, "sup_u": float(u.max()), "inf_u": float(u.min()),
                   "oscillation": float(u.max() - u.min())})
    if c is None or not (imm.contained_in_future and imm.bounded_above and imm.complete):
        return make_report("rigidity", "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=b.meta,
                           notes="needs a space form and a complete hypersurface bounded "
                                 "above by a level set")
    s = cmp.f_c_inverse(c, H)
    b.meta["level"] = s
    margins = [s - float(u.min()), float(u.max()) - s]
    # the conclusion: u is constant; scaled so that the tolerance applies
    osc = float(u.max() - u.min())
    margins.append((level_tolerance - osc) * tolerance / level_tolerance)
    return make_report("rigidity", "inequality", margins, tolerance, metadata=b.meta)


def check_hyperbolicity_superharmonic(model, imm, field, samples=64, seed=0, c=None,
                                      tolerance=1e-5):
    """Superharmonicity of the restricted distance under a mean curvature bound.

    Hypothesis per sample: ``H <= (2 sqrt(n-1)/n) g(u)`` with ``g = f_c``
    (point) or ``sqrt(c) tanh(sqrt(c) v)`` (slice, ``c >= 0``).  Margins:
    the chain step ``g(u)(n + |grad u|^2) - n H sqrt(1 + |grad u|^2)`` and the
    conclusion ``-Lap u``.
    """
    n = imm.n
    b = _bundle(model, imm, field, samples, seed)
    rd, geo = b.rd, b.rd.geometry
    check_id = f"hyperbolicity-{field.kind}"
    if c is None:
        c = model.constant_curvature
    if c is None:
        c = _curvature(field, b)["K_min"] - CURVATURE_PAD
    c = float(c)
    b.meta["c"] = c
    if n < 2:
        raise ValueError("needs n >= 2")
    if field.kind == "slice":
        if c < 0:
            return make_report(check_id, "inequality", [], tolerance,
                               status="hypothesis-violation", metadata=b.meta,
                               notes="slice version needs c >= 0")
        ev, _ = _slice_terms(field, geo.event)
        if ev.max() > HYPOTHESIS_TOL:
            return make_report(check_id, "inequality", [], tolerance,
                               status="hypothesis-violation", metadata=b.meta,
                               notes="second fundamental form of N is not negative semi-definite")
        gval = np.array([cmp.F_c(c, s) for s in rd.u])
    else:
        if c < 0 and np.any(rd.u > cmp.focal_radius(c)):
            return make_report(check_id, "inequality", [], tolerance,
                               status="hypothesis-violation", metadata=b.meta,
                               notes="u exceeds pi/(2 sqrt(-c))")
        gval = np.array([cmp.f_c(c, s) for s in rd.u])
    x_min, phi_min = cmp.phi_minimizer(n)
    b.meta["phi_minimizer"] = [x_min, phi_min]
    hyp = phi_min * gval - geo.H
    b.meta["hypothesis_margin"] = float(hyp.min())
    if hyp.min() < -HYPOTHESIS_TOL:
        return make_report(check_id, "inequality", [], tolerance,
                           status="hypothesis-violation", metadata=b.meta,
                           notes="H exceeds (2 sqrt(n-1)/n) g(u) at some sample")
    chain = gval * (n + rd.grad_norm2) - n * geo.H * np.sqrt(1.0 + rd.grad_norm2)
    margins = np.stack([chain, -rd.lap], axis=-1)
    b.meta["max_laplacian"] = float(rd.lap.max())
    return make_report(check_id, "inequality", margins, tolerance, metadata=b.meta)
