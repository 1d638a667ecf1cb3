"""Named checks available to experiment configs.

Each entry declares what it needs from a case (a distance field, an
immersion, or only the model), its parameters with defaults, and a runner
returning a list of :class:`~lorentzcomp.reports.CheckReport`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .. import geodesic as geo
from .. import hypersurface as hs
from .. import lorentz_distance as ld
from ..comparison import phi, phi_minimizer
from ..reports import make_report

__all__ = ["CHECKS", "validate_check", "run_check"]


@dataclass
class Entry:
    needs: tuple
    params: dict
    runner: object
    description: str


CHECKS = {}


def _register(name, needs, description, **params):
    def wrap(fn):
        CHECKS[name] = Entry(tuple(needs), params, fn, description)
        return fn
    return wrap


@dataclass
class Context:
    model: object
    field: object
    immersion: object
    samples: int
    seed: int


def _spec(ctx, p):
    kw = {"count": ctx.samples, "seed": ctx.seed, "directions": p["directions"]}
    if p.get("r_range") is not None:
        kw["r_range"] = tuple(p["r_range"])
    return ld.SampleSpec(**kw)


# -- distance fields ---------------------------------------------------------


@_register("space-form-equalities", ["field"], "pinched Hessian and Laplacian of d_p",
           tolerance=1e-5, laplacian_tolerance=1e-4, directions=8, r_range=None)
def _space_form(ctx, p):
    return list(ld.check_space_form_equalities(ctx.field, _spec(ctx, p), p["tolerance"],
                                               p["laplacian_tolerance"]))


def _hessian(ctx, p, direction):
    spec = _spec(ctx, p)
    if ctx.field.kind == "point":
        fn = ld.check_hessian_lower_point if direction == "lower" else ld.check_hessian_upper_point
        return [fn(ctx.field, spec, p["c"], p["tolerance"])]
    return [ld.check_hessian_from_slice(ctx.field, direction, spec, p["c"], p["tolerance"])]


@_register("hessian-lower", ["field"], "Hessian lower comparison (K <= c)",
           c=None, tolerance=1e-5, directions=8, r_range=None)
def _hessian_lower(ctx, p):
    return _hessian(ctx, p, "lower")


@_register("hessian-upper", ["field"], "Hessian upper comparison (K >= c)",
           c=None, tolerance=1e-5, directions=8, r_range=None)
def _hessian_upper(ctx, p):
    return _hessian(ctx, p, "upper")


@_register("laplacian-lower", ["field"], "Laplacian comparison (Ric >= -n c)",
           c=None, tolerance=1e-4, directions=8, r_range=None)
def _laplacian_lower(ctx, p):
    spec = _spec(ctx, p)
    if ctx.field.kind == "point":
        return [ld.check_laplacian_lower_point(ctx.field, spec, p["c"], p["tolerance"])]
    return [ld.check_laplacian_from_slice(ctx.field, spec, p["c"], p["tolerance"])]


# -- hypersurfaces -----------------------------------------------------------


@_register("gradient-decomposition", ["field", "immersion"],
           "ambient gradient split into tangential and normal parts", tolerance=1e-5)
def _grad_dec(ctx, p):
    return [hs.check_gradient_decomposition(ctx.model, ctx.immersion, ctx.field, ctx.samples,
                                            ctx.seed, p["tolerance"])]


@_register("hessian-identity", ["field", "immersion"], "Hessian of the restricted distance",
           tolerance=1e-4, directions=4)
def _hess_id(ctx, p):
    return [hs.check_hessian_identity(ctx.model, ctx.immersion, ctx.field, ctx.samples,
                                      ctx.seed, p["directions"], p["tolerance"])]


@_register("laplacian-identity", ["field", "immersion"], "Laplacian of the restricted distance",
           tolerance=1e-4)
def _lap_id(ctx, p):
    return [hs.check_laplacian_identity(ctx.model, ctx.immersion, ctx.field, ctx.samples,
                                        ctx.seed, p["tolerance"])]


@_register("propositions", ["field", "immersion"],
           "comparison bounds for Hess u and Lap u on the hypersurface",
           which=list(hs.PROPOSITIONS), c=None, tolerance=1e-4, directions=4)
def _props(ctx, p):
    return [hs.check_proposition_bounds(ctx.model, ctx.immersion, ctx.field, w, ctx.samples,
                                        ctx.seed, p["c"], p["directions"], p["tolerance"])
            for w in p["which"]]


@_register("mean-curvature", ["immersion"], "sampled H against its declared constant value",
           expected=None, tolerance=1e-5)
def _mean_curvature(ctx, p):
    imm = ctx.immersion
    expected = imm.constant_H if p["expected"] is None else float(p["expected"])
    rng = np.random.default_rng(ctx.seed)
    g = hs.induced_geometry(ctx.model, imm, imm.sample(rng, ctx.samples))
    meta = {"immersion": imm.label, "model": ctx.model.label, "seed": ctx.seed,
            "expected": expected, "samples": ctx.samples}
    if expected is None:
        return [make_report("mean-curvature", "equality", [], p["tolerance"],
                            status="hypothesis-violation", metadata=meta,
                            notes="the immersion has no declared constant mean curvature")]
    return [make_report("mean-curvature", "equality", -np.abs(g.H - expected), p["tolerance"],
                        metadata=meta)]


@_register("gauss-equation", ["immersion"], "Gauss equation residual", tolerance=1e-3,
           triples=4)
def _gauss(ctx, p):
    return [hs.check_gauss_equation(ctx.model, ctx.immersion, min(ctx.samples, 64), ctx.seed,
                                    p["triples"], p["tolerance"])]


@_register("ricci-lower-bound", ["immersion"], "intrinsic Ricci lower bound in a space form",
           tolerance=1e-3, directions=4)
def _ricci(ctx, p):
    return [hs.check_ricci_lower_bound(ctx.model, ctx.immersion, min(ctx.samples, 64),
                                       ctx.seed, p["directions"], p["tolerance"])]


@_register("theorems", ["field", "immersion"], "mean curvature bounds on constant-H hypersurfaces",
           which=None, c=None, tolerance=1e-6)
def _theorems(ctx, p):
    which = p["which"]
    if which is None:
        which = ["T41", "T42"] if ctx.field.kind == "point" else ["T5-upper", "T5-lower"]
    return [hs.check_mean_curvature_theorems(ctx.model, ctx.immersion, ctx.field, w,
                                             ctx.samples, ctx.seed, p["c"], p["tolerance"])
            for w in which]


@_register("outer-ball", ["field", "immersion"], "inf u >= f_c^{-1}(sup H)", c=None,
           tolerance=1e-6)
def _outer(ctx, p):
    return [hs.check_outer_ball(ctx.model, ctx.immersion, ctx.field, ctx.samples, ctx.seed,
                                p["c"], p["tolerance"])]


@_register("rigidity", ["field", "immersion"], "constant-H hypersurfaces below a level set",
           tolerance=1e-6, level_tolerance=1e-8)
def _rigidity(ctx, p):
    return [hs.bernstein_rigidity_check(ctx.model, ctx.immersion, ctx.field, ctx.samples,
                                        ctx.seed, p["tolerance"], p["level_tolerance"])]


@_register("hyperbolicity", ["field", "immersion"], "superharmonicity of the restricted distance",
           c=None, tolerance=1e-5)
def _hyperbolicity(ctx, p):
    return [hs.check_hyperbolicity_superharmonic(ctx.model, ctx.immersion, ctx.field,
                                                 ctx.samples, ctx.seed, p["c"], p["tolerance"])]


# -- geodesics ---------------------------------------------------------------


@_register("index-closed-form", [], "index forms of (N-)Jacobi fields in a space form",
           kind="point", lengths=[0.3, 1.0, 2.0], tolerance=1e-6)
def _index_closed(ctx, p):
    return [geo.check_index_closed_form(ctx.model, p["kind"], float(s), seed=ctx.seed,
                                        tolerance=p["tolerance"]) for s in p["lengths"]]


@_register("jacobi-profile", [], "(N-)Jacobi amplitudes against s_c and c_c",
           kind="point", lengths=[0.3, 1.0, 2.0], tolerance=1e-6)
def _jacobi_profile(ctx, p):
    return [geo.check_jacobi_profile(ctx.model, p["kind"], float(s), seed=ctx.seed,
                                     tolerance=p["tolerance"]) for s in p["lengths"]]


@_register("ads-closure", [], "anti-de Sitter timelike geodesics close", tolerance=1e-4)
def _ads(ctx, p):
    return [geo.check_ads_closure(ctx.model, tolerance=p["tolerance"])]


@_register("maximality", [], "Jacobi fields maximize the index form",
           kind="point", length=1.0, perturbations=100, tolerance=1e-8, slope_tolerance=0.1)
def _maximality(ctx, p):
    model, n, s = ctx.model, ctx.model.n, float(p["length"])
    rng = np.random.default_rng(ctx.seed)
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    if p["kind"] == "point":
        x0 = np.zeros(model.dim)
        v = model.time_orientation(x0)
        v = v / math.sqrt(-float(model.inner(x0, v, v)))
        g = geo.integrate_geodesic(model, x0, v, s, step=geo.CLOSED_FORM_STEP)
        J = geo.jacobi_to_endpoint(g, d @ g.frame[-1, :n], "point")
    else:
        N = hs.coordinate_slice(model, 0.0)
        g, J = geo.n_jacobi_field(model, N, rng.uniform(-0.3, 0.3, size=n), s,
                                  step=geo.CLOSED_FORM_STEP, seed=ctx.seed)
    rep = geo.check_index_maximality(g, J, p["perturbations"], ctx.seed, p["kind"],
                                     p["tolerance"], check_id=f"index-maximality-{p['kind']}")
    rep.metadata["model"] = model.label
    out = [rep]
    if "defect_slope" in rep.metadata:
        slope = rep.metadata["defect_slope"]
        out.append(make_report(f"index-defect-slope-{p['kind']}", "equality",
                               [-abs(slope - 2.0)], p["slope_tolerance"],
                               metadata={"slope": slope, "model": model.label}))
    return out


# -- comparison functions ----------------------------------------------------


@_register("phi-minimizer", [], "sampled minimizer of phi against sqrt(n-2)",
           ns=[2, 3, 4, 5, 6, 7, 8], tolerance=1e-3, grid_step=1e-4, x_max=10.0)
def _phi(ctx, p):
    x = np.arange(0.0, p["x_max"], p["grid_step"])
    out = []
    for n in p["ns"]:
        vals = phi(int(n), x)
        k = int(np.argmin(vals))
        xm, pm = phi_minimizer(int(n))
        meta = {"n": int(n), "sampled_minimizer": float(x[k]), "sqrt_n_minus_2": xm,
                "min_value": float(vals[k]), "closed_form_min": pm}
        # the sampled argmin sits at sqrt(n-2) and no sample undercuts the closed-form minimum
        margins = [-abs(float(x[k]) - xm), float(vals.min() - pm)]
        out.append(make_report(f"phi-minimizer-n{int(n)}", "inequality", margins,
                               p["tolerance"], metadata=meta))
    return out


# ---------------------------------------------------------------------------


def validate_check(check, field, imm, where):
    from .config import ConfigError
    name = check.get("name")
    entry = CHECKS.get(name)
    if entry is None:
        raise ConfigError(f"{where}.name: unknown check {name!r}; known: {sorted(CHECKS)}")
    unknown = sorted(set(check) - set(entry.params) - {"name"})
    if unknown:
        raise ConfigError(f"{where}.{unknown[0]}: unknown parameter for check {name!r}")
    if "field" in entry.needs and field is None:
        raise ConfigError(f"{where}: check {name!r} needs a distance field")
    if "immersion" in entry.needs and imm is None:
        raise ConfigError(f"{where}: check {name!r} needs an immersion")
    for key, value in check.items():
        if key.endswith("tolerance") and not (isinstance(value, (int, float)) and value >= 0):
            raise ConfigError(f"{where}.{key}: expected a non-negative number")


def run_check(check, ctx):
    entry = CHECKS[check["name"]]
    params = dict(entry.params)
    params.update({k: v for k, v in check.items() if k != "name"})
    return entry.runner(ctx, params)
