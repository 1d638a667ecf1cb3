"""Jacobi fields, index forms and where maximality stops.

Along a unit-speed timelike geodesic of a space form, the Jacobi field that
vanishes at the start has amplitude proportional to s_c(t), and its index
form equals -f_c(s).  N-Jacobi fields leaving a totally geodesic slice
follow c_c(t) and have I_N = -F_c(s).  Perturbing J by eps*B lowers the
index form by O(eps^2) until the first conjugate point.

    python demos/jacobi_and_index_forms.py
"""

import math

import numpy as np

from lorentzcomp import comparison as cmp
from lorentzcomp import geodesic as geo
from lorentzcomp.hypersurface import coordinate_slice
from lorentzcomp.spacetime import make_anti_de_sitter, make_de_sitter, make_minkowski

models = {-1.0: make_anti_de_sitter(2, -1.0), 0.0: make_minkowski(2),
          1.0: make_de_sitter(2, 1.0)}

print(" c     s   kind    I (quadrature)      closed form       |diff|")
for c, model in models.items():
    for s in (0.3, 1.0):
        for kind in ("point", "slice"):
            r = geo.check_index_closed_form(model, kind, s=s)
            m = r.metadata
            print(f"{c:4g} {s:5g}  {kind:6s} {m['I']:+.12f}  {m['expected']:+.12f}  "
                  f"{-r.worst:.1e}")

# maximality in de Sitter space and the quadratic defect
model = models[1.0]
p = np.zeros(3)
v = model.time_orientation(p)
g = geo.integrate_geodesic(model, p, v / math.sqrt(-model.inner(p, v, v)), 1.0)
J = geo.jacobi_to_endpoint(g, g.frame[-1, 0])
r = geo.check_index_maximality(g, J, perturbations=100)
print(f"\n{r}\n  I(J, J) = {r.metadata['I_JJ']:.10f} = -f_1(1) = {-cmp.f_c(1.0, 1.0):.10f}"
      f"\n  log-log slope of the defect: {r.metadata['defect_slope']:.4f}")

gs, Js = geo.n_jacobi_field(model, coordinate_slice(model, 0.0), np.zeros(2), 1.0)
print(geo.check_index_maximality(gs, Js, kind="slice"))

# in anti-de Sitter space every timelike geodesic from p refocuses at t = pi
ads = models[-1.0]
for s in (3.0, 3.3):
    g = geo.integrate_geodesic(ads, p, np.array([0.0, 0.0, 1.0]), s, step=1e-2)
    try:
        geo.jacobi_to_endpoint(g, g.frame[-1, 0])
        print(f"s = {s}: Jacobi field to the endpoint exists")
    except geo.ConjugatePointError as exc:
        print(f"s = {s}: {exc}")
print(geo.check_ads_closure(ads))
