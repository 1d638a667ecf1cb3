"""Level sets of the distance from a point and the mean curvature they carry.

In a space form of curvature c the level set d_p = s is umbilic with future
mean curvature f_c(s).  A constant-H hypersurface lying further out than a
level set must have H at least f_c(inf d_p); the shifted hyperboloid shows
how much room that leaves.

    python demos/level_sets.py
"""

import numpy as np

from lorentzcomp import comparison as cmp
from lorentzcomp import hypersurface as hs
from lorentzcomp.lorentz_distance import PointDistance
from lorentzcomp.spacetime import make_de_sitter, make_minkowski

rng = np.random.default_rng(0)

print("level sets d_p = s: sampled H against f_c(s)")
for model, s in ((make_minkowski(2), 2.0), (make_minkowski(2), 0.5),
                 (make_de_sitter(2, 1.0), 0.7), (make_de_sitter(2, 2.0), 0.5)):
    c = model.constant_curvature
    imm = hs.level_set(model, s=s)
    geo = hs.induced_geometry(model, imm, imm.sample(rng, 100))
    print(f"  {model.label:22s} s={s:<4g} H in [{geo.H.min():.8f}, {geo.H.max():.8f}]"
          f"   f_c(s) = {cmp.f_c(c, s):.8f}")

# the hyperboloid of radius 2 in Minkowski space: A = -I/2, H = 1/2
mink = make_minkowski(2)
geo = hs.induced_geometry(mink, hs.level_set(mink, s=2.0), np.zeros((1, 2)))
print("\nshape operator of the s=2 hyperboloid at its vertex:\n", np.round(geo.shape[0], 12))

# a hyperboloid of radius 2 centred one unit above p: H = 1/2 while inf d_p = 3,
# so H - f_0(3) = 1/2 - 1/3
p = PointDistance(mink, np.zeros(3))
imm = hs.shifted_hyperboloid(mink, s=2.0, tau=1.0)
for which in ("T42", "T41"):
    r = hs.check_mean_curvature_theorems(mink, imm, p, which)
    print(f"\n{r}\n  notes: {r.notes or '-'}")

# the rigidity statement on a level set: u is constant up to rounding
r = hs.bernstein_rigidity_check(mink, hs.level_set(mink, s=2.0), p)
print(f"\nrigidity: sup u - inf u = {r.metadata['oscillation']:.2e}, level f_c^-1(H) = "
      f"{r.metadata['level']:.12f}")
