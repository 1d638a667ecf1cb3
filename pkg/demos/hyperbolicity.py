"""Superharmonic distance on maximal hypersurfaces.

On a spacelike hypersurface with H <= (2 sqrt(n-1)/n) f_c(u), the restricted
distance u = d_p o psi is superharmonic.  The constant is the minimum of
phi(x) = (n + x^2) / (n sqrt(1 + x^2)), attained at x = sqrt(n-2).  Maximal
planes in Minkowski space satisfy the hypothesis with room to spare.

    python demos/hyperbolicity.py
"""

import math

import numpy as np

from lorentzcomp import comparison as cmp
from lorentzcomp import hypersurface as hs
from lorentzcomp.lorentz_distance import PointDistance
from lorentzcomp.spacetime import make_minkowski

print(" n   argmin phi (grid)   sqrt(n-2)   min phi     2 sqrt(n-1)/n")
x = np.arange(0.0, 10.0, 1e-4)
for n in range(2, 9):
    vals = cmp.phi(n, x)
    k = int(np.argmin(vals))
    print(f"{n:2d}   {x[k]:.4f}              {math.sqrt(n - 2):.4f}      {vals[k]:.6f}    "
          f"{2 * math.sqrt(n - 1) / n:.6f}")

for n, slope in ((2, [0.3, 0.1]), (3, [0.2, -0.4, 0.1])):
    model = make_minkowski(n)
    imm = hs.tilted_plane(model, t1=2.5, slope=slope)
    r = hs.check_hyperbolicity_superharmonic(model, imm, PointDistance(model, np.zeros(n + 1)),
                                             samples=200)
    print(f"\n{imm.label} in {model.label}\n  {r}\n  max Lap u = "
          f"{r.metadata['max_laplacian']:.4f}")

# the hyperboloid u = s has H = 1/s = f_0(u): above the threshold once n >= 3
model = make_minkowski(3)
r = hs.check_hyperbolicity_superharmonic(model, hs.level_set(model, s=2.0),
                                         PointDistance(model, np.zeros(4)), samples=16)
print(f"\nhyperboloid in {model.label}: {r.status}: {r.notes}")
