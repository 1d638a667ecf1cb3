"""Comparison inequalities outside constant curvature.

In the GRW spacetime -dt^2 + a(t)^2 |dx|^2 with a(t) = 1 + 0.1 sin t the
curvature is not constant.  The checks sample the timelike sectional and
Ricci curvatures along the radial geodesics that reach each event, use the
extreme values as the bound c, and report signed margins of the Hessian and
Laplacian comparisons for the distance from a point and from a slice.

    python demos/grw_comparison.py
"""

import numpy as np

from lorentzcomp import lorentz_distance as ld
from lorentzcomp.lorentz_distance import PointDistance, SampleSpec, SliceDistance
from lorentzcomp.spacetime import make_grw, make_warping

model = make_grw(2, make_warping("sin", amplitude=0.1))
spec = SampleSpec(count=300, seed=1)

field = PointDistance(model, np.zeros(3))
print("distance from p = origin")
for r in (ld.check_hessian_lower_point(field, spec), ld.check_hessian_upper_point(field, spec),
          ld.check_laplacian_lower_point(field, spec)):
    m = r.metadata
    print(f"  {r}\n      K in [{m['K_min']:.4f}, {m['K_max']:.4f}], c = {m['c']:.4f}")

# the slice t = 0 has a'(0) > 0, so A_N <= 0 and only the upper Hessian bound applies;
# at t = pi the sign flips
for t0 in (0.0, np.pi):
    field = SliceDistance(model, t0)
    print(f"\ndistance from the slice t = {t0:.4f}")
    for r in (ld.check_hessian_from_slice(field, "lower", spec),
              ld.check_hessian_from_slice(field, "upper", spec),
              ld.check_laplacian_from_slice(field, spec)):
        print(f"  {r}")
        if r.skipped:
            print(f"      {r.notes}")

# a bound that the sampled curvature contradicts is reported, not used
r = ld.check_hessian_lower_point(PointDistance(model, np.zeros(3)), spec, c=-1.0)
print(f"\nsupplied c = -1: {r.status}: {r.notes}")
