"""Numerical verification of comparison results for Lorentzian distance functions.

Modules
-------
comparison
    The scalar comparison functions ``f_c``, ``F_c``, ``s_c``, ``c_c`` and ``phi``.
spacetime
    Lorentzian models (Minkowski, de Sitter, anti-de Sitter, GRW), curvature and frames.
geodesic
    Timelike geodesics, Jacobi fields and index forms.
lorentz_distance
    Distance fields from a point or a slice and their comparison checks.
hypersurface
    Spacelike hypersurfaces, restricted distance and the mean curvature checks.
cli
    Experiment configuration, execution and report emission.
"""

__version__ = "0.1.0"

from .comparison import (F_c, ComparisonDomainError, c_c, f_c, f_c_inverse, phi,  # noqa: E402
                         phi_minimizer, s_c)
from .reports import CheckReport, make_report  # noqa: E402
from .spacetime import (make_anti_de_sitter, make_de_sitter, make_grw,  # noqa: E402
                        make_minkowski, make_warping, model_from_config)
from .lorentz_distance import PointDistance, SampleSpec, SliceDistance  # noqa: E402

__all__ = [
    "__version__",
    "f_c", "F_c", "s_c", "c_c", "phi", "phi_minimizer", "f_c_inverse", "ComparisonDomainError",
    "CheckReport", "make_report",
    "make_minkowski", "make_de_sitter", "make_anti_de_sitter", "make_grw", "make_warping",
    "model_from_config",
    "PointDistance", "SliceDistance", "SampleSpec",
]
