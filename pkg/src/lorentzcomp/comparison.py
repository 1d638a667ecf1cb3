"""Scalar comparison functions for Lorentzian space forms.

For a curvature constant ``c`` the functions here are

* ``f_c(c, s)``  -- future mean curvature of the Lorentzian sphere of radius ``s``
  in the space form of curvature ``c`` (``sqrt(c) coth(sqrt(c) s)``, ``1/s``,
  ``sqrt(-c) cot(sqrt(-c) s)``);
* ``s_c(c, s, t)`` -- normalized amplitude of a Jacobi field vanishing at ``t=0``;
* ``c_c(c, s, t)`` -- normalized amplitude of a Jacobi field leaving a totally
  geodesic slice;
* ``F_c(c, s)``  -- future mean curvature of the level set ``d_N = s`` of the
  totally geodesic slice (``sqrt(c) tanh``, ``0``, ``-sqrt(-c) tan``).

All of them are analytic in ``c``.  Close to ``c*s**2 = 0`` they are evaluated
from truncated series in ``c*s**2`` so that the three branches join smoothly.
"""

import math

import numpy as np

__all__ = [
    "ComparisonDomainError",
    "f_c",
    "s_c",
    "s_c_derivative",
    "c_c",
    "c_c_derivative",
    "F_c",
    "phi",
    "phi_minimizer",
    "f_c_inverse",
    "conjugate_radius",
    "focal_radius",
]

# |c| s^2 below this: use the series
SERIES_THRESHOLD = 1e-8


class ComparisonDomainError(ValueError):
    """Raised when a comparison function is evaluated outside its domain."""

    def __init__(self, function, c, s, reason, t=None):
        self.function = function
        self.c = c
        self.s = s
        self.t = t
        self.reason = reason
        where = f"c={c!r}, s={s!r}" + ("" if t is None else f", t={t!r}")
        super().__init__(f"{function}({where}): {reason}")


def conjugate_radius(c):
    """First conjugate parameter ``pi/sqrt(-c)`` (``inf`` for ``c >= 0``)."""
    return math.pi / math.sqrt(-c) if c < 0 else math.inf


def focal_radius(c):
    """First focal parameter of the totally geodesic slice, ``pi/(2 sqrt(-c))``."""
    return 0.5 * math.pi / math.sqrt(-c) if c < 0 else math.inf


def _check_finite(name, c, s, t=None):
    vals = (c, s) if t is None else (c, s, t)
    if not all(math.isfinite(v) for v in vals):
        raise ComparisonDomainError(name, c, s, "arguments must be finite", t)


def f_c(c, s):
    """Comparison function ``f_c(s)``.

    Strictly decreasing in ``s``; tends to ``+inf`` as ``s -> 0+`` and to
    ``sqrt(c)`` as ``s -> inf`` when ``c >= 0``.
    """
    c = float(c)
    s = float(s)
    _check_finite("f_c", c, s)
    if s <= 0:
        raise ComparisonDomainError("f_c", c, s, "requires s > 0")
    if c < 0 and s >= conjugate_radius(c):
        raise ComparisonDomainError("f_c", c, s, "requires s < pi/sqrt(-c)")
    x = c * s * s
    if abs(x) < SERIES_THRESHOLD:
        # x coth x = 1 + x^2/3 - x^4/45 + 2 x^6/945 with x^2 = c s^2
        return (1.0 + x / 3.0 - x * x / 45.0 + 2.0 * x**3 / 945.0) / s
    if c > 0:
        k = math.sqrt(c)
        return k / math.tanh(k * s)
    k = math.sqrt(-c)
    return k / math.tan(k * s)


def _sin_like(c, x):
    """``sinh(sqrt(c) x)/sqrt(c)`` continued analytically in ``c``."""
    y = c * x * x
    if abs(y) < SERIES_THRESHOLD:
        return x * (1.0 + y / 6.0 + y * y / 120.0 + y**3 / 5040.0)
    if c > 0:
        k = math.sqrt(c)
        return math.sinh(k * x) / k
    k = math.sqrt(-c)
    return math.sin(k * x) / k


def _cos_like(c, x):
    """``cosh(sqrt(c) x)`` continued analytically in ``c``."""
    y = c * x * x
    if abs(y) < SERIES_THRESHOLD:
        return 1.0 + y / 2.0 + y * y / 24.0 + y**3 / 720.0
    if c > 0:
        return math.cosh(math.sqrt(c) * x)
    return math.cos(math.sqrt(-c) * x)


def s_c(c, s, t):
    """Normalized Jacobi amplitude with ``s_c(0) = 0`` and ``s_c(s) = 1``.

    Solves ``y'' = c y`` on ``[0, s]``.
    """
    c, s, t = float(c), float(s), float(t)
    _check_finite("s_c", c, s, t)
    if s <= 0:
        raise ComparisonDomainError("s_c", c, s, "requires s > 0", t)
    if not 0.0 <= t <= s:
        raise ComparisonDomainError("s_c", c, s, "requires 0 <= t <= s", t)
    if c < 0 and s >= conjugate_radius(c):
        raise ComparisonDomainError("s_c", c, s, "requires s < pi/sqrt(-c)", t)
    if t == s:
        return 1.0
    if c == 0:
        return t / s
    return _sin_like(c, t) / _sin_like(c, s)


def s_c_derivative(c, s, t):
    """``d/dt s_c(c, s, t)``."""
    c, s, t = float(c), float(s), float(t)
    s_c(c, s, t)  # domain check
    return _cos_like(c, t) / _sin_like(c, s)


def c_c(c, s, t):
    """Normalized N-Jacobi amplitude with ``c_c'(0) = 0`` and ``c_c(s) = 1``."""
    c, s, t = float(c), float(s), float(t)
    _check_finite("c_c", c, s, t)
    if s < 0:
        raise ComparisonDomainError("c_c", c, s, "requires s >= 0", t)
    if not 0.0 <= t <= s:
        raise ComparisonDomainError("c_c", c, s, "requires 0 <= t <= s", t)
    if c < 0 and s >= focal_radius(c):
        raise ComparisonDomainError("c_c", c, s, "requires s < pi/(2 sqrt(-c))", t)
    if t == s or c == 0:
        return 1.0
    return _cos_like(c, t) / _cos_like(c, s)


def c_c_derivative(c, s, t):
    """``d/dt c_c(c, s, t)``."""
    c, s, t = float(c), float(s), float(t)
    c_c(c, s, t)
    return c * _sin_like(c, t) / _cos_like(c, s)


def F_c(c, s):
    """Comparison function ``F_c(s)`` for distances from a totally geodesic slice."""
    c, s = float(c), float(s)
    _check_finite("F_c", c, s)
    if s <= 0:
        raise ComparisonDomainError("F_c", c, s, "requires s > 0")
    if c < 0 and s >= focal_radius(c):
        raise ComparisonDomainError("F_c", c, s, "requires s < pi/(2 sqrt(-c))")
    if c == 0:
        return 0.0
    x = c * s * s
    if abs(x) < SERIES_THRESHOLD:
        # x tanh x = x^2 - x^4/3 + 2 x^6/15
        return c * s * (1.0 - x / 3.0 + 2.0 * x * x / 15.0)
    if c > 0:
        k = math.sqrt(c)
        return k * math.tanh(k * s)
    k = math.sqrt(-c)
    return -k * math.tan(k * s)


def phi(n, x):
    """``(n + x^2) / (n sqrt(1 + x^2))``; minimum ``2 sqrt(n-1)/n`` at ``sqrt(n-2)``."""
    if int(n) != n or n < 2:
        raise ValueError(f"phi: n must be an integer >= 2, got {n!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("phi: x must be >= 0")
    out = (n + x * x) / (n * np.sqrt(1.0 + x * x))
    return float(out) if out.ndim == 0 else out


def phi_minimizer(n):
    """Location and value of the minimum of ``phi(n, .)`` on ``[0, inf)``."""
    x = math.sqrt(n - 2)
    return x, 2.0 * math.sqrt(n - 1) / n


def f_c_inverse(c, h):
    """The unique ``s`` with ``f_c(c, s) == h``."""
    c, h = float(c), float(h)
    if not (math.isfinite(c) and math.isfinite(h)):
        raise ComparisonDomainError("f_c_inverse", c, h, "arguments must be finite")
    if c > 0:
        k = math.sqrt(c)
        if h <= k:
            raise ComparisonDomainError(
                "f_c_inverse", c, h, "h must exceed sqrt(c), the infimum of f_c")
        return math.atanh(k / h) / k
    if c == 0:
        if h <= 0:
            raise ComparisonDomainError("f_c_inverse", c, h, "h must be > 0 when c = 0")
        return 1.0 / h
    k = math.sqrt(-c)
    # arccot with values in (0, pi)
    return (0.5 * math.pi - math.atan(h / k)) / k
