import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentzcomp import comparison as cmp
from lorentzcomp.comparison import ComparisonDomainError

curv = st.floats(-2.0, 2.0, allow_nan=False)


def _admissible(c, frac):
    """A parameter inside the domain of ``f_c`` (fraction of the conjugate radius)."""
    limit = cmp.conjugate_radius(c)
    return frac * (limit if math.isfinite(limit) else 5.0)


# -- closed forms ------------------------------------------------------------


@pytest.mark.parametrize("s", [0.3, 1.0, 2.0])
def test_f_c_closed_forms(s):
    assert cmp.f_c(0.0, s) == pytest.approx(1.0 / s, rel=1e-15)
    assert cmp.f_c(1.0, s) == pytest.approx(1.0 / math.tanh(s), rel=1e-14)
    assert cmp.f_c(2.0, s) == pytest.approx(math.sqrt(2) / math.tanh(math.sqrt(2) * s), rel=1e-14)
    assert cmp.f_c(-1.0, s) == pytest.approx(1.0 / math.tan(s), rel=1e-13)


@pytest.mark.parametrize("s", [0.3, 1.0])
def test_F_c_closed_forms(s):
    assert cmp.F_c(0.0, s) == 0.0
    assert cmp.F_c(1.0, s) == pytest.approx(math.tanh(s), rel=1e-14)
    assert cmp.F_c(-1.0, s) == pytest.approx(-math.tan(s), rel=1e-14)


def test_hyperboloid_value():
    assert cmp.f_c(0.0, 2.0) == 0.5


def test_series_branch_joins_closed_form():
    s = 1.0
    for c in (1e-9, -1e-9, 2e-8, -2e-8):
        k = math.sqrt(abs(c))
        exact = k / math.tanh(k * s) if c > 0 else k / math.tan(k * s)
        assert cmp.f_c(c, s) == pytest.approx(exact, rel=1e-12)
        exact_F = k * math.tanh(k * s) if c > 0 else -k * math.tan(k * s)
        assert cmp.F_c(c, s) == pytest.approx(exact_F, rel=1e-9, abs=1e-18)


def test_s_c_and_c_c_boundary_values():
    for c in (-1.0, 0.0, 1.0, 2.0):
        assert cmp.s_c(c, 1.0, 0.0) == 0.0
        assert cmp.s_c(c, 1.0, 1.0) == 1.0
        assert cmp.c_c(c, 1.0, 1.0) == 1.0
        assert cmp.c_c_derivative(c, 1.0, 0.0) == 0.0


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0, 2.0])
def test_profiles_solve_jacobi_equation(c):
    s, h = 1.2, 1e-4
    for t in (0.3, 0.7, 1.0):
        for fn in (cmp.s_c, cmp.c_c):
            y = lambda x: fn(c, s, x)
            ypp = (y(t + h) - 2 * y(t) + y(t - h)) / h**2
            assert ypp == pytest.approx(c * y(t), abs=1e-6)


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0, 2.0])
def test_log_derivatives_give_comparison_functions(c):
    s = 1.1
    assert cmp.s_c_derivative(c, s, s) == pytest.approx(cmp.f_c(c, s), rel=1e-13)
    assert cmp.c_c_derivative(c, s, s) == pytest.approx(cmp.F_c(c, s), rel=1e-13, abs=1e-15)


def test_domain_errors():
    with pytest.raises(ComparisonDomainError):
        cmp.f_c(0.0, 0.0)
    with pytest.raises(ComparisonDomainError):
        cmp.f_c(-1.0, math.pi)
    with pytest.raises(ComparisonDomainError):
        cmp.F_c(-1.0, math.pi / 2)
    with pytest.raises(ComparisonDomainError):
        cmp.s_c(1.0, 1.0, 1.5)
    with pytest.raises(ComparisonDomainError):
        cmp.f_c_inverse(1.0, 0.5)
    with pytest.raises(ComparisonDomainError):
        cmp.f_c(float("nan"), 1.0)
    err = ComparisonDomainError("f_c", -1.0, 4.0, "requires s < pi/sqrt(-c)")
    assert err.function == "f_c" and err.s == 4.0


def test_radii():
    assert cmp.conjugate_radius(-1.0) == pytest.approx(math.pi)
    assert cmp.focal_radius(-4.0) == pytest.approx(math.pi / 4)
    assert cmp.conjugate_radius(0.0) == math.inf


# -- properties --------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(curv, st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_f_c_strictly_decreasing(c, a, b):
    if abs(a - b) < 1e-3:
        return
    s1, s2 = sorted((_admissible(c, a), _admissible(c, b)))
    assert cmp.f_c(c, s1) > cmp.f_c(c, s2)


@settings(max_examples=200, deadline=None)
@given(curv, st.floats(0.05, 0.95))
def test_f_c_inverse_round_trip(c, frac):
    s = _admissible(c, frac)
    assert cmp.f_c_inverse(c, cmp.f_c(c, s)) == pytest.approx(s, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(0.05, 3.0))
def test_f_c_bounded_below_by_sqrt_c(c, s):
    assert cmp.f_c(c, s) >= math.sqrt(c) - 1e-12


@settings(max_examples=200, deadline=None)
@given(curv, st.floats(0.05, 0.9))
def test_F_c_sign_and_monotonicity(c, frac):
    # F_c has the sign of c and moves away from 0 as s grows
    limit = cmp.focal_radius(c)
    s = frac * (limit if math.isfinite(limit) else 3.0)
    val, later = cmp.F_c(c, s), cmp.F_c(c, 1.05 * s)
    if c == 0:
        assert val == later == 0.0
    else:
        assert math.copysign(1.0, val) == math.copysign(1.0, c)
        assert abs(later) >= abs(val)


@settings(max_examples=200, deadline=None)
@given(curv, st.floats(0.05, 0.9), st.floats(0.0, 1.0))
def test_s_c_nonnegative_and_bounded(c, frac, tfrac):
    s = _admissible(c, frac)
    v = cmp.s_c(c, s, tfrac * s)
    assert v >= -1e-15
    if c >= 0:
        # monotone profile; for c < 0 and s past the focal radius sin overshoots 1
        assert v <= 1.0 + 1e-15


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12), st.floats(0.0, 50.0))
def test_phi_bounded_by_minimum(n, x):
    xm, pm = cmp.phi_minimizer(n)
    assert cmp.phi(n, x) >= pm - 1e-14
    assert cmp.phi(n, xm) == pytest.approx(pm, rel=1e-14)


@pytest.mark.parametrize("n", range(2, 9))
def test_phi_sampled_minimizer(n):
    x = np.arange(0.0, 10.0, 1e-4)
    k = int(np.argmin(cmp.phi(n, x)))
    assert abs(x[k] - math.sqrt(n - 2)) <= 1e-3


def test_phi_rejects_bad_input():
    with pytest.raises(ValueError):
        cmp.phi(1, 0.0)
    with pytest.raises(ValueError):
        cmp.phi(3, -1.0)
