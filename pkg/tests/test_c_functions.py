"""
Tests for the complementarity functions
"""
import numpy as np
import pytest
import scipy.sparse as sp

from ncp.c_functions import (
    CFunctionKind, FischerBurmeister, MinFunction, SmoothFischerBurmeister, SmoothMin,
    c_function, constraint_jacobian_row, make_c_function
)


def sample_points(n=10_000, seed=0):
    """Uniform samples in [-10, 10]^2 plus points on the axes and the origin"""
    rng = np.random.default_rng(seed)
    ab = rng.uniform(-10.0, 10.0, size=(n, 2))
    axis = np.linspace(-10.0, 10.0, 41)
    zeros = np.zeros_like(axis)
    a = np.concatenate([ab[:, 0], axis, zeros, [0.0]])
    b = np.concatenate([ab[:, 1], zeros, axis, [0.0]])
    return a, b


def on_complementary_set(a, b):
    return (a >= 0) & (b >= 0) & (a * b == 0)


@pytest.mark.parametrize("kind", [CFunctionKind.MIN, CFunctionKind.FISCHER_BURMEISTER])
def test_zero_exactly_on_complementary_set(kind):
    """Phi(a, b) = 0 iff a >= 0, b >= 0, a b = 0"""
    a, b = sample_points()
    values = c_function(kind, a, b)
    inside = on_complementary_set(a, b)

    assert inside.sum() > 0
    assert np.all(np.abs(values[inside]) <= 1e-12)
    assert np.all(np.abs(values[~inside]) > 1e-12)


def test_min_examples():
    """min on the axes and in the negative quadrant"""
    phi = MinFunction()
    assert phi.value(0.0, 5.0) == 0.0
    assert phi.value(3.0, 0.0) == 0.0
    assert phi.value(-1.0, 2.0) == -1.0


def test_fischer_burmeister_examples():
    """FB vanishes on the axes and is positive where both arguments are negative"""
    phi = FischerBurmeister()
    assert phi.value(3.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert phi.value(0.0, 4.0) == pytest.approx(0.0, abs=1e-15)
    assert phi.value(3.0, 4.0) == pytest.approx(5.0 - 7.0)
    assert phi.value(-1.0, -1.0) > 0


def test_min_active_set_coefficients():
    """a >= b selects the b-row, otherwise the a-row; ties go to b"""
    ca, cb = MinFunction().coefficients(np.array([2.0, 0.0, 1.0]), np.array([1.0, 3.0, 1.0]))
    np.testing.assert_array_equal(ca, [0.0, 1.0, 0.0])
    np.testing.assert_array_equal(cb, [1.0, 0.0, 1.0])


def test_fischer_burmeister_origin_subgradient():
    """At the kink the chosen element has alpha = beta = 1/sqrt(2)"""
    ca, cb = FischerBurmeister().coefficients(0.0, 0.0)
    assert float(ca) == pytest.approx(1.0 / np.sqrt(2.0) - 1.0)
    assert float(cb) == pytest.approx(1.0 / np.sqrt(2.0) - 1.0)


def test_fischer_burmeister_coefficients_away_from_origin():
    ca, cb = FischerBurmeister().coefficients(3.0, 4.0)
    assert float(ca) == pytest.approx(0.6 - 1.0)
    assert float(cb) == pytest.approx(0.8 - 1.0)


@pytest.mark.parametrize("tau", [1e-4, 1e-6, 1e-8])
def test_smooth_fb_approximation_bound(tau):
    """|G(a, b, tau) - Phi_FB(a, b)| <= sqrt(2 tau)"""
    a, b = sample_points()
    gap = np.abs(SmoothFischerBurmeister(tau).value(a, b) - FischerBurmeister().value(a, b))
    assert gap.max() <= np.sqrt(2.0 * tau) * (1.0 + 1e-12)


def test_smooth_fb_at_origin():
    """G(0, 0, tau) = sqrt(2 tau)"""
    assert float(SmoothFischerBurmeister(1e-6).value(0.0, 0.0)) == pytest.approx(np.sqrt(2e-6))


@pytest.mark.parametrize("tau", [1e-4, 1e-6])
def test_smooth_fb_gradient_matches_finite_differences(tau):
    """Analytic gradient of G vs central differences, origin included"""
    rng = np.random.default_rng(1)
    a = np.concatenate([rng.uniform(-2.0, 2.0, 200), [0.0]])
    b = np.concatenate([rng.uniform(-2.0, 2.0, 200), [0.0]])
    g = SmoothFischerBurmeister(tau)
    h = 1e-3 * np.sqrt(tau)

    ca, cb = g.coefficients(a, b)
    fd_a = (g.value(a + h, b) - g.value(a - h, b)) / (2 * h)
    fd_b = (g.value(a, b + h) - g.value(a, b - h)) / (2 * h)

    np.testing.assert_allclose(fd_a, ca, rtol=1e-5, atol=1e-7)
    np.testing.assert_allclose(fd_b, cb, rtol=1e-5, atol=1e-7)
    assert float(ca[-1]) == pytest.approx(-1.0)
    assert float(cb[-1]) == pytest.approx(-1.0)


def test_smooth_fb_zero_tau_is_fischer_burmeister():
    a, b = sample_points(500)
    np.testing.assert_array_equal(SmoothFischerBurmeister(0.0).value(a, b), FischerBurmeister().value(a, b))
    ca0, cb0 = SmoothFischerBurmeister(0.0).coefficients(0.0, 0.0)
    ca, cb = FischerBurmeister().coefficients(0.0, 0.0)
    assert float(ca0) == float(ca) and float(cb0) == float(cb)


def test_smooth_min_limit_is_twice_min():
    """G_min(a, b, 0) = 2 min(a, b)"""
    a, b = sample_points(500)
    np.testing.assert_allclose(SmoothMin(0.0).value(a, b), 2.0 * np.minimum(a, b), atol=1e-12)


def test_smooth_min_kink_breaks_ties_to_b():
    ca, cb = SmoothMin(0.0).coefficients(1.0, 1.0)
    assert float(ca) == 0.0
    assert float(cb) == 2.0


def test_smooth_min_gradient_matches_finite_differences():
    rng = np.random.default_rng(2)
    a = rng.uniform(-1.0, 1.0, 100)
    b = rng.uniform(-1.0, 1.0, 100)
    g = SmoothMin(1e-4)
    h = 1e-6
    ca, cb = g.coefficients(a, b)
    np.testing.assert_allclose((g.value(a + h, b) - g.value(a - h, b)) / (2 * h), ca, rtol=1e-5, atol=1e-7)
    np.testing.assert_allclose((g.value(a, b + h) - g.value(a, b - h)) / (2 * h), cb, rtol=1e-5, atol=1e-7)


def test_reference_functions():
    """The residual always uses the non-smooth function"""
    assert isinstance(SmoothFischerBurmeister(1e-6).reference(), FischerBurmeister)
    assert SmoothMin(1e-6).reference().tau == 0.0
    phi = MinFunction()
    assert phi.reference() is phi


class TestMakeCFunction:
    """Test suite for the C-function factory"""

    def test_kinds(self):
        """Each kind maps to its class"""
        assert isinstance(make_c_function("min"), MinFunction)
        assert isinstance(make_c_function(CFunctionKind.FISCHER_BURMEISTER), FischerBurmeister)
        assert isinstance(make_c_function("sfb", 1e-6), SmoothFischerBurmeister)
        assert isinstance(make_c_function("smin", 1e-6), SmoothMin)

    def test_non_smooth_kinds_ignore_tau(self):
        assert make_c_function("min", 1e-3).tau == 0.0

    def test_negative_tau_rejected(self):
        """Negative smoothing parameters raise ValueError"""
        with pytest.raises(ValueError):
            make_c_function("sfb", -1e-6)
        with pytest.raises(ValueError):
            make_c_function("min", -1.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            make_c_function("newton")

    def test_is_smooth(self):
        assert CFunctionKind.SMOOTH_FISCHER_BURMEISTER.is_smooth
        assert CFunctionKind.SMOOTH_MIN.is_smooth
        assert not CFunctionKind.MIN.is_smooth
        assert not CFunctionKind.FISCHER_BURMEISTER.is_smooth


def test_constraint_jacobian_row_dense():
    """Row = ca * da + cb * db"""
    da = np.array([0.0, -1.0, 0.0])
    db = np.array([2.0, 3.0, -1.0])
    row = constraint_jacobian_row("fb", 3.0, 4.0, da, db)
    np.testing.assert_allclose(row, -0.4 * da - 0.2 * db)


def test_constraint_jacobian_row_sparse():
    da = sp.csr_matrix(np.array([[0.0, -1.0, 0.0]]))
    db = sp.csr_matrix(np.array([[2.0, 3.0, -1.0]]))
    row = constraint_jacobian_row("min", 0.0, 1.0, da, db)
    np.testing.assert_array_equal(row.toarray(), da.toarray())
