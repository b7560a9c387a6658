import math

import numpy as np
import pytest

from faberforms.numerics import (
    CircleContour,
    DiskGrid,
    LeastSquaresResult,
    NumericalError,
    ValidationError,
    area_pairing,
    circle_integral,
    extract_taylor,
    fft_antiderivative,
    laurent_coefficients,
    least_squares,
)

TWO_PI = 2.0 * np.pi


class _Form:
    """Minimal one-form stand-in: analytic evaluator plus a conjugate flag."""

    def __init__(self, fn, conjugate=False):
        self._fn = fn
        self.conjugate = conjugate

    def __call__(self, w):
        return self._fn(np.asarray(w, dtype=complex))


class _IdentityChart:
    def evaluate(self, zeta):
        return np.asarray(zeta, dtype=complex)

    def derivative(self, zeta):
        return np.ones_like(np.asarray(zeta, dtype=complex))


def test_circle_integral_residue():
    c = CircleContour(0.0, 1.0, n=64)
    assert abs(circle_integral(lambda w: 1.0 / w, c) - TWO_PI * 1j) < 1e-13


def test_circle_integral_analytic_integrand_vanishes():
    c = CircleContour(0.0, 1.0, n=64)
    assert abs(circle_integral(lambda w: w, c)) < 1e-14


def test_circle_integral_shifted_pole():
    # residue theorem: single simple pole at 0.3 inside the unit circle
    c = CircleContour(0.0, 1.0, n=128)
    assert abs(circle_integral(lambda w: 1.0 / (w - 0.3), c) - TWO_PI * 1j) < 1e-12


def test_circle_integral_spectral_convergence():
    # doubling the node count beyond 64 must not move the value
    vals = []
    for n in (64, 128, 256):
        c = CircleContour(0.2, 0.7, n=n)
        vals.append(circle_integral(lambda w: np.exp(w) / (w - 0.1), c))
    assert abs(vals[1] - vals[0]) < 1e-10
    assert abs(vals[2] - vals[1]) < 1e-13


def test_circle_integral_reports_bad_node():
    c = CircleContour(0.0, 1.0, n=16)

    def fn(w):
        out = 1.0 / w
        out = np.where(np.abs(w - w[3]) < 1e-12, np.nan, out)
        return out

    with pytest.raises(NumericalError, match="node 3"):
        circle_integral(fn, c)


def test_contour_validation():
    with pytest.raises(ValidationError):
        CircleContour(0.0, -1.0)
    with pytest.raises(ValidationError):
        CircleContour(0.0, 1.0, n=8)


def test_disk_grid_total_weight_is_pi():
    g = DiskGrid(24, 48)
    assert g.weights.min() > 0
    assert abs(g.integrate(np.ones(g.weights.size)) - np.pi) < 1e-12


def test_disk_grid_moment():
    # integral of |z|^2 over the unit disk = pi/2
    g = DiskGrid(24, 48)
    z = g.nodes
    assert abs(g.integrate(np.abs(z) ** 2) - np.pi / 2) < 1e-12


def test_area_pairing_monomials():
    g = DiskGrid(24, 48)
    chart = _IdentityChart()
    one = _Form(lambda w: np.ones_like(w))
    z = _Form(lambda w: w)
    # i dz wedge conj(dz) = 2 dA, so (dz, dz) over the disk is 2 pi
    assert abs(area_pairing(one, one, chart, g) - TWO_PI) < 1e-12
    # angular symmetry kills mixed monomials
    assert abs(area_pairing(z, one, chart, g)) < 1e-13
    assert abs(area_pairing(z, z, chart, g) - np.pi) < 1e-12


def test_area_pairing_norm_positive():
    rng = np.random.default_rng(7)
    g = DiskGrid(24, 48)
    chart = _IdentityChart()
    for _ in range(10):
        c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        form = _Form(lambda w, c=c: np.polynomial.polynomial.polyval(w, c))
        val = area_pairing(form, form, chart, g)
        assert abs(val.imag) < 1e-12 * max(1.0, abs(val))
        assert val.real >= 0
        anti = _Form(lambda w, c=c: np.polynomial.polynomial.polyval(w, c), conjugate=True)
        anti_val = area_pairing(anti, anti, chart, g)
        assert abs(anti_val - np.conj(val)) < 1e-10 * max(1.0, abs(val))
        assert anti_val.real >= 0


def test_area_pairing_mixed_types_orthogonal():
    g = DiskGrid(16, 32)
    chart = _IdentityChart()
    hol = _Form(lambda w: 1.0 + w)
    anti = _Form(lambda w: w ** 2, conjugate=True)
    assert area_pairing(hol, anti, chart, g) == 0


def test_extract_taylor_identity():
    s = extract_taylor(lambda w: w, 0.0, 0.5, 4)
    expect = np.array([0, 1, 0, 0, 0], dtype=complex)
    assert np.max(np.abs(s.coefficients - expect)) < 1e-13


def test_extract_taylor_exp():
    s = extract_taylor(np.exp, 0.0, 0.5, 8)
    expect = 1.0 / np.array([math.factorial(j) for j in range(9)])
    assert np.max(np.abs(s.coefficients - expect)) < 1e-12


def test_extract_taylor_geometric():
    s = extract_taylor(lambda w: 1.0 / (1.0 - w), 0.0, 0.5, 10)
    assert np.max(np.abs(s.coefficients - 1.0)) < 1e-12


def test_extract_taylor_reproduces_on_half_radius():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.standard_normal() + 1j * rng.standard_normal()
        fn = lambda w, a=a: np.exp(a * w / 2.0)
        s = extract_taylor(fn, 0.1, 0.8, 24)
        z = 0.1 + 0.4 * np.exp(1j * TWO_PI * np.arange(13) / 13)
        assert np.max(np.abs(s(z) - fn(z))) < 1e-10


def test_power_series_center_value_and_derivative():
    s = extract_taylor(np.cos, 0.0, 0.7, 12)
    assert abs(s(0.0) - s.coefficients[0]) < 1e-15
    ds = s.derivative()
    assert abs(ds(0.2) + np.sin(0.2)) < 1e-10


def test_laurent_coefficients_two_sided():
    fn = lambda w: 3.0 / w ** 2 + 1.0 + 2.0 * w
    c = laurent_coefficients(fn, 0.0, 0.7, [-3, -2, -1, 0, 1, 2], n=256)
    expect = np.array([0, 3, 0, 1, 2, 0], dtype=complex)
    assert np.max(np.abs(c - expect)) < 1e-12


def test_laurent_order_band_guard():
    with pytest.raises(ValidationError):
        laurent_coefficients(lambda w: w, 0.0, 0.5, [200], n=256)


def test_fft_antiderivative_matches_closed_form():
    n = 256
    theta = TWO_PI * np.arange(n) / n
    g = np.cos(3 * theta) + 1j * np.sin(theta)
    F = fft_antiderivative(g)
    expect = np.sin(3 * theta) / 3.0 - 1j * np.cos(theta)
    expect -= expect.mean()
    assert np.max(np.abs(F - expect)) < 1e-13


def test_fft_antiderivative_rejects_nonzero_mean():
    with pytest.raises(NumericalError, match="mean"):
        fft_antiderivative(np.ones(64))


def test_least_squares_identity():
    rhs = np.array([1.0, 2.0j, -3.0])
    res = least_squares(np.eye(3), rhs)
    assert isinstance(res, LeastSquaresResult)
    assert np.max(np.abs(res.coefficients - rhs)) < 1e-14
    assert not res.regularized


def test_least_squares_diagonal():
    res = least_squares(np.diag([2.0, 4.0]), np.array([2.0, 4.0]))
    assert np.max(np.abs(res.coefficients - 1.0)) < 1e-14


def test_least_squares_orthogonal_monomial_basis():
    # gram of {dz, z dz} on the unit disk is diag(2 pi, pi); rhs from
    # nu = (1 + z) dz pairs to (2 pi, pi), so the solve returns (1, 1)
    g = DiskGrid(24, 48)
    chart = _IdentityChart()
    basis = [_Form(lambda w: np.ones_like(w)), _Form(lambda w: w)]
    nu = _Form(lambda w: 1.0 + w)
    gram = np.array([[area_pairing(bj, bi, chart, g) for bj in basis] for bi in basis])
    rhs = np.array([area_pairing(nu, bi, chart, g) for bi in basis])
    res = least_squares(gram, rhs)
    assert np.max(np.abs(res.coefficients - 1.0)) < 1e-10
    assert gram @ res.coefficients == pytest.approx(rhs, abs=1e-10)


def test_least_squares_random_hermitian_systems():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = rng.integers(2, 7)
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        G = A @ A.conj().T + 0.5 * np.eye(n)
        rhs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        res = least_squares(G, rhs)
        assert np.max(np.abs(G @ res.coefficients - rhs)) < 1e-10 * np.linalg.norm(rhs)


def test_least_squares_flags_bad_conditioning():
    G = np.diag([1.0, 1e-15])
    res = least_squares(G, np.array([1.0, 0.0]), condition_limit=1e12)
    assert res.regularized
    assert res.condition > 1e12


def test_least_squares_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        least_squares(np.array([[1.0, 2.0], [0.0, 1.0]]), np.array([1.0, 1.0]))
