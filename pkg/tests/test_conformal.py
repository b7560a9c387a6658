import numpy as np
import pytest

from faberforms.conformal import (
    AffineMap,
    CapFamily,
    JoukowskiEllipseMap,
    MoebiusComposedMap,
    PolynomialCapMap,
    make_map,
    winding_number,
)
from faberforms.numerics import NumericalError, ValidationError

TWO_PI = 2.0 * np.pi


def builtin_maps():
    return [
        AffineMap(0.5),
        AffineMap(0.3 + 0.1j, offset=1.0 - 0.5j),
        JoukowskiEllipseMap(0.25),
        JoukowskiEllipseMap(0.4, scale=0.7, offset=2.0),
        PolynomialCapMap([1.0, 0.1]),
        PolynomialCapMap([0.5, 0.05, 0.02j], offset=-1.0),
    ]


def test_affine_evaluate():
    f = AffineMap(0.5)
    assert f.evaluate(0.2) == pytest.approx(0.1)
    assert f.derivative(0.9j) == pytest.approx(0.5)
    assert f.center == 0.0


def test_joukowski_center_is_offset():
    f = JoukowskiEllipseMap(0.25, offset=2.0 + 1.0j)
    assert f.evaluate(0.0) == pytest.approx(2.0 + 1.0j)


def test_polynomial_evaluate_and_derivative():
    f = PolynomialCapMap([1.0, 0.1])
    assert f.evaluate(0.5) == pytest.approx(0.525)
    assert f.derivative(0.5) == pytest.approx(1.1)


def test_domain_guard():
    f = AffineMap(1.0)
    with pytest.raises(ValidationError):
        f.evaluate(1.5)
    with pytest.raises(ValidationError):
        f.derivative(1.0 + 1e-6)
    # the closed disk itself is fine (pairing contours live on |zeta| = 1)
    f.evaluate(np.exp(1j * 0.3))


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(5)
    h = 1e-5
    for f in builtin_maps():
        zeta = 0.9 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(1j * rng.uniform(0, TWO_PI, 100))
        fd = (f.evaluate(zeta + h) - f.evaluate(zeta - h)) / (2 * h)
        assert np.max(np.abs(fd - f.derivative(zeta))) < 1e-7


def test_invert_round_trip():
    rng = np.random.default_rng(9)
    for f in builtin_maps():
        zeta = 0.95 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(1j * rng.uniform(0, TWO_PI, 100))
        w = f.evaluate(zeta)
        back = f.invert(w)
        assert np.max(np.abs(back - zeta)) < 1e-11
        again = f.evaluate(back)
        assert np.max(np.abs(again - w)) < 1e-10


def test_invert_simple_values():
    assert AffineMap(0.5).invert(0.1) == pytest.approx(0.2)
    assert PolynomialCapMap([1.0, 0.1]).invert(0.525) == pytest.approx(0.5)


def test_invert_reports_failure():
    f = AffineMap(0.5)
    with pytest.raises(NumericalError, match="residual"):
        f.invert(10.0)  # far outside the image; the clamped iteration stalls


def test_taylor_cache_matches_map():
    f = JoukowskiEllipseMap(0.25)
    s = f.taylor(20)
    zeta = 0.25 * np.exp(1j * TWO_PI * np.arange(7) / 7)
    assert np.max(np.abs(s(zeta) - f.evaluate(zeta))) < 1e-12
    # odd map: even Taylor coefficients vanish, odd ones are a^(j)
    assert abs(s.coefficients[2]) < 1e-13
    assert s.coefficients[3] == pytest.approx(0.25, abs=1e-12)
    assert s.coefficients[5] == pytest.approx(0.0625, abs=1e-12)


def test_derivative_vanishing_rejected():
    # f(zeta) = zeta^2 has f'(0) = 0 and doubles angles, so both the
    # derivative grid check and the injectivity spot check would fail
    with pytest.raises(ValidationError):
        PolynomialCapMap([0.0, 1.0])


def test_injectivity_spot_check_rejects_folding():
    with pytest.raises(ValidationError):
        PolynomialCapMap([1.0, 0.0, 0.0, 0.0, 2.0])


def test_joukowski_parameter_range():
    with pytest.raises(ValidationError):
        JoukowskiEllipseMap(0.9)


def test_moebius_composed_translation():
    base = JoukowskiEllipseMap(0.25)
    g = MoebiusComposedMap((1.0, 1.0 + 2.0j, 0.0, 1.0), base)
    zeta = 0.7 * np.exp(1j * np.linspace(0, TWO_PI, 11))
    assert np.max(np.abs(g.evaluate(zeta) - base.evaluate(zeta) - (1.0 + 2.0j))) < 1e-14
    assert np.max(np.abs(g.derivative(zeta) - base.derivative(zeta))) < 1e-14


def test_moebius_determinant_guard():
    with pytest.raises(ValidationError):
        MoebiusComposedMap((1.0, 2.0, 2.0, 4.0), AffineMap(0.5))


def test_make_map_dispatch():
    f = make_map("affine", scale=0.5, offset=1.0)
    assert isinstance(f, AffineMap)
    assert f.center == 1.0
    with pytest.raises(ValidationError):
        make_map("schwarz-christoffel")
    with pytest.raises(ValidationError):
        make_map("affine", slope=2.0)


def test_winding_number():
    poly = np.exp(1j * TWO_PI * np.arange(64) / 64)
    assert winding_number(poly, 0.0) == 1
    assert winding_number(poly, 2.0) == 0
    inside = np.array([0.1, -0.3j, 0.5 + 0.2j])
    assert np.all(winding_number(poly, inside) == 1)


def test_cap_family_accepts_disjoint():
    fam = CapFamily([AffineMap(0.4), AffineMap(0.4, offset=2.0)], separation=0.1)
    assert len(fam) == 2
    assert np.allclose(fam.centers, [0.0, 2.0])


def test_cap_family_rejects_overlap():
    with pytest.raises(ValidationError):
        CapFamily([AffineMap(1.0), AffineMap(1.0, offset=0.5)])


def test_cap_family_rejects_containment():
    with pytest.raises(ValidationError):
        CapFamily([AffineMap(1.0), AffineMap(0.2)])


def test_which_cap_and_distance():
    fam = CapFamily([AffineMap(0.5), JoukowskiEllipseMap(0.25, scale=0.5, offset=3.0)])
    assert fam.which_cap(0.1) == 0
    assert fam.which_cap(3.05) == 1
    assert fam.which_cap(1.5) == -1
    assert np.all(fam.which_cap(np.array([0.0, 3.0, 10.0])) == [0, 1, -1])
    # nearest boundary is the oval's left extreme at 3 - (4/3)*0.5 = 7/3
    assert fam.distance_to_caps(1.5) == pytest.approx(7.0 / 3.0 - 1.5, abs=1e-3)
