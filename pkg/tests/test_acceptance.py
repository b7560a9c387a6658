"""Acceptance gate: ten end-to-end measurements at fixed tolerances.

Every test prints one pass/fail line with the measured value next to the
tolerance it was held to (run pytest with -s to watch them appear).
The measurements exercise the public API only.
"""

import numpy as np
import pytest

from faberforms.conformal import (
    AffineMap,
    CapFamily,
    JoukowskiEllipseMap,
    PolynomialCapMap,
)
from faberforms.faber import faber_form, faber_polynomial, principal_part
from faberforms.schiffer import CapDatum, apply_schiffer, schiffer_contour
from faberforms.series import invariance_check, project_faber, uniform_error
from faberforms.surface import SurfaceSpec, green, schiffer_kernel
from faberforms.targets import build_target

TAU = 0.3 + 1.1j


def _report(name, value, threshold, passed=None):
    if passed is None:
        passed = value < threshold
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {value:.3e} (tolerance {threshold:.1e})"
    print(line)
    assert passed, line


def _sphere(*caps):
    return SurfaceSpec.sphere(CapFamily(list(caps)), w0=4.0 + 3.0j)


def _torus_two_caps():
    return SurfaceSpec.torus(TAU, CapFamily([
        AffineMap(0.11, 0.39 + 0.33j),
        AffineMap(0.11, 0.924 + 0.748j),
    ]))


def _clear_points(surface, rng, count, clearance, avoid=()):
    """Rejection-sample points of the cap complement, also keeping a
    0.25 separation from every point in avoid (lattice-aware on the torus)."""
    if surface.genus == 1:
        shifts = [dx + dy * surface.tau for dx in (-1, 0, 1) for dy in (-1, 0, 1)]
    else:
        shifts = [0.0]
    pts = []
    while len(pts) < count:
        if surface.genus == 1:
            z = rng.uniform(0.02, 0.98) + rng.uniform(0.02, 0.98) * surface.tau
            far = float(surface.distance_to_caps_reduced(z)[0]) > clearance
        else:
            centers = np.asarray(surface.caps.centers)
            mid = complex(np.mean(centers))
            z = mid + complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            far = float(surface.caps.distance_to_caps(z)) > clearance
        if not (surface.in_sigma(z) and far):
            continue
        if all(abs(z + s - p) > 0.25 for p in avoid for s in shifts):
            pts.append(z)
    return np.array(pts)


@pytest.fixture(scope="module")
def joukowski_solution():
    surface = _sphere(JoukowskiEllipseMap(0.25, scale=1.0, offset=0.0))
    target = build_target(surface, "pole", eta=0.55, strength=1.0)
    dec = project_faber(target, surface, 40)
    return surface, target, dec


def test_01_pole_structure_every_cap_kind():
    # each cap form pulls back to (m/zeta^(m+1) + holomorphic) dzeta on
    # its own cap: leading coefficient m, the next three slots empty
    cap_kinds = [
        AffineMap(1.0),
        AffineMap(0.5, 1.0 + 0.5j),
        JoukowskiEllipseMap(0.25, scale=0.5, offset=-1.0),
        PolynomialCapMap([0.6, 0.0, 0.12, 0.04j], offset=2.0),
    ]
    surfaces = [_sphere(c) for c in cap_kinds]
    surfaces.append(SurfaceSpec.torus(TAU, CapFamily([AffineMap(0.12, 0.5 + 0.5 * TAU)])))
    worst = 0.0
    for surface in surfaces:
        for m in range(1, 13):
            tail, _head = principal_part(surface, faber_form(surface, 0, m))
            worst = max(worst, abs(tail.coefficients[m] - m))
            worst = max(worst, float(np.max(np.abs(tail.coefficients[m + 1:m + 4]))))
    _report("pole structure, 5 cap kinds, orders 1..12", worst, 1e-7)


def test_02_sphere_kernel_closed_form():
    surface = _sphere(AffineMap(1.0))
    rng = np.random.default_rng(11)
    w = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    z = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    keep = np.abs(w - z) > 0.3
    w, z = w[keep][:100], z[keep][:100]
    assert w.size == 100
    want = -1.0 / (np.pi * (w - z) ** 2)
    worst = float(np.max(np.abs(schiffer_kernel(surface, w, z) - want)))
    _report("sphere kernel closed form, 100 pairs", worst, 1e-12)


def test_03_faber_polynomial_derivative_identity():
    f = JoukowskiEllipseMap(0.25, scale=0.5, offset=0.0)
    surface = _sphere(f)
    rng = np.random.default_rng(5)
    pts = rng.uniform(1.5, 3.0, 20) * np.exp(2j * np.pi * rng.uniform(size=20))
    worst = 0.0
    for m in range(1, 9):
        el = faber_form(surface, 0, m)
        dtail = faber_polynomial(f, m).derivative()
        worst = max(worst, float(np.max(np.abs(dtail(pts) - el.form(pts)))))
    _report("d/dz of interior polynomial equals cap form, m<=8", worst, 1e-8)


def test_04_l2_residual_decay(joukowski_solution):
    _surface, _target, dec = joukowski_solution
    res = [r for _m, r in dec.residual_history]
    orders = [m for m, _r in dec.residual_history]
    assert orders == [5, 10, 20, 40]
    passed = all(res[i + 1] < res[i] for i in range(len(res) - 1)) and res[-1] < 1e-6
    _report("L2 residual strictly decreasing over M=5,10,20,40", res[-1], 1e-6, passed)


def test_05_sup_norm_decay_on_distant_circle(joukowski_solution):
    surface, target, dec = joukowski_solution
    ring = 2.0 * np.exp(2j * np.pi * np.arange(48) / 48)
    errs = [
        uniform_error(target, surface, dec, ring, upto=m)
        for m, _r in dec.residual_history
    ]
    passed = all(errs[i + 1] < errs[i] for i in range(len(errs) - 1)) and errs[-1] < 1e-6
    _report("sup error on |z|=2 strictly decreasing", errs[-1], 1e-6, passed)


def test_06_torus_coefficient_round_trip():
    surface = _torus_two_caps()
    target = build_target(surface, "combination", seed=9, order=10)
    dec = project_faber(target, surface, 10, checkpoints=())
    known = target.known
    worst = float(np.max(np.abs(dec.epsilon - known["epsilon"])))
    worst = max(worst, float(np.max(np.abs(dec.c - known["c"]))))
    for m in range(1, 11):
        for k in range(2):
            worst = max(worst, abs(dec.h[m - 1, k] - known["h"].get((m, k), 0.0)))
    _report("torus round-trip of random coefficients, m<=10", worst, 1e-8)


def test_07_green_function_properties():
    surface = _torus_two_caps()
    rng = np.random.default_rng(23)
    z = 0.5 * (1.0 + TAU) + 0.06
    q = surface.q
    pts = _clear_points(surface, rng, 100, clearance=0.02, avoid=(z, q))

    h = 3e-4
    harm = 0.0
    for w in pts:
        stencil = np.array([w + h, w - h, w + 1j * h, w - 1j * h, w])
        vals = np.array([green(surface, p, z, q=q) for p in stencil])
        harm = max(harm, abs(float((np.sum(vals[:4]) - 4.0 * vals[4]).real)) / h**2)

    sub = pts[:20]
    period = max(
        float(np.max(np.abs(green(surface, sub + 1.0, z, q=q) - green(surface, sub, z, q=q)))),
        float(np.max(np.abs(green(surface, sub + TAU, z, q=q) - green(surface, sub, z, q=q)))),
    )

    norm = abs(float(green(surface, surface.w0, z, q=q)))
    sph = _sphere(AffineMap(1.0))
    norm = max(norm, abs(float(green(sph, sph.w0, 2.5 + 1j, q=5.0 - 2.0j))))

    alt = SurfaceSpec.torus(TAU, surface.caps, q=q + 0.2 + 0.1 * TAU, w0=surface.w0)
    w1 = _clear_points(surface, rng, 100, clearance=0.05)
    z1 = _clear_points(surface, rng, 100, clearance=0.05)
    keep = np.abs(w1 - z1) > 0.1
    qdep = float(np.max(np.abs(
        schiffer_kernel(surface, w1[keep], z1[keep])
        - schiffer_kernel(alt, w1[keep], z1[keep])
    )))

    passed = harm < 1e-4 and period < 1e-9 and norm == 0.0 and qdep < 1e-9
    line = (f"harmonicity {harm:.3e} (<1e-4), periodicity {period:.3e} (<1e-9), "
            f"normalization {norm:.1e} (exact), q-independence {qdep:.3e} (<1e-9)")
    print(f"[{'PASS' if passed else 'FAIL'}] green function: {line}")
    assert passed, line


def test_08_translation_invariance():
    sphere = _sphere(JoukowskiEllipseMap(0.25, scale=0.5, offset=0.0))
    dev_s = invariance_check(
        sphere,
        lambda s: build_target(s, "pole", eta=0.5, strength=1.0),
        0.7 - 0.3j,
        M=4,
        checkpoints=(),
    )
    torus = _torus_two_caps()
    dev_t = invariance_check(
        torus,
        lambda s: build_target(s, "combination", seed=3, order=3),
        0.05,
        M=3,
        checkpoints=(),
    )
    worst = max(dev_s, dev_t)
    _report("decomposition unchanged under translation, both genera", worst, 1e-8)


def test_09_contour_vs_area_agreement():
    surfaces = [
        _sphere(AffineMap(0.4), JoukowskiEllipseMap(0.25, scale=0.3, offset=2.5)),
        _torus_two_caps(),
    ]
    worst_gap = 0.0
    worst_spread = 0.0
    for idx, surface in enumerate(surfaces):
        rng = np.random.default_rng(31 + idx)
        pts = _clear_points(surface, rng, 20, clearance=0.3 if surface.genus == 0 else 0.25)
        for k in range(surface.n_caps):
            for m in (1, 2, 3):
                vals = [
                    schiffer_contour(surface, k, m, pts, r0=r) for r in (0.4, 0.6, 0.8)
                ]
                for i in range(3):
                    for j in range(i):
                        worst_spread = max(
                            worst_spread, float(np.max(np.abs(vals[i] - vals[j])))
                        )
                area = apply_schiffer(surface, CapDatum.monomial(k, m), pts)
                worst_gap = max(worst_gap, float(np.max(np.abs(area - vals[1]))))
    passed = worst_gap < 1e-8 and worst_spread < 1e-9
    _report(
        f"contour vs area (spread {worst_spread:.1e} < 1e-9)", worst_gap, 1e-8, passed
    )


def test_10_closed_form_oracles():
    # unit identity cap: the operator sends the area datum to 1/z^2 exactly
    surface = _sphere(AffineMap(1.0))
    worst = 0.0
    for z in (2.0, -2.0, 1.0 + 1.0j):
        got = apply_schiffer(surface, CapDatum.monomial(0, 1), z)
        worst = max(worst, abs(got - 1.0 / z**2))
    # scaled cap: interior polynomial is -(r/z)^m on the nose
    r = 0.7
    f = AffineMap(r)
    zs = np.array([1.3, 2.0 - 1.0j, -3.3 + 0.4j])
    for m in range(1, 9):
        tail = faber_polynomial(f, m)
        worst = max(worst, float(np.max(np.abs(tail(zs) - (-((r / zs) ** m))))))
    _report("closed forms: operator image and interior polynomial", worst, 1e-10)
