"""Interior polynomials and their derivative identity.

Each cap form of order m is the z-derivative of a finite expansion in
1/(z - c), c the cap center image. This script prints the expansions for
an elliptical cap and measures the identity at random points; for a
round cap of radius r the expansion collapses to -(r/z)^m exactly.
"""

import numpy as np

from faberforms import (
    AffineMap,
    CapFamily,
    JoukowskiEllipseMap,
    SurfaceSpec,
    faber_form,
    faber_polynomial,
)

f = JoukowskiEllipseMap(0.25, scale=0.5, offset=0.0)
surface = SurfaceSpec.sphere(CapFamily([f]), w0=4.0 + 3.0j)

print("expansion coefficients in powers of 1/(z - c), elliptical cap")
for m in (1, 2, 3, 4):
    tail = faber_polynomial(f, m)
    coeffs = ", ".join(f"{c:.6g}" for c in tail.coefficients)
    print(f"  m = {m}: [{coeffs}]")

rng = np.random.default_rng(14)
pts = rng.uniform(1.5, 3.0, 12) * np.exp(2j * np.pi * rng.uniform(size=12))
print()
print("derivative identity |d/dz tail - form| at 12 exterior points")
for m in (1, 3, 5, 8):
    el = faber_form(surface, 0, m)
    gap = np.max(np.abs(faber_polynomial(f, m).derivative()(pts) - el.form(pts)))
    print(f"  m = {m}: {gap:.2e}")

print()
print("round cap of radius 0.7: the expansion is one term, -(0.7/z)^m")
g = AffineMap(0.7)
zs = np.array([1.3, 2.0 - 1.0j, -3.3 + 0.4j])
for m in (1, 4, 7):
    tail = faber_polynomial(g, m)
    gap = np.max(np.abs(tail(zs) + (0.7 / zs) ** m))
    print(f"  m = {m}: nonzero coefficients "
          f"{np.count_nonzero(np.abs(tail.coefficients) > 1e-12)}, "
          f"oracle gap {gap:.2e}")
