"""Pullback tails of the cap basis forms.

For each built-in cap shape, pull the order-m form back through the cap
map and read its Laurent tail on a small circle. The defining property:
coefficient m in the zeta^-(m+1) slot, nothing in the deeper slots, and
a cap-dependent holomorphic remainder.
"""

import numpy as np

from faberforms import (
    AffineMap,
    CapFamily,
    JoukowskiEllipseMap,
    PolynomialCapMap,
    SurfaceSpec,
    faber_form,
    principal_part,
)

kinds = [
    ("identity disk", AffineMap(1.0)),
    ("half-size disk", AffineMap(0.5, 1.0 + 0.5j)),
    ("ellipse", JoukowskiEllipseMap(0.25, scale=0.5, offset=-1.0)),
    ("cubic perturbation", PolynomialCapMap([0.6, 0.0, 0.12, 0.04j], offset=2.0)),
]

print("leading tail coefficient (should equal m) and worst deeper slot")
print(f"{'cap':<22}{'m':>3}{'|lead - m|':>14}{'deeper':>12}{'|head(0)|':>12}")
for name, cap in kinds:
    surface = SurfaceSpec.sphere(CapFamily([cap]), w0=4.0 + 3.0j)
    for m in (1, 3, 6):
        tail, head = principal_part(surface, faber_form(surface, 0, m))
        lead = tail.coefficients[m]
        deeper = float(np.max(np.abs(tail.coefficients[m + 1:])))
        print(f"{name:<22}{m:>3}{abs(lead - m):>14.2e}{deeper:>12.2e}"
              f"{abs(head(0.0)):>12.4f}")
    print()

print("the identity disk has no holomorphic remainder at all for m >= 1;")
print("curved caps pick one up, and the deeper tail slots stay empty either way.")
