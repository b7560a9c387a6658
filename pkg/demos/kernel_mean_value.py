"""The kernel on the sphere, checked two independent ways.

The closed form is -(1/pi) (w - z)^(-2). A second route takes the mixed
Wirtinger derivative d^2/(dw dz) of the Green's function by centered
differences of its four real partials; (2/pi) times that must agree to
the stencil's truncation error.
"""

import numpy as np

from faberforms import AffineMap, CapFamily, SurfaceSpec, green, schiffer_kernel


def fd_mixed_wirtinger(g, w, z, h=2e-3):
    gxx = (g(w + h, z + h) - g(w + h, z - h) - g(w - h, z + h) + g(w - h, z - h)) / (4 * h * h)
    gyy = (
        g(w + 1j * h, z + 1j * h)
        - g(w + 1j * h, z - 1j * h)
        - g(w - 1j * h, z + 1j * h)
        + g(w - 1j * h, z - 1j * h)
    ) / (4 * h * h)
    gxy = (
        g(w + h, z + 1j * h) - g(w + h, z - 1j * h) - g(w - h, z + 1j * h) + g(w - h, z - 1j * h)
    ) / (4 * h * h)
    gyx = (
        g(w + 1j * h, z + h) - g(w + 1j * h, z - h) - g(w - 1j * h, z + h) + g(w - 1j * h, z - h)
    ) / (4 * h * h)
    return 0.25 * ((gxx - gyy) - 1j * (gxy + gyx))


surface = SurfaceSpec.sphere(CapFamily([AffineMap(1.0)]), w0=4.0 + 3.0j)

rng = np.random.default_rng(2)
w = rng.uniform(-3, 3, 6) + 1j * rng.uniform(-3, 3, 6)
z = w[::-1] + 1.5 + 0.5j

print("closed form vs Wirtinger differences of the Green's function")
print(f"{'w':>18}{'z':>18}{'|K|':>10}{'fd gap':>12}")

q = 5.0 - 2.0j
for wi, zi in zip(w, z):
    fd = (2.0 / np.pi) * fd_mixed_wirtinger(
        lambda a, b: green(surface, a, b, q=q), wi, zi
    )
    k = schiffer_kernel(surface, wi, zi)
    print(f"{wi:>18.3f}{zi:>18.3f}{abs(k):>10.4f}{abs(k - fd):>12.2e}")

print()
print("the Green's function carries a base point q, the kernel does not:")
k1 = schiffer_kernel(surface, 2.0, 0.2j)
print(f"K(2, 0.2i) = {k1:.12f}  (no q anywhere in the formula)")
