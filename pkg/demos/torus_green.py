"""Green's function on a genus-one surface.

Checks the three properties that pin it down: harmonicity away from the
two logarithmic singularities, double periodicity under the lattice, and
the zero of normalization at the base point w0. The kernel derived from
it forgets the auxiliary point q entirely.
"""

import numpy as np

from faberforms import AffineMap, CapFamily, SurfaceSpec, green, schiffer_kernel

TAU = 0.3 + 1.1j
surface = SurfaceSpec.torus(TAU, CapFamily([
    AffineMap(0.11, 0.39 + 0.33j),
    AffineMap(0.11, 0.924 + 0.748j),
]))

z = 0.5 * (1.0 + TAU) + 0.06
q = surface.q
print(f"lattice tau = {TAU}, singularities z = {z:.3f}, q = {q:.3f}")

rng = np.random.default_rng(8)
pts = []
while len(pts) < 40:
    w = rng.uniform(0.05, 0.95) + rng.uniform(0.05, 0.95) * TAU
    if surface.in_sigma(w) and min(abs(w - z), abs(w - q)) > 0.3:
        pts.append(w)

h = 3e-4
lap = max(
    abs(sum(green(surface, w + d, z, q=q) for d in (h, -h, 1j * h, -1j * h))
        - 4 * green(surface, w, z, q=q)) / h**2
    for w in pts
)
print(f"worst five-point Laplacian over 40 points: {lap:.2e}")

w = np.array(pts[:10])
per1 = np.max(np.abs(green(surface, w + 1, z, q=q) - green(surface, w, z, q=q)))
pertau = np.max(np.abs(green(surface, w + TAU, z, q=q) - green(surface, w, z, q=q)))
print(f"periodicity: |G(w+1)-G(w)| <= {per1:.2e}, |G(w+tau)-G(w)| <= {pertau:.2e}")

print(f"normalization G(w0) = {green(surface, surface.w0, z, q=q):.1e}")

alt = SurfaceSpec.torus(TAU, surface.caps, q=q + 0.2 + 0.1 * TAU, w0=surface.w0)
gap = np.max(np.abs(schiffer_kernel(surface, w, z) - schiffer_kernel(alt, w, z)))
print(f"kernel with a different q: max difference {gap:.1e}")
