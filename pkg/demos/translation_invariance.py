"""Decomposition coefficients do not feel a translation.

Move every cap (and the target construction with it) by a rigid
translation and decompose again: epsilon, c, and h must come back
unchanged, because the whole construction is built from translation
covariant ingredients.
"""

from faberforms import (
    AffineMap,
    CapFamily,
    JoukowskiEllipseMap,
    SurfaceSpec,
    build_target,
    invariance_check,
)

sphere = SurfaceSpec.sphere(
    CapFamily([JoukowskiEllipseMap(0.25, scale=0.5, offset=0.0)]), w0=4.0 + 3.0j
)
dev = invariance_check(
    sphere,
    lambda s: build_target(s, "pole", eta=0.5, strength=1.0),
    0.7 - 0.3j,
    M=4,
    checkpoints=(),
)
print(f"sphere, pole target, shift 0.7-0.3i: worst coefficient change {dev:.2e}")

TAU = 0.3 + 1.1j
torus = SurfaceSpec.torus(TAU, CapFamily([
    AffineMap(0.11, 0.39 + 0.33j),
    AffineMap(0.11, 0.924 + 0.748j),
]))
dev = invariance_check(
    torus,
    lambda s: build_target(s, "combination", seed=3, order=3),
    0.05,
    M=3,
    checkpoints=(),
)
print(f"torus, random combination, shift 0.05: worst coefficient change {dev:.2e}")

print()
print("the shift must keep every cap inside the fundamental cell on the")
print("torus; a shift that pushes one out raises ValidationError instead")
print("of silently wrapping.")
