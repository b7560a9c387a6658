"""The cap-to-surface integral operator, by area quadrature and by the
contour reduction.

The operator takes conjugate-analytic data on the caps to a holomorphic
coefficient on the complement: with K the Schiffer kernel,

    (T datum)(z) = - sum_k  integral over cap k of  K(w, z) * datum  dA(w),

pulled back to the unit disk through each cap map. For the monomial datum
of order m on cap k the integrand is holomorphic in an annulus, so the
area integral collapses to a circle integral (the contour route); both are
implemented and tested against each other. The contour route is the
default evaluation path: it is spectrally accurate and much cheaper.
"""

from __future__ import annotations

import numpy as np

from .conformal import winding_number
from .numerics import TWO_PI, DiskGrid, NumericalError, ValidationError
from .surface import SurfaceSpec, schiffer_kernel

PI = np.pi


class CapDatum:
    """Conjugate-analytic one-form data on the caps, in disk coordinates.

    ``analytic`` maps cap index -> callable b(zeta); the datum on cap k is
    conj(b_k(zeta)) d(conj zeta). Caps without an entry carry zero.
    """

    def __init__(self, analytic: dict):
        self.analytic = dict(analytic)
        for k, fn in self.analytic.items():
            if not callable(fn):
                raise ValidationError(f"datum for cap {k} is not callable")

    @classmethod
    def monomial(cls, k: int, m: int) -> "CapDatum":
        """The order-m basis datum on cap k: b(zeta) = m zeta^(m-1),
        i.e. the conjugate differential of zeta-bar^m."""
        if m < 1:
            raise ValidationError(f"monomial datum needs m >= 1, got {m}")

        def b(zeta, m=m):
            return m * np.asarray(zeta, dtype=complex) ** (m - 1)

        return cls({k: b})

    @classmethod
    def linear(cls, terms) -> "CapDatum":
        """Linear combination sum_j c_j datum_j.

        The combination acts on the d(conj zeta) coefficients; since those
        are conj(b_k), the stored analytic parts pick up conj(c_j).
        """
        merged: dict = {}
        for c, datum in terms:
            cbar = np.conj(complex(c))
            for k, fn in datum.analytic.items():
                prev = merged.get(k)
                if prev is None:
                    merged[k] = (
                        lambda zeta, cbar=cbar, fn=fn: cbar * np.asarray(fn(zeta), dtype=complex)
                    )
                else:
                    merged[k] = (
                        lambda zeta, cbar=cbar, fn=fn, prev=prev: prev(zeta)
                        + cbar * np.asarray(fn(zeta), dtype=complex)
                    )
        return cls(merged)

    def dbar_coefficient(self, k: int, zeta) -> np.ndarray:
        """The d(conj zeta) coefficient on cap k at the disk points zeta."""
        zeta = np.asarray(zeta, dtype=complex)
        fn = self.analytic.get(k)
        if fn is None:
            return np.zeros(zeta.shape, dtype=complex)
        return np.conj(np.asarray(fn(zeta), dtype=complex))

    def caps(self):
        return sorted(self.analytic)


def _require_in_sigma(surface: SurfaceSpec, z: np.ndarray):
    zz = np.atleast_1d(z)
    ok = surface.in_sigma(zz)
    if not np.all(ok):
        j = int(np.flatnonzero(~ok)[0])
        raise ValidationError(f"evaluation point z = {zz[j]:.6g} lies inside a closed cap")


def apply_schiffer(surface: SurfaceSpec, datum: CapDatum, z, grid: DiskGrid | None = None,
                   check: bool = True):
    """Area-quadrature evaluation of the operator at points z in the
    cap complement.

    With ``check`` on, the value is recomputed on a 1.5x refined grid and
    a disagreement beyond 1e-8 raises; this is the self-report for grids
    too coarse for the datum's oscillation.
    """
    grid = DiskGrid() if grid is None else grid
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    _require_in_sigma(surface, zz)
    val = _apply_area(surface, datum, zz, grid)
    if check:
        ref = _apply_area(surface, datum, zz, grid.refined())
        err = float(np.max(np.abs(val - ref)))
        if err > 1e-8 * max(1.0, float(np.max(np.abs(ref)))):
            raise NumericalError(
                f"area quadrature too coarse: refinement moved values by {err:.3e}"
            )
        val = ref
    return val if np.ndim(z) else complex(val[0])


def _apply_area(surface, datum, zz, grid):
    zeta = grid.nodes
    out = np.zeros(zz.shape, dtype=complex)
    for k in datum.caps():
        f = surface.caps[k]
        w = f.evaluate(zeta)
        dens = datum.dbar_coefficient(k, zeta) * f.derivative(zeta)
        if not np.all(np.isfinite(dens)):
            raise NumericalError(f"datum not finite on cap {k}")
        kern = schiffer_kernel(surface, w[None, :], zz[:, None])
        out += -np.sum(grid.weights[None, :] * kern * dens[None, :], axis=1)
    return out


def contour_radius(m: int) -> float:
    """Default contour radius for the order-m monomial datum.

    The integrand carries zeta^(-m), which amplifies roundoff like
    r0^(-m); pushing the radius out with m keeps the amplification at a
    few orders of magnitude while staying clear of |zeta| = 1.
    """
    return float(min(max(0.5, m / (m + 6.0)), 0.92))


def schiffer_contour(surface: SurfaceSpec, k: int, m: int, z, r0: float | None = None,
                     n: int = 256):
    """Contour-reduced evaluation of the operator on the order-m monomial
    datum of cap k.

    Equals ``apply_schiffer`` on the cap complement and extends it
    meromorphically through cap k: the value is the circle integral

        -(pi/n) * sum_j K(f(zeta_j), z) zeta_j^(1-m) f'(zeta_j),

    on |zeta_j| = r0, valid for any z strictly outside the image of that
    circle. Radius independence on the exact annulus is a property the
    checks verify rather than assume.
    """
    if m < 1:
        raise ValidationError(f"monomial order must be >= 1, got {m}")
    if not 0 <= k < surface.n_caps:
        raise ValidationError(f"cap index {k} out of range")
    r0 = contour_radius(m) if r0 is None else float(r0)
    if not 0 < r0 < 1:
        raise ValidationError(f"contour radius must sit in (0, 1), got {r0}")
    f = surface.caps[k]
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    zeta = r0 * np.exp(1j * TWO_PI * np.arange(n) / n)
    w = f.evaluate(zeta)
    _guard_outside_contour(surface, w, zz)
    vals = -(PI / n) * np.sum(
        schiffer_kernel(surface, w[None, :], zz[:, None])
        * (zeta ** (1 - m) * f.derivative(zeta))[None, :],
        axis=1,
    )
    return vals if np.ndim(z) else complex(vals[0])


def _guard_outside_contour(surface: SurfaceSpec, contour_image: np.ndarray, zz: np.ndarray):
    # reduce torus points into the fundamental cell before the winding test;
    # the kernel itself is elliptic, so lattice copies are legitimate inputs
    pts = zz
    if surface.genus == 1:
        x, y = surface.cell_coordinates(zz)
        pts = (x - np.floor(x)) + (y - np.floor(y)) * surface.tau
    gap = np.min(np.abs(contour_image[None, :] - pts[:, None]), axis=1)
    scale = float(np.max(np.abs(contour_image - np.mean(contour_image))))
    if np.any(gap < 1e-6 * max(scale, 1.0)):
        j = int(np.argmin(gap))
        raise ValidationError(f"z = {zz[j]:.6g} sits on the evaluation contour")
    inside = winding_number(contour_image, pts) != 0
    if np.any(inside):
        j = int(np.flatnonzero(inside)[0])
        raise ValidationError(
            f"z = {zz[j]:.6g} lies inside the evaluation contour; "
            f"shrink r0 below {float(np.min(np.abs(pts[j] - np.mean(contour_image)))):.3g}"
        )
