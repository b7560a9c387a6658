"""Contour and area quadrature, series extraction, regularized least squares.

Everything downstream runs on three discretizations: trapezoid sums on
circles (spectrally accurate for analytic integrands), Gauss-Legendre-by-
radius grids on the unit disk, and FFT reads of Taylor/Laurent coefficients
from equispaced circle samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class NumericalError(Exception):
    """A quadrature or solve failed in a way a retry will not fix."""


class ValidationError(Exception):
    """Inputs violate a documented precondition or parameter range."""


@dataclass(frozen=True)
class CircleContour:
    """Equispaced nodes on a circle, oriented counterclockwise.

    Parameters
    ----------
    center, radius : circle geometry, radius > 0.
    n : node count, at least 16. Trapezoid sums over these nodes integrate
        analytic functions with spectral accuracy.
    """

    center: complex
    radius: float
    n: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise ValidationError(f"contour radius must be positive, got {self.radius}")
        if self.n < 16:
            raise ValidationError(f"contour needs at least 16 nodes, got {self.n}")

    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    def nodes(self) -> np.ndarray:
        return self.center + self.radius * np.exp(1j * self.angles())

    def dw(self) -> np.ndarray:
        # weights for sum(f(nodes) * dw) ~ integral of f dw, counterclockwise
        return (TWO_PI * 1j * self.radius / self.n) * np.exp(1j * self.angles())


def circle_integral(integrand, contour: CircleContour) -> complex:
    """Contour integral of ``integrand`` over ``contour`` by the trapezoid rule."""
    w = contour.nodes()
    vals = np.asarray(integrand(w), dtype=complex)
    bad = ~np.isfinite(vals)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NumericalError(f"integrand not finite at node {j} (w = {w[j]:.6g})")
    return complex(np.sum(vals * contour.dw()))


@dataclass(frozen=True)
class DiskGrid:
    """Quadrature grid on the closed unit disk.

    Gauss-Legendre in radius on [0, 1), equispaced in angle. Weights carry
    the area element r dr dtheta, so ``integrate(1)`` returns pi exactly up
    to the Legendre rule's reach.
    """

    n_radial: int = 48
    n_angular: int = 96

    def __post_init__(self):
        if self.n_radial < 2 or self.n_angular < 4:
            raise ValidationError(
                f"grid too small: {self.n_radial} radial x {self.n_angular} angular"
            )

    def _build(self):
        x, gw = np.polynomial.legendre.leggauss(self.n_radial)
        r = 0.5 * (x + 1.0)
        wr = 0.5 * gw
        theta = TWO_PI * np.arange(self.n_angular) / self.n_angular
        nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
        weights = np.broadcast_to(
            (TWO_PI / self.n_angular) * (wr * r)[:, None],
            (self.n_radial, self.n_angular),
        ).ravel()
        return nodes, weights

    @property
    def nodes(self) -> np.ndarray:
        return self._build()[0]

    @property
    def weights(self) -> np.ndarray:
        return self._build()[1]

    def integrate(self, values: np.ndarray) -> complex:
        vals = np.asarray(values, dtype=complex).ravel()
        w = self.weights
        if vals.shape != w.shape:
            raise ValidationError(f"expected {w.size} samples, got {vals.size}")
        return complex(np.sum(w * vals))

    def refined(self) -> "DiskGrid":
        return DiskGrid(
            n_radial=int(np.ceil(1.5 * self.n_radial)),
            n_angular=int(np.ceil(1.5 * self.n_angular)),
        )


@dataclass(frozen=True)
class PowerSeries:
    """Finite Taylor polynomial around ``center``, valid on |z - center| < radius."""

    center: complex
    coefficients: np.ndarray
    radius: float

    def __call__(self, z):
        u = np.asarray(z, dtype=complex) - self.center
        return np.polynomial.polynomial.polyval(u, self.coefficients)

    def derivative(self) -> "PowerSeries":
        c = np.polynomial.polynomial.polyder(self.coefficients)
        return PowerSeries(self.center, np.asarray(c, dtype=complex), self.radius)

    def __len__(self) -> int:
        return len(self.coefficients)


def _circle_samples(fn, center: complex, radius: float, n: int) -> np.ndarray:
    zeta = center + radius * np.exp(1j * TWO_PI * np.arange(n) / n)
    vals = np.asarray(fn(zeta), dtype=complex)
    bad = ~np.isfinite(vals)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NumericalError(f"samples not finite at node {j} (w = {zeta[j]:.6g})")
    return vals


def laurent_from_samples(samples: np.ndarray, radius: float, orders) -> np.ndarray:
    """Laurent coefficients c_k, k in ``orders``, from equispaced circle samples.

    c_k = (1/2 pi i) * integral of f(w) (w - center)^(-k-1) dw, read off as
    the k-th discrete Fourier mode divided by radius**k. Orders beyond the
    alias-free band |k| < n/2 are rejected.
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.size
    orders = np.asarray(list(orders), dtype=int)
    if orders.size and np.max(np.abs(orders)) >= n // 2:
        raise ValidationError(
            f"order {int(np.max(np.abs(orders)))} needs more than {n} samples"
        )
    fhat = np.fft.fft(samples) / n
    return fhat[np.mod(orders, n)] * radius ** (-orders.astype(float))


def laurent_coefficients(fn, center: complex, radius: float, orders, n: int = 512) -> np.ndarray:
    """Sample ``fn`` on a circle and read off Laurent coefficients at ``orders``."""
    return laurent_from_samples(_circle_samples(fn, center, radius, n), radius, orders)


def extract_taylor(fn, center: complex, radius: float, order: int, n: int | None = None) -> PowerSeries:
    """Taylor coefficients c_0..c_order of ``fn`` around ``center``.

    ``fn`` must be analytic on the closed disk of the given radius; the
    coefficients are discrete Fourier transforms of circle samples divided
    by radius powers.
    """
    if order < 0:
        raise ValidationError(f"order must be nonnegative, got {order}")
    if n is None:
        n = max(128, 1 << int(np.ceil(np.log2(4 * (order + 1)))))
    coeffs = laurent_coefficients(fn, center, radius, range(order + 1), n=n)
    return PowerSeries(center, coeffs, radius)


def fft_antiderivative(samples: np.ndarray, mean_tol: float = 1e-7) -> np.ndarray:
    """Periodic antiderivative (in the angle theta) of equispaced samples.

    The input must have (numerically) zero mean, else no periodic primitive
    exists; the returned samples are normalized to zero mean themselves.
    """
    g = np.asarray(samples, dtype=complex)
    n = g.size
    ghat = np.fft.fft(g)
    scale = max(1.0, float(np.max(np.abs(g))))
    if abs(ghat[0]) / n > mean_tol * scale:
        raise NumericalError(
            f"samples have nonzero mean {ghat[0] / n:.3e}; no periodic antiderivative"
        )
    k = np.fft.fftfreq(n, d=1.0 / n)
    out = np.zeros_like(ghat)
    out[1:] = ghat[1:] / (1j * k[1:])
    return np.fft.ifft(out)


@dataclass(frozen=True)
class LeastSquaresResult:
    coefficients: np.ndarray
    condition: float
    regularized: bool


def least_squares(gram: np.ndarray, rhs: np.ndarray, condition_limit: float = 1e12) -> LeastSquaresResult:
    """Solve gram @ x = rhs for Hermitian positive semidefinite ``gram``.

    Solved by eigendecomposition. When the condition estimate exceeds
    ``condition_limit`` a Tikhonov term 1e-12 * trace is added and the
    result is flagged, not rejected.
    """
    G = np.asarray(gram, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] != b.size:
        raise ValidationError(f"shape mismatch: gram {G.shape}, rhs {b.shape}")
    hermitian_defect = np.max(np.abs(G - G.conj().T)) if G.size else 0.0
    if hermitian_defect > 1e-8 * max(1.0, float(np.max(np.abs(G)))):
        raise ValidationError(f"gram matrix is not Hermitian (defect {hermitian_defect:.3e})")
    G = 0.5 * (G + G.conj().T)
    ev, V = np.linalg.eigh(G)
    lam_max = float(ev[-1]) if ev.size else 0.0
    lam_min = float(ev[0]) if ev.size else 0.0
    condition = np.inf if lam_min <= 0 else lam_max / lam_min
    regularized = bool(condition > condition_limit)
    shift = 1e-12 * float(np.sum(ev)) if regularized else 0.0
    denom = ev + shift
    if np.any(denom <= 0):
        # semidefinite with exact zero modes: drop them instead of dividing
        denom = np.where(denom <= 0, np.inf, denom)
    x = V @ ((V.conj().T @ b) / denom)
    return LeastSquaresResult(coefficients=x, condition=condition, regularized=regularized)


def area_pairing(form1, form2, chart_map, grid: DiskGrid, check: bool = True) -> complex:
    """L2 pairing of two one-forms over the image of ``chart_map``.

    Computes i * integral of form1 wedge star-conjugate(form2) by pullback
    to the unit disk; for two holomorphic forms this is the literal
    i * integral of form1 wedge conjugate(form2), the Bergman inner
    product. Forms of opposite type (dz versus conjugate) pair to zero.
    """
    val = _area_pairing_once(form1, form2, chart_map, grid)
    if check:
        val2 = _area_pairing_once(form1, form2, chart_map, grid.refined())
        scale = max(1.0, abs(val2))
        if abs(val - val2) > 1e-8 * scale:
            raise NumericalError(
                f"grid too coarse: pairing moved by {abs(val - val2):.3e} under refinement"
            )
        val = val2
    return val


def _area_pairing_once(form1, form2, chart_map, grid: DiskGrid) -> complex:
    zeta = grid.nodes
    w = chart_map.evaluate(zeta)
    jac = chart_map.derivative(zeta)
    g1 = np.asarray(form1(w), dtype=complex) * jac
    g2 = np.asarray(form2(w), dtype=complex) * jac
    c1 = bool(getattr(form1, "conjugate", False))
    c2 = bool(getattr(form2, "conjugate", False))
    if c1 != c2:
        return 0.0 + 0.0j
    val = 2.0 * grid.integrate(g1 * np.conj(g2))
    return complex(np.conj(val)) if c1 else complex(val)
