"""Sphere and torus surface data: Green's function, Schiffer kernel,
pole-difference forms, the holomorphic basis, homology cycles and periods.

Chart conventions. The sphere is the plane plus infinity; the base point q
defaults to infinity, which turns the Green's function into the elementary
log ratio. The torus is handled on the universal cover as the fundamental
parallelogram spanned by 1 and tau; caps must stay inside it by a margin,
while all torus quantities are built from lattice-reduced theta calls and
so are exactly doubly periodic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import theta
from .conformal import CapFamily, ConformalMap, MoebiusComposedMap
from .numerics import TWO_PI, NumericalError, ValidationError

PI = np.pi


@dataclass(frozen=True)
class OneForm:
    """A one-form a(w) dw, or its conjugate a(w)-bar dw-bar.

    ``evaluator`` always returns the analytic coefficient a(w); the
    ``conjugate`` flag says which of the two forms is meant. ``poles``
    lists known (location, order) pairs of the meromorphic tag.
    """

    evaluator: Callable
    conjugate: bool = False
    poles: tuple = ()
    label: str = ""

    def __call__(self, w):
        return self.evaluator(w)

    def pullback(self, chart_map: ConformalMap) -> Callable:
        """Analytic representative of the pullback: a(f(zeta)) f'(zeta)."""

        def rep(zeta):
            return np.asarray(self.evaluator(chart_map.evaluate(zeta)), dtype=complex) \
                * chart_map.derivative(zeta)

        return rep

    @staticmethod
    def combine(terms, label: str = "") -> "OneForm":
        """Linear combination sum_j c_j form_j of same-type forms."""
        terms = [(complex(c), f) for c, f in terms]
        if not terms:
            return OneForm(lambda w: np.zeros_like(np.asarray(w, dtype=complex)), label=label)
        flags = {f.conjugate for _, f in terms}
        if len(flags) > 1:
            raise ValidationError("cannot combine dz-forms with conjugated forms")
        poles = tuple(p for _, f in terms for p in f.poles)

        def ev(w, _terms=terms):
            w = np.asarray(w, dtype=complex)
            out = np.zeros(w.shape, dtype=complex)
            for c, f in _terms:
                out = out + c * np.asarray(f.evaluator(w), dtype=complex)
            return out

        return OneForm(ev, conjugate=flags.pop(), poles=poles, label=label)


@dataclass(frozen=True)
class Cycle:
    """A closed path with a precomputed quadrature rule.

    ``sum(a(nodes) * weights)`` is the path integral of a(w) dw. Boundary
    cycles are circles (trapezoid rule, spectral); lattice cycles are
    straight segments (Gauss-Legendre, spectral for analytic data).
    """

    kind: str
    index: int
    nodes: np.ndarray
    weights: np.ndarray


class SurfaceSpec:
    """A capped sphere or torus: genus, caps, base point q, normalization w0.

    Use the ``sphere`` and ``torus`` classmethods; both auto-place q and w0
    away from the caps when they are not given.
    """

    def __init__(self, genus, caps: CapFamily, tau=None, q=None, w0=None, margin: float = 0.05):
        if genus not in (0, 1):
            raise ValidationError(f"genus must be 0 or 1, got {genus}")
        self.genus = int(genus)
        self.caps = caps
        self.margin = float(margin)
        if self.genus == 1:
            if tau is None:
                raise ValidationError("torus surface needs a lattice parameter tau")
            tau = complex(tau)
            if not tau.imag > 0:
                raise ValidationError(f"lattice parameter needs Im tau > 0, got tau = {tau}")
            self.tau = tau
            self._check_caps_in_cell()
        else:
            if tau is not None:
                raise ValidationError("sphere surface takes no lattice parameter")
            self.tau = None
        self.q = None if q is None else complex(q)
        if self.genus == 1 and self.q is None:
            self.q = self._auto_point(avoid=())
        self.w0 = complex(w0) if w0 is not None else self._auto_point(
            avoid=() if self.q is None else (self.q,)
        )
        self._check_marked_points()
        self._cycle_base = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def sphere(cls, caps: CapFamily, q=None, w0=None) -> "SurfaceSpec":
        """Capped sphere; q = None places the base point at infinity."""
        return cls(0, caps, q=q, w0=w0)

    @classmethod
    def torus(cls, tau, caps: CapFamily, q=None, w0=None, margin: float = 0.05) -> "SurfaceSpec":
        return cls(1, caps, tau=tau, q=q, w0=w0, margin=margin)

    # -- geometry helpers -----------------------------------------------------

    @property
    def n_caps(self) -> int:
        return len(self.caps)

    def cell_coordinates(self, w):
        """Torus lattice coordinates (x, y) with w = x + y tau."""
        w = np.asarray(w, dtype=complex)
        y = w.imag / self.tau.imag
        x = w.real - y * self.tau.real
        return x, y

    def in_sigma(self, z) -> np.ndarray:
        """True where z lies outside every closed cap (torus: after reduction)."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.genus == 1:
            x, y = self.cell_coordinates(zz)
            zz = (x - np.floor(x)) + (y - np.floor(y)) * self.tau
        out = self.caps.which_cap(zz) == -1
        return out if np.ndim(z) else bool(out[0])

    def cycle_base(self) -> complex:
        """Deterministic base point for the a/b cycles, away from all caps."""
        if self.genus == 0:
            raise ValidationError("the sphere has no lattice cycles")
        if self._cycle_base is None:
            grid = np.linspace(0.02, 0.98, 25)
            t = np.linspace(0.0, 1.0, 64, endpoint=False)
            best, best_d = None, -1.0
            for x0 in grid:
                for y0 in grid:
                    base = x0 + y0 * self.tau
                    path = np.concatenate([base + t, base + t * self.tau])
                    d = float(np.min(self.distance_to_caps_reduced(path)))
                    if d > best_d:
                        best, best_d = base, d
            if best_d < 2 * self.margin:
                raise ValidationError(
                    f"no lattice cycle clears the caps (best clearance {best_d:.3g})"
                )
            self._cycle_base = best
        return self._cycle_base

    def distance_to_caps_reduced(self, w) -> np.ndarray:
        """Distance to the nearest cap boundary, torus points reduced first."""
        ww = np.atleast_1d(np.asarray(w, dtype=complex))
        if self.genus == 1:
            x, y = self.cell_coordinates(ww)
            # compare against the 3x3 block of lattice copies around the cell
            best = np.full(ww.shape, np.inf)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    shifted = (x - np.floor(x) + dx) + (y - np.floor(y) + dy) * self.tau
                    best = np.minimum(best, self.caps.distance_to_caps(shifted))
            return best
        return self.caps.distance_to_caps(ww)

    def translated(self, t: complex) -> "SurfaceSpec":
        """The same surface with every marked object shifted by t."""
        t = complex(t)
        moved = CapFamily(
            [MoebiusComposedMap((1.0, t, 0.0, 1.0), m) for m in self.caps],
            separation=self.caps.separation,
        )
        q = None if self.q is None else self.q + t
        return SurfaceSpec(self.genus, moved, tau=self.tau, q=q, w0=self.w0 + t, margin=self.margin)

    # -- validation -----------------------------------------------------------

    def _check_caps_in_cell(self):
        for k in range(len(self.caps)):
            x, y = self.cell_coordinates(self.caps.boundary_samples(k))
            if (
                x.min() < self.margin
                or x.max() > 1 - self.margin
                or y.min() < self.margin
                or y.max() > 1 - self.margin
            ):
                raise ValidationError(
                    f"cap {k} leaves the fundamental cell (margin {self.margin}); "
                    f"lattice coordinates span [{x.min():.3f}, {x.max():.3f}] x "
                    f"[{y.min():.3f}, {y.max():.3f}]"
                )

    def _check_marked_points(self):
        for name, p in (("q", self.q), ("w0", self.w0)):
            if p is None:
                continue
            if self.caps.which_cap(p) != -1 or self.caps.distance_to_caps(p) < 1e-6:
                raise ValidationError(f"marked point {name} = {p:.6g} lies in a closed cap")
        if self.q is not None and abs(self.q - self.w0) < 1e-9:
            raise ValidationError("q and w0 must be distinct")

    def _auto_point(self, avoid=()):
        if self.genus == 1:
            g = np.linspace(0.08, 0.92, 22)
            cand = (g[:, None] + g[None, :] * self.tau).ravel()
        else:
            b = np.concatenate([self.caps.boundary_samples(k) for k in range(len(self.caps))])
            span = max(float(np.max(np.abs(b - np.mean(b)))), 1.0)
            g = np.linspace(-2.5, 2.5, 21)
            cand = (np.mean(b) + span * (g[:, None] + 1j * g[None, :])).ravel()
        d = self.caps.distance_to_caps(cand)
        inside = self.caps.which_cap(cand) != -1
        d[inside] = -1.0
        for p in avoid:
            d = np.minimum(d, np.abs(cand - p))
        j = int(np.argmax(d))
        if d[j] <= 0:
            raise ValidationError("found no marked point clear of the caps")
        return complex(cand[j])

    def __repr__(self):
        kind = "sphere" if self.genus == 0 else f"torus(tau={self.tau:.4g})"
        return f"SurfaceSpec({kind}, {len(self.caps)} caps)"


def _guard_apart(a, b, what: str, tol: float = 1e-12):
    if np.any(np.abs(np.asarray(a) - np.asarray(b)) < tol):
        raise NumericalError(f"{what} (distance below {tol:.0e})")


_SURFACE_DEFAULT = object()


def green(surface: SurfaceSpec, w, z, q=_SURFACE_DEFAULT, w0=None):
    """Bipolar Green's function: -log singularity at z, +log at q, zero at w0.

    On the sphere with q at infinity this is log(|z - w0| / |w - z|); with
    finite q the full cross-ratio log. On the torus it is the theta
    quotient with the linear Im-correction that restores double
    periodicity, normalized by subtracting its own value at w0.
    """
    w = np.asarray(w, dtype=complex)
    z = complex(z)
    w0 = surface.w0 if w0 is None else complex(w0)
    if q is _SURFACE_DEFAULT:
        q = surface.q
    elif q is not None:
        q = complex(q)
    _guard_apart(w, z, "Green's function evaluated at its z-singularity")
    if surface.genus == 0:
        if q is None:
            return np.log(np.abs(z - w0)) - np.log(np.abs(w - z))
        _guard_apart(w, q, "Green's function evaluated at its q-singularity")
        # single log of the cross-ratio modulus: at w = w0 numerator and
        # denominator are the same doubles, so the value is exactly zero
        return np.log(
            (np.abs(z - w0) * np.abs(w - q)) / (np.abs(w - z) * np.abs(q - w0))
        )
    if q is None:
        raise ValidationError("torus Green's function needs a finite base point q")
    _guard_apart(w, q, "Green's function evaluated at its q-singularity")
    tau = surface.tau

    def g0(u):
        return (
            theta.log_abs(u - q, tau)
            - theta.log_abs(u - z, tau)
            - (TWO_PI * (z - q).imag / tau.imag) * np.asarray(u, dtype=complex).imag
        )

    return g0(w) - g0(w0)


def schiffer_kernel(surface: SurfaceSpec, w, z):
    """Kernel of the cap-to-surface operator; (2/pi) d2 G / dw dz.

    Sphere: exactly -(1/pi) (w - z)^(-2), independent of q and w0. Torus:
    (log theta1)''(w - z)/pi plus the constant 1/Im tau contributed by the
    periodicity correction; the base point drops out exactly.
    """
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    _guard_apart(w, z, "Schiffer kernel evaluated on its diagonal")
    if surface.genus == 0:
        return -1.0 / (PI * (w - z) ** 2)
    return theta.log_derivative2(w - z, surface.tau) / PI + 1.0 / surface.tau.imag


def beta_form(surface: SurfaceSpec, k: int) -> OneForm:
    """Pole-difference form: simple poles, residue +1 at center k, -1 at the
    last cap's center. Torus version is a theta log-derivative difference,
    which is exactly elliptic. Index k is 0-based and runs to n_caps - 2.
    """
    n = surface.n_caps
    if n < 2:
        raise ValidationError("pole-difference forms need at least two caps")
    if not 0 <= k < n - 1:
        raise ValidationError(f"cap index {k} out of range for {n} caps (0..{n - 2})")
    zk = complex(surface.caps.centers[k])
    zn = complex(surface.caps.centers[n - 1])
    if surface.genus == 0:

        def ev(w, zk=zk, zn=zn):
            w = np.asarray(w, dtype=complex)
            return 1.0 / (w - zk) - 1.0 / (w - zn)

    else:
        tau = surface.tau

        def ev(w, zk=zk, zn=zn, tau=tau):
            w = np.asarray(w, dtype=complex)
            return theta.log_derivative(w - zk, tau) - theta.log_derivative(w - zn, tau)

    return OneForm(ev, poles=((zk, 1), (zn, 1)), label=f"beta_{k}")


def gamma_basis(surface: SurfaceSpec) -> list:
    """Holomorphic one-form basis, a-normalized: [] on the sphere, [dw] on
    the torus (its a-period along [base, base + 1] is exactly 1)."""
    if surface.genus == 0:
        return []

    def ev(w):
        return np.ones_like(np.asarray(w, dtype=complex))

    return [OneForm(ev, label="gamma_0")]


def period_matrix(surface: SurfaceSpec) -> np.ndarray:
    """b-periods of the a-normalized basis: empty (sphere) or [[tau]]."""
    if surface.genus == 0:
        return np.zeros((0, 0), dtype=complex)
    return np.array([[surface.tau]], dtype=complex)


def boundary_cycle(surface: SurfaceSpec, k: int, radius: float = 1.0, n: int = 512) -> Cycle:
    """Circle |zeta| = radius in cap k's disk chart, winding once around
    the cap center, counterclockwise."""
    if not 0 <= k < surface.n_caps:
        raise ValidationError(f"cap index {k} out of range")
    f = surface.caps[k]
    zeta = radius * np.exp(1j * TWO_PI * np.arange(n) / n)
    nodes = f.evaluate(zeta)
    weights = (TWO_PI * 1j / n) * zeta * f.derivative(zeta)
    return Cycle("boundary", k, nodes, weights)


def _segment_cycle(kind: str, base: complex, direction: complex, n: int) -> Cycle:
    x, gw = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (x + 1.0)
    nodes = base + t * direction
    weights = (0.5 * gw) * direction
    return Cycle(kind, 0, nodes.astype(complex), weights.astype(complex))


def a_cycle(surface: SurfaceSpec, base=None, n: int = 64) -> Cycle:
    """Lattice cycle [base, base + 1] with a Gauss-Legendre rule."""
    if surface.genus == 0:
        raise ValidationError("the sphere has no lattice cycles")
    base = surface.cycle_base() if base is None else complex(base)
    return _segment_cycle("a", base, 1.0, n)


def b_cycle(surface: SurfaceSpec, base=None, n: int = 64) -> Cycle:
    """Lattice cycle [base, base + tau] with a Gauss-Legendre rule."""
    if surface.genus == 0:
        raise ValidationError("the sphere has no lattice cycles")
    base = surface.cycle_base() if base is None else complex(base)
    return _segment_cycle("b", base, surface.tau, n)


def period(form: OneForm, cycle: Cycle) -> complex:
    """Path integral of the form over the cycle's quadrature rule."""
    if form.poles:
        locs = np.array([p for p, _ in form.poles])
        gap = np.min(np.abs(cycle.nodes[None, :] - locs[:, None]))
        if gap < 1e-8:
            raise NumericalError(f"a pole sits on the {cycle.kind} cycle (gap {gap:.2e})")
    vals = np.asarray(form(cycle.nodes), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise NumericalError(f"form not finite on the {cycle.kind} cycle")
    out = np.sum(vals * cycle.weights)
    return complex(np.conj(out)) if form.conjugate else complex(out)
