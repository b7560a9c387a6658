"""Analytic cap maps from the unit disk and families of disjoint caps.

Every map here sends the closed unit disk injectively onto an analytic
Jordan region, with f(0) the distinguished center. Injectivity is enforced
for the documented parameter ranges and spot-checked on boundary samples;
the derivative is checked to be nonvanishing on a fixed interior grid.
"""

from __future__ import annotations

import numpy as np

from .numerics import TWO_PI, NumericalError, PowerSeries, ValidationError, extract_taylor

# evaluation is allowed on the closed disk; anything beyond is a caller bug
_DOMAIN_SLACK = 1e-12


def winding_number(polygon: np.ndarray, z) -> np.ndarray:
    """Winding number of a closed sample polygon around each point of ``z``.

    The polygon is given by its vertices in order (the closing edge back to
    the first vertex is implicit). Points on or extremely near the polygon
    give unreliable results; callers guard with a distance check.
    """
    p = np.asarray(polygon, dtype=complex)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    d = p[None, :] - zz[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.roll(d, -1, axis=1) / d
        total = np.nansum(np.angle(ratio), axis=1) / TWO_PI
    out = np.round(total.real).astype(int)
    return out if np.ndim(z) else out[0]


class ConformalMap:
    """Base class: injective analytic map of the closed unit disk.

    Subclasses implement ``_evaluate`` and ``_derivative`` on raw arrays.
    """

    kind: str = "abstract"

    def __init__(self, parameters):
        self.parameters = tuple(complex(p) for p in parameters)
        self._seed_table = None
        self._taylor_cache = {}
        self._validate_construction()
        self.center = complex(self._evaluate(np.zeros(1))[0])

    # -- subclass surface ---------------------------------------------------

    def _evaluate(self, zeta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derivative(self, zeta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- public api ----------------------------------------------------------

    def evaluate(self, zeta):
        z = self._check_domain(zeta)
        out = self._evaluate(z)
        return out if np.ndim(zeta) else complex(out[0])

    def derivative(self, zeta):
        z = self._check_domain(zeta)
        out = self._derivative(z)
        return out if np.ndim(zeta) else complex(out[0])

    def boundary(self, n: int = 512, radius: float = 1.0) -> np.ndarray:
        """Image samples of the circle |zeta| = radius."""
        zeta = radius * np.exp(1j * TWO_PI * np.arange(n) / n)
        return self.evaluate(zeta)

    def scale(self) -> float:
        """Rough linear size of the image, used for relative tolerances."""
        return float(np.max(np.abs(self.boundary(128) - self.center)))

    def invert(self, w, tol: float = 1e-12, max_iter: int = 50):
        """Newton solve of f(zeta) = w, seeded from a forward-sample table.

        Accepts scalars or arrays. Raises when any point fails to reach
        |f(zeta) - w| < tol * max(1, |w|) within ``max_iter`` steps, carrying
        the last iterate and residual.
        """
        ww = np.atleast_1d(np.asarray(w, dtype=complex))
        table_z, table_w = self._seeds()
        # nearest forward sample by modulus of difference
        idx = np.argmin(np.abs(table_w[None, :] - ww[:, None]), axis=1)
        zeta = table_z[idx].copy()
        target = tol * np.maximum(1.0, np.abs(ww))
        for _ in range(max_iter):
            res = self._evaluate(zeta) - ww
            if np.all(np.abs(res) < target):
                break
            step = res / self._derivative(zeta)
            # keep iterates inside the closed disk where the map is trusted
            nxt = zeta - step
            over = np.abs(nxt) > 1.0
            if over.any():
                nxt[over] = nxt[over] / np.abs(nxt[over])
            zeta = nxt
        res = np.abs(self._evaluate(zeta) - ww)
        if np.any(res >= target):
            j = int(np.argmax(res))
            raise NumericalError(
                f"inverse iteration stalled at zeta = {zeta[j]:.6g} "
                f"with residual {res[j]:.3e} for w = {ww[j]:.6g}"
            )
        return zeta if np.ndim(w) else complex(zeta[0])

    def taylor(self, order: int, radius: float = 0.5) -> PowerSeries:
        key = (order, radius)
        if key not in self._taylor_cache:
            self._taylor_cache[key] = extract_taylor(self._evaluate, 0.0, radius, order)
        return self._taylor_cache[key]

    # -- internals ------------------------------------------------------------

    def _check_domain(self, zeta) -> np.ndarray:
        z = np.atleast_1d(np.asarray(zeta, dtype=complex))
        r = np.abs(z)
        if np.any(r > 1.0 + _DOMAIN_SLACK):
            raise ValidationError(
                f"map evaluated outside the closed unit disk (|zeta| = {float(r.max()):.6g})"
            )
        return z

    def _seeds(self):
        if self._seed_table is None:
            r = (np.arange(64) + 0.5) / 64.0
            th = TWO_PI * np.arange(64) / 64.0
            zeta = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
            self._seed_table = (zeta, self._evaluate(zeta))
        return self._seed_table

    def _validate_construction(self):
        # derivative must not vanish anywhere we will ever evaluate it
        r = (np.arange(32) + 1.0) / 32.0
        th = TWO_PI * np.arange(64) / 64.0
        grid = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
        d = np.abs(self._derivative(grid))
        ref = float(np.median(d))
        if np.any(d < 1e-8 * max(ref, 1e-30)):
            raise ValidationError(
                f"{self.kind} map derivative vanishes on the disk "
                f"(min {float(d.min()):.3e} at |zeta| <= 1)"
            )
        # argument principle: zeros of f' inside the disk equal the winding
        # of f' over the boundary around 0, which must be 0
        circle = np.exp(1j * TWO_PI * np.arange(256) / 256)
        bd = self._derivative(circle)
        if winding_number(bd, 0.0) != 0:
            raise ValidationError(f"{self.kind} map derivative vanishes inside the disk")
        # argument principle again: the center must have exactly one preimage
        b = self._evaluate(circle)
        if winding_number(b, self._evaluate(np.zeros(1))[0]) != 1:
            raise ValidationError(f"{self.kind} map covers its center more than once")
        # injectivity spot check on the boundary (heuristic, not a proof)
        diff = np.abs(b[None, :] - b[:, None]) + np.eye(256)
        if float(diff.min()) < 1e-9 * max(float(np.abs(b).max()), 1.0):
            raise ValidationError(f"{self.kind} map is not injective on boundary samples")

    def __repr__(self):
        pars = ", ".join(f"{p:.6g}" for p in self.parameters)
        return f"{type(self).__name__}({pars})"


class AffineMap(ConformalMap):
    """f(zeta) = offset + scale * zeta."""

    kind = "affine"

    def __init__(self, scale: complex, offset: complex = 0.0):
        if abs(complex(scale)) == 0:
            raise ValidationError("affine scale must be nonzero")
        super().__init__((scale, offset))

    def _evaluate(self, zeta):
        s, b = self.parameters
        return b + s * zeta

    def _derivative(self, zeta):
        s, _ = self.parameters
        return np.full_like(zeta, s)


class JoukowskiEllipseMap(ConformalMap):
    """Oval cap f(zeta) = offset + scale * zeta / (1 - a zeta^2).

    This is the inversion of the exterior Joukowski map u -> u - a/u; the
    image boundary is an analytic oval. Injective with nonvanishing
    derivative on the closed disk for |a| < 1; the constructor enforces
    |a| <= 0.8 to keep the nearest singularity (at |zeta| = |a|^(-1/2))
    a safe distance outside.
    """

    kind = "joukowski-ellipse"

    def __init__(self, a: complex, scale: complex = 1.0, offset: complex = 0.0):
        if abs(complex(a)) > 0.8:
            raise ValidationError(f"joukowski parameter needs |a| <= 0.8, got |a| = {abs(a):.3g}")
        if abs(complex(scale)) == 0:
            raise ValidationError("joukowski scale must be nonzero")
        super().__init__((a, scale, offset))

    def _evaluate(self, zeta):
        a, s, b = self.parameters
        return b + s * zeta / (1.0 - a * zeta ** 2)

    def _derivative(self, zeta):
        a, s, _ = self.parameters
        return s * (1.0 + a * zeta ** 2) / (1.0 - a * zeta ** 2) ** 2


class PolynomialCapMap(ConformalMap):
    """f(zeta) = offset + sum_j c_j zeta^j, j >= 1.

    The constructor only spot-checks injectivity; coefficients with
    sum_j j |c_j| < |c_1| are injective by the classic bound, and the
    bundled configurations stay well inside it.
    """

    kind = "polynomial-perturbation"

    def __init__(self, coefficients, offset: complex = 0.0):
        coefficients = tuple(complex(c) for c in coefficients)
        if not coefficients or coefficients[0] == 0:
            raise ValidationError("polynomial cap needs a nonzero linear coefficient")
        super().__init__((offset,) + coefficients)

    def _evaluate(self, zeta):
        b = self.parameters[0]
        poly = np.concatenate(([0.0], self.parameters[1:]))
        return b + np.polynomial.polynomial.polyval(zeta, poly)

    def _derivative(self, zeta):
        poly = np.concatenate(([0.0], self.parameters[1:]))
        dpoly = np.polynomial.polynomial.polyder(poly)
        return np.polynomial.polynomial.polyval(zeta, dpoly)


class MoebiusComposedMap(ConformalMap):
    """g(f0(zeta)) for a Moebius g(w) = (a w + b)/(c w + d) and a base map f0.

    Used to transport cap families under ambient automorphisms; the Moebius
    pole must stay outside the image of the base map.
    """

    kind = "moebius-composed"

    def __init__(self, moebius, base: ConformalMap):
        a, b, c, d = (complex(t) for t in moebius)
        if abs(a * d - b * c) < 1e-14:
            raise ValidationError("moebius determinant vanishes")
        self.base = base
        super().__init__((a, b, c, d))

    def _evaluate(self, zeta):
        a, b, c, d = self.parameters
        w = self.base._evaluate(zeta)
        denom = c * w + d
        if np.any(np.abs(denom) < 1e-12):
            raise ValidationError("moebius pole meets the cap image")
        return (a * w + b) / denom

    def _derivative(self, zeta):
        a, b, c, d = self.parameters
        w = self.base._evaluate(zeta)
        denom = c * w + d
        if np.any(np.abs(denom) < 1e-12):
            raise ValidationError("moebius pole meets the cap image")
        return (a * d - b * c) / denom ** 2 * self.base._derivative(zeta)


_FAMILIES = {
    "affine": AffineMap,
    "joukowski-ellipse": JoukowskiEllipseMap,
    "polynomial-perturbation": PolynomialCapMap,
}


def make_map(kind: str, **params) -> ConformalMap:
    """Build a map from a family name and keyword parameters.

    Accepted kinds and parameters:
      affine: scale, offset
      joukowski-ellipse: a, scale, offset
      polynomial-perturbation: coefficients (list, linear term first), offset
    """
    if kind not in _FAMILIES:
        raise ValidationError(f"unknown map kind {kind!r}; choose from {sorted(_FAMILIES)}")
    try:
        return _FAMILIES[kind](**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {kind} map: {exc}") from None


class CapFamily:
    """An ordered list of cap maps with pairwise disjoint closed images.

    Disjointness is verified on boundary samples: the polygons must stay at
    least ``separation`` apart and no boundary point of one cap may fall
    inside another (winding-number test).
    """

    def __init__(self, maps, separation: float = 0.02, n_check: int = 512):
        maps = list(maps)
        if not maps:
            raise ValidationError("cap family needs at least one map")
        self.maps = maps
        self.separation = float(separation)
        self._boundaries = [m.boundary(n_check) for m in maps]
        self._validate()

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, k):
        return self.maps[k]

    @property
    def centers(self) -> np.ndarray:
        return np.array([m.center for m in self.maps])

    def boundary_samples(self, k: int) -> np.ndarray:
        return self._boundaries[k]

    def which_cap(self, z) -> np.ndarray:
        """Index of the cap whose closed image contains each point, else -1."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.full(zz.shape, -1, dtype=int)
        for k, poly in enumerate(self._boundaries):
            near = np.min(np.abs(poly[None, :] - zz[:, None]), axis=1) < 1e-9
            inside = winding_number(poly, zz) != 0
            out[near | inside] = k
        return out if np.ndim(z) else int(out[0])

    def distance_to_caps(self, z) -> np.ndarray:
        """Distance from each point to the nearest cap boundary sample."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        d = np.min(
            np.stack([np.min(np.abs(p[None, :] - zz[:, None]), axis=1) for p in self._boundaries]),
            axis=0,
        )
        return d if np.ndim(z) else float(d[0])

    def _validate(self):
        for i in range(len(self.maps)):
            for j in range(i + 1, len(self.maps)):
                pi, pj = self._boundaries[i], self._boundaries[j]
                gap = float(np.min(np.abs(pi[None, :] - pj[:, None])))
                if gap < self.separation:
                    raise ValidationError(
                        f"caps {i} and {j} come within {gap:.4g} < separation {self.separation}"
                    )
                if np.any(winding_number(pj, pi) != 0) or np.any(winding_number(pi, pj) != 0):
                    raise ValidationError(f"caps {i} and {j} overlap (one contains the other)")
