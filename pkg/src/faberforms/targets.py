"""Built-in target families for decomposition experiments.

Each family records what it knows about its own coefficients in
``TargetForm.known`` so tests and reports can compare recovered values
against construction values without re-deriving them:

    basis        one cap basis form; everything zero except one h entry
    pole         double pole inside a cap; on the sphere the exact h
                 column is eta^(m-1)/f'(eta) by the generating identity,
                 on the torus the lattice coefficient is -s/Im(tau)
    combination  explicit or seeded finite combination of basis terms
"""

from __future__ import annotations

import numpy as np

from .faber import faber_form
from .numerics import ValidationError
from .series import TargetForm
from .surface import OneForm, SurfaceSpec, beta_form, gamma_basis
from .theta import log_derivative2

FAMILIES = ("basis", "pole", "combination")


def build_target(surface: SurfaceSpec, kind: str, **params) -> TargetForm:
    if kind == "basis":
        return _basis_target(surface, **params)
    if kind == "pole":
        return _pole_target(surface, **params)
    if kind == "combination":
        return _combination_target(surface, **params)
    raise ValidationError(f"unknown target family {kind!r}; choose from {FAMILIES}")


def _basis_target(surface, k: int = 0, m: int = 1, max_order: int = 24) -> TargetForm:
    el = faber_form(surface, int(k), int(m), max_order=max_order)
    known = {
        "epsilon": np.zeros(surface.n_caps, dtype=complex),
        "c": np.zeros(surface.genus, dtype=complex),
        "h": {(int(m), int(k)): 1.0 + 0.0j},
    }
    return TargetForm(el.form, label=f"basis[{k},{m}]", known=known)


def _pole_target(surface, cap: int = 0, eta: complex = 0.5,
                 strength: complex = 1.0) -> TargetForm:
    k = int(cap)
    if not 0 <= k < surface.n_caps:
        raise ValidationError(f"cap index {k} out of range")
    eta = complex(eta)
    if not abs(eta) < 0.9:
        raise ValidationError(f"pole preimage must satisfy |eta| < 0.9, got {abs(eta):.3f}")
    s = complex(strength)
    f = surface.caps[k]
    a = complex(f.evaluate(eta))
    known = {
        "epsilon": np.zeros(surface.n_caps, dtype=complex),
        "c": np.zeros(surface.genus, dtype=complex),
    }
    if surface.genus == 0:
        def ev(z, a=a, s=s):
            return s / (np.asarray(z, dtype=complex) - a) ** 2

        # generating identity: sum_m alpha^m eta^(m-1) = f'(eta) dz/(z-a)^2
        fp = complex(f.derivative(eta))
        known["h_column"] = (k, lambda m, s=s, eta=eta, fp=fp: s * eta ** (m - 1) / fp)
    else:
        tau = surface.tau

        def ev(z, a=a, s=s, tau=tau):
            return (s / np.pi) * log_derivative2(np.asarray(z, dtype=complex) - a, tau)

        # b-period of (log theta1)'' is -2 pi i; a-period vanishes
        known["c"] = np.array([-s / tau.imag])
    return TargetForm(OneForm(ev, poles=((a, 2),), label=f"pole[{a:.3g}]"),
                      label=f"pole[cap {k}]", known=known)


def _combination_target(surface, epsilon=None, c=None, h=None, seed=None,
                        order: int = 6, decay: float = 0.75,
                        max_order: int = 24) -> TargetForm:
    n = surface.n_caps
    g = surface.genus
    if seed is not None:
        rng = np.random.default_rng(int(seed))

        def draw(size):
            return rng.normal(size=size) + 1j * rng.normal(size=size)

        epsilon = draw(n - 1)
        c = draw(g)
        h = {
            (m, k): complex(draw(()) * decay**m)
            for m in range(1, int(order) + 1)
            for k in range(n)
        }
    epsilon = np.zeros(n - 1, dtype=complex) if epsilon is None else np.asarray(
        epsilon, dtype=complex
    )
    c = np.zeros(g, dtype=complex) if c is None else np.asarray(c, dtype=complex)
    h = {} if h is None else {
        (int(m), int(k)): complex(v) for (m, k), v in dict(h).items()
    }
    if epsilon.size != max(n - 1, 0):
        raise ValidationError(f"epsilon needs {n - 1} entries, got {epsilon.size}")
    if c.size != g:
        raise ValidationError(f"c needs {g} entries, got {c.size}")
    for (m, k) in h:
        if m < 1 or not 0 <= k < n:
            raise ValidationError(f"h entry ({m}, {k}) out of range")

    terms = [(epsilon[k], beta_form(surface, k)) for k in range(n - 1)]
    if g == 1:
        terms.append((c[0], gamma_basis(surface)[0]))
    top = max((m for (m, _k) in h), default=1)
    for (m, k), v in sorted(h.items()):
        terms.append((v, faber_form(surface, k, m, max_order=max(max_order, top)).form))
    terms = [(coef, f) for coef, f in terms if coef != 0]
    if not terms:
        raise ValidationError("combination target has no nonzero terms")
    form = OneForm.combine(terms, label="combination")
    eps_full = np.concatenate([epsilon, [-np.sum(epsilon)]]) if n > 0 else epsilon
    known = {"epsilon": eps_full, "c": c, "h": dict(h)}
    return TargetForm(form, label="combination", known=known)
