"""First Jacobi theta function and the lattice-reduced quantities built on it.

Conventions: lattice 1, tau with Im tau > 0, nome p = exp(i pi tau),

    theta1(v | tau) = 2 sum_{j>=0} (-1)^j p^((j+1/2)^2) sin((2j+1) pi v).

The series is evaluated only on lattice-reduced arguments, where it
converges like exp(-pi Im(tau) j^2); quasi-period factors are restored in
closed form. The log-derivative gets an exact branch correction of
-2 pi i per tau-shift, which is what keeps pole-difference forms on the
torus single valued.
"""

from __future__ import annotations

import numpy as np

from .numerics import ValidationError

PI = np.pi


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValidationError(f"lattice parameter needs Im tau > 0, got tau = {tau}")
    return tau


def _n_terms(tau: complex) -> int:
    # term j decays like exp(-pi Im(tau) j (j-1)) after reduction
    return max(12, int(3.6 / np.sqrt(tau.imag)) + 4)


def _theta1_series(v: np.ndarray, tau: complex, deriv: int = 0) -> np.ndarray:
    p = np.exp(1j * PI * tau)
    j = np.arange(_n_terms(tau))
    amp = 2.0 * (-1.0) ** j * p ** ((j + 0.5) ** 2)
    freq = (2 * j + 1) * PI
    arg = freq[:, None] * np.ravel(v)[None, :]
    if deriv == 0:
        term = np.sin(arg)
    elif deriv == 1:
        term = freq[:, None] * np.cos(arg)
    elif deriv == 2:
        term = -(freq ** 2)[:, None] * np.sin(arg)
    else:
        raise ValidationError(f"theta series supports derivatives 0..2, got {deriv}")
    return (amp @ term).reshape(np.shape(v))


def lattice_reduce(v, tau):
    """Split v = v_red + m + n tau with v_red in the centered fundamental cell.

    Returns (v_red, m, n) with m, n integer arrays.
    """
    tau = _check_tau(tau)
    vv = np.asarray(v, dtype=complex)
    n = np.round(vv.imag / tau.imag)
    v1 = vv - n * tau
    m = np.round(v1.real)
    return v1 - m, m, n


def theta1(v, tau, deriv: int = 0):
    """theta1(v | tau), or its v-derivative of order 1 or 2.

    Quasi-period factors for the tau-direction are applied in closed form,
    so moderate |Im v| is exact; very large n tau-shifts overflow the
    restored exponential factor, as they must.
    """
    tau = _check_tau(tau)
    if deriv == 0:
        vr, m, n = lattice_reduce(v, tau)
        factor = (-1.0) ** (m + n) * np.exp(-1j * PI * n ** 2 * tau - 2j * PI * n * vr)
        out = factor * _theta1_series(vr, tau)
        return out if np.ndim(v) else complex(out)
    # derivatives are only needed through the reduced quantities below;
    # evaluate the series directly (callers pass reduced arguments)
    out = _theta1_series(np.asarray(v, dtype=complex), tau, deriv)
    return out if np.ndim(v) else complex(out)


def log_derivative(v, tau):
    """Branch-corrected theta1'(v)/theta1(v).

    theta1'/theta1 drops by 2 pi i under v -> v + tau; reducing the
    argument and subtracting 2 pi i n restores the exact meromorphic
    function, with simple poles of residue 1 at the lattice points.
    """
    tau = _check_tau(tau)
    vr, _, n = lattice_reduce(v, tau)
    out = _theta1_series(vr, tau, 1) / _theta1_series(vr, tau) - 2j * PI * n
    return out if np.ndim(v) else complex(out)


def log_derivative2(v, tau):
    """(log theta1)''(v): elliptic, hence computed on the reduced argument."""
    tau = _check_tau(tau)
    vr, _, _ = lattice_reduce(v, tau)
    t0 = _theta1_series(vr, tau)
    t1 = _theta1_series(vr, tau, 1)
    t2 = _theta1_series(vr, tau, 2)
    out = t2 / t0 - (t1 / t0) ** 2
    return out if np.ndim(v) else complex(out)


def log_abs(v, tau):
    """log |theta1(v | tau)|, stable for any v via the quasi-period law."""
    tau = _check_tau(tau)
    vr, _, n = lattice_reduce(v, tau)
    out = np.log(np.abs(_theta1_series(vr, tau))) + PI * n ** 2 * tau.imag + 2 * PI * n * vr.imag
    return out if np.ndim(v) else float(out)
