"""Complex-frequency machinery for the time-change transform.

For drift ``theta`` the transform evaluates ``E[exp(u(omega) X)]`` along the
contour ``u(omega) = -theta + sqrt(theta**2 + 2i*omega)``. Conditioning on the
clock ``V`` and using the entire Gaussian CF ``exp(-z**2/2)`` collapses this
expectation to ``E[exp(i*omega*V)]``, the characteristic function of the clock.

The square root is the principal branch throughout (nonnegative real part).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def contour_map(theta, omega):
    """``-theta + sqrt(theta**2 + 2i*omega)``, principal branch."""
    omega = np.asarray(omega, dtype=float)
    s = np.sqrt(theta * theta + 2j * omega)
    # theta**2 may underflow; on the real axis the root is exactly |theta|
    s = np.where(omega == 0, abs(theta) + 0j, s)
    u = -theta + s
    return u.item() if u.ndim == 0 else u


def extended_gaussian_cf(z):
    """Analytic continuation of the standard normal CF, ``exp(-z**2/2)``."""
    z = np.asarray(z, dtype=complex)
    out = np.exp(-z * z / 2)
    return out.item() if out.ndim == 0 else out


def cf_argument_map(theta, omega):
    """Argument ``z = -i*u`` so that ``Psi_X(z) = E[exp(i z X)] = E[exp(u X)]``.

    The composition diagram labels this map ``-i(theta + sqrt(...))``; the
    sign of ``theta`` there disagrees with the transform exponent, and the
    exponent is what the existence argument uses, so it is followed here.
    """
    return -1j * contour_map(theta, omega)


@dataclass(frozen=True)
class ContourPoint:
    omega: float
    u: complex

    @classmethod
    def at(cls, theta, omega):
        return cls(float(omega), complex(contour_map(theta, omega)))


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing frequencies, symmetric about zero and containing it."""

    omegas: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("frequency grid must be a non-empty 1-d array")
        if not np.all(np.isfinite(w)):
            raise ParameterError("frequency grid has non-finite entries")
        if w.size > 1 and not np.all(np.diff(w) > 0):
            raise ParameterError("frequency grid must be strictly increasing")
        if not np.array_equal(w, -w[::-1]):
            raise ParameterError("frequency grid must be symmetric about 0")
        if w.size % 2 != 1 or w[w.size // 2] != 0:
            raise ParameterError("frequency grid must contain 0")
        w = w + 0.0  # normalise -0.0
        w.setflags(write=False)
        object.__setattr__(self, "omegas", w)

    @classmethod
    def uniform(cls, omega_max, n):
        """``n`` (odd) equispaced points on ``[-omega_max, omega_max]``."""
        if not (omega_max > 0):
            raise ParameterError(f"omega_max must be positive, got {omega_max!r}")
        if int(n) != n or n < 3 or n % 2 != 1:
            raise ParameterError(f"number of frequencies must be odd and >= 3, got {n!r}")
        m = (int(n) - 1) // 2
        half = omega_max * (np.arange(1, m + 1) / m)
        return cls(np.concatenate([-half[::-1], [0.0], half]))

    def __len__(self):
        return self.omegas.size

    @property
    def center(self):
        return self.omegas.size // 2

    @property
    def omega_max(self):
        return float(self.omegas[-1])

    def trapezoid_weights(self):
        w = self.omegas
        if w.size == 1:
            return np.zeros(1)
        d = np.diff(w)
        out = np.zeros_like(w)
        out[:-1] += d / 2
        out[1:] += d / 2
        return out

    def __eq__(self, other):
        return isinstance(other, FrequencyGrid) and np.array_equal(self.omegas, other.omegas)

    __hash__ = None
