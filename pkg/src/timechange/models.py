"""Parametric subordinators and time-changed Brownian motion.

A time-changed Brownian motion is ``X_t = theta * tau_t + W(tau_t)`` where
``tau`` is a nondecreasing Levy process (the subordinator) independent of the
Wiener process ``W``. Three subordinator families are supported:

* ``Gamma(a, b)``: ``tau_t ~ Gamma(shape=a*t, rate=b)``
* ``InverseGaussian(delta, gamma_p)``: ``tau_t ~ IG`` with Laplace exponent
  ``delta * (sqrt(gamma_p**2 + 2s) - gamma_p)``
* ``Deterministic(rate)``: ``tau_t = rate * t`` (pure Brownian motion)

All sampling takes an explicit integer seed and is bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import DomainError, ParameterError, UnsupportedDensityError


def _positive(name, value):
    if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class Gamma:
    a: float
    b: float

    def __post_init__(self):
        _positive("a", self.a)
        _positive("b", self.b)


@dataclass(frozen=True)
class InverseGaussian:
    delta: float
    gamma_p: float

    def __post_init__(self):
        _positive("delta", self.delta)
        _positive("gamma_p", self.gamma_p)


@dataclass(frozen=True)
class Deterministic:
    rate: float = 1.0

    def __post_init__(self):
        _positive("rate", self.rate)


SubordinatorSpec = Union[Gamma, InverseGaussian, Deterministic]


@dataclass(frozen=True)
class TcbmSpec:
    theta: float
    subordinator: SubordinatorSpec

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ParameterError(f"theta must be finite, got {self.theta!r}")
        if not isinstance(self.subordinator, (Gamma, InverseGaussian, Deterministic)):
            raise ParameterError(f"unknown subordinator {self.subordinator!r}")


@dataclass
class IncrementPanel:
    """Observed increments ``X_{s+t} - X_s`` grouped by lag ``t``.

    Within a lag the increments are treated as i.i.d. draws of ``X_t``.
    """

    data: dict[float, np.ndarray]
    meta: str = ""

    def __post_init__(self):
        if not self.data:
            raise ParameterError("panel has no lags")
        clean = {}
        for lag, values in self.data.items():
            lag = float(lag)
            if not (math.isfinite(lag) and lag > 0):
                raise ParameterError(f"lag must be positive, got {lag!r}")
            values = np.asarray(values, dtype=float)
            if values.ndim != 1 or values.size == 0:
                raise ParameterError(f"lag {lag!r} has no values")
            if not np.all(np.isfinite(values)):
                raise ParameterError(f"lag {lag!r} has non-finite values")
            clean[lag] = values
        self.data = clean

    @property
    def lags(self):
        return list(self.data)

    def __getitem__(self, lag):
        return self.data[float(lag)]


def _check_request(t, n):
    if not (math.isfinite(t) and t > 0):
        raise ParameterError(f"time span must be positive, got {t!r}")
    if int(n) != n or n < 1:
        raise ParameterError(f"sample count must be a positive integer, got {n!r}")


def _streams(seed):
    """Two independent Philox generators: index 0 drives the clock, 1 the noise."""
    if int(seed) != seed or seed < 0:
        raise ParameterError(f"seed must be a nonnegative integer, got {seed!r}")
    children = np.random.SeedSequence(int(seed)).spawn(2)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def standard_gamma(rng, shape, n):
    """Marsaglia-Tsang squeeze/rejection sampler, unit rate.

    Shapes below one are boosted: draw with ``shape + 1`` and multiply by
    ``U**(1/shape)``.
    """
    boost = shape < 1
    alpha = shape + 1 if boost else shape
    d = alpha - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        m = todo.size
        x = rng.standard_normal(m)
        v = 1.0 + c * x
        u = rng.random(m)
        ok = v > 0
        v = np.where(ok, v, 1.0) ** 3
        x2 = x * x
        accept = ok & (u < 1.0 - 0.0331 * x2 * x2)
        slow = ok & ~accept
        with np.errstate(divide="ignore"):
            accept |= slow & (np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v)))
        out[todo[accept]] = d * v[accept]
        todo = todo[~accept]
    if boost:
        out *= rng.random(n) ** (1.0 / shape)
    return out


def inverse_gaussian(rng, mean, shape, n):
    """Michael-Schucany-Haas sampler: root selection from a chi-square(1) draw."""
    q = mean * rng.standard_normal(n) ** 2 / (2 * shape)
    # smaller root mean*(1 + q - sqrt(q*(q+2))) in cancellation-free form
    x = mean / (1.0 + q + np.sqrt(q * (q + 2.0)))
    u = rng.random(n)
    return np.where(u <= mean / (mean + x), x, mean * mean / x)


def _draw_clock(rng, spec, t, n):
    if isinstance(spec, Gamma):
        return standard_gamma(rng, spec.a * t, n) / spec.b
    if isinstance(spec, InverseGaussian):
        mean = spec.delta * t / spec.gamma_p
        shape = (spec.delta * t) ** 2
        return inverse_gaussian(rng, mean, shape, n)
    if isinstance(spec, Deterministic):
        return np.full(n, spec.rate * t)
    raise ParameterError(f"unknown subordinator {spec!r}")


def sample_subordinator_increment(spec, t, n, seed):
    """Draw ``n`` i.i.d. copies of ``tau_t``."""
    _check_request(t, n)
    clock, _ = _streams(seed)
    return _draw_clock(clock, spec, t, int(n))


def sample_tcbm_increments(spec, t, n, seed):
    """Draw ``n`` i.i.d. copies of ``X_t = theta*tau + sqrt(tau)*Z``.

    The clock draws coincide with ``sample_subordinator_increment`` under the
    same seed.
    """
    _check_request(t, n)
    clock, noise = _streams(seed)
    tau = _draw_clock(clock, spec.subordinator, t, int(n))
    return spec.theta * tau + np.sqrt(tau) * noise.standard_normal(int(n))


def _scalar_or_array(x):
    return x.item() if np.ndim(x) == 0 else x


def _laplace(spec, t, s):
    s = np.asarray(s, dtype=complex)
    if isinstance(spec, Gamma):
        return np.exp(-spec.a * t * np.log1p(s / spec.b))
    if isinstance(spec, InverseGaussian):
        g = spec.gamma_p
        return np.exp(-spec.delta * t * (np.sqrt(g * g + 2 * s) - g))
    if isinstance(spec, Deterministic):
        return np.exp(-s * spec.rate * t)
    raise ParameterError(f"unknown subordinator {spec!r}")


def subordinator_laplace(spec, t, s):
    """``E[exp(-s * tau_t)]`` for ``Re(s) >= 0``."""
    s = np.asarray(s, dtype=complex)
    if np.any(s.real < 0):
        raise DomainError("Laplace transform requires Re(s) >= 0")
    return _scalar_or_array(_laplace(spec, t, s))


def subordinator_cf(spec, t, omega):
    """``E[exp(i * omega * tau_t)]``, the Laplace transform at ``s = -i*omega``."""
    omega = np.asarray(omega, dtype=float)
    return _scalar_or_array(_laplace(spec, t, -1j * omega))


def subordinator_density(spec, t, xi):
    """Closed-form density of ``tau_t``; zero for ``xi <= 0``."""
    if isinstance(spec, Deterministic):
        raise UnsupportedDensityError("deterministic clock is a point mass and has no density")
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    pos = xi > 0
    x = xi[pos]
    if isinstance(spec, Gamma):
        k = spec.a * t
        out[pos] = np.exp(k * math.log(spec.b) + xlogy(k - 1, x) - spec.b * x - gammaln(k))
    elif isinstance(spec, InverseGaussian):
        dt = spec.delta * t
        out[pos] = dt / math.sqrt(2 * math.pi) * x ** -1.5 * np.exp(-((dt - spec.gamma_p * x) ** 2) / (2 * x))
    else:
        raise ParameterError(f"unknown subordinator {spec!r}")
    return _scalar_or_array(out)


def tcbm_cf(spec, t, omega):
    """``E[exp(i * omega * X_t)]`` via the subordinator Laplace transform."""
    omega = np.asarray(omega, dtype=float)
    return _scalar_or_array(_laplace(spec.subordinator, t, omega**2 / 2 - 1j * spec.theta * omega))


def subordinator_mean(spec, t):
    if isinstance(spec, Gamma):
        return spec.a * t / spec.b
    if isinstance(spec, InverseGaussian):
        return spec.delta * t / spec.gamma_p
    return spec.rate * t


def subordinator_variance(spec, t):
    if isinstance(spec, Gamma):
        return spec.a * t / spec.b**2
    if isinstance(spec, InverseGaussian):
        return spec.delta * t / spec.gamma_p**3
    return 0.0
