"""Closed-form oracles and error metrics for recovered clock densities."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, is_dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import inversion
from .contour import FrequencyGrid
from .errors import DomainError, UnsupportedDensityError
from .inversion import spatial_grid, time_change_transform
from .models import Deterministic, IncrementPanel, sample_tcbm_increments, subordinator_density

GAUSS_WINDOW = 12.0
GAUSS_POINTS = 100_001
GAUSS_MAX_IMAG = 6.0


@dataclass
class ErrorReport:
    l1: float
    sup: float
    ks: float
    mass: float
    neg_mass: float
    params: dict = field(default_factory=dict)

    def to_dict(self):
        """Flat key-value document; provenance keys are prefixed ``param.``."""
        doc = {k: getattr(self, k) for k in ("l1", "sup", "ks", "mass", "neg_mass")}
        doc.update({f"param.{k}": v for k, v in self.params.items()})
        return doc


def spec_params(spec, prefix=""):
    """Flatten a (nested) spec dataclass into ``{"model": ..., "a": ...}``."""
    out = {}
    if is_dataclass(spec):
        sub = getattr(spec, "subordinator", None)
        if sub is not None:
            out[prefix + "theta"] = spec.theta
            spec = sub
        out[prefix + "model"] = type(spec).__name__
        out.update({prefix + k: v for k, v in asdict(spec).items()})
    return out


def _cdf(xis, f):
    c = cumulative_trapezoid(f, xis, initial=0.0)
    total = c[-1]
    return c / total if total > 0 else c


def density_distance(estimate, spec, t, params=None):
    """Compare a recovered density with the closed-form clock density on its grid."""
    if isinstance(spec, Deterministic):
        raise UnsupportedDensityError("no density oracle for a deterministic clock")
    xis = estimate.xis
    truth = subordinator_density(spec, t, xis)
    diff = np.abs(estimate.values - truth)
    ks = np.max(np.abs(_cdf(xis, estimate.values) - _cdf(xis, truth)))
    return ErrorReport(
        l1=float(np.trapezoid(diff, xis)),
        sup=float(np.max(diff)),
        ks=float(ks),
        mass=float(estimate.total_mass),
        neg_mass=float(estimate.neg_mass),
        params=dict(params or {}),
    )


def gaussian_cf_quadrature_check(z):
    """``|quad(exp(ixz) phi(x), [-12, 12]) - exp(-z**2/2)|`` for complex ``z``.

    Trapezoid rule on 100001 points; exponentially accurate for the
    Gaussian integrand as long as it has decayed at the window edges.
    """
    z = complex(z)
    if abs(z.imag) > GAUSS_MAX_IMAG:
        raise DomainError(f"|Im z| must be <= {GAUSS_MAX_IMAG}, got {z.imag!r}")
    x = np.linspace(-GAUSS_WINDOW, GAUSS_WINDOW, GAUSS_POINTS)
    integrand = np.exp(1j * x * z - x * x / 2) / math.sqrt(2 * math.pi)
    quad = np.trapezoid(integrand, x)
    return float(abs(quad - np.exp(-z * z / 2)))


def round_trip_report(spec, t, n, seed, grid=None, xis=None, R=None, *, threads=None):
    """Simulate ``X_t``, recover the clock density at lag ``t`` and score it."""
    if isinstance(spec.subordinator, Deterministic):
        raise UnsupportedDensityError("no density oracle for a deterministic clock")
    if grid is None:
        grid = FrequencyGrid.uniform(inversion.EMPIRICAL_OMEGA_MAX, inversion.EMPIRICAL_N_OMEGA)
    if xis is None:
        xis = spatial_grid(0.01, 8.0, 800)
    if R is None:
        R = inversion.EMPIRICAL_R
    xis = np.asarray(xis, dtype=float)
    samples = sample_tcbm_increments(spec, t, n, seed)
    result = time_change_transform(IncrementPanel({t: samples}), spec.theta, grid, xis, R, threads=threads)
    if t in result.failures:
        raise result.failures[t]
    est = result[float(t)]
    params = spec_params(spec)
    params.update(
        t=t, n=n, seed=seed, R=R,
        omega_max=grid.omega_max, n_omega=len(grid),
        xi_min=float(xis[0]), xi_max=float(xis[-1]), n_xi=int(xis.size),
        min_ess=est.cf.min_ess(), max_exponent=float(np.max(est.cf.max_exponent)),
    )
    return density_distance(est, spec.subordinator, t, params)
