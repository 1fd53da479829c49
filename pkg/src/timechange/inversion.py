"""Regularised characteristic-function inversion and the two top-level transforms.

``invert_cf`` evaluates

    f(xi) = 1/(2*pi) * sum_k w_k * m(omega_k) * exp(-i*omega_k*xi) * psi(omega_k)

with trapezoidal weights ``w_k`` and the Gaussian mollifier
``m(omega) = exp(-omega**2 / (2 R**2))`` (``R=None`` switches it off).
Truncation ``omega_max`` comes from the frequency grid and is independent of
``R``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .contour import FrequencyGrid
from .ecf import DEFAULT_MAX_EXP, CfEstimate, empirical_transformed_cf
from .errors import InversionIntegrityError, ParameterError, TimeChangeError
from .models import IncrementPanel

log = logging.getLogger(__name__)

IMAG_RESIDUE_TOL = 1e-10
MASS_BAND = (0.9, 1.1)

# exact-CF defaults
ANALYTIC_OMEGA_MAX = 200.0
ANALYTIC_N_OMEGA = 4001
ANALYTIC_R = 50.0
# sample-CF defaults, from the pilot in scripts/pilot_parameters.py
EMPIRICAL_OMEGA_MAX = 3.0
EMPIRICAL_N_OMEGA = 401
EMPIRICAL_R = 3.0

_XI_CHUNK = 256


@dataclass(eq=False)
class DensityEstimate:
    xis: np.ndarray
    values: np.ndarray
    total_mass: float
    neg_mass: float
    R: float | None
    omega_max: float
    imag_residue: float = 0.0
    clipped: bool = False
    cf: CfEstimate | None = field(default=None, repr=False)

    @property
    def healthy_mass(self):
        lo, hi = MASS_BAND
        return lo <= self.total_mass <= hi


def _check_xis(xis):
    xis = np.asarray(xis, dtype=float)
    if xis.ndim != 1 or xis.size < 2:
        raise ParameterError("spatial grid needs at least two points")
    if not np.all(np.isfinite(xis)) or not np.all(np.diff(xis) > 0):
        raise ParameterError("spatial grid must be finite and strictly increasing")
    return xis


def spatial_grid(xi_min, xi_max, n_xi):
    if int(n_xi) != n_xi or n_xi < 2:
        raise ParameterError(f"n_xi must be an integer >= 2, got {n_xi!r}")
    if not xi_max > xi_min:
        raise ParameterError("xi_max must exceed xi_min")
    return np.linspace(xi_min, xi_max, int(n_xi))


def negative_mass(xis, values, nonnegative_support=True):
    """Mass of ``max(0, -f)`` plus, for clock laws, positive mass left of 0."""
    neg = np.trapezoid(np.maximum(-values, 0.0), xis)
    if nonnegative_support:
        left = xis <= 0
        neg += np.trapezoid(np.maximum(values[left], 0.0), xis[left])
    return float(neg)


def invert_cf(cf, xis, R=None, *, nonnegative_support=True, clip_negative=False):
    """Invert a characteristic function sampled on a symmetric grid.

    The imaginary part of the sum is checked before being discarded: for a
    conjugate-symmetric input it is pure rounding noise.
    """
    grid = cf.grid if isinstance(cf.grid, FrequencyGrid) else FrequencyGrid(cf.grid)
    xis = _check_xis(xis)
    if R is not None and not (R > 0 and math.isfinite(R)):
        raise ParameterError(f"mollifier R must be positive, got {R!r}")
    omegas = grid.omegas
    psi = np.asarray(cf.values, dtype=complex)
    if psi.shape != omegas.shape:
        raise ParameterError("CF values do not match the frequency grid")

    weights = grid.trapezoid_weights() / (2 * math.pi)
    if R is not None:
        weights = weights * np.exp(-(omegas**2) / (2 * R * R))
    coef = weights * psi

    out = np.empty(xis.size, dtype=complex)
    for i in range(0, xis.size, _XI_CHUNK):
        sl = slice(i, i + _XI_CHUNK)
        out[sl] = np.exp(-1j * np.multiply.outer(xis[sl], omegas)) @ coef

    dens = out.real.copy()
    scale = float(np.max(np.abs(dens))) if dens.size else 0.0
    residue = float(np.max(np.abs(out.imag)))
    if residue > IMAG_RESIDUE_TOL * max(scale, np.finfo(float).tiny):
        raise InversionIntegrityError(
            f"imaginary residue {residue:.3g} exceeds {IMAG_RESIDUE_TOL:g} * sup|f| = {scale:.3g}; "
            "is the CF conjugate-symmetric?"
        )

    neg = negative_mass(xis, dens, nonnegative_support)
    if clip_negative:
        dens = np.maximum(dens, 0.0)
        if nonnegative_support:
            dens[xis < 0] = 0.0
        mass = np.trapezoid(dens, xis)
        if mass > 0:
            dens /= mass
    total = float(np.trapezoid(dens, xis))
    est = DensityEstimate(
        xis=xis,
        values=dens,
        total_mass=total,
        neg_mass=neg,
        R=R,
        omega_max=grid.omega_max,
        imag_residue=residue,
        clipped=clip_negative,
        cf=cf,
    )
    if not est.healthy_mass:
        log.warning("recovered total mass %.4g outside %s", total, MASS_BAND)
    return est


def variance_mixture_transform(
    samples, theta, grid, xis, R, *, max_exp_limit=DEFAULT_MAX_EXP, clip_negative=False, threads=None
):
    """Density of the mixing variable ``V`` in ``X = theta*V + sqrt(V)*Z``."""
    cf = empirical_transformed_cf(samples, theta, grid, max_exp_limit, threads=threads)
    return invert_cf(cf, xis, R, clip_negative=clip_negative)


class LagDensities(dict):
    """Mapping lag -> DensityEstimate; lags that failed are in ``failures``."""

    def __init__(self):
        super().__init__()
        self.failures: dict[float, TimeChangeError] = {}


def time_change_transform(
    panel, theta, grid, xis, R, *, max_exp_limit=DEFAULT_MAX_EXP, clip_negative=False, threads=None
):
    """Clock density ``f_tau(., t)`` for every lag ``t`` of the panel.

    A lag that fails (overflow, integrity) is recorded in ``.failures`` and
    does not stop the others.
    """
    if not isinstance(panel, IncrementPanel):
        panel = IncrementPanel(dict(panel))
    xis = _check_xis(xis)
    out = LagDensities()
    for lag, values in panel.data.items():
        try:
            out[lag] = variance_mixture_transform(
                values, theta, grid, xis, R,
                max_exp_limit=max_exp_limit, clip_negative=clip_negative, threads=threads,
            )
        except TimeChangeError as exc:
            if isinstance(exc, ParameterError):
                raise
            log.warning("lag %r failed: %s", lag, exc)
            out.failures[lag] = exc
    return out
