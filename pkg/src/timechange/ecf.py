"""Empirical evaluation of ``E[exp(u X)]`` along the complex contour.

The estimate at frequency ``omega`` is the sample mean of ``exp(u x_j)`` with
``u = contour_map(theta, omega)``. Because ``Re(u) > 0`` away from the origin
the terms are exponentially weighted towards the sample tails, so every grid
point also reports the effective sample size of the weights
``w_j = exp(Re(u) x_j)`` and the largest exponent ``Re(u) x_j`` seen.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .contour import FrequencyGrid, contour_map
from .errors import EstimatorOverflowError, ParameterError
from .models import subordinator_cf

DEFAULT_MAX_EXP = 600.0
THREADS_ENV = "TIMECHANGE_THREADS"

# Fixed work layout; results never depend on the number of worker threads.
_GRID_CHUNK = 8
_SUM_BLOCK = 4096


@dataclass(eq=False)
class CfEstimate:
    grid: FrequencyGrid
    values: np.ndarray
    ess: np.ndarray
    max_exponent: np.ndarray
    n: int | None  # None for the exact (infinite-sample) transform

    @property
    def omegas(self):
        return self.grid.omegas

    def min_ess(self):
        return float(np.min(self.ess))


def default_threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, value)


def compensated_row_sum(mat, block=_SUM_BLOCK):
    """Row sums: pairwise within fixed-size column blocks, Kahan across blocks."""
    s = np.zeros(mat.shape[0])
    c = np.zeros(mat.shape[0])
    for start in range(0, mat.shape[1], block):
        y = mat[:, start:start + block].sum(axis=1) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def _chunk_moments(u, x, limit, omegas):
    expo = np.multiply.outer(u.real, x)
    top = expo.max(axis=1)
    bad = np.flatnonzero(top > limit)
    if bad.size:
        k = bad[0]
        raise EstimatorOverflowError(float(omegas[k]), float(top[k]), limit)
    w = np.exp(expo)
    phase = np.multiply.outer(u.imag, x)
    re = compensated_row_sum(w * np.cos(phase))
    im = compensated_row_sum(w * np.sin(phase))
    # ess is scale-free; shift exponents so w**2 cannot overflow
    ws = np.exp(expo - top[:, None])
    s1 = compensated_row_sum(ws)
    s2 = compensated_row_sum(ws * ws)
    return re, im, s1 * s1 / s2, top


def empirical_transformed_cf(samples, theta, grid, max_exp_limit=DEFAULT_MAX_EXP, threads=None):
    """Sample-mean estimate of the clock CF ``E[exp(i*omega*tau)]`` on ``grid``.

    Only the nonnegative half of the grid is evaluated; negative frequencies
    are filled by conjugation, which makes the conjugate symmetry exact.

    Raises
    ------
    EstimatorOverflowError
        If ``Re(u) * x_j`` exceeds ``max_exp_limit`` at some frequency.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ParameterError("no samples")
    if not np.all(np.isfinite(x)):
        raise ParameterError("samples must be finite")
    if not (max_exp_limit > 0):
        raise ParameterError(f"max_exp_limit must be positive, got {max_exp_limit!r}")
    if not math.isfinite(theta):
        raise ParameterError(f"theta must be finite, got {theta!r}")
    if not isinstance(grid, FrequencyGrid):
        grid = FrequencyGrid(grid)

    half = grid.omegas[grid.center:]
    u = np.atleast_1d(contour_map(theta, half))
    starts = range(0, half.size, _GRID_CHUNK)

    def work(i):
        sl = slice(i, i + _GRID_CHUNK)
        return _chunk_moments(u[sl], x, max_exp_limit, half[sl])

    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1:
        parts = [work(i) for i in starts]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, starts))

    re, im, ess, top = (np.concatenate(p) for p in zip(*parts))
    n = x.size
    vals = (re + 1j * im) / n
    ess = np.clip(ess, 1.0, n)
    return CfEstimate(
        grid=grid,
        values=np.concatenate([np.conj(vals[:0:-1]), vals]),
        ess=np.concatenate([ess[:0:-1], ess]),
        max_exponent=np.concatenate([top[:0:-1], top]),
        n=n,
    )


def analytic_transformed_cf(spec, t, grid):
    """Exact clock CF on ``grid``: the infinite-sample limit of the estimator."""
    if not isinstance(grid, FrequencyGrid):
        grid = FrequencyGrid(grid)
    values = np.asarray(subordinator_cf(spec.subordinator, t, grid.omegas), dtype=complex)
    size = len(grid)
    return CfEstimate(grid, values, np.full(size, math.inf), np.zeros(size), None)
