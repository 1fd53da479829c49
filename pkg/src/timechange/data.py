"""CSV ingestion and writing, and drift estimation for increment panels."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from collections import defaultdict

import numpy as np

from .errors import DataError, ParameterError
from .models import IncrementPanel

SPACING_RTOL = 1e-6
THETA_CONVENTION = "theta estimated under the normalisation E[tau_t] = t"


def fmt(x):
    """Shortest round-trip decimal form of a float (at most 17 significant digits)."""
    return repr(float(x))


def _rows(path, header):
    try:
        fh = open(path, newline="")
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    with fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [c.strip() for c in first] != header:
            raise DataError(f"expected header {','.join(header)!r}", line=1)
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"expected {len(header)} fields, got {len(row)}", line=reader.line_num)
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise DataError(f"cannot parse {','.join(row)!r} as numbers", line=reader.line_num) from None
            if not all(math.isfinite(v) for v in vals):
                raise DataError("non-finite value", line=reader.line_num)
            yield reader.line_num, vals


def load_increments(path):
    """Read a ``lag,value`` CSV into a panel; input order is kept within a lag."""
    groups = defaultdict(list)
    for line, (lag, value) in _rows(path, ["lag", "value"]):
        if lag <= 0:
            raise DataError(f"lag must be positive, got {lag!r}", line=line)
        groups[lag].append(value)
    if not groups:
        raise DataError(f"{path}: no data rows")
    return IncrementPanel(dict(groups), meta=f"increments:{os.path.basename(path)}")


def load_log_prices(path, base_dt, lag_multiples):
    """Non-overlapping log-price increments at lags ``m * base_dt``."""
    if not (base_dt > 0):
        raise ParameterError(f"base_dt must be positive, got {base_dt!r}")
    times, prices = [], []
    for _, (t, p) in _rows(path, ["time", "logprice"]):
        times.append(t)
        prices.append(p)
    if len(times) < 2:
        raise DataError(f"{path}: need at least 2 rows, got {len(times)}")
    steps = np.diff(times)
    worst = int(np.argmax(np.abs(steps - base_dt)))
    if abs(steps[worst] - base_dt) > SPACING_RTOL * base_dt:
        raise DataError(f"time step {steps[worst]!r} differs from dt={base_dt!r}", line=worst + 3)
    prices = np.asarray(prices)
    data = {}
    for m in lag_multiples:
        if int(m) != m or m < 1:
            raise ParameterError(f"lag multiples must be positive integers, got {m!r}")
        m = int(m)
        count = (prices.size - 1) // m
        if count < 1:
            raise DataError(f"lag multiple {m} exceeds series length {prices.size}")
        idx = np.arange(count + 1) * m
        data[m * base_dt] = np.diff(prices[idx])
    return IncrementPanel(data, meta=f"prices:{os.path.basename(path)}")


def estimate_theta(panel):
    """Pooled least-squares drift: ``sum(n_t t mean_t) / sum(n_t t**2)``.

    Only meaningful when the clock satisfies ``E[tau_t] = t``.
    """
    if not any(v.size >= 2 for v in panel.data.values()):
        raise ParameterError("need at least one lag with two or more increments")
    num = sum(lag * float(np.sum(v)) for lag, v in panel.data.items())
    den = sum(v.size * lag * lag for lag, v in panel.data.items())
    return num / den


def atomic_write(path, text):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def increments_csv(panel):
    lines = ["lag,value"]
    for lag, values in panel.data.items():
        lag_s = fmt(lag)
        lines.extend(f"{lag_s},{fmt(v)}" for v in values)
    return "\n".join(lines) + "\n"


def densities_csv(estimates):
    lines = ["lag,xi,density"]
    for lag, est in estimates.items():
        lag_s = fmt(lag)
        lines.extend(f"{lag_s},{fmt(x)},{fmt(f)}" for x, f in zip(est.xis, est.values))
    return "\n".join(lines) + "\n"


def load_densities(path):
    """Read a ``lag,xi,density`` CSV back into ``{lag: (xis, values)}``."""
    groups = defaultdict(lambda: ([], []))
    for _, (lag, xi, f) in _rows(path, ["lag", "xi", "density"]):
        groups[lag][0].append(xi)
        groups[lag][1].append(f)
    if not groups:
        raise DataError(f"{path}: no data rows")
    return {lag: (np.asarray(x), np.asarray(f)) for lag, (x, f) in groups.items()}


def json_document(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
