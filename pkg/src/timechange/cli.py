"""Command-line interface: ``simulate``, ``decompose`` and ``validate``.

Every option can also be given in a JSON config file (``--config``) using the
option's long name with dashes replaced by underscores; flags win over the
file. Exit codes: 0 success, 2 config/parse error, 3 numeric-integrity error,
4 partial failure (some lags failed).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import inversion
from .contour import FrequencyGrid
from .data import (
    THETA_CONVENTION,
    atomic_write,
    densities_csv,
    estimate_theta,
    increments_csv,
    json_document,
    load_densities,
    load_increments,
    load_log_prices,
)
from .ecf import DEFAULT_MAX_EXP, default_threads
from .errors import NumericIntegrityError, ParameterError, TimeChangeError, UnsupportedDensityError
from .inversion import DensityEstimate, spatial_grid, time_change_transform
from .models import (
    Deterministic,
    Gamma,
    IncrementPanel,
    InverseGaussian,
    TcbmSpec,
    sample_tcbm_increments,
)
from .validation import density_distance, round_trip_report, spec_params

log = logging.getLogger("timechange")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 2, 3, 4
ESS_WARN_FRACTION = 0.01

ESTIMATION_DEFAULTS = {
    "omega_max": inversion.EMPIRICAL_OMEGA_MAX,
    "n_omega": inversion.EMPIRICAL_N_OMEGA,
    "xi_min": 0.01,
    "xi_max": 8.0,
    "n_xi": 800,
    "R": inversion.EMPIRICAL_R,
    "max_exp": DEFAULT_MAX_EXP,
    "clip_negative": False,
}

DEFAULTS = {
    "simulate": {"model": "gamma", "theta": 0.0, "a": 5.0, "b": 5.0, "lags": [1.0], "n": 100_000, "seed": 0},
    "decompose": {"input_kind": "increments", "dt": 1.0, "multiples": [1], "theta": "estimate", **ESTIMATION_DEFAULTS},
    "validate": {"oracle": "gamma", "a": 5.0, "b": 5.0, "theta": 0.0, "t": 1.0, "n": 100_000, "seed": 1, **ESTIMATION_DEFAULTS},
}
REQUIRED = {"simulate": ["output"], "decompose": ["input", "output", "diagnostics"], "validate": ["output"]}


class ConfigError(ParameterError):
    pass


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _theta(text):
    if str(text) == "estimate":
        return "estimate"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta must be a number or 'estimate', got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _estimation_args(p):
    p.add_argument("--omega-max", type=float)
    p.add_argument("--n-omega", type=int)
    p.add_argument("--xi-min", type=float)
    p.add_argument("--xi-max", type=float)
    p.add_argument("--n-xi", type=int)
    p.add_argument("--R", type=float, dest="R", help="mollifier scale; 0 disables the mollifier")
    p.add_argument("--max-exp", type=float, help="overflow guard on Re(u)*x")
    p.add_argument("--clip-negative", action="store_true", default=argparse.SUPPRESS)


def build_parser():
    parser = _Parser(prog="timechange", description="Recover the clock density of a time-changed Brownian motion.")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (default: $TIMECHANGE_THREADS or 1)")
    parser.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = dict(argument_default=argparse.SUPPRESS)
    p = sub.add_parser("simulate", help="write simulated increments as lag,value CSV", **common)
    p.add_argument("--config")
    p.add_argument("--model", choices=["gamma", "ig", "det"])
    p.add_argument("--theta", type=float)
    p.add_argument("--a", type=float, help="gamma shape rate / ig delta / det rate")
    p.add_argument("--b", type=float, help="gamma rate / ig gamma_p")
    p.add_argument("--lags", type=_floats)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("decompose", help="recover per-lag clock densities", **common)
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--input-kind", choices=["increments", "prices"])
    p.add_argument("--dt", type=float)
    p.add_argument("--multiples", type=_ints)
    p.add_argument("--theta", type=_theta)
    _estimation_args(p)
    p.add_argument("-o", "--output")
    p.add_argument("--diagnostics")

    p = sub.add_parser("validate", help="score a recovered density against a closed form", **common)
    p.add_argument("--config")
    p.add_argument("--oracle", choices=["gamma", "ig"])
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--densities", help="score this lag,xi,density CSV instead of simulating")
    _estimation_args(p)
    p.add_argument("-o", "--output")
    return parser


def resolve_config(argv):
    """Parse ``argv`` into a flat config: defaults < config file < flags."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    cfg = dict(DEFAULTS[command])
    path = ns.pop("config", None)
    if path is not None:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a flat JSON object")
        cfg.update(loaded)
    cfg.update(ns)
    missing = [k for k in REQUIRED[command] if k not in cfg]
    if missing:
        raise ConfigError(f"{command}: missing {', '.join('--' + k for k in missing)}")
    cfg["command"] = command
    for key in ("lags",):
        if key in cfg and not isinstance(cfg[key], list):
            cfg[key] = _floats(cfg[key])
    if "multiples" in cfg and not isinstance(cfg["multiples"], list):
        cfg["multiples"] = _ints(cfg["multiples"])
    return cfg


def make_subordinator(model, a, b=None):
    if model == "gamma":
        return Gamma(a, b)
    if model == "ig":
        return InverseGaussian(a, b)
    if model == "det":
        return Deterministic(a)
    raise ConfigError(f"unknown model {model!r}")


def _estimation_setup(cfg):
    grid = FrequencyGrid.uniform(cfg["omega_max"], cfg["n_omega"])
    xis = spatial_grid(cfg["xi_min"], cfg["xi_max"], cfg["n_xi"])
    R = cfg["R"]
    R = None if R is None or R == 0 else float(R)
    return grid, xis, R


def _lag_seed(seed, index):
    return int(np.random.SeedSequence([int(seed), index]).generate_state(1, np.uint64)[0])


def cmd_simulate(cfg):
    spec = TcbmSpec(float(cfg["theta"]), make_subordinator(cfg["model"], cfg["a"], cfg.get("b")))
    data = {}
    for i, lag in enumerate(cfg["lags"]):
        data[lag] = sample_tcbm_increments(spec, lag, cfg["n"], _lag_seed(cfg["seed"], i))
    panel = IncrementPanel(data, meta=f"simulate seed={cfg['seed']}")
    atomic_write(cfg["output"], increments_csv(panel))
    return EXIT_OK


def _load_panel(cfg):
    if cfg["input_kind"] == "increments":
        return load_increments(cfg["input"])
    if cfg["input_kind"] == "prices":
        return load_log_prices(cfg["input"], cfg["dt"], cfg["multiples"])
    raise ConfigError(f"unknown input kind {cfg['input_kind']!r}")


def _params_echo(cfg):
    skip = {"command", "threads", "verbose", "output", "diagnostics"}
    keys = sorted(k for k in cfg if k not in skip)
    return {f"param.{k}": (",".join(map(str, cfg[k])) if isinstance(cfg[k], list) else cfg[k]) for k in keys}


def cmd_decompose(cfg):
    grid, xis, R = _estimation_setup(cfg)
    panel = _load_panel(cfg)
    if cfg["theta"] == "estimate":
        theta, source = estimate_theta(panel), "estimate"
    else:
        theta, source = float(cfg["theta"]), "config"
    result = time_change_transform(
        panel, theta, grid, xis, R,
        max_exp_limit=cfg["max_exp"], clip_negative=bool(cfg["clip_negative"]), threads=cfg.get("threads"),
    )
    diag = {"theta": theta, "theta_source": source, "convention": THETA_CONVENTION,
            "lags": ",".join(repr(l) for l in panel.lags)}
    for lag in panel.lags:
        key = f"lag.{lag!r}"
        n = panel[lag].size
        diag[f"{key}.n"] = n
        if lag in result.failures:
            exc = result.failures[lag]
            diag[f"{key}.status"] = "failed"
            diag[f"{key}.error"] = f"{type(exc).__name__}: {exc}"
            continue
        est: DensityEstimate = result[lag]
        min_ess = est.cf.min_ess()
        diag[f"{key}.status"] = "ok"
        diag[f"{key}.total_mass"] = est.total_mass
        diag[f"{key}.neg_mass"] = est.neg_mass
        diag[f"{key}.min_ess"] = min_ess
        diag[f"{key}.max_exponent"] = float(np.max(est.cf.max_exponent))
        diag[f"{key}.ess_warning"] = bool(min_ess < ESS_WARN_FRACTION * n)
        if min_ess < ESS_WARN_FRACTION * n:
            log.warning("lag %r: effective sample size %.3g below %.0f%% of n=%d",
                        lag, min_ess, 100 * ESS_WARN_FRACTION, n)
    diag.update(_params_echo(cfg))
    atomic_write(cfg["output"], densities_csv(result))
    atomic_write(cfg["diagnostics"], json_document(diag))
    if not result.failures:
        return EXIT_OK
    if len(result) == 0:
        return EXIT_NUMERIC
    return EXIT_PARTIAL


def cmd_validate(cfg):
    sub = make_subordinator(cfg["oracle"], cfg["a"], cfg["b"])
    t = float(cfg["t"])
    if "densities" in cfg:
        curves = load_densities(cfg["densities"])
        if t not in curves:
            raise ConfigError(f"lag {t!r} not in {cfg['densities']}")
        xis, values = curves[t]
        est = DensityEstimate(xis, values, float(np.trapezoid(values, xis)),
                              inversion.negative_mass(xis, values), None, math.nan)
        report = density_distance(est, sub, t, {**spec_params(sub), "t": t, "densities": cfg["densities"]})
    else:
        grid, xis, R = _estimation_setup(cfg)
        spec = TcbmSpec(float(cfg["theta"]), sub)
        report = round_trip_report(spec, t, cfg["n"], cfg["seed"], grid, xis, R, threads=cfg.get("threads"))
    doc = report.to_dict()
    doc["oracle"] = cfg["oracle"]
    atomic_write(cfg["output"], json_document(doc))
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "decompose": cmd_decompose, "validate": cmd_validate}


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(sys.argv[1:] if argv is None else argv)
        if cfg.pop("verbose", False):
            logging.getLogger().setLevel(logging.INFO)
        cfg["threads"] = cfg.get("threads") or default_threads()
        return COMMANDS[cfg["command"]](cfg)
    except (ParameterError, UnsupportedDensityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericIntegrityError as exc:
        print(f"numeric integrity error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except TimeChangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
