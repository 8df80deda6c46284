"""Command-line frontend.

Subcommands: ``steady`` (one steady-state evaluation), ``region``
(threshold / lasing-window / optimum report), ``sweep`` (pump sweep to
CSV), ``dynamics`` (time-domain run to CSV) and ``figure`` (the bundled
sweep presets).  Model parameters come from a JSON config document:

    {
      "model": "two-level" | "three-a" | "three-b",
      "parameterization": "physical" | "dimensionless",
      "params": { ... keys per model ... },
      "integrator": { "rel_tol": ..., ... }        # optional
      "initial":    { "rho11": ..., "x": ... }     # optional, dynamics only
    }

Floats are printed in shortest round-trip form so emitted CSV is
bit-stable and parses back to identical values; LASEKIT_PRECISION
overrides the number of significant digits.  Exit codes: 0 success
(including no-lasing outcomes), 2 config error, 3 output I/O error,
4 integrator failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .dynamics import (
    IntegratorConfig,
    StiffnessError,
    TimeSeries,
    initial_state,
    integrate,
)
from .numerics import SweepSeries, sweep
from .params import (
    BlochState2,
    BlochState3,
    DimensionlessSchemeA,
    DimensionlessSchemeB,
    DimensionlessTwoLevel,
    PhysicalThreeLevel,
    PhysicalTwoLevel,
    PumpScheme,
    Regime,
    SteadyResult,
    _gamma_parallel_inversion_rates,
    gamma_parallel_and_inversion,
    gamma_perp_two,
    reduce_three,
    reduce_two,
)
from . import steady as st

__all__ = ["main", "ConfigError", "emit_sweep_csv", "parse_sweep_csv",
           "emit_timeseries_csv", "parse_timeseries_csv"]

_MODELS = ("two-level", "three-a", "three-b")
_PARAMETERIZATIONS = ("physical", "dimensionless")

_PHYS_REQUIRED = {
    "two-level": ("n_atoms", "coupling_g", "cavity_kappa", "gamma_decay"),
    "three-a": ("n_atoms", "coupling_g", "cavity_kappa", "gamma_21", "gamma_02", "gamma_10"),
    "three-b": ("n_atoms", "coupling_g", "cavity_kappa", "gamma_21", "gamma_02", "gamma_10"),
}
_PHYS_OPTIONAL = {
    "two-level": ("gamma_ph", "pump_Gamma"),
    "three-a": ("gamma_ph",),
    "three-b": ("gamma_ph",),
}
_DIMLESS_REQUIRED = {
    "two-level": ("photon_scale", "saturation"),
    "three-a": ("photon_scale", "saturation", "decay_ratio"),
    "three-b": ("photon_scale", "saturation", "decay_ratio"),
}
_DIMLESS_OPTIONAL = {
    "two-level": ("dephasing",),
    "three-a": ("dephasing",),
    "three-b": ("dephasing",),
}
_INTEGRATOR_KEYS = ("rel_tol", "abs_tol", "max_step", "t_max", "steady_tol")
_INITIAL_KEYS = ("rho11", "rho22", "y", "x")


class ConfigError(Exception):
    """Invalid run configuration; message lists the offending keys."""


def _fmt(x: float) -> str:
    """Shortest round-trip float text, or LASEKIT_PRECISION significant digits."""
    prec = os.environ.get("LASEKIT_PRECISION")
    if prec:
        try:
            return format(float(x), f".{int(prec)}g")
        except ValueError as e:
            raise ConfigError(f"LASEKIT_PRECISION: {e}") from e
    return repr(float(x))


def _meta_text(v: object) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _meta_parse(text: str) -> object:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    if text in ("true", "false"):
        return text == "true"
    return text


def _jsonable(obj: object) -> object:
    """Recursively make report values JSON-clean (inf -> 'inf', etc.)."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, Regime):
        return obj.value
    return obj


def _print_report(report: dict, fmt: str, fh: TextIO) -> None:
    if fmt == "json":
        json.dump(_jsonable(report), fh, indent=2)
        fh.write("\n")
        return
    for key, value in report.items():
        if isinstance(value, dict):
            fh.write(f"{key}:\n")
            for k2, v2 in value.items():
                fh.write(f"  {k2}: {_meta_text(_jsonable(v2))}\n")
        else:
            fh.write(f"{key}: {_meta_text(_jsonable(value))}\n")


# --------------------------------------------------------------------------
# configuration intake
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    model: str
    parameterization: str
    params: dict[str, float]
    integrator: IntegratorConfig
    initial: dict[str, float] | None = None


def _check_number(errors: list[str], where: str, value: object) -> float | None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        errors.append(f"{where}: must be a number, got {value!r}")
        return None
    return float(value)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path!r} is not valid JSON: {e}") from e
    return parse_config(doc)


def parse_config(doc: object) -> RunConfig:
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")

    model = doc.get("model")
    if model not in _MODELS:
        errors.append(f"model: must be one of {list(_MODELS)}, got {model!r}")
    parameterization = doc.get("parameterization")
    if parameterization not in _PARAMETERIZATIONS:
        errors.append(
            f"parameterization: must be one of {list(_PARAMETERIZATIONS)}, "
            f"got {parameterization!r}"
        )
    for key in doc:
        if key not in ("model", "parameterization", "params", "integrator", "initial"):
            errors.append(f"{key}: unknown top-level key")
    if errors:
        raise ConfigError("; ".join(errors))

    raw_params = doc.get("params")
    if not isinstance(raw_params, dict):
        raise ConfigError("params: must be an object")

    required = (_PHYS_REQUIRED if parameterization == "physical" else _DIMLESS_REQUIRED)[model]
    optional = (_PHYS_OPTIONAL if parameterization == "physical" else _DIMLESS_OPTIONAL)[model]
    params: dict[str, float] = {}
    for key in required:
        if key not in raw_params:
            errors.append(f"params.{key}: missing required key")
            continue
        v = _check_number(errors, f"params.{key}", raw_params[key])
        if v is not None:
            params[key] = v
    for key in raw_params:
        if key in required:
            continue
        if key not in optional:
            errors.append(f"params.{key}: unknown key for {parameterization} {model}")
            continue
        v = _check_number(errors, f"params.{key}", raw_params[key])
        if v is not None:
            params[key] = v

    integ = IntegratorConfig()
    raw_integ = doc.get("integrator")
    if raw_integ is not None:
        if not isinstance(raw_integ, dict):
            errors.append("integrator: must be an object")
        else:
            kwargs = {}
            for key, value in raw_integ.items():
                if key not in _INTEGRATOR_KEYS:
                    errors.append(f"integrator.{key}: unknown key")
                    continue
                v = _check_number(errors, f"integrator.{key}", value)
                if v is not None:
                    kwargs[key] = v
            if not errors:
                try:
                    integ = IntegratorConfig(**kwargs)
                except ValueError as e:
                    errors.append(f"integrator: {e}")

    initial = None
    raw_initial = doc.get("initial")
    if raw_initial is not None:
        if not isinstance(raw_initial, dict):
            errors.append("initial: must be an object")
        else:
            initial = {}
            for key, value in raw_initial.items():
                if key not in _INITIAL_KEYS:
                    errors.append(f"initial.{key}: unknown key")
                    continue
                v = _check_number(errors, f"initial.{key}", value)
                if v is not None:
                    initial[key] = v

    if errors:
        raise ConfigError("; ".join(errors))
    return RunConfig(model, parameterization, params, integ, initial)


# --------------------------------------------------------------------------
# model assembly
# --------------------------------------------------------------------------

def _scheme(model: str) -> PumpScheme:
    return PumpScheme.A if model == "three-a" else PumpScheme.B


def _dimensionless(cfg: RunConfig):
    """Reduced parameters for the configured model (pump kept separate)."""
    p = cfg.params
    try:
        if cfg.parameterization == "dimensionless":
            if cfg.model == "two-level":
                return DimensionlessTwoLevel(
                    p["photon_scale"], p["saturation"], p.get("dephasing", 0.0)
                )
            cls = DimensionlessSchemeA if cfg.model == "three-a" else DimensionlessSchemeB
            return cls(
                p["photon_scale"], p["saturation"], p["decay_ratio"],
                p.get("dephasing", 0.0),
            )
        if cfg.model == "two-level":
            d, _ = reduce_two(_physical(cfg, pump=0.0))
            return d
        d, _ = reduce_three(_physical(cfg, pump=None))
        return d
    except ValueError as e:
        raise ConfigError(f"params: {e}") from e


def _physical(cfg: RunConfig, pump: float | None):
    """Physical rate set; ``pump`` (relative) overrides the configured
    pump rate when given."""
    p = cfg.params
    if cfg.parameterization != "physical":
        raise ConfigError(
            "this operation needs the physical parameterization "
            "(dimensionless parameters do not fix every rate)"
        )
    try:
        if cfg.model == "two-level":
            gamma = p["gamma_decay"]
            if pump is not None:
                big_gamma = pump * gamma
            elif "pump_Gamma" in p:
                big_gamma = p["pump_Gamma"]
            else:
                raise ConfigError(
                    "params.pump_Gamma: required (or pass --pump) for this command"
                )
            return PhysicalTwoLevel(
                n_atoms=p["n_atoms"],
                coupling_g=p["coupling_g"],
                cavity_kappa=p["cavity_kappa"],
                gamma_decay=gamma,
                pump_Gamma=big_gamma,
                gamma_ph=p.get("gamma_ph", 0.0),
            )
        g21, g02 = p["gamma_21"], p["gamma_02"]
        if pump is not None:
            if cfg.model == "three-a":
                g21 = pump * g02
            else:
                g02 = pump * g21
        return PhysicalThreeLevel(
            n_atoms=p["n_atoms"],
            coupling_g=p["coupling_g"],
            cavity_kappa=p["cavity_kappa"],
            gamma_21=g21,
            gamma_02=g02,
            gamma_10=p["gamma_10"],
            gamma_ph=p.get("gamma_ph", 0.0),
            scheme=_scheme(cfg.model),
        )
    except ValueError as e:
        raise ConfigError(f"params: {e}") from e


def _configured_pump(cfg: RunConfig) -> float | None:
    """Relative pump implied by the configured rates, if any."""
    p = cfg.params
    if cfg.parameterization != "physical":
        return None
    if cfg.model == "two-level":
        if "pump_Gamma" in p:
            return p["pump_Gamma"] / p["gamma_decay"]
        return None
    if cfg.model == "three-a":
        return p["gamma_21"] / p["gamma_02"] if p["gamma_02"] > 0 else None
    return p["gamma_02"] / p["gamma_21"] if p["gamma_21"] > 0 else None


def _resolve_pump(cfg: RunConfig, arg_pump: float | None) -> float:
    if arg_pump is not None:
        if arg_pump < 0:
            raise ConfigError(f"--pump: must be >= 0, got {arg_pump}")
        return arg_pump
    pump = _configured_pump(cfg)
    if pump is None:
        raise ConfigError("--pump: required (the config does not fix a pump rate)")
    return pump


def _evaluator(cfg: RunConfig) -> Callable[[float], SteadyResult]:
    d = _dimensionless(cfg)
    if cfg.model == "two-level":
        return lambda pump: st.n_two_level(d, pump)
    if cfg.model == "three-a":
        return lambda pump: st.n_scheme_a(d, pump)
    return lambda pump: st.n_scheme_b(d, pump)


# --------------------------------------------------------------------------
# CSV emission / parsing
# --------------------------------------------------------------------------

def emit_sweep_csv(series: SweepSeries, fh: TextIO) -> None:
    for key, value in series.metadata.items():
        fh.write(f"# {key}={_meta_text(value)}\n")
    fh.write("pump,photon_number,regime\n")
    for pump, n, regime in zip(
        series.pump_values, series.photon_numbers, series.regimes
    ):
        fh.write(f"{_fmt(pump)},{_fmt(n)},{regime.value}\n")


def parse_sweep_csv(fh: TextIO) -> SweepSeries:
    metadata: dict[str, object] = {}
    pumps: list[float] = []
    photons: list[float] = []
    regimes: list[Regime] = []
    header_seen = False
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = _meta_parse(value.strip())
            continue
        if not header_seen:
            if line != "pump,photon_number,regime":
                raise ValueError(f"unexpected sweep CSV header: {line!r}")
            header_seen = True
            continue
        pump_s, n_s, regime_s = line.split(",")
        pumps.append(float(pump_s))
        photons.append(float(n_s))
        regimes.append(Regime(regime_s))
    return SweepSeries(
        pump_values=np.array(pumps),
        photon_numbers=np.array(photons),
        regimes=tuple(regimes),
        metadata=metadata,
    )


def emit_timeseries_csv(
    series: TimeSeries, fh: TextIO, metadata: dict[str, object] | None = None
) -> None:
    for key, value in (metadata or {}).items():
        fh.write(f"# {key}={_meta_text(value)}\n")
    fh.write("t," + ",".join(series.state_labels) + ",n\n")
    for t, row, n in zip(series.times, series.states, series.photon_numbers):
        cells = [_fmt(t)] + [_fmt(v) for v in row] + [_fmt(n)]
        fh.write(",".join(cells) + "\n")
    fh.write(
        f"# settle: converged={_meta_text(series.steady)}"
        f" t={_fmt(series.times[-1])}"
        f" photon_number={_fmt(series.photon_numbers[-1])}"
        f" derivative_norm={_fmt(series.derivative_norm)}\n"
    )


def parse_timeseries_csv(fh: TextIO) -> tuple[TimeSeries, dict[str, object]]:
    metadata: dict[str, object] = {}
    footer: dict[str, object] = {}
    labels: tuple[str, ...] | None = None
    times: list[float] = []
    rows: list[list[float]] = []
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("# settle:"):
            for item in line[len("# settle:"):].split():
                key, _, value = item.partition("=")
                footer[key] = _meta_parse(value)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = _meta_parse(value.strip())
            continue
        if labels is None:
            cols = line.split(",")
            if cols[0] != "t" or cols[-1] != "n":
                raise ValueError(f"unexpected time-series header: {line!r}")
            labels = tuple(cols[1:-1])
            continue
        cells = [float(c) for c in line.split(",")]
        times.append(cells[0])
        rows.append(cells[1:-1])
    if labels is None:
        raise ValueError("no header line found")
    states = np.array(rows)
    series = TimeSeries(
        times=np.array(times),
        states=states,
        photon_numbers=states[:, labels.index("x")] ** 2,
        state_labels=labels,
        steady=bool(footer.get("converged", False)),
        derivative_norm=float(footer.get("derivative_norm", math.nan)),
    )
    return series, metadata


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def _window_dict(w: st.LasingWindow | None) -> dict | None:
    if w is None:
        return None
    return {"lower": w.lower, "upper": w.upper, "exact": w.exact}


def _extremum_dict(e: st.ExtremumReport | None) -> dict | None:
    if e is None:
        return None
    out = {
        "pump_estimate": e.pump_estimate,
        "pump_exact": e.pump_exact,
        "photon_at_exact": e.photon_at_exact,
        "discrepancy": e.discrepancy,
    }
    if e.photon_max_estimate is not None:
        out["photon_max_estimate"] = e.photon_max_estimate
        out["photon_max_rel_err"] = e.photon_max_rel_err
    return out


def _steady_report(cfg: RunConfig, pump: float) -> dict:
    report: dict[str, object] = {
        "model": cfg.model,
        "parameterization": cfg.parameterization,
        "pump": pump,
    }
    if cfg.parameterization == "physical" and cfg.model != "two-level":
        p = _physical(cfg, pump)
        res = st.n_three_physical(p)
        gpar, inv = gamma_parallel_and_inversion(p)
    else:
        res = _evaluator(cfg)(pump)
        if cfg.model == "two-level":
            gpar = inv = None
            if cfg.parameterization == "physical":
                # report the coherence decay in physical units
                res = SteadyResult(
                    photon_number=res.photon_number,
                    regime=res.regime,
                    populations=res.populations,
                    gamma_perp=gamma_perp_two(_physical(cfg, pump)),
                    raw_bracket=res.raw_bracket,
                )
        elif cfg.model == "three-a":
            d = _dimensionless(cfg)
            gpar, inv = _gamma_parallel_inversion_rates(pump, 1.0, d.decay_ratio)
        else:
            d = _dimensionless(cfg)
            gpar, inv = _gamma_parallel_inversion_rates(1.0, pump, d.decay_ratio)
    report["photon_number"] = res.photon_number
    report["regime"] = res.regime
    report["raw_bracket"] = res.raw_bracket
    report["gamma_perp"] = res.gamma_perp
    pops = {"rho00": res.populations[0], "rho11": res.populations[1]}
    if len(res.populations) > 2:
        pops["rho22"] = res.populations[2]
    report["populations"] = pops
    if cfg.model != "two-level":
        report["gamma_parallel"] = gpar
        report["equilibrium_inversion"] = inv
    return report


def _region_report(cfg: RunConfig) -> dict:
    d = _dimensionless(cfg)
    report: dict[str, object] = {
        "model": cfg.model,
        "parameterization": cfg.parameterization,
    }
    if cfg.model == "two-level":
        thr = st.threshold_two(d)
        win = st.window_two(d)
        report["threshold"] = thr
        report["lasing_possible"] = win.exact is not None
        report["window"] = _window_dict(win.exact)
        report["window_asymptotic"] = _window_dict(win.asymptotic)
        report["pump_restriction"] = _window_dict(win.necessary)
        report["window_upper_rel_err"] = win.upper_rel_err
        report["optimum"] = _extremum_dict(st.optimum_two(d))
    elif cfg.model == "three-a":
        thr = st.threshold_scheme_a(d)
        report["threshold"] = thr
        report["lasing_possible"] = thr is not None
        report["saturation_limit"] = st.saturation_limit_scheme_a(d)
        if cfg.parameterization == "physical":
            p = _physical(cfg, pump=None)
            report["n_min_atoms"] = st.n_min_atoms(p)
            if p.gamma_10 > 0:
                dep = st.depletion_ratio_window(p)
                report["depletion_ratio_window"] = _window_dict(dep.exact)
                report["depletion_ratio_window_asymptotic"] = _window_dict(dep.asymptotic)
    else:
        thr = st.threshold_scheme_b(d)
        win = st.window_scheme_b(d)
        report["threshold"] = thr
        report["lasing_possible"] = win.exact is not None
        report["window"] = _window_dict(win.exact)
        report["window_asymptotic"] = _window_dict(win.asymptotic)
        report["window_upper_rel_err"] = win.upper_rel_err
        report["optimum"] = _extremum_dict(st.optimum_scheme_b(d))
    return report


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _cmd_steady(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    pump = _resolve_pump(cfg, args.pump)
    report = _steady_report(cfg, pump)
    _print_report(report, "json" if args.format == "json" else "text", sys.stdout)
    return 0


def _cmd_region(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    report = _region_report(cfg)
    _print_report(report, "json" if args.format == "json" else "text", sys.stdout)
    return 0


def _sweep_metadata(cfg: RunConfig, lo: float, hi: float, points: int, scale: str) -> dict:
    meta: dict[str, object] = {
        "model": cfg.model,
        "parameterization": cfg.parameterization,
    }
    for key in sorted(cfg.params):
        meta[key] = cfg.params[key]
    meta["pump_min"] = lo
    meta["pump_max"] = hi
    meta["points"] = points
    meta["scale"] = scale
    return meta


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.pump_min is None or args.pump_max is None:
        raise ConfigError("--pump-min and --pump-max are required")
    try:
        series = sweep(
            _evaluator(cfg),
            (args.pump_min, args.pump_max),
            args.points,
            args.scale,
            metadata=_sweep_metadata(cfg, args.pump_min, args.pump_max, args.points, args.scale),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    fh, close = _open_out(args.out)
    try:
        if args.format == "json":
            doc = {
                "metadata": _jsonable(dict(series.metadata)),
                "pump": [float(v) for v in series.pump_values],
                "photon_number": [float(v) for v in series.photon_numbers],
                "regime": [r.value for r in series.regimes],
            }
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        else:
            emit_sweep_csv(series, fh)
    finally:
        if close:
            fh.close()
    return 0


def _cmd_dynamics(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    pump = args.pump if args.pump is None else float(args.pump)
    p = _physical(cfg, pump)

    integ = cfg.integrator
    if args.t_max is not None:
        integ = IntegratorConfig(
            rel_tol=integ.rel_tol,
            abs_tol=integ.abs_tol,
            max_step=integ.max_step,
            t_max=args.t_max,
            steady_tol=integ.steady_tol,
        )

    init = initial_state(p, seed_field=args.seed_field)
    if cfg.initial:
        fields = {
            "rho11": init.rho11,
            "y": init.y,
            "x": init.x,
        }
        if isinstance(init, BlochState3):
            fields["rho22"] = init.rho22
        for key, value in cfg.initial.items():
            if key == "rho22" and not isinstance(init, BlochState3):
                raise ConfigError("initial.rho22: not a two-level state component")
            fields[key] = value
        try:
            init = (BlochState3 if isinstance(init, BlochState3) else BlochState2)(**fields)
        except ValueError as e:
            raise ConfigError(f"initial: {e}") from e

    series = integrate(p, initial=init, config=integ, stop_at_steady=True)

    meta: dict[str, object] = {"model": cfg.model, "parameterization": "physical"}
    for key in sorted(cfg.params):
        meta[key] = cfg.params[key]
    if pump is not None:
        meta["pump"] = pump
    meta["seed_field"] = args.seed_field

    fh, close = _open_out(args.out)
    try:
        emit_timeseries_csv(series, fh, metadata=meta)
    finally:
        if close:
            fh.close()
    return 0


_FIGURE_PRESETS: dict[str, dict] = {
    "fig2": {
        "model": "two-level",
        "params": {"photon_scale": 1e3, "dephasing": 1e5},
        "vary": "saturation",
        "curves": (7e-7, 1e-6, 1.33e-6),
    },
    "fig4a": {
        "model": "three-a",
        "params": {"photon_scale": 1e6, "decay_ratio": 0.01, "dephasing": 0.0},
        "vary": "saturation",
        "curves": (0.0, 0.2, 0.5),
    },
    "fig4b": {
        "model": "three-b",
        "params": {"photon_scale": 1e5, "decay_ratio": 0.0, "dephasing": 0.1},
        "vary": "saturation",
        "curves": (0.1, 0.02, 0.01),
    },
}
_FIGURE_POINTS = 400


def figure_series(preset: str) -> list[SweepSeries]:
    """The three curves of one bundled figure preset.

    Pump ranges are [max(1e-2, 0.5*threshold), 1.2*upper window edge]
    with 400 log-spaced points; models without a finite upper edge sweep
    to 1e2, which covers both the linear rise and the saturation plateau.
    """
    spec = _FIGURE_PRESETS[preset]
    out = []
    for index, value in enumerate(spec["curves"]):
        params = dict(spec["params"])
        params[spec["vary"]] = value
        cfg = parse_config(
            {
                "model": spec["model"],
                "parameterization": "dimensionless",
                "params": params,
            }
        )
        d = _dimensionless(cfg)
        if spec["model"] == "two-level":
            thr = st.threshold_two(d)
            win = st.window_two(d).exact
        elif spec["model"] == "three-a":
            thr = st.threshold_scheme_a(d)
            win = None
        else:
            thr = st.threshold_scheme_b(d)
            win = st.window_scheme_b(d).exact
        lo = max(1e-2, 0.5 * (thr or 0.0))
        if win is not None and math.isfinite(win.upper):
            hi = 1.2 * win.upper
        else:
            hi = 1e2
        meta = _sweep_metadata(cfg, lo, hi, _FIGURE_POINTS, "log")
        meta = {"preset": preset, "curve": index + 1, **meta}
        out.append(
            sweep(_evaluator(cfg), (lo, hi), _FIGURE_POINTS, "log", metadata=meta)
        )
    return out


def _cmd_figure(args: argparse.Namespace) -> int:
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    for index, series in enumerate(figure_series(args.preset)):
        path = os.path.join(outdir, f"{args.preset}_curve{index + 1}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit_sweep_csv(series, fh)
        print(path)
    return 0


# --------------------------------------------------------------------------
# parser / entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lasekit",
        description="Steady-state and time-domain models of strongly pumped lasers.",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(sp: argparse.ArgumentParser, fmt_default: str) -> None:
        sp.add_argument("--config", required=True, help="JSON model configuration")
        sp.add_argument(
            "--format",
            choices=("text", "csv", "json"),
            default=fmt_default,
            help=f"output format (default: {fmt_default})",
        )

    sp = sub.add_parser("steady", help="evaluate one steady state")
    add_common(sp, "text")
    sp.add_argument("--pump", type=float, default=None, help="relative pump rate")
    sp.set_defaults(func=_cmd_steady)

    sp = sub.add_parser("region", help="threshold, lasing window and optimum report")
    add_common(sp, "text")
    sp.set_defaults(func=_cmd_region)

    sp = sub.add_parser("sweep", help="photon number vs pump sweep (CSV)")
    add_common(sp, "csv")
    sp.add_argument("--pump-min", type=float, default=None)
    sp.add_argument("--pump-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--scale", choices=("linear", "log"), default="linear")
    sp.add_argument("--out", default=None, help="output path (default: stdout)")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("dynamics", help="time-domain trajectory (CSV)")
    add_common(sp, "csv")
    sp.add_argument("--pump", type=float, default=None, help="relative pump override")
    sp.add_argument("--t-max", type=float, default=None)
    sp.add_argument("--seed-field", type=float, default=1e-3)
    sp.add_argument("--out", default=None, help="output path (default: stdout)")
    sp.set_defaults(func=_cmd_dynamics)

    sp = sub.add_parser("figure", help="bundled sweep presets")
    sp.add_argument("preset", choices=tuple(_FIGURE_PRESETS))
    sp.add_argument("--out", default=None, help="output directory (default: .)")
    sp.set_defaults(func=_cmd_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except StiffnessError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
