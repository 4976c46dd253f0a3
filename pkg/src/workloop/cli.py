"""Command-line front end.

    workloop <command> <config.yaml> [--section.key value ...]

Commands: analyze, duffing-opt, one-way, freq-band, simulate.
Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 I/O error.
Failures print one ``error=<kind> reason="..."`` line on stderr.
"""
from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import duffing, freqband
from .errors import ConfigInvalid, OutsideRhoWindow, WorkLoopError
from .fileio import export_loop_csv, export_timeseries_csv, format_record, write_csv, write_record
from .loops import INELASTIC, TOTAL, build_loop, loop_area, power_metrics
from .plants import PolynomialElasticity, elasticity_from_record, load_function, plant_from_record
from .resonance import check_bounds, check_time_domain, one_way_drive
from .signals import PeriodicSignal
from .svg import render_svg

COMMANDS = ("analyze", "duffing-opt", "one-way", "freq-band", "simulate")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


@dataclass
class Sweep:
    variable: str
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass
class JobConfig:
    command: str
    raw: dict
    sweep: Sweep | None = None
    output: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)

    def section(self, name: str) -> dict:
        sec = self.raw.get(name)
        if not isinstance(sec, dict):
            raise ConfigInvalid(f"missing section {name!r}")
        return sec

    def number(self, section: str, key: str, default=None) -> float:
        sec = self.raw.get(section) or {}
        if key not in sec:
            if default is None:
                raise ConfigInvalid(f"missing {section}.{key}")
            return default
        try:
            v = float(sec[key])
        except (TypeError, ValueError):
            raise ConfigInvalid(f"{section}.{key} must be a number") from None
        if not math.isfinite(v):
            raise ConfigInvalid(f"{section}.{key} must be finite")
        return v

    def grid_size(self) -> int:
        return int(self.numerics.get("grid_size", 513))

    def quad_points(self) -> int:
        return int(self.numerics.get("quad_points", 4096))


# --------------------------------------------------------------------------
# config parsing

def _parse_value(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError:
        return text


def apply_overrides(raw: dict, pairs: list[str]) -> dict:
    """Apply ``--a.b value`` pairs onto a nested dict (returns a copy)."""
    out = copy.deepcopy(raw)
    it = iter(pairs)
    for token in it:
        if not token.startswith("--") or len(token) <= 2:
            raise ConfigInvalid(f"unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise ConfigInvalid(f"override {token!r} has no value") from None
        node = out
        parts = key.split(".")
        for p in parts[:-1]:
            if not isinstance(node.get(p), dict):
                node[p] = {}
            node = node[p]
        node[parts[-1]] = _parse_value(value)
    return out


def load_config(command: str, path, overrides: list[str] | None = None) -> JobConfig:
    if command not in COMMANDS:
        raise ConfigInvalid(f"unknown command {command!r}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigInvalid(f"config file {str(path)!r} not found") from None
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigInvalid(f"config is not valid YAML: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigInvalid("config must be a mapping")
    raw = apply_overrides(raw, overrides or [])
    return config_from_dict(command, raw)


def config_from_dict(command: str, raw: dict) -> JobConfig:
    if command not in COMMANDS:
        raise ConfigInvalid(f"unknown command {command!r}")
    sweep = None
    if "sweep" in raw and raw["sweep"] is not None:
        s = raw["sweep"]
        try:
            sweep = Sweep(str(s.get("variable", "")), float(s["lo"]), float(s["hi"]), int(s["steps"]))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ConfigInvalid(f"bad sweep record: {exc}") from None
        if sweep.steps < 2:
            raise ConfigInvalid("sweep.steps must be >= 2")
    output = raw.get("output") or {}
    numerics = raw.get("numerics") or {}
    if not isinstance(output, dict) or not isinstance(numerics, dict):
        raise ConfigInvalid("output and numerics must be mappings")
    return JobConfig(command, raw, sweep, dict(output), dict(numerics))


# --------------------------------------------------------------------------
# commands

def _signal(cfg: JobConfig) -> PeriodicSignal:
    return PeriodicSignal.from_record(cfg.section("signal"))


def _emit(cfg: JobConfig, record: dict, stdout) -> None:
    text = format_record(record)
    stdout.write(text)
    if cfg.output.get("report"):
        write_record(cfg.output["report"], record)


def run_analyze(cfg: JobConfig, stdout) -> dict:
    plant = plant_from_record(cfg.section("plant"))
    profile = elasticity_from_record(cfg.section("elasticity"), plant)
    sig = _signal(cfg)
    n = cfg.grid_size()
    g = load_function(plant, sig)
    f = load_function(plant, sig, profile)
    total = build_loop(sig, f, n, TOTAL)
    inelastic = build_loop(sig, g, n, INELASTIC)
    metrics = power_metrics(sig, f, cfg.quad_points())
    report = check_bounds(inelastic, profile)
    td = check_time_domain(sig, f, cfg.quad_points())
    record = {
        "p_net": metrics.p_net, "p_abs": metrics.p_abs, "p_pos": metrics.p_pos,
        "loop_area": loop_area(total),
        **report.as_record(),
        "time_domain_resonant": td.is_resonant,
    }
    if cfg.output.get("csv"):
        export_loop_csv(total, cfg.output["csv"])
    if cfg.output.get("timeseries"):
        export_timeseries_csv(total, cfg.output["timeseries"])
    if cfg.output.get("svg"):
        render_svg([inelastic, total], [profile], cfg.output["svg"],
                   loop_labels=["inelastic G", "total F"], overlay_labels=["-Fs(x)"],
                   title="work loops")
    _emit(cfg, record, stdout)
    return record


def _design_args(cfg: JobConfig):
    return (cfg.number("design", "delta"), cfg.number("design", "omega"),
            cfg.number("design", "amplitude"))


def run_duffing_opt(cfg: JobConfig, stdout) -> dict:
    delta, omega, amp = _design_args(cfg)
    try:
        crit = duffing.beta_star_crit(delta, omega, amp)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from None
    sweep = cfg.sweep or Sweep("beta_star", -2.0 * crit, 2.0 * crit, 41)
    if sweep.variable not in ("beta_star", ""):
        raise ConfigInvalid("duffing-opt sweeps beta_star only")
    rows = []
    for bs in sweep.values():
        d = duffing.optimal_family(delta, omega, amp, float(bs))
        ok, margin = duffing.is_valid(d)
        rows.append((d.beta_star, d.alpha, d.beta, ok, margin))
    if cfg.output.get("csv"):
        write_csv(cfg.output["csv"], ("beta_star", "alpha", "beta", "valid", "margin"), rows)
    numeric = duffing.numeric_beta_star_crit(delta, omega, amp, cfg.grid_size())
    if cfg.output.get("svg"):
        members = [-crit, -0.5 * crit, 0.0, 0.5 * crit, crit]
        loop = duffing.inelastic_loop(duffing.optimal_family(delta, omega, amp, 0.0), cfg.grid_size())
        render_svg([loop], [duffing.optimal_family(delta, omega, amp, b).elasticity() for b in members],
                   cfg.output["svg"], loop_labels=["inelastic G"],
                   overlay_labels=[f"beta*={b:.4g}" for b in members],
                   title="energy-resonant Duffing elasticities")
    record = {"beta_star_crit": crit, "beta_star_crit_numeric": numeric,
              "relative_difference": abs(numeric - crit) / crit if crit else 0.0,
              "rows": len(rows)}
    _emit(cfg, record, stdout)
    return record


def run_one_way(cfg: JobConfig, stdout) -> dict:
    plant = plant_from_record(cfg.section("plant"))
    sig = _signal(cfg)
    side = str((cfg.raw.get("one_way") or {}).get("side", "upper"))
    if side not in ("upper", "lower"):
        raise ConfigInvalid("one_way.side must be 'upper' or 'lower'")
    inelastic = build_loop(sig, load_function(plant, sig), cfg.grid_size(), INELASTIC)
    owd = one_way_drive(inelastic, side, cfg.quad_points())
    report = check_bounds(inelastic, owd.profile, refine=False)
    td = check_time_domain(sig, owd.loop.load, cfg.quad_points())
    table = owd.profile.to_table()
    if cfg.output.get("csv"):
        write_csv(cfg.output["csv"], ("x", "fs"), zip(table.x, table.fs))
    if cfg.output.get("svg"):
        render_svg([inelastic, owd.loop], [table], cfg.output["svg"],
                   loop_labels=["inelastic G", "one-way F"], overlay_labels=["-Fs(x)"],
                   title=f"one-way drive ({side})")
    record = {"side": side, "duty_cycle": owd.duty_cycle, **report.as_record(),
              "time_domain_resonant": td.is_resonant}
    _emit(cfg, record, stdout)
    return record


def _duffing_args(cfg: JobConfig):
    return (cfg.number("duffing", "alpha"), cfg.number("duffing", "beta"),
            cfg.number("duffing", "delta"), cfg.number("duffing", "amplitude"))


def run_freq_band(cfg: JobConfig, stdout) -> dict:
    alpha, beta, delta, amp = _duffing_args(cfg)
    n = cfg.grid_size()
    result = freqband.find_band(alpha, beta, delta, amp, grid_size=n)
    we = result.omega_e
    sweep = cfg.sweep or Sweep("omega", 0.6 * we, 1.3 * we, 71)
    if sweep.variable not in ("omega", ""):
        raise ConfigInvalid("freq-band sweeps omega only")
    spring = PolynomialElasticity.duffing(alpha, beta)
    rows = []
    for w in sweep.values():
        rho = freqband.rho_of_omega(we, float(w))
        try:
            rep = check_bounds(freqband.band_loop(alpha, beta, delta, amp, float(w), n), spring)
            m, ok = rep.margin, rep.is_resonant
        except OutsideRhoWindow:
            m, ok = math.nan, False
        rows.append((float(w), rho, m, ok))
    if cfg.output.get("csv"):
        write_csv(cfg.output["csv"], ("omega", "rho", "margin", "resonant"), rows)
    if cfg.output.get("svg"):
        loops = [freqband.band_loop(alpha, beta, delta, amp, w, n)
                 for w in (result.omega_lo, we, result.omega_hi)]
        render_svg(loops, [spring], cfg.output["svg"],
                   loop_labels=[f"Omega={w:.4g}" for w in (result.omega_lo, we, result.omega_hi)],
                   overlay_labels=["-Fs(x)"], title="frequency-band resonance")
    record = result.as_record()
    _emit(cfg, record, stdout)
    return record


def run_simulate(cfg: JobConfig, stdout) -> dict:
    delta, omega, amp = _design_args(cfg)
    sim = cfg.raw.get("simulate") or {}
    try:
        bs = float(sim.get("beta_star", cfg.raw["design"].get("beta_star", 0.0)))
        periods = int(sim.get("periods", 3))
        steps = int(sim.get("steps_per_period", 2000))
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad simulate record: {exc}") from None
    if periods < 1 or steps < 2000:
        raise ConfigInvalid("simulate needs periods >= 1 and steps_per_period >= 2000")
    design = duffing.optimal_family(delta, omega, amp, bs)
    rep = duffing.forward_verify(design, periods=periods, steps_per_period=steps)
    valid, margin = duffing.is_valid(design)
    record = {"beta_star": bs, "valid": valid, "validity_margin": margin,
              "periods": rep.periods, "steps_per_period": rep.steps_per_period,
              "max_deviation": rep.max_deviation}
    _emit(cfg, record, stdout)
    return record


RUNNERS = {
    "analyze": run_analyze,
    "duffing-opt": run_duffing_opt,
    "one-way": run_one_way,
    "freq-band": run_freq_band,
    "simulate": run_simulate,
}


def run(cfg: JobConfig, stdout=None) -> dict:
    return RUNNERS[cfg.command](cfg, stdout or sys.stdout)


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(f"error={kind} reason={json.dumps(message)}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="workloop", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config")
    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.command, args.config, extra)
        run(cfg)
    except ConfigInvalid as exc:
        return _fail("config_invalid", str(exc), EXIT_CONFIG)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except (WorkLoopError, ValueError, ArithmeticError) as exc:
        return _fail("numerical_failure", f"{type(exc).__name__}: {exc}", EXIT_NUMERIC)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
