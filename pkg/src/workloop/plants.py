"""Inelastic plant dynamics and parallel elasticities.

A plant supplies the inelastic load G(t) needed to follow a prescribed
output; an elasticity Fs(x) acts in parallel, so the actuator load is
F(t) = G(t) + Fs(x(t)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from .errors import ConfigInvalid, NotSimpleHarmonic, OutOfRange, UnsupportedPlant
from .signals import PeriodicSignal

if TYPE_CHECKING:
    from .loops import WorkLoop

__all__ = [
    "LinearPlant",
    "DuffingPlant",
    "TabulatedPlant",
    "PolynomialElasticity",
    "TabulatedElasticity",
    "NegatedBranchElasticity",
    "inelastic_load",
    "elastic_eval",
    "total_load",
    "load_function",
    "closed_form_branches",
    "plant_from_record",
    "elasticity_from_record",
]


# --------------------------------------------------------------------------
# plants

@dataclass(frozen=True)
class LinearPlant:
    """x'' + 2 zeta omega0 x' (inelastic part); stiffness omega0^2 x is elastic."""

    zeta: float
    omega0: float

    def __post_init__(self):
        if not self.zeta >= 0:
            raise ValueError("zeta must be >= 0")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be > 0")

    @property
    def damping(self) -> float:
        return 2.0 * self.zeta * self.omega0

    def natural_elasticity(self) -> "PolynomialElasticity":
        return PolynomialElasticity((self.omega0 ** 2,))


@dataclass(frozen=True)
class DuffingPlant:
    """x'' + delta x' (the inelastic part of a Duffing oscillator)."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be > 0")

    @property
    def damping(self) -> float:
        return self.delta


@dataclass(frozen=True)
class TabulatedPlant:
    """A plant known only through an imported inelastic work loop."""

    loop: "WorkLoop"


Plant = LinearPlant | DuffingPlant | TabulatedPlant


# --------------------------------------------------------------------------
# elasticities

@dataclass(frozen=True)
class PolynomialElasticity:
    """Fs(x) = c1 x + c2 x^2 + ... + cn x^n (no constant term).

    For a Duffing spring, ``coeffs = (alpha, 0, beta)``.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not all(math.isfinite(v) for v in c):
            raise ValueError("elasticity coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def duffing(cls, alpha: float, beta: float) -> "PolynomialElasticity":
        return cls((alpha, 0.0, beta))

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        acc = np.zeros_like(x_arr)
        for c in reversed(self.coeffs):
            acc = (acc + c) * x_arr
        return float(acc) if acc.ndim == 0 else acc


@dataclass(frozen=True, eq=False)
class TabulatedElasticity:
    """Piecewise-linear Fs(x) on a strictly increasing grid."""

    x: np.ndarray
    fs: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        fs = np.asarray(self.fs, dtype=float)
        if x.ndim != 1 or x.shape != fs.shape or x.size < 2:
            raise ValueError("x and fs must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(x) <= 0):
            raise ValueError("tabulated x-grid must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "fs", fs)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        lo, hi = self.span
        slack = 1e-12 * max(hi - lo, abs(lo), abs(hi))
        if np.any(x_arr < lo - slack) or np.any(x_arr > hi + slack):
            raise OutOfRange(f"x outside tabulated span [{lo!r}, {hi!r}]")
        out = np.interp(np.clip(x_arr, lo, hi), self.x, self.fs)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class NegatedBranchElasticity:
    """Fs(x) = -branch(x) for one branch of an inelastic loop.

    Evaluates the branch exactly when the loop still carries its source
    trajectory, else interpolates the stored branch samples.
    """

    loop: "WorkLoop"
    side: str

    def __post_init__(self):
        if self.side not in ("upper", "lower"):
            raise ValueError("side must be 'upper' or 'lower'")

    @property
    def span(self) -> tuple[float, float]:
        return float(self.loop.x_grid[0]), float(self.loop.x_grid[-1])

    def __call__(self, x):
        lo, hi = self.span
        x_arr = np.asarray(x, dtype=float)
        slack = 1e-12 * max(hi - lo, abs(lo), abs(hi))
        if np.any(x_arr < lo - slack) or np.any(x_arr > hi + slack):
            raise OutOfRange(f"x outside loop span [{lo!r}, {hi!r}]")
        out = -self.loop.branch_at(self.side, np.clip(x_arr, lo, hi))
        return float(out) if np.ndim(out) == 0 else out

    def to_table(self) -> TabulatedElasticity:
        branch = self.loop.upper if self.side == "upper" else self.loop.lower
        return TabulatedElasticity(self.loop.x_grid.copy(), -branch)


Elasticity = PolynomialElasticity | TabulatedElasticity | NegatedBranchElasticity


# --------------------------------------------------------------------------
# loads

def inelastic_load(plant, signal: PeriodicSignal, t):
    """G(t) = x'' + c x' along the signal, c the plant's viscous coefficient."""
    if isinstance(plant, TabulatedPlant) or not hasattr(plant, "damping"):
        raise UnsupportedPlant("tabulated plants have no time-domain load")
    return signal.acceleration(t) + plant.damping * signal.velocity(t)


def elastic_eval(profile, x):
    return profile(x)


def total_load(plant, profile, signal: PeriodicSignal, t):
    """F(t) = G(t) + Fs(x(t))."""
    return inelastic_load(plant, signal, t) + profile(signal(t))


def load_function(plant, signal: PeriodicSignal, profile=None) -> Callable:
    """Return t -> G(t), or t -> F(t) when a profile is given."""
    if isinstance(plant, TabulatedPlant):
        raise UnsupportedPlant("tabulated plants have no time-domain load")
    if profile is None:
        return lambda t: inelastic_load(plant, signal, t)
    return lambda t: total_load(plant, profile, signal, t)


def closed_form_branches(plant, signal: PeriodicSignal):
    """Analytic inelastic branches for x = A cos(Omega t).

    G+-(x) = -Omega^2 x +- c Omega sqrt(A^2 - x^2), with c = delta
    (Duffing) or 2 zeta omega0 (linear).
    """
    if isinstance(plant, TabulatedPlant):
        raise UnsupportedPlant("tabulated plants have no closed-form branches")
    if not signal.is_simple_harmonic():
        raise NotSimpleHarmonic("closed-form branches need a single cosine term")
    amp = abs(signal.cos[1])
    w = signal.omega
    c = plant.damping

    def root(x):
        x_arr = np.asarray(x, dtype=float)
        return np.sqrt(np.clip(amp * amp - x_arr * x_arr, 0.0, None))

    def upper(x):
        out = -w * w * np.asarray(x, dtype=float) + c * w * root(x)
        return float(out) if np.ndim(out) == 0 else out

    def lower(x):
        out = -w * w * np.asarray(x, dtype=float) - c * w * root(x)
        return float(out) if np.ndim(out) == 0 else out

    return upper, lower


# --------------------------------------------------------------------------
# config records

def plant_from_record(rec: dict):
    if not isinstance(rec, dict) or "kind" not in rec:
        raise ConfigInvalid("plant record needs a 'kind'")
    kind = rec["kind"]
    try:
        if kind == "linear":
            return LinearPlant(float(rec["zeta"]), float(rec["omega0"]))
        if kind == "duffing":
            return DuffingPlant(float(rec["delta"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad {kind} plant record: {exc}") from None
    raise ConfigInvalid(f"unknown plant kind {kind!r}")


def elasticity_from_record(rec: dict, plant=None):
    if not isinstance(rec, dict) or "kind" not in rec:
        raise ConfigInvalid("elasticity record needs a 'kind'")
    kind = rec["kind"]
    try:
        if kind == "polynomial":
            return PolynomialElasticity(tuple(rec["coeffs"]))
        if kind == "duffing":
            return PolynomialElasticity.duffing(float(rec["alpha"]), float(rec["beta"]))
        if kind == "natural":
            if not isinstance(plant, LinearPlant):
                raise ConfigInvalid("'natural' elasticity needs a linear plant")
            return plant.natural_elasticity()
        if kind == "table":
            table = rec["table"]
            return TabulatedElasticity(np.array([r[0] for r in table]),
                                       np.array([r[1] for r in table]))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigInvalid(f"bad {kind} elasticity record: {exc}") from None
    raise ConfigInvalid(f"unknown elasticity kind {kind!r}")
