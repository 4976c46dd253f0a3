"""Energy-resonance tests in the time domain and in the work-loop plane.

A state is energy resonant when the actuator never absorbs power,
F(t) x'(t) >= 0. In the work-loop plane this is the elastic bound
G-(x) <= -Fs(x) <= G+(x) on the inelastic loop.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import GridMismatch
from .loops import INELASTIC, TOTAL, WorkLoop
from .plants import NegatedBranchElasticity, TabulatedElasticity
from .signals import PeriodicSignal

__all__ = [
    "RESONANCE_RTOL",
    "ResonanceReport",
    "TimeDomainCheck",
    "OneWayDrive",
    "check_time_domain",
    "check_bounds",
    "one_way_drive",
]

RESONANCE_RTOL = 1e-9
DUTY_RTOL = 1e-6
_REFINE_PER_SIDE = 2


@dataclass(frozen=True)
class ResonanceReport:
    """Outcome of the elastic-bound test.

    ``margin`` is the smallest value of min(G+ + Fs, -Fs - G-) over the
    loop interior; the turning points, where both sides vanish for any
    resonant state, are covered by ``equality_residuals`` instead.
    """

    is_resonant: bool
    margin: float
    violation_x: float
    equality_residuals: tuple[float, float]
    tol: float

    def as_record(self) -> dict:
        return {
            "resonant": self.is_resonant,
            "margin": self.margin,
            "violation_x": self.violation_x,
            "equality_residual_max_x": self.equality_residuals[0],
            "equality_residual_min_x": self.equality_residuals[1],
        }


@dataclass(frozen=True)
class TimeDomainCheck:
    is_resonant: bool
    t_worst: float
    power_worst: float

    def __bool__(self) -> bool:
        return self.is_resonant


@dataclass(frozen=True)
class OneWayDrive:
    profile: NegatedBranchElasticity
    loop: WorkLoop
    duty_cycle: float


def check_time_domain(signal: PeriodicSignal, load: Callable, samples: int = 4096) -> TimeDomainCheck:
    """Sample F(t) x'(t) over one period and test it for negative values."""
    if samples < 256:
        raise ValueError("samples must be >= 256")
    t = np.arange(samples) * (signal.period / samples)
    f = np.asarray(load(t), dtype=float)
    v = signal.velocity(t)
    p = f * v
    scale = max(np.max(np.abs(f)) * np.max(np.abs(v)), 1e-300)
    i = int(np.argmin(p))
    return TimeDomainCheck(bool(p[i] >= -RESONANCE_RTOL * scale), float(t[i]), float(p[i]))


def _profile_span(profile):
    return getattr(profile, "span", None)


def _local_minima(h: np.ndarray) -> np.ndarray:
    """Interior indices of discrete local minima of ``h`` (grid ends excluded)."""
    i = np.arange(1, h.size - 1)
    mask = (h[i] <= h[i - 1]) & (h[i] <= h[i + 1])
    return i[mask]


def _refine(side_fn: Callable[[float], float], t_grid: np.ndarray, h: np.ndarray, period: float):
    """Continuous minimum of ``side_fn(t)`` near the lowest discrete minima of ``h``.

    The search runs in time along the branch, where no curve inversion is
    needed; returns the minimising time and value.
    """
    best_t, best_h = None, np.inf
    idx = _local_minima(h)
    if idx.size == 0:
        return best_t, best_h
    idx = idx[np.argsort(h[idx], kind="stable")[:_REFINE_PER_SIDE]]
    for i in idx:
        a, b = sorted((t_grid[i - 1], t_grid[i + 1]))
        res = minimize_scalar(side_fn, bounds=(a, b), method="bounded",
                              options={"xatol": 1e-12 * period, "maxiter": 200})
        if res.fun < best_h:
            best_t, best_h = float(res.x), float(res.fun)
    return best_t, best_h


def check_bounds(inelastic_loop: WorkLoop, profile, refine: bool = True) -> ResonanceReport:
    """Evaluate the elastic-bound condition of ``profile`` against an inelastic loop.

    The inequality is checked on the loop grid. When the loop carries its
    source trajectory and the profile is not tabulated, the lowest grid
    minima are refined by a bounded scalar search, so a violation narrower
    than the grid spacing is still caught.
    """
    loop = inelastic_loop
    if loop.branch_kind != INELASTIC:
        raise ValueError("check_bounds needs an inelastic-load loop")
    span = _profile_span(profile)
    x = loop.x_grid
    if span is not None:
        slack = 1e-9 * max(x[-1] - x[0], abs(x[0]), abs(x[-1]))
        if span[0] > x[0] + slack or span[1] < x[-1] - slack:
            raise GridMismatch(f"profile span {span} does not cover loop span ({x[0]}, {x[-1]})")

    fs = np.asarray(profile(x), dtype=float)
    up_side = loop.upper + fs
    lo_side = -fs - loop.lower
    tol = RESONANCE_RTOL * max(loop.scale, 1e-300)

    inner = slice(1, x.size - 1)
    h = np.minimum(up_side, lo_side)
    if x.size > 2:
        j = int(np.argmin(h[inner])) + 1
        margin, where = float(h[j]), float(x[j])
    else:
        margin, where = 0.0, float(x[0])

    if (refine and loop.has_source and loop.t_upper is not None
            and not isinstance(profile, TabulatedElasticity) and x.size > 2):
        sig, g = loop.signal, loop.load

        def upper_fn(t):
            return float(g(np.array([t]))[0] + profile(sig(t)))

        def lower_fn(t):
            return float(-profile(sig(t)) - g(np.array([t]))[0])

        for fn, side, tg in ((upper_fn, up_side, loop.t_upper), (lower_fn, lo_side, loop.t_lower)):
            tr, hr = _refine(fn, tg, side, sig.period)
            if tr is not None and hr < margin:
                margin, where = hr, float(sig(tr))

    residuals = (
        float(max(abs(up_side[-1]), abs(lo_side[-1]))),
        float(max(abs(up_side[0]), abs(lo_side[0]))),
    )
    return ResonanceReport(bool(margin >= -tol), margin, where, residuals, tol)


def one_way_drive(inelastic_loop: WorkLoop, side: str = "upper", samples: int = 4096) -> OneWayDrive:
    """Elasticity lying on one loop branch, giving a single-signed actuator load.

    side="upper" gives Fs = -G+, so F+ = 0 and F- = G- - G+ <= 0;
    side="lower" gives Fs = -G-, so F- = 0 and F+ = G+ - G- >= 0.
    The duty cycle is the fraction of the period with |F| above 1e-6 of
    its peak, and above the resonance tolerance of the loop scale so that
    round-off on a zero-area loop does not count as drive.
    """
    loop = inelastic_loop
    if loop.branch_kind != INELASTIC:
        raise ValueError("one_way_drive needs an inelastic-load loop")
    if not loop.has_source:
        raise ValueError("one_way_drive needs a loop built from a trajectory")
    profile = NegatedBranchElasticity(loop, side)
    if side == "upper":
        f_up = np.zeros_like(loop.upper)
        f_lo = loop.lower - loop.upper
    else:
        f_up = loop.upper - loop.lower
        f_lo = np.zeros_like(loop.lower)
    f_up[[0, -1]] = 0.0
    f_lo[[0, -1]] = 0.0

    signal, g = loop.signal, loop.load

    def load(t):
        return np.asarray(g(t), dtype=float) + profile(signal(t))

    t = np.arange(samples) * (signal.period / samples)
    f = np.abs(load(t))
    peak = float(f.max())
    floor = max(DUTY_RTOL * peak, RESONANCE_RTOL * loop.scale)
    duty = float(np.mean(f > floor)) if peak > 0 else 0.0

    total = WorkLoop(loop.x_grid, f_up, f_lo, TOTAL,
                     times=loop.times, xs=loop.xs,
                     loads=load(loop.times) if loop.times is not None else None,
                     signal=signal, load=load, halves=loop.halves,
                     t_upper=loop.t_upper, t_lower=loop.t_lower)
    return OneWayDrive(profile, total, duty)
