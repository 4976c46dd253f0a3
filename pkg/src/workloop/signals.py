"""Periodic target outputs stored as truncated harmonic series."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigInvalid, DegenerateSignal
from .numerics import RootConfig, bisect

__all__ = [
    "PeriodicSignal",
    "HalfCycleDecomposition",
    "decompose_half_cycles",
    "simple_harmonic",
]


def _as_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class PeriodicSignal:
    """x(t) = sum_k cos_k cos(k omega t) + sin_k sin(k omega t), k = 0..K.

    ``cos[0]`` is the mean offset; ``sin[0]`` is ignored (always zero).
    """

    omega: float
    cos: tuple[float, ...] = field(default=(0.0,))
    sin: tuple[float, ...] = field(default=(0.0,))

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"fundamental frequency must be positive, got {self.omega!r}")
        n = max(len(self.cos), len(self.sin), 1)
        c = list(_as_tuple(self.cos)) + [0.0] * (n - len(self.cos))
        s = list(_as_tuple(self.sin)) + [0.0] * (n - len(self.sin))
        s[0] = 0.0
        if not all(math.isfinite(v) for v in c + s):
            raise ValueError("harmonic coefficients must be finite")
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "cos", tuple(c))
        object.__setattr__(self, "sin", tuple(s))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def n_harmonics(self) -> int:
        return len(self.cos) - 1

    @property
    def amplitude_scale(self) -> float:
        """Sum of |coefficients| of the oscillating terms (bounds |x - mean|)."""
        return float(sum(abs(a) + abs(b) for a, b in zip(self.cos[1:], self.sin[1:])))

    def eval(self, t, derivative_order: int = 0):
        """Evaluate x, x' or x'' at ``t`` (scalar or array) by term-wise differentiation."""
        if derivative_order not in (0, 1, 2):
            raise ValueError("derivative_order must be 0, 1 or 2")
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros_like(t_arr)
        if derivative_order == 0:
            out = out + self.cos[0]
        for k in range(1, len(self.cos)):
            a, b = self.cos[k], self.sin[k]
            if a == 0.0 and b == 0.0:
                continue
            w = k * self.omega
            c, s = np.cos(w * t_arr), np.sin(w * t_arr)
            if derivative_order == 0:
                out = out + a * c + b * s
            elif derivative_order == 1:
                out = out + w * (b * c - a * s)
            else:
                out = out - w * w * (a * c + b * s)
        if out.ndim == 0:
            return float(out)
        return out

    def __call__(self, t):
        return self.eval(t, 0)

    def velocity(self, t):
        return self.eval(t, 1)

    def acceleration(self, t):
        return self.eval(t, 2)

    def is_simple_harmonic(self) -> bool:
        """True for a single cosine term at the fundamental and no offset."""
        return (self.cos[0] == 0.0 and len(self.cos) >= 2 and self.cos[1] != 0.0
                and all(v == 0.0 for v in self.cos[2:])
                and all(v == 0.0 for v in self.sin))

    def to_record(self) -> dict:
        return {"omega": self.omega, "cos": list(self.cos), "sin": list(self.sin)}

    @classmethod
    def from_record(cls, record: dict) -> "PeriodicSignal":
        try:
            omega = float(record["omega"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"signal needs a numeric 'omega': {exc}") from None
        cos = record.get("cos", [0.0]) or [0.0]
        sin = record.get("sin", [0.0]) or [0.0]
        try:
            return cls(omega, _as_tuple(cos), _as_tuple(sin))
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad signal record: {exc}") from None


def simple_harmonic(amplitude: float, omega: float) -> PeriodicSignal:
    """x(t) = amplitude * cos(omega t)."""
    return PeriodicSignal(omega, (0.0, amplitude), (0.0, 0.0))


@dataclass(frozen=True)
class HalfCycleDecomposition:
    t_max: float
    t_min: float
    max_x: float
    min_x: float
    monotonic: bool
    reversal_times: tuple[float, ...] = ()


def decompose_half_cycles(signal: PeriodicSignal, grid_size: int = 1024,
                          graze_tol: float = 1e-9) -> HalfCycleDecomposition:
    """Locate all velocity reversals over one period.

    Roots of x' are found by a uniform sign scan followed by bisection to
    1e-12 T. Grazing contacts (x' touching zero without changing sign)
    are picked up from sign changes of x'' where x' keeps its sign, and
    count as reversals when |x'| < ``graze_tol`` times the velocity scale.
    The signal is monotonic per half-cycle iff exactly two reversals exist.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    T = signal.period
    vscale = sum(k * signal.omega * (abs(a) + abs(b))
                 for k, (a, b) in enumerate(zip(signal.cos, signal.sin)))
    if vscale == 0.0:
        raise DegenerateSignal("signal is constant; x' vanishes identically")

    t = np.arange(grid_size + 1) * (T / grid_size)
    v = signal.velocity(t)
    a = signal.acceleration(t)
    zero = np.abs(v) <= 1e-14 * vscale
    cfg = RootConfig(abs_tol=1e-12 * T)

    roots: list[float] = []
    for i in range(grid_size):
        if zero[i]:
            roots.append(float(t[i]))
            continue
        if zero[i + 1]:
            continue
        if v[i] * v[i + 1] < 0:
            roots.append(bisect(signal.velocity, (t[i], t[i + 1]), cfg))
        elif a[i] * a[i + 1] < 0:
            # x' keeps its sign but has an extremum here: check for grazing
            tc = bisect(signal.acceleration, (t[i], t[i + 1]), cfg)
            if abs(signal.velocity(tc)) < graze_tol * vscale:
                roots.append(tc)

    roots = sorted(r % T for r in roots)
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-9 * T:
            deduped.append(r)
    if len(deduped) > 1 and deduped[0] + T - deduped[-1] <= 1e-9 * T:
        deduped.pop()

    candidates = np.array(deduped if deduped else [0.0])
    xs = signal(candidates)
    # guard against an extremum missed by the scan
    xs_grid = signal(t[:-1])
    i_max, i_min = int(np.argmax(xs)), int(np.argmin(xs))
    t_max, max_x = float(candidates[i_max]), float(xs[i_max])
    t_min, min_x = float(candidates[i_min]), float(xs[i_min])
    if xs_grid.max() > max_x:
        j = int(np.argmax(xs_grid))
        t_max, max_x = float(t[j]), float(xs_grid[j])
    if xs_grid.min() < min_x:
        j = int(np.argmin(xs_grid))
        t_min, min_x = float(t[j]), float(xs_grid[j])

    return HalfCycleDecomposition(
        t_max=t_max, t_min=t_min, max_x=max_x, min_x=min_x,
        monotonic=len(deduped) == 2, reversal_times=tuple(deduped),
    )
