"""Frequency-band resonance of a Duffing oscillator.

Off the resonant frequency, a third-harmonic admixture

    x(t) = A (1 - rho) cos(Omega t) + A rho cos(3 Omega t)

with rho(Omega) = (we^2 / Omega^2 - 1) / 8 keeps peak inertial and elastic
loads matched. The elastic bound then holds over a window of Omega around
we, whose edges are located numerically here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoBand, NonMonotonicSignal, NonPositiveStiffness, OutsideRhoWindow
from .loops import INELASTIC, build_loop, power_metrics
from .numerics import RootConfig, bisect
from .plants import DuffingPlant, PolynomialElasticity, load_function
from .resonance import check_bounds
from .signals import PeriodicSignal, decompose_half_cycles

__all__ = [
    "FreqBandResult",
    "resonant_frequency",
    "rho_of_omega",
    "waveform",
    "rho_validity_windows",
    "has_interior_reversal",
    "band_loop",
    "band_margin",
    "find_band",
    "REPORTED_OMEGA_WINDOW",
    "REPORTED_RHO_WINDOW",
]

# Conservative window quoted for alpha=1, beta=3, delta=2, A=1, as multiples of we.
REPORTED_OMEGA_WINDOW = (0.693, 1.163)
# rho range quoted alongside it; not reproducible from rho(Omega), kept for reference.
REPORTED_RHO_WINDOW = (-0.0650, 0.0441)

ELASTIC_BOUND = "elastic-bound-violation"
RHO_WINDOW = "rho-monotonicity-window"


@dataclass(frozen=True)
class FreqBandResult:
    omega_e: float
    omega_lo: float
    omega_hi: float
    rho_at_lo: float
    rho_at_hi: float
    limit_lo: str
    limit_hi: str
    residual_lo: float = math.nan
    residual_hi: float = math.nan
    reported_rho_window: tuple[float, float] = field(default=REPORTED_RHO_WINDOW)

    def as_record(self) -> dict:
        return {
            "omega_e": self.omega_e,
            "omega_lo": self.omega_lo,
            "omega_hi": self.omega_hi,
            "omega_lo_ratio": self.omega_lo / self.omega_e,
            "omega_hi_ratio": self.omega_hi / self.omega_e,
            "rho_at_lo": self.rho_at_lo,
            "rho_at_hi": self.rho_at_hi,
            "limit_lo": self.limit_lo,
            "limit_hi": self.limit_hi,
            "crossing_residual_lo": self.residual_lo,
            "crossing_residual_hi": self.residual_hi,
            "reported_rho_lo": self.reported_rho_window[0],
            "reported_rho_hi": self.reported_rho_window[1],
        }


def resonant_frequency(alpha: float, beta: float, amplitude: float) -> float:
    """we = sqrt(alpha + beta A^2)."""
    w2 = alpha + beta * amplitude ** 2
    if not w2 > 0:
        raise NonPositiveStiffness(f"alpha + beta A^2 = {w2!r} is not positive")
    return math.sqrt(w2)


def rho_of_omega(omega_e: float, omega: float) -> float:
    if not omega > 0:
        raise ValueError("omega must be > 0")
    return 0.125 * (omega_e ** 2 / omega ** 2 - 1.0)


def waveform(amplitude: float, omega: float, rho: float) -> PeriodicSignal:
    return PeriodicSignal(omega, (0.0, amplitude * (1.0 - rho), 0.0, amplitude * rho))


def has_interior_reversal(rho: float) -> bool:
    """Closed-form test: x' has zeros besides t = 0, T/2.

    x' is proportional to -sin(th) ((1 + 8 rho) - 12 rho sin^2(th)), so extra
    zeros exist iff 0 < (1 + 8 rho) / (12 rho) <= 1.
    """
    if rho == 0:
        return False
    r = (1.0 + 8.0 * rho) / (12.0 * rho)
    return 0.0 < r <= 1.0


def _extrema_ok(rho: float, samples: int) -> bool:
    sig = waveform(1.0, 1.0, rho)
    half = decompose_half_cycles(sig, samples)
    tol = 1e-9
    T = sig.period
    candidates = np.array(half.reversal_times + (0.0, 0.5 * T))
    xs = sig(candidates)
    grid = sig(np.arange(samples) * (T / samples))
    top = max(xs.max(), grid.max())
    bottom = min(xs.min(), grid.min())
    return top <= 1.0 + tol and bottom >= -1.0 - tol


def _monotonic(rho: float, samples: int) -> bool:
    return decompose_half_cycles(waveform(1.0, 1.0, rho), samples).monotonic


def _window(pred, samples: int, lo: float, hi: float, step: float, tol: float) -> tuple[float, float]:
    """Contiguous interval around rho = 0 where ``pred`` holds, edges bisected."""
    def edge(inside: float, direction: float) -> float:
        r = inside
        while lo <= r + direction * step <= hi:
            nxt = r + direction * step
            if not pred(nxt, samples):
                f = lambda q: 1.0 if pred(q, samples) else -1.0
                return bisect(f, (r, nxt), RootConfig(abs_tol=tol))
            r = nxt
        return lo if direction < 0 else hi

    return edge(0.0, -1.0), edge(0.0, 1.0)


def rho_validity_windows(amplitude: float = 1.0, samples: int = 1024, step: float = 0.01,
                         tol: float = 1e-7):
    """Numerically scan rho for (extrema window, monotonic window).

    The extrema window keeps the global extrema at +-A; the monotonic window
    keeps exactly two monotonic half-cycles. Both scale out of the amplitude.
    """
    if samples < 1024:
        raise ValueError("samples must be >= 1024")
    if not amplitude > 0:
        raise ValueError("amplitude must be > 0")
    extrema = _window(_extrema_ok, samples, -2.0, 3.0, step, tol)
    monotonic = _window(_monotonic, samples, -2.0, 3.0, step, tol)
    return extrema, monotonic


def _band_setup(alpha, beta, delta, amplitude, omega, grid_size):
    we = resonant_frequency(alpha, beta, amplitude)
    rho = rho_of_omega(we, omega)
    sig = waveform(amplitude, omega, rho)
    plant = DuffingPlant(delta)
    try:
        loop = build_loop(sig, load_function(plant, sig), grid_size, INELASTIC)
    except NonMonotonicSignal as exc:
        raise OutsideRhoWindow(f"rho = {rho!r} at omega = {omega!r}: {exc}") from None
    return sig, plant, loop


def band_loop(alpha: float, beta: float, delta: float, amplitude: float, omega: float,
              grid_size: int = 513):
    """Inelastic loop of the rho(omega) waveform (raises OutsideRhoWindow)."""
    return _band_setup(alpha, beta, delta, amplitude, omega, grid_size)[2]


def band_margin(alpha: float, beta: float, delta: float, amplitude: float, omega: float,
                grid_size: int = 513) -> float:
    """Elastic-bound margin of the duffing spring against the rho(omega) waveform's loop."""
    _, _, loop = _band_setup(alpha, beta, delta, amplitude, omega, grid_size)
    return check_bounds(loop, PolynomialElasticity.duffing(alpha, beta)).margin


def _state(alpha, beta, delta, amplitude, omega, grid_size) -> tuple[bool, str | None]:
    """(resonant, failing constraint) at one frequency."""
    try:
        _, _, loop = _band_setup(alpha, beta, delta, amplitude, omega, grid_size)
    except OutsideRhoWindow:
        return False, RHO_WINDOW
    rep = check_bounds(loop, PolynomialElasticity.duffing(alpha, beta))
    return rep.is_resonant, (None if rep.is_resonant else ELASTIC_BOUND)


def crossing_residual(alpha, beta, delta, amplitude, omega, samples: int = 4096) -> float:
    """min |G(t) + Fs(x(t))| over the interior of each half-cycle, relative to peak |G|.

    Near zero when a critical state G = -Fs sits at this frequency.
    """
    sig, plant, _ = _band_setup(alpha, beta, delta, amplitude, omega, 65)
    T = sig.period
    t = np.arange(samples) * (T / samples)
    g = load_function(plant, sig)(t)
    fs = PolynomialElasticity.duffing(alpha, beta)(sig(t))
    r = np.abs(g + fs)
    # drop neighbourhoods of the turning points, where equality holds by construction
    away = np.abs(np.sin(2 * np.pi * t / T)) > 0.05
    return float(r[away].min() / np.abs(g).max())


def find_band(alpha: float, beta: float, delta: float, amplitude: float,
              grid_size: int = 513, step: float = 0.01, rel_tol: float = 1e-6,
              max_steps: int = 2000) -> FreqBandResult:
    """Bracket and bisect both edges of the energy-resonant frequency window.

    Steps outwards from we by ``step * we`` until the state stops being
    resonant, then bisects to ``rel_tol * we``. The reported limit says
    whether the elastic bound or the monotonic-rho window ended the band.
    """
    if not delta > 0:
        raise ValueError("delta must be > 0")
    we = resonant_frequency(alpha, beta, amplitude)
    ok0, _ = _state(alpha, beta, delta, amplitude, we, grid_size)
    if not ok0:
        raise NoBand("the simple-harmonic state at we is not energy resonant")

    def edge(direction: float) -> tuple[float, str]:
        prev = we
        for k in range(1, max_steps + 1):
            omega = we * (1.0 + direction * step * k)
            if omega <= 0:
                break
            ok, _ = _state(alpha, beta, delta, amplitude, omega, grid_size)
            if not ok:
                f = lambda w: 1.0 if _state(alpha, beta, delta, amplitude, w, grid_size)[0] else -1.0
                w_edge = bisect(f, (prev, omega), RootConfig(abs_tol=rel_tol * we))
                outside = w_edge + direction * rel_tol * we
                _, why = _state(alpha, beta, delta, amplitude, outside, grid_size)
                return w_edge, why or ELASTIC_BOUND
            prev = omega
        raise NoBand(f"no band edge found within {max_steps} steps")

    lo, why_lo = edge(-1.0)
    hi, why_hi = edge(1.0)

    def resid(w, why):
        if why != ELASTIC_BOUND:
            return math.nan
        return crossing_residual(alpha, beta, delta, amplitude, w)

    return FreqBandResult(
        omega_e=we, omega_lo=lo, omega_hi=hi,
        rho_at_lo=rho_of_omega(we, lo), rho_at_hi=rho_of_omega(we, hi),
        limit_lo=why_lo, limit_hi=why_hi,
        residual_lo=resid(lo, why_lo), residual_hi=resid(hi, why_hi),
    )


def band_power(alpha, beta, delta, amplitude, omega, quad_points: int = 4096):
    """Power metrics of the actuator load at one frequency of the band."""
    sig, plant, _ = _band_setup(alpha, beta, delta, amplitude, omega, 65)
    load = load_function(plant, sig, PolynomialElasticity.duffing(alpha, beta))
    return power_metrics(sig, load, quad_points)
