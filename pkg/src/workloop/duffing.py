"""Energy-resonant stiffness design for a Duffing oscillator.

For x = A cos(Omega t) through x'' + delta x' + alpha x + beta x^3 = F(t),
matching peak elastic and inertial loads forces alpha = Omega^2 - beta A^2,
leaving a one-parameter family in beta* = beta / Omega^2. The family is
energy resonant for |beta*| <= 2 delta / (A^2 Omega).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroBetaStar
from .loops import INELASTIC, WorkLoop, build_loop
from .numerics import RootConfig, bisect, rk4_integrate, solve_quadratic
from .plants import DuffingPlant, PolynomialElasticity, load_function
from .resonance import check_bounds
from .signals import PeriodicSignal, simple_harmonic

__all__ = [
    "DuffingDesign",
    "optimal_family",
    "design_from_stiffness",
    "beta_star_crit",
    "critical_quartic_roots",
    "is_valid",
    "required_forcing",
    "forward_verify",
    "numeric_beta_star_crit",
]


@dataclass(frozen=True)
class DuffingDesign:
    delta: float
    omega: float
    amplitude: float
    beta_star: float

    @property
    def beta(self) -> float:
        return self.beta_star * self.omega ** 2

    @property
    def alpha(self) -> float:
        return self.omega ** 2 - self.beta * self.amplitude ** 2

    def elasticity(self) -> PolynomialElasticity:
        return PolynomialElasticity.duffing(self.alpha, self.beta)

    def plant(self) -> DuffingPlant:
        return DuffingPlant(self.delta)

    def signal(self) -> PeriodicSignal:
        return simple_harmonic(self.amplitude, self.omega)


def optimal_family(delta: float, omega: float, amplitude: float, beta_star: float) -> DuffingDesign:
    if not omega > 0:
        raise ValueError("omega must be > 0")
    if not amplitude > 0:
        raise ValueError("amplitude must be > 0")
    return DuffingDesign(float(delta), float(omega), float(amplitude), float(beta_star))


def design_from_stiffness(alpha: float, beta: float, delta: float, amplitude: float) -> DuffingDesign:
    """Family member whose stiffnesses are (alpha, beta) at the given amplitude."""
    w2 = alpha + beta * amplitude ** 2
    if not w2 > 0:
        raise ValueError("alpha + beta A^2 must be positive")
    return optimal_family(delta, math.sqrt(w2), amplitude, beta / w2)


def beta_star_crit(delta: float, omega: float, amplitude: float) -> float:
    """Half-width 2 delta / (A^2 Omega) of the resonant beta* interval."""
    if not omega > 0 or not amplitude > 0:
        raise ValueError("omega and amplitude must be > 0")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return 2.0 * delta / (amplitude ** 2 * omega)


def critical_quartic_roots(design: DuffingDesign) -> list[float]:
    """Displacements where the family member first touches a loop branch.

    Real roots in (-A, A) of x^4 - A^2 x^2 + delta^2 / (beta*^2 Omega^2),
    solved as a quadratic in x^2. Empty exactly when |beta*| < beta*_crit.
    """
    if design.beta_star == 0:
        raise ZeroBetaStar("beta* = 0 has no critical state")
    a2 = design.amplitude ** 2
    denom = abs(design.beta_star) * design.omega
    r = design.delta / denom if denom > 0 else math.inf
    c = r * r
    if not math.isfinite(c):
        # |beta*| so small the constant term overflows: far inside the valid range
        return []
    roots: list[float] = []
    for y in solve_quadratic(1.0, -a2, c):
        if 0.0 < y < a2:
            r = math.sqrt(y)
            roots.extend((-r, r))
    return sorted(roots)


def is_valid(design: DuffingDesign) -> tuple[bool, float]:
    """(|beta*| <= beta*_crit, beta*_crit - |beta*|)."""
    crit = beta_star_crit(design.delta, design.omega, design.amplitude)
    margin = crit - abs(design.beta_star)
    return margin >= 0, margin


def required_forcing(design: DuffingDesign, signal: PeriodicSignal | None = None):
    """Inverse dynamics t -> x'' + delta x' + alpha x + beta x^3 along the signal."""
    signal = signal or design.signal()
    return load_function(design.plant(), signal, design.elasticity())


@dataclass(frozen=True)
class ForwardReport:
    max_deviation: float
    periods: int
    steps_per_period: int


def forward_verify(design: DuffingDesign, signal: PeriodicSignal | None = None,
                   periods: int = 3, steps_per_period: int = 2000) -> ForwardReport:
    """Integrate the forced oscillator from the target's initial state.

    Diagnostic only: reports max |x_sim - x_target| without judging it,
    since the forced Duffing response may drift or go chaotic.
    """
    if periods < 1:
        raise ValueError("periods must be >= 1")
    if steps_per_period < 2000:
        raise ValueError("steps_per_period must be >= 2000")
    signal = signal or design.signal()
    force = required_forcing(design, signal)
    d, a, b = design.delta, design.alpha, design.beta

    def rhs(t, y):
        x, v = y
        return np.array([v, force(t) - d * v - a * x - b * x ** 3])

    h = signal.period / steps_per_period
    y0 = np.array([signal(0.0), signal.velocity(0.0)])
    ts, ys = rk4_integrate(rhs, y0, 0.0, h, periods * steps_per_period)
    dev = float(np.max(np.abs(ys[:, 0] - signal(ts))))
    return ForwardReport(dev, periods, steps_per_period)


def inelastic_loop(design: DuffingDesign, grid_size: int = 513) -> WorkLoop:
    signal = design.signal()
    return build_loop(signal, load_function(design.plant(), signal), grid_size, INELASTIC)


def numeric_beta_star_crit(delta: float, omega: float, amplitude: float,
                           grid_size: int = 513, abs_tol: float = 1e-10) -> float:
    """Locate the positive edge of the resonant beta* range from loop margins.

    Bisects the sign of the elastic-bound test over beta* in
    [0, 4 delta / (A^2 Omega)]; independent of the closed-form bound.
    """
    loop = inelastic_loop(optimal_family(delta, omega, amplitude, 0.0), grid_size)

    def resonant(bs: float) -> float:
        design = optimal_family(delta, omega, amplitude, bs)
        return 1.0 if check_bounds(loop, design.elasticity()).is_resonant else -1.0

    hi = 4.0 * delta / (amplitude ** 2 * omega)
    return bisect(resonant, (0.0, hi), RootConfig(abs_tol=abs_tol))
