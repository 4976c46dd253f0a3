"""Small numerical kernels: bracketed root finding, quadrature, quadratics, RK4.

Everything here is deterministic and stateless.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AllZeroCoefficients, MaxIterations, NoSignChange

__all__ = [
    "RootConfig",
    "bisect",
    "bisect_array",
    "quad_trapezoid",
    "solve_quadratic",
    "rk4_integrate",
]


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-12
    max_iterations: int = 200
    scan_points: int = 1024

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def bisect(f: Callable[[float], float], bracket: tuple[float, float],
           cfg: RootConfig | None = None) -> float:
    """Find a root of ``f`` inside ``bracket`` by plain bisection.

    Parameters
    ----------
    f : callable
        Scalar function.
    bracket : (lo, hi)
        Interval with ``f(lo) * f(hi) <= 0``.
    cfg : RootConfig, optional
        Tolerance and iteration cap. Iteration stops once the bracket
        width is at most ``cfg.abs_tol``.

    Returns
    -------
    float
        Midpoint of the final bracket (or an endpoint where ``f`` is exactly 0).

    Raises
    ------
    NoSignChange
        If ``f`` has the same strict sign at both ends.
    MaxIterations
        If the tolerance is not met within ``cfg.max_iterations`` halvings.
    """
    cfg = cfg or RootConfig()
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} share a sign")
    for _ in range(cfg.max_iterations):
        if hi - lo <= cfg.abs_tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # interval cannot shrink further in floating point
            return mid
        fmid = f(mid)
        if fmid == 0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    if hi - lo <= cfg.abs_tol:
        return 0.5 * (lo + hi)
    raise MaxIterations(f"bracket width {hi - lo!r} after {cfg.max_iterations} iterations")


def bisect_array(f: Callable[[np.ndarray], np.ndarray], lo, hi,
                 abs_tol: float, max_iterations: int = 200) -> np.ndarray:
    """Vectorised bisection: solve ``f(t) = 0`` elementwise on ``[lo, hi]``.

    ``f`` must be elementwise and change sign on every bracket. No sign
    checking is done; this is the inner loop of curve inversion where the
    brackets are correct by construction.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    flo = f(lo)
    for _ in range(max_iterations):
        if np.all(hi - lo <= abs_tol):
            break
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        same = np.sign(fmid) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fmid, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def quad_trapezoid(f: Callable[[np.ndarray], np.ndarray], interval: tuple[float, float],
                   n: int = 4096) -> float:
    """Uniform-grid trapezoid rule with ``n`` nodes (endpoints included).

    ``f`` is called once on the whole node array.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a, b = interval
    t = np.linspace(a, b, n)
    y = np.asarray(f(t), dtype=float)
    if y.shape == ():
        y = np.full_like(t, float(y))
    h = (b - a) / (n - 1)
    return float(h * (y.sum() - 0.5 * (y[0] + y[-1])))


def solve_quadratic(a: float, b: float, c: float) -> list[float]:
    """Real roots of ``a x^2 + b x + c``, ascending.

    A double root is returned once. Uses the cancellation-free form:
    the larger-magnitude root first, the other from ``c / (a r)``.
    """
    if a == 0 and b == 0 and c == 0:
        raise AllZeroCoefficients("a, b and c are all zero")
    if a == 0:
        return [] if b == 0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if abs(disc) <= 1e-12 * max(b * b, abs(4.0 * a * c)):
        return [-b / (2.0 * a)]
    if disc < 0:
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / a
    r2 = c / q
    return sorted([r1, r2])


def rk4_integrate(rhs: Callable[[float, np.ndarray], np.ndarray], y0, t0: float,
                  h: float, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4 for ``y' = rhs(t, y)``.

    Returns the time nodes (``n_steps + 1``) and the states at those nodes.
    """
    y = np.asarray(y0, dtype=float)
    ts = t0 + h * np.arange(n_steps + 1)
    ys = np.empty((n_steps + 1,) + y.shape)
    ys[0] = y
    for i in range(n_steps):
        t = ts[i]
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[i + 1] = y
    return ts, ys
