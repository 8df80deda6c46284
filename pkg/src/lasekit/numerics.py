"""Scalar root bracketing, golden-section maximization, pump sweeps, and
the linear-algebra steady-state oracle.

The oracle here solves the fixed-point equations directly (inversion
pinning + population balance) without ever evaluating the closed-form
photon-number bracket, so it can arbitrate between the analytic formulas
and the time-domain integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.optimize import brentq

from .params import (
    PhysicalThreeLevel,
    PhysicalTwoLevel,
    Regime,
    SteadyResult,
    gamma_perp_three,
    gamma_perp_two,
)

__all__ = [
    "Bracket",
    "SweepSeries",
    "find_root",
    "maximize",
    "algebraic_oracle_two",
    "algebraic_oracle_three",
    "pump_grid",
    "sweep",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Bracket:
    """An interval [lo, hi] whose endpoint values enclose a sign change."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0.0:
            raise ValueError(
                f"not a bracket: f({self.lo}) = {self.f_lo} and "
                f"f({self.hi}) = {self.f_hi} have the same sign"
            )

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float | None = None) -> float:
    """Root of ``f`` inside ``bracket``.

    Brent's method: inverse-quadratic/secant acceleration with a
    guaranteed bisection fallback, so the enclosing interval shrinks at
    worst by half per iteration and the result always lies inside the
    initial bracket.  ``tol`` is absolute on the argument; the default
    1e-10*max(1, |hi|) keeps the stopping rule scale-aware for roots
    anywhere between O(1) thresholds and O(1e6) window edges.
    """
    if tol is None:
        tol = 1e-10 * max(1.0, abs(bracket.hi))
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    return float(brentq(f, bracket.lo, bracket.hi, xtol=tol))


def maximize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float | None = None,
    grid: int = 1000,
) -> tuple[float, float]:
    """Maximize ``f`` on [lo, hi]; returns (argmax, max).

    A dense grid pre-scan (default 1000 points) locates the best cell and
    guards against non-unimodal or near-flat profiles; golden-section then
    refines inside that cell.  The returned value is never below any
    scanned grid value.
    """
    if not lo < hi:
        raise ValueError(f"maximize needs lo < hi, got [{lo}, {hi}]")
    if tol is None:
        tol = 1e-10 * max(1.0, abs(hi))

    xs = np.linspace(lo, hi, grid)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])

    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, grid - 1)])

    # golden-section refinement of the winning cell
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    vm = f(xm)
    if vm >= best_v:
        return xm, vm
    return best_x, best_v


def algebraic_oracle_two(p: PhysicalTwoLevel) -> float:
    """Two-level steady photon number straight from the equations of motion.

    With a nonzero field the coherence and field balances pin the
    inversion at D = kappa*gamma_perp/(N*g**2), i.e. rho11 = (1 + D)/2;
    the population balance then yields the photon flux.  The negative
    branch means the pinned inversion is not sustainable and the cavity
    stays empty.
    """
    d_pin = p.cavity_kappa * gamma_perp_two(p) / (p.n_atoms * p.coupling_g**2)
    rho11 = 0.5 * (1.0 + d_pin)
    n = (p.n_atoms / (2.0 * p.cavity_kappa)) * (
        p.pump_Gamma * (1.0 - rho11) - p.gamma_decay * rho11
    )
    return max(0.0, n)


def algebraic_oracle_three(p: PhysicalThreeLevel) -> float:
    """Three-level steady photon number from the raw fixed-point equations.

    On the lasing branch the coherence and field equations pin the
    inversion at D = kappa*gamma_perp/(N*g**2); the remaining population
    balance closes as a 2x2 linear system in (rho00, rho22):

        gamma_02*rho00 - gamma_21*rho22 = 0      (middle-level balance)
        2*rho00 + rho22 = 1 - D                  (trace with rho11 = rho00 + D)

    and the photon number follows from the upper-level rate balance.
    This never touches the closed-form bracket, which is the point.
    """
    if p.gamma_02 + 2.0 * p.gamma_21 <= 0.0:
        raise ValueError("singular population balance: gamma_02 + 2*gamma_21 = 0")
    d_pin = p.cavity_kappa * gamma_perp_three(p) / (p.n_atoms * p.coupling_g**2)
    a = np.array([[p.gamma_02, -p.gamma_21], [2.0, 1.0]])
    rhs = np.array([0.0, 1.0 - d_pin])
    rho00, rho22 = np.linalg.solve(a, rhs)
    rho11 = rho00 + d_pin
    n = (p.n_atoms / (2.0 * p.cavity_kappa)) * (
        p.gamma_21 * rho22 - p.gamma_10 * rho11
    )
    return max(0.0, float(n))


@dataclass(frozen=True)
class SweepSeries:
    """Ordered (pump, photon number) samples from one model.

    ``oracle_pump_values``/``oracle_photon_numbers`` hold the optional
    decimated time-domain cross-check points.
    """

    pump_values: np.ndarray
    photon_numbers: np.ndarray
    regimes: tuple[Regime, ...]
    metadata: Mapping[str, object] = field(default_factory=dict)
    oracle_pump_values: np.ndarray | None = None
    oracle_photon_numbers: np.ndarray | None = None

    def __post_init__(self) -> None:
        if len(self.pump_values) != len(self.photon_numbers) or len(
            self.pump_values
        ) != len(self.regimes):
            raise ValueError("pump, photon and regime arrays must match in length")
        if np.any(np.diff(self.pump_values) <= 0.0):
            raise ValueError("pump values must be strictly increasing")


def pump_grid(lo: float, hi: float, count: int, scale: str = "linear") -> np.ndarray:
    """Strictly increasing pump grid, linear or logarithmic."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if count < 2:
        raise ValueError(f"need count >= 2, got {count}")
    if scale == "linear":
        return np.linspace(lo, hi, count)
    if scale == "log":
        if lo <= 0.0:
            raise ValueError("log scale requires lo > 0")
        return np.geomspace(lo, hi, count)
    raise ValueError(f"scale must be 'linear' or 'log', got {scale!r}")


def sweep(
    evaluate: Callable[[float], SteadyResult],
    pump_range: tuple[float, float],
    count: int,
    scale: str = "linear",
    metadata: Mapping[str, object] | None = None,
    oracle: Callable[[float], float] | None = None,
    oracle_stride: int = 0,
) -> SweepSeries:
    """Evaluate a model's analytic photon number over a pump grid.

    Points are independent, so evaluation order cannot change the result;
    they are computed in grid order.  If ``oracle`` is given together with
    a positive ``oracle_stride``, every stride-th pump point is also run
    through it (typically the time-domain integrator) and recorded
    alongside.
    """
    pumps = pump_grid(pump_range[0], pump_range[1], count, scale)
    results = [evaluate(float(pv)) for pv in pumps]
    photons = np.array([r.photon_number for r in results])
    regimes = tuple(r.regime for r in results)

    oracle_pumps = None
    oracle_photons = None
    if oracle is not None and oracle_stride > 0:
        sel = pumps[::oracle_stride]
        oracle_pumps = np.array(sel)
        oracle_photons = np.array([oracle(float(pv)) for pv in sel])

    return SweepSeries(
        pump_values=pumps,
        photon_numbers=photons,
        regimes=regimes,
        metadata=dict(metadata or {}),
        oracle_pump_values=oracle_pumps,
        oracle_photon_numbers=oracle_photons,
    )
