"""Closed-form steady states, thresholds, lasing windows and extrema.

Each model's photon number has the form photon_scale * bracket(P) with a
bracket that is polynomial in the relative pump P:

* two-level:  (P - 1) - s*(P + 1)*(P + 1 + delta)          (quadratic)
* scheme A:   [P*(1-eps) - s*(1+eps+delta)*(P*(1+eps)+eps)] / (1+2P)
              (numerator linear in P -> saturating, no upper edge)
* scheme B:   [P - eps - s*(P+eps+delta)*(P+eps+P*eps)] / (P+2)
              (numerator quadratic in P -> finite lasing window)

The quadratic cases get both the exact roots/extrema and the coarse
closed forms that hold for small saturation, so the quality of those
approximations is always measurable instead of assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import maximize
from .params import (
    DimensionlessSchemeA,
    DimensionlessSchemeB,
    DimensionlessTwoLevel,
    PhysicalThreeLevel,
    PumpScheme,
    Regime,
    SteadyResult,
    equilibrium_populations_three,
    gamma_perp_three,
    reduce_three,
)

__all__ = [
    "LasingWindow",
    "WindowReport",
    "ExtremumReport",
    "raw_bracket_two",
    "n_two_level",
    "threshold_two",
    "window_two",
    "optimum_two",
    "raw_bracket_scheme_a",
    "n_scheme_a",
    "threshold_scheme_a",
    "saturation_limit_scheme_a",
    "n_min_atoms",
    "depletion_ratio_window",
    "raw_bracket_scheme_b",
    "n_scheme_b",
    "threshold_scheme_b",
    "window_scheme_b",
    "optimum_scheme_b",
    "n_three_physical",
]


@dataclass(frozen=True)
class LasingWindow:
    """Pump interval with positive steady photon number.

    ``upper`` may be ``inf`` (saturation-free limits have no upper edge).
    ``exact`` is True when the endpoints are roots of the photon-number
    bracket and False for the small-saturation closed forms.
    """

    lower: float
    upper: float
    exact: bool

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ValueError(
                f"window needs lower < upper, got [{self.lower}, {self.upper}]"
            )

    def contains(self, pump: float) -> bool:
        return self.lower < pump < self.upper


@dataclass(frozen=True)
class WindowReport:
    """Exact lasing window plus the coarse closed forms next to it.

    ``necessary`` (two-level only) is the weaker pump restriction obtained
    from requiring the coherence decay to stay below the cooperativity
    bound; it contains the true window.  ``upper_rel_err`` compares the
    asymptotic upper edge against the exact one when both are finite.
    """

    exact: LasingWindow | None
    asymptotic: LasingWindow | None
    necessary: LasingWindow | None = None
    upper_rel_err: float | None = None


@dataclass(frozen=True)
class ExtremumReport:
    """Location of the pump maximizing the photon number.

    ``pump_estimate`` is the simplified stationary-point formula,
    ``pump_exact`` the numerically maximized pump, and ``discrepancy``
    their relative gap |estimate - exact| / exact.  For the two-level
    model the bracket is exactly quadratic so the two coincide; for
    scheme B the estimate drops the (P + 2) denominator and can be off
    by a large factor.  ``photon_max_estimate`` (two-level only) is the
    coarse peak value photon_scale/(4*saturation).
    """

    pump_estimate: float
    pump_exact: float
    photon_at_exact: float
    discrepancy: float
    photon_max_estimate: float | None = None
    photon_max_rel_err: float | None = None


def _quadratic_roots(a: float, b: float, c: float) -> tuple[float, float] | None:
    """Real roots of a*P**2 + b*P + c, sorted ascending.

    Written for the bracket convention a <= 0.  The smaller-magnitude root
    comes from c/q with q = -(b + sign(b)*sqrt(disc))/2, which avoids the
    catastrophic cancellation the textbook formula hits when |a| ~ s is
    as small as 1e-7.  Degenerate a == 0 falls back to the linear root
    with an infinite partner.
    """
    if a == 0.0:
        if b == 0.0:
            return None
        root = -c / b
        return (root, math.inf) if b > 0.0 else (-math.inf, root)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else -0.5 * sq
    if q == 0.0:
        # b == 0 and disc == 0: double root at the origin
        return (0.0, 0.0)
    r1 = q / a
    r2 = c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def _classify(raw: float, pump: float, divide: float) -> Regime:
    """Regime from the bracket sign; ``divide`` separates the two n = 0 sides.

    A non-positive divide means no physical (pump >= 0) window exists at
    all, in which case every non-lasing pump counts as below threshold.
    """
    if raw > 0.0:
        return Regime.LASING
    if divide > 0.0 and pump > divide:
        return Regime.ABOVE_UPPER_BOUND
    return Regime.BELOW_THRESHOLD


# --------------------------------------------------------------------------
# two-level model
# --------------------------------------------------------------------------

def _coeffs_two(d: DimensionlessTwoLevel) -> tuple[float, float, float]:
    s, delta = d.saturation, d.dephasing
    return -s, 1.0 - s * (2.0 + delta), -(1.0 + s * (1.0 + delta))


def raw_bracket_two(d: DimensionlessTwoLevel, pump: float) -> float:
    """(P - 1) - s*(P + 1)*(P + 1 + dephasing); positive exactly when lasing.

    The second term is the coherence-decay penalty: the pump broadens the
    transition it is trying to invert, so the bracket is an inverted
    parabola in P rather than a straight line.
    """
    s, delta = d.saturation, d.dephasing
    return (pump - 1.0) - s * (pump + 1.0) * (pump + 1.0 + delta)


def _vertex_two(d: DimensionlessTwoLevel) -> float:
    """Pump at the bracket's parabola vertex; +inf in the lossless limit."""
    if d.saturation == 0.0:
        return math.inf
    return 0.5 / d.saturation - 1.0 - 0.5 * d.dephasing


def n_two_level(d: DimensionlessTwoLevel, pump: float) -> SteadyResult:
    """Steady two-level photon number at relative pump P = Gamma/gamma."""
    if pump < 0.0:
        raise ValueError(f"pump must be >= 0, got {pump!r}")
    raw = raw_bracket_two(d, pump)
    gperp = 0.5 * (pump + 1.0 + d.dephasing)  # units of gamma_decay
    if raw > 0.0:
        # inversion pinned by the gain condition
        d_pin = d.saturation * (pump + 1.0 + d.dephasing)
        rho11 = 0.5 * (1.0 + d_pin)
    else:
        rho11 = pump / (pump + 1.0)
    return SteadyResult(
        photon_number=d.photon_scale * max(0.0, raw),
        regime=_classify(raw, pump, _vertex_two(d)),
        populations=(1.0 - rho11, rho11),
        gamma_perp=gperp,
        raw_bracket=raw,
    )


def threshold_two(d: DimensionlessTwoLevel) -> float | None:
    """Smaller positive root of the two-level bracket; None when no pump
    can reach inversion.

    That happens either through a negative discriminant (saturation too
    large for the given dephasing) or when both roots sit at negative
    pump (dephasing so large the gain condition fails everywhere on
    pump >= 0; the roots always share a sign because their product is
    (1 + s*(1+delta))/s > 0).
    """
    roots = _quadratic_roots(*_coeffs_two(d))
    if roots is None or roots[1] <= 0.0:
        return None
    return roots[0]


def window_two(d: DimensionlessTwoLevel) -> WindowReport:
    """Exact two-level lasing window plus the coarse closed forms.

    The asymptotic window is (1, 1/s - dephasing - 3), valid when the
    small-signal gain is large (s << 1); the necessary restriction
    (1, 1/s - dephasing - 1) merely keeps the coherence decay below the
    cooperativity bound and is strictly wider than the true window.
    """
    roots = _quadratic_roots(*_coeffs_two(d))
    exact = None
    if roots is not None and roots[0] < roots[1] and roots[1] > 0.0:
        exact = LasingWindow(roots[0], roots[1], exact=True)

    s, delta = d.saturation, d.dephasing
    asym_upper = math.inf if s == 0.0 else 1.0 / s - delta - 3.0
    asymptotic = LasingWindow(1.0, asym_upper, exact=False) if asym_upper > 1.0 else None

    nec_upper = math.inf if s == 0.0 else 1.0 / s - delta - 1.0
    necessary = LasingWindow(1.0, nec_upper, exact=False) if nec_upper > 1.0 else None

    rel_err = None
    if (
        exact is not None
        and asymptotic is not None
        and math.isfinite(exact.upper)
        and math.isfinite(asymptotic.upper)
    ):
        rel_err = abs(asymptotic.upper - exact.upper) / exact.upper
    return WindowReport(exact, asymptotic, necessary, rel_err)


def optimum_two(d: DimensionlessTwoLevel) -> ExtremumReport | None:
    """Pump maximizing the two-level photon number.

    The closed-form vertex 1/(2s) - 1 - dephasing/2 is exact here (the
    bracket is a true parabola); golden-section over the window confirms
    it.  Also reports the coarse peak value photon_scale/(4s), which is
    accurate to O(s) when the small-signal gain is large.  None when no
    window exists or in the lossless limit (no interior maximum).
    """
    win = window_two(d).exact
    if win is None or not math.isfinite(win.upper) or d.saturation == 0.0:
        return None
    s, delta = d.saturation, d.dephasing
    pump_est = 0.5 / s - 1.0 - 0.5 * delta
    p_exact, raw_max = maximize(lambda p: raw_bracket_two(d, p), win.lower, win.upper)
    n_exact = d.photon_scale * raw_max
    n_est = d.photon_scale / (4.0 * s)
    return ExtremumReport(
        pump_estimate=pump_est,
        pump_exact=p_exact,
        photon_at_exact=n_exact,
        discrepancy=abs(pump_est - p_exact) / p_exact,
        photon_max_estimate=n_est,
        photon_max_rel_err=abs(n_exact - n_est) / n_exact if n_exact > 0.0 else None,
    )


# --------------------------------------------------------------------------
# three-level model, scheme A (pump = gamma_21, coherence decay pump-free)
# --------------------------------------------------------------------------

def raw_bracket_scheme_a(d: DimensionlessSchemeA, pump: float) -> float:
    """[P*(1-eps) - s*(1+eps+delta)*(P*(1+eps)+eps)] / (1+2P)."""
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    numer = pump * (1.0 - eps) - s * (1.0 + eps + delta) * (pump * (1.0 + eps) + eps)
    return numer / (1.0 + 2.0 * pump)


def n_scheme_a(d: DimensionlessSchemeA, pump: float) -> SteadyResult:
    """Steady scheme-A photon number at relative pump P = gamma_21/gamma_02.

    Monotone saturating in P: the transfer through the ground reservoir
    bottlenecks once the pump outruns the depletion of the lower lasing
    state, so there is a threshold but no upper window edge.
    """
    if pump < 0.0:
        raise ValueError(f"pump must be >= 0, got {pump!r}")
    raw = raw_bracket_scheme_a(d, pump)
    gperp = 0.5 * (1.0 + d.decay_ratio + d.dephasing)  # units of gamma_02
    pops = _populations_scheme_a(d, pump, lasing=raw > 0.0)
    return SteadyResult(
        photon_number=d.photon_scale * max(0.0, raw),
        regime=Regime.LASING if raw > 0.0 else Regime.BELOW_THRESHOLD,
        populations=pops,
        gamma_perp=gperp,
        raw_bracket=raw,
    )


def _populations_scheme_a(
    d: DimensionlessSchemeA, pump: float, lasing: bool
) -> tuple[float, float, float]:
    eps = d.decay_ratio
    if lasing:
        d_pin = d.saturation * (1.0 + eps + d.dephasing)
        rho00 = pump * (1.0 - d_pin) / (1.0 + 2.0 * pump)
        rho11 = rho00 + d_pin
        rho22 = rho00 / pump  # lasing requires pump > 0
        return rho00, rho11, rho22
    z = (pump * eps, pump, eps)  # (rho00, rho11, rho22) weights
    total = sum(z)
    if total == 0.0:
        # pump = eps = 0: flow only feeds the reservoir level
        return 0.0, 0.0, 1.0
    return z[0] / total, z[1] / total, z[2] / total


def threshold_scheme_a(d: DimensionlessSchemeA) -> float | None:
    """Scheme-A threshold pump eps*s*(1+eps+delta) / [1-eps-s*(1+eps+delta)*(1+eps)].

    Exact (the bracket numerator is linear in P).  None when lasing is
    impossible at any pump: no initial inversion (eps >= 1) or saturation
    above (1-eps)/[(1+eps+delta)*(1+eps)].
    """
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    if eps >= 1.0:
        return None
    denom = 1.0 - eps - s * (1.0 + eps + delta) * (1.0 + eps)
    if denom <= 0.0:
        return None
    return eps * s * (1.0 + eps + delta) / denom


def saturation_limit_scheme_a(d: DimensionlessSchemeA) -> float:
    """Photon number in the strong-pump limit P -> inf.

    photon_scale * [(1-eps) - s*(1+eps+delta)*(1+eps)] / 2; positive
    exactly when a threshold exists, and an upper bound for every finite
    pump (bottleneck saturation).
    """
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    return d.photon_scale * ((1.0 - eps) - s * (1.0 + eps + delta) * (1.0 + eps)) / 2.0


def n_min_atoms(p: PhysicalThreeLevel) -> float | None:
    """Minimum atom number for scheme-A lasing to be possible at any pump.

    N_min = (kappa*gamma_02 / (2*g**2)) * (1+eps+delta)*(1+eps) / (1-eps)
    with eps = gamma_10/gamma_02 and delta = gamma_ph/gamma_02; it does
    not depend on the pump rate gamma_21.  None when eps >= 1 (no atom
    number helps without initial inversion).
    """
    if p.gamma_02 <= 0.0:
        raise ValueError("n_min_atoms requires gamma_02 > 0")
    eps = p.gamma_10 / p.gamma_02
    delta = p.gamma_ph / p.gamma_02
    if eps >= 1.0:
        return None
    return (
        (p.cavity_kappa * p.gamma_02 / (2.0 * p.coupling_g**2))
        * (1.0 + eps + delta)
        * (1.0 + eps)
        / (1.0 - eps)
    )


def depletion_ratio_window(p: PhysicalThreeLevel) -> WindowReport:
    """Allowed range of the depletion ratio gamma_02/gamma_10 (scheme A).

    Holding (N, g, kappa, gamma_10, gamma_ph) fixed and treating the
    depletion rate gamma_02 as the variable, the lasing condition becomes
    a quadratic inequality in r = gamma_02/gamma_10 with exactly the
    two-level bracket structure under s -> kappa*gamma_10/(2*N*g**2) and
    dephasing -> gamma_ph/gamma_10.  The coarse form of the upper edge is
    2*N*g**2/(kappa*gamma_10) - gamma_ph/gamma_10 - 3.
    """
    if p.gamma_10 <= 0.0:
        raise ValueError("depletion_ratio_window requires gamma_10 > 0")
    sigma = p.cavity_kappa * p.gamma_10 / (2.0 * p.n_atoms * p.coupling_g**2)
    phi = p.gamma_ph / p.gamma_10
    proxy = DimensionlessTwoLevel(photon_scale=1.0, saturation=sigma, dephasing=phi)
    return window_two(proxy)


# --------------------------------------------------------------------------
# three-level model, scheme B (pump = gamma_02, coherence decay grows with it)
# --------------------------------------------------------------------------

def _coeffs_scheme_b(d: DimensionlessSchemeB) -> tuple[float, float, float]:
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    a = -s * (1.0 + eps)
    b = 1.0 - s * (eps + (eps + delta) * (1.0 + eps))
    c = -eps * (1.0 + s * (eps + delta))
    return a, b, c


def raw_bracket_scheme_b(d: DimensionlessSchemeB, pump: float) -> float:
    """[P - eps - s*(P+eps+delta)*(P+eps+P*eps)] / (P+2).

    The saturation term carries an extra factor of P through the
    coherence decay, so the numerator is an inverted parabola: pumping
    harder eventually broadens the transition enough to kill the gain,
    exactly as in the two-level model.
    """
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    numer = (pump - eps) - s * (pump + eps + delta) * (pump + eps + pump * eps)
    return numer / (pump + 2.0)


def _vertex_scheme_b(d: DimensionlessSchemeB) -> float:
    a, b, _ = _coeffs_scheme_b(d)
    if a == 0.0:
        return math.inf
    return -b / (2.0 * a)


def n_scheme_b(d: DimensionlessSchemeB, pump: float) -> SteadyResult:
    """Steady scheme-B photon number at relative pump P = gamma_02/gamma_21."""
    if pump < 0.0:
        raise ValueError(f"pump must be >= 0, got {pump!r}")
    raw = raw_bracket_scheme_b(d, pump)
    gperp = 0.5 * (pump + d.decay_ratio + d.dephasing)  # units of gamma_21
    pops = _populations_scheme_b(d, pump, lasing=raw > 0.0)
    return SteadyResult(
        photon_number=d.photon_scale * max(0.0, raw),
        regime=_classify(raw, pump, _vertex_scheme_b(d)),
        populations=pops,
        gamma_perp=gperp,
        raw_bracket=raw,
    )


def _populations_scheme_b(
    d: DimensionlessSchemeB, pump: float, lasing: bool
) -> tuple[float, float, float]:
    eps = d.decay_ratio
    if lasing:
        d_pin = d.saturation * (pump + eps + d.dephasing)
        rho00 = (1.0 - d_pin) / (pump + 2.0)
        rho11 = rho00 + d_pin
        rho22 = pump * rho00
        return rho00, rho11, rho22
    z = (eps, pump, pump * eps)  # (rho00, rho11, rho22) weights
    total = sum(z)
    if total == 0.0:
        # pump = eps = 0: the ground state keeps everything
        return 1.0, 0.0, 0.0
    return z[0] / total, z[1] / total, z[2] / total


def threshold_scheme_b(d: DimensionlessSchemeB) -> float | None:
    """Smaller root of the scheme-B bracket numerator; None if no
    physical window (complex roots, or both roots at negative pump)."""
    roots = _quadratic_roots(*_coeffs_scheme_b(d))
    if roots is None or roots[1] <= 0.0:
        return None
    return roots[0]


def window_scheme_b(d: DimensionlessSchemeB) -> WindowReport:
    """Exact scheme-B lasing window and the small-(s, eps) closed form
    (1, 1/s - dephasing).  With eps = 0 the numerator factorizes as
    P * [1 - s*(P + dephasing)] and the exact upper edge coincides with
    the closed form."""
    roots = _quadratic_roots(*_coeffs_scheme_b(d))
    exact = None
    if roots is not None and roots[0] < roots[1] and roots[1] > 0.0:
        exact = LasingWindow(roots[0], roots[1], exact=True)

    s, delta = d.saturation, d.dephasing
    asym_upper = math.inf if s == 0.0 else 1.0 / s - delta
    asymptotic = LasingWindow(1.0, asym_upper, exact=False) if asym_upper > 1.0 else None

    rel_err = None
    if (
        exact is not None
        and asymptotic is not None
        and math.isfinite(exact.upper)
        and math.isfinite(asymptotic.upper)
    ):
        rel_err = abs(asymptotic.upper - exact.upper) / exact.upper
    return WindowReport(exact, asymptotic, None, rel_err)


def optimum_scheme_b(d: DimensionlessSchemeB) -> ExtremumReport | None:
    """Pump maximizing the scheme-B photon number.

    The simplified stationary point 1/(2s) - dephasing/2 - eps ignores the
    (P + 2) denominator and can overshoot the true maximizer severely;
    both are reported, with golden-section over the exact window providing
    the true one.  None without a finite window.
    """
    win = window_scheme_b(d).exact
    if win is None or not math.isfinite(win.upper):
        return None
    s, eps, delta = d.saturation, d.decay_ratio, d.dephasing
    pump_est = 0.5 / s - 0.5 * delta - eps
    p_exact, raw_max = maximize(lambda p: raw_bracket_scheme_b(d, p), win.lower, win.upper)
    return ExtremumReport(
        pump_estimate=pump_est,
        pump_exact=p_exact,
        photon_at_exact=d.photon_scale * raw_max,
        discrepancy=abs(pump_est - p_exact) / p_exact,
    )


# --------------------------------------------------------------------------
# three-level model, physical-rate route
# --------------------------------------------------------------------------

def n_three_physical(p: PhysicalThreeLevel) -> SteadyResult:
    """Steady three-level photon number straight from the physical rates.

    n = (N/(2*kappa)) * gamma_21*(gamma_02 - gamma_10)/(gamma_02 + 2*gamma_21)
        - (gamma_perp/(2*g**2)) * (gamma_02*gamma_21 + gamma_02*gamma_10
          + gamma_21*gamma_10)/(gamma_02 + 2*gamma_21)

    valid for both pump schemes (they share the equations of motion).
    This route never builds the reduced bracket, so it can arbitrate the
    two dimensionless parameterizations; ``raw_bracket`` here is the
    unclamped photon number itself.
    """
    denom = p.gamma_02 + 2.0 * p.gamma_21
    if denom <= 0.0:
        raise ValueError("gamma_02 + 2*gamma_21 must be > 0")
    gperp = gamma_perp_three(p)
    gain = (p.n_atoms / (2.0 * p.cavity_kappa)) * p.gamma_21 * (
        p.gamma_02 - p.gamma_10
    ) / denom
    loss = (gperp / (2.0 * p.coupling_g**2)) * (
        p.gamma_02 * p.gamma_21 + p.gamma_02 * p.gamma_10 + p.gamma_21 * p.gamma_10
    ) / denom
    raw = gain - loss

    if raw > 0.0:
        d_pin = p.cavity_kappa * gperp / (p.n_atoms * p.coupling_g**2)
        rho00 = p.gamma_21 * (1.0 - d_pin) / denom
        rho11 = rho00 + d_pin
        rho22 = 1.0 - rho00 - rho11
        pops = (rho00, rho11, rho22)
    else:
        try:
            pops = equilibrium_populations_three(p)
        except ValueError:
            # degenerate flow: the equilibrium is not unique
            pops = (math.nan, math.nan, math.nan)

    # regime classification runs through the scheme's reduced window
    try:
        d, pump = reduce_three(p)
    except ValueError:
        regime = Regime.LASING if raw > 0.0 else Regime.BELOW_THRESHOLD
    else:
        if p.scheme is PumpScheme.A:
            regime = Regime.LASING if raw > 0.0 else Regime.BELOW_THRESHOLD
        else:
            regime = _classify(raw, pump, _vertex_scheme_b(d))

    return SteadyResult(
        photon_number=max(0.0, raw),
        regime=regime,
        populations=pops,
        gamma_perp=gperp,
        raw_bracket=raw,
    )
