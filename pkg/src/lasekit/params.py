"""Parameter and state types shared by every model in the package.

Two model families are covered: a closed two-level atom with an incoherent
pump, and a closed three-level atom in which the third level either feeds
the upper lasing state (pump scheme A) or is fed from the lower one (pump
scheme B).  Both three-level schemes obey the same equations of motion; the
scheme tag only selects which rate plays the role of the pump.

Rates carry one arbitrary common unit.  Only ratios of rates matter, which
is what the dimensionless reductions below exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "PumpScheme",
    "Regime",
    "PhysicalTwoLevel",
    "PhysicalThreeLevel",
    "DimensionlessTwoLevel",
    "DimensionlessSchemeA",
    "DimensionlessSchemeB",
    "BlochState2",
    "BlochState3",
    "SteadyResult",
    "gamma_perp_two",
    "gamma_perp_three",
    "gamma_parallel_and_inversion",
    "reduce_two",
    "expand_two",
    "reduce_three",
    "expand_scheme_a",
    "expand_scheme_b",
    "equilibrium_populations_two",
    "equilibrium_populations_three",
]

# Slack for population bounds: adaptive integration may overshoot the
# simplex by a few ulps worth of accumulated error, never more than ~1e-8.
_POP_SLACK = 1e-6


def _check_rate(name: str, value: float, positive: bool = False) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if positive and value <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    if not positive and value < 0.0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")


class PumpScheme(Enum):
    """Which rate of the three-level system acts as the external pump.

    A: the pump lifts atoms from the ground reservoir into the upper
       lasing level (pump rate = ``gamma_21``); the lower lasing state is
       drained by the fixed depletion rate ``gamma_02``.
    B: the lower lasing state is itself the ground state and the pump
       empties it into the top level (pump rate = ``gamma_02``), which
       relaxes into the upper lasing level at ``gamma_21``.
    """

    A = "A"
    B = "B"


class Regime(Enum):
    """Classification of a steady state against the lasing window."""

    BELOW_THRESHOLD = "below_threshold"
    LASING = "lasing"
    ABOVE_UPPER_BOUND = "above_upper_bound"


@dataclass(frozen=True)
class PhysicalTwoLevel:
    """Raw rate set for the closed two-level laser.

    Attributes
    ----------
    n_atoms : float
        Total number of atoms N (>= 1).  Fractional values are allowed so
        that any dimensionless parameter point has an exact realization.
    coupling_g : float
        Electric dipole coupling g (> 0).
    cavity_kappa : float
        Cavity field decay rate kappa (> 0).
    gamma_decay : float
        Spontaneous decay rate gamma of the upper lasing level (> 0).
    pump_Gamma : float
        Incoherent pump rate Gamma (>= 0).
    gamma_ph : float
        Collisional (phase destroying) dephasing rate (>= 0).
    """

    n_atoms: float
    coupling_g: float
    cavity_kappa: float
    gamma_decay: float
    pump_Gamma: float
    gamma_ph: float = 0.0

    def __post_init__(self) -> None:
        _check_rate("n_atoms", self.n_atoms)
        if self.n_atoms < 1.0:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms!r}")
        _check_rate("coupling_g", self.coupling_g, positive=True)
        _check_rate("cavity_kappa", self.cavity_kappa, positive=True)
        _check_rate("gamma_decay", self.gamma_decay, positive=True)
        _check_rate("pump_Gamma", self.pump_Gamma)
        _check_rate("gamma_ph", self.gamma_ph)


@dataclass(frozen=True)
class PhysicalThreeLevel:
    """Raw rate set for the closed three-level laser.

    The lasing transition is |1> -> |0> (coherence rho10); |2> is the third
    level.  Population flows 0 ->(gamma_02)-> 2 ->(gamma_21)-> 1
    ->(gamma_10)-> 0 regardless of the scheme; ``scheme`` only records
    which of the rates is externally driven.
    """

    n_atoms: float
    coupling_g: float
    cavity_kappa: float
    gamma_21: float
    gamma_02: float
    gamma_10: float
    gamma_ph: float
    scheme: PumpScheme

    def __post_init__(self) -> None:
        _check_rate("n_atoms", self.n_atoms)
        if self.n_atoms < 1.0:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms!r}")
        _check_rate("coupling_g", self.coupling_g, positive=True)
        _check_rate("cavity_kappa", self.cavity_kappa, positive=True)
        _check_rate("gamma_21", self.gamma_21)
        _check_rate("gamma_02", self.gamma_02)
        _check_rate("gamma_10", self.gamma_10)
        _check_rate("gamma_ph", self.gamma_ph)
        if not isinstance(self.scheme, PumpScheme):
            raise ValueError(f"scheme must be a PumpScheme, got {self.scheme!r}")


@dataclass(frozen=True)
class DimensionlessTwoLevel:
    """Reduced two-level parameters.

    photon_scale = N*gamma/(4*kappa) sets the overall photon number,
    saturation = kappa*gamma/(2*N*g**2) is the inverse small-signal gain,
    and dephasing = gamma_ph/gamma.  The relative pump P = Gamma/gamma is
    kept separate because it is the swept variable.

    ``saturation == 0`` is accepted as the ideal lossless limit even
    though no finite atom number realizes it.
    """

    photon_scale: float
    saturation: float
    dephasing: float = 0.0

    def __post_init__(self) -> None:
        _check_rate("photon_scale", self.photon_scale, positive=True)
        _check_rate("saturation", self.saturation)
        _check_rate("dephasing", self.dephasing)


@dataclass(frozen=True)
class DimensionlessSchemeA:
    """Reduced scheme-A parameters (reference rate: the depletion rate
    gamma_02 of the lower lasing state).

    photon_scale = N*gamma_02/(2*kappa), saturation = kappa*gamma_02/(2*N*g**2),
    decay_ratio = gamma_10/gamma_02, dephasing = gamma_ph/gamma_02.
    The relative pump is P = gamma_21/gamma_02.
    """

    photon_scale: float
    saturation: float
    decay_ratio: float
    dephasing: float = 0.0

    def __post_init__(self) -> None:
        _check_rate("photon_scale", self.photon_scale, positive=True)
        _check_rate("saturation", self.saturation)
        _check_rate("decay_ratio", self.decay_ratio)
        _check_rate("dephasing", self.dephasing)


@dataclass(frozen=True)
class DimensionlessSchemeB:
    """Reduced scheme-B parameters (reference rate: the top-level decay
    gamma_21).

    photon_scale = N*gamma_21/(2*kappa), saturation = kappa*gamma_21/(2*N*g**2),
    decay_ratio = gamma_10/gamma_21, dephasing = gamma_ph/gamma_21.
    The relative pump is P = gamma_02/gamma_21.
    """

    photon_scale: float
    saturation: float
    decay_ratio: float
    dephasing: float = 0.0

    def __post_init__(self) -> None:
        _check_rate("photon_scale", self.photon_scale, positive=True)
        _check_rate("saturation", self.saturation)
        _check_rate("decay_ratio", self.decay_ratio)
        _check_rate("dephasing", self.dephasing)


@dataclass(frozen=True)
class BlochState2:
    """Phase-reduced two-level state.

    The global field phase is fixed so the field quadrature ``x`` is real
    and the coherence purely imaginary, rho10 = i*y.  The photon number is
    n = x**2 and rho00 = 1 - rho11 (closed system).
    """

    rho11: float
    y: float
    x: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.rho11, self.y, self.x)):
            raise ValueError("state components must be finite")
        if not -_POP_SLACK <= self.rho11 <= 1.0 + _POP_SLACK:
            raise ValueError(f"rho11 must lie in [0, 1], got {self.rho11!r}")

    @property
    def rho00(self) -> float:
        return 1.0 - self.rho11

    @property
    def photon_number(self) -> float:
        return self.x * self.x


@dataclass(frozen=True)
class BlochState3:
    """Phase-reduced three-level state; rho00 = 1 - rho11 - rho22."""

    rho11: float
    rho22: float
    y: float
    x: float

    def __post_init__(self) -> None:
        vals = (self.rho11, self.rho22, self.y, self.x)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("state components must be finite")
        if self.rho11 < -_POP_SLACK or self.rho22 < -_POP_SLACK:
            raise ValueError("populations must be >= 0")
        if self.rho11 + self.rho22 > 1.0 + _POP_SLACK:
            raise ValueError("rho11 + rho22 must be <= 1")

    @property
    def rho00(self) -> float:
        return 1.0 - self.rho11 - self.rho22

    @property
    def photon_number(self) -> float:
        return self.x * self.x


@dataclass(frozen=True)
class SteadyResult:
    """Closed-form steady state of one model at one pump value.

    ``raw_bracket`` is the unclamped value of the analytic photon-number
    expression divided by its photon_scale prefactor (for the physical
    three-level route, which has no separate prefactor, it is the
    unclamped photon number itself).  Its sign changes mark the lasing
    window; ``photon_number`` clamps the negative branch to the empty
    cavity.  ``gamma_perp`` is in physical rate units when the input was
    physical, otherwise in units of the reduction's reference rate.
    ``populations`` is (rho00, rho11) or (rho00, rho11, rho22) at the
    fixed point (the no-field equilibrium when not lasing).
    """

    photon_number: float
    regime: Regime
    populations: tuple[float, ...]
    gamma_perp: float
    raw_bracket: float


def gamma_perp_two(p: PhysicalTwoLevel) -> float:
    """Transverse (coherence) relaxation rate (Gamma + gamma + gamma_ph)/2.

    Every process that empties either lasing level contributes, so the
    coherence decay grows with the pump itself.  This pump dependence is
    the source of the two-level intensity nonlinearity.
    """
    return 0.5 * (p.pump_Gamma + p.gamma_decay + p.gamma_ph)


def gamma_perp_three(p: PhysicalThreeLevel) -> float:
    """Transverse relaxation rate (gamma_10 + gamma_02 + gamma_ph)/2.

    Only the rates draining the two lasing levels enter; gamma_21 does
    not.  Hence scheme A (pump = gamma_21) has a pump-independent
    coherence decay while scheme B (pump = gamma_02) does not, which is
    what makes their strong-pump behavior qualitatively different.
    """
    return 0.5 * (p.gamma_10 + p.gamma_02 + p.gamma_ph)


def _gamma_parallel_inversion_rates(
    g21: float, g02: float, g10: float
) -> tuple[float, float]:
    """Rate-level core of :func:`gamma_parallel_and_inversion`."""
    denom = g02 + 2.0 * g21
    if denom <= 0.0:
        raise ValueError("gamma_02 + 2*gamma_21 must be > 0")
    cross = g21 * g02 + g02 * g10 + g21 * g10
    gamma_par = 2.0 * cross / denom
    if cross == 0.0:
        # no closed pumping loop: the equilibrium carries no inversion
        inversion = 0.0
    else:
        inversion = g21 * (g02 - g10) / cross
    return gamma_par, inversion


def gamma_parallel_and_inversion(p: PhysicalThreeLevel) -> tuple[float, float]:
    """Effective longitudinal relaxation rate and equilibrium inversion.

    Collapses the three-level population dynamics onto effective two-level
    parameters:

        gamma_par = 2*(g21*g02 + g02*g10 + g21*g10) / (g02 + 2*g21)
        inversion = g21*(g02 - g10) / (g21*g02 + g02*g10 + g21*g10)

    The inversion equals rho11 - rho00 of the no-field equilibrium; it is
    positive only when the lower lasing state is drained faster than the
    upper one decays (gamma_02 > gamma_10).
    """
    return _gamma_parallel_inversion_rates(p.gamma_21, p.gamma_02, p.gamma_10)


def reduce_two(p: PhysicalTwoLevel) -> tuple[DimensionlessTwoLevel, float]:
    """Collapse a physical two-level rate set to (reduced params, pump P).

    P = Gamma/gamma.  The reduction discards one gauge degree of freedom;
    :func:`expand_two` fixes it back canonically.
    """
    g = p.gamma_decay
    lam = p.n_atoms * g / (4.0 * p.cavity_kappa)
    s = p.cavity_kappa * g / (2.0 * p.n_atoms * p.coupling_g**2)
    d = DimensionlessTwoLevel(
        photon_scale=lam, saturation=s, dephasing=p.gamma_ph / g
    )
    return d, p.pump_Gamma / g


def expand_two(d: DimensionlessTwoLevel, pump: float) -> PhysicalTwoLevel:
    """Canonical physical realization of a dimensionless two-level point.

    Gauge choice: cavity_kappa = 1 and gamma_decay = 1, which forces
    N = 4*photon_scale and g = sqrt(1/(2*N*saturation)).  Requires
    saturation > 0 (no finite atom number realizes the lossless limit)
    and photon_scale >= 1/4 (so that N >= 1).
    """
    if d.saturation <= 0.0:
        raise ValueError("expand_two requires saturation > 0")
    n_atoms = 4.0 * d.photon_scale
    g = math.sqrt(1.0 / (2.0 * n_atoms * d.saturation))
    return PhysicalTwoLevel(
        n_atoms=n_atoms,
        coupling_g=g,
        cavity_kappa=1.0,
        gamma_decay=1.0,
        pump_Gamma=pump,
        gamma_ph=d.dephasing,
    )


def reduce_three(
    p: PhysicalThreeLevel,
) -> tuple[DimensionlessSchemeA | DimensionlessSchemeB, float]:
    """Collapse a physical three-level rate set to (reduced params, pump P).

    The reference rate is gamma_02 for scheme A and gamma_21 for scheme B
    and must be nonzero; the relative pump is the driven rate over the
    reference rate.
    """
    n, g, kappa = p.n_atoms, p.coupling_g, p.cavity_kappa
    if p.scheme is PumpScheme.A:
        ref = p.gamma_02
        if ref <= 0.0:
            raise ValueError("scheme A reduction requires gamma_02 > 0")
        d_a = DimensionlessSchemeA(
            photon_scale=n * ref / (2.0 * kappa),
            saturation=kappa * ref / (2.0 * n * g**2),
            decay_ratio=p.gamma_10 / ref,
            dephasing=p.gamma_ph / ref,
        )
        return d_a, p.gamma_21 / ref
    ref = p.gamma_21
    if ref <= 0.0:
        raise ValueError("scheme B reduction requires gamma_21 > 0")
    d_b = DimensionlessSchemeB(
        photon_scale=n * ref / (2.0 * kappa),
        saturation=kappa * ref / (2.0 * n * g**2),
        decay_ratio=p.gamma_10 / ref,
        dephasing=p.gamma_ph / ref,
    )
    return d_b, p.gamma_02 / ref


def _expand_three(
    photon_scale: float, saturation: float, decay_ratio: float, dephasing: float,
    pump: float, scheme: PumpScheme,
) -> PhysicalThreeLevel:
    if saturation <= 0.0:
        raise ValueError("gauge expansion requires saturation > 0")
    n_atoms = 2.0 * photon_scale
    g = math.sqrt(1.0 / (4.0 * photon_scale * saturation))
    if scheme is PumpScheme.A:
        g21, g02 = pump, 1.0
    else:
        g21, g02 = 1.0, pump
    return PhysicalThreeLevel(
        n_atoms=n_atoms,
        coupling_g=g,
        cavity_kappa=1.0,
        gamma_21=g21,
        gamma_02=g02,
        gamma_10=decay_ratio,
        gamma_ph=dephasing,
        scheme=scheme,
    )


def expand_scheme_a(d: DimensionlessSchemeA, pump: float) -> PhysicalThreeLevel:
    """Canonical realization: cavity_kappa = 1, gamma_02 = 1, N = 2*photon_scale."""
    return _expand_three(
        d.photon_scale, d.saturation, d.decay_ratio, d.dephasing, pump, PumpScheme.A
    )


def expand_scheme_b(d: DimensionlessSchemeB, pump: float) -> PhysicalThreeLevel:
    """Canonical realization: cavity_kappa = 1, gamma_21 = 1, N = 2*photon_scale."""
    return _expand_three(
        d.photon_scale, d.saturation, d.decay_ratio, d.dephasing, pump, PumpScheme.B
    )


def equilibrium_populations_two(p: PhysicalTwoLevel) -> tuple[float, float]:
    """No-field rate-equation equilibrium (rho00, rho11)."""
    rho11 = p.pump_Gamma / (p.pump_Gamma + p.gamma_decay)
    return 1.0 - rho11, rho11


def equilibrium_populations_three(
    p: PhysicalThreeLevel,
) -> tuple[float, float, float]:
    """No-field rate-equation equilibrium (rho00, rho11, rho22).

    Detailed balance of the 0 -> 2 -> 1 -> 0 loop gives populations
    proportional to (g21*g10, g02*g21, g02*g10).  Degenerate rate sets
    (two or more loop rates zero) have no unique equilibrium and are
    rejected.
    """
    z00 = p.gamma_21 * p.gamma_10
    z11 = p.gamma_02 * p.gamma_21
    z22 = p.gamma_02 * p.gamma_10
    z = z00 + z11 + z22
    if z <= 0.0:
        raise ValueError(
            "population flow is degenerate (no unique no-field equilibrium)"
        )
    return z00 / z, z11 / z, z22 / z
