"""Time-domain integration of the Maxwell-Bloch systems.

The equations are integrated in phase-reduced real coordinates: the global
field phase is fixed so the field quadrature x is real and the lasing
coherence purely imaginary (rho10 = i*y).  The photon number is n = x**2,
and the implied dn/dt = -2*kappa*n + 2*N*g*x*y reproduces the
photon-number equation term by term, so fixed points of the reduced system
are exactly the steady states of the full one.

Two-level state  [rho11, y, x]:
    d rho11 = -gamma*rho11 + Gamma*(1 - rho11) - 2*g*x*y
    d y     = -gamma_perp*y + g*x*(2*rho11 - 1)
    d x     = -kappa*x + N*g*y

Three-level state [rho11, rho22, y, x] (rho00 = 1 - rho11 - rho22):
    d rho11 = gamma_21*rho22 - gamma_10*rho11 - 2*g*x*y
    d rho22 = gamma_02*rho00 - gamma_21*rho22
    d y     = -gamma_perp*y + g*x*(rho11 - rho00)
    d x     = -kappa*x + N*g*y

The integrator is an explicit adaptive Dormand-Prince 5(4) embedded pair
with first-same-as-last reuse; the derivative of every accepted state
comes for free, which is what the scaled derivative-norm steady-state
detector runs on.  The hot loop compiles with numba when available and
falls back to plain Python otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a speedup, not a requirement
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

from .params import (
    BlochState2,
    BlochState3,
    PhysicalThreeLevel,
    PhysicalTwoLevel,
    equilibrium_populations_three,
    equilibrium_populations_two,
    gamma_perp_three,
    gamma_perp_two,
    reduce_two,
)
from .steady import n_three_physical, n_two_level

__all__ = [
    "IntegratorConfig",
    "TimeSeries",
    "SettleResult",
    "StiffnessError",
    "derivs_two",
    "derivs_three",
    "initial_state",
    "fixed_point_state",
    "default_t_max",
    "integrate",
    "settle",
]

# loop exit codes
_STEADY = 0
_TMAX = 1
_UNDERFLOW = 2


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and limits for the adaptive integrator.

    ``t_max = None`` resolves to 1e3 times the inverse of the slowest
    nonzero rate of the model, which comfortably covers the relaxation of
    every mode; ``steady_tol`` is the scaled derivative-norm cutoff
    ||f(y)|| < steady_tol*(||y|| + 1) used for fixed-point detection (a
    state-differencing criterion would need retuning across the many
    orders of magnitude the photon number spans).
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = math.inf
    t_max: float | None = None
    steady_tol: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("rel_tol", "abs_tol", "steady_tol"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValueError(f"{name} must be > 0, got {v!r}")
        if not self.max_step > 0.0:
            raise ValueError(f"max_step must be > 0, got {self.max_step!r}")
        if self.t_max is not None and not self.t_max > 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max!r}")


@dataclass(frozen=True)
class TimeSeries:
    """Accepted-step samples of one trajectory.

    ``states`` rows match ``times``; columns follow ``state_labels``.
    ``steady`` records whether the run ended on the fixed-point criterion
    (as opposed to exhausting t_max), and ``derivative_norm`` is ||f|| at
    the final state.
    """

    times: np.ndarray
    states: np.ndarray
    photon_numbers: np.ndarray
    state_labels: tuple[str, ...]
    steady: bool
    derivative_norm: float

    def __post_init__(self) -> None:
        if len(self.times) != len(self.states) or len(self.times) != len(
            self.photon_numbers
        ):
            raise ValueError("times, states and photon_numbers must match")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True)
class SettleResult:
    """Outcome of integrating toward a fixed point.

    ``converged`` is False when t_max ran out before the derivative norm
    dropped below the cutoff; the final state is reported either way.
    """

    photon_number: float
    state: BlochState2 | BlochState3
    time: float
    derivative_norm: float
    converged: bool

    @property
    def populations(self) -> tuple[float, ...]:
        s = self.state
        if isinstance(s, BlochState3):
            return (s.rho00, s.rho11, s.rho22)
        return (s.rho00, s.rho11)


class StiffnessError(RuntimeError):
    """The adaptive step size underflowed; the problem is too stiff for an
    explicit method at the requested tolerances."""

    def __init__(self, t: float, state: np.ndarray):
        self.t = t
        self.state = state
        super().__init__(
            f"step size underflow at t = {t!r} (state {state!r}); "
            "relax tolerances or reduce the rate disparity"
        )


@njit(cache=True)
def _rhs(model: int, par: np.ndarray, v: np.ndarray, out: np.ndarray) -> None:
    n_at = par[0]
    g = par[1]
    kappa = par[2]
    if model == 2:
        gamma = par[3]
        pump = par[4]
        gperp = par[5]
        rho11 = v[0]
        yq = v[1]
        xq = v[2]
        out[0] = -gamma * rho11 + pump * (1.0 - rho11) - 2.0 * g * xq * yq
        out[1] = -gperp * yq + g * xq * (2.0 * rho11 - 1.0)
        out[2] = -kappa * xq + n_at * g * yq
    else:
        g21 = par[3]
        g02 = par[4]
        g10 = par[5]
        gperp = par[6]
        rho11 = v[0]
        rho22 = v[1]
        yq = v[2]
        xq = v[3]
        rho00 = 1.0 - rho11 - rho22
        out[0] = g21 * rho22 - g10 * rho11 - 2.0 * g * xq * yq
        out[1] = g02 * rho00 - g21 * rho22
        out[2] = -gperp * yq + g * xq * (rho11 - rho00)
        out[3] = -kappa * xq + n_at * g * yq


@njit(cache=True)
def _norm(v: np.ndarray) -> float:
    acc = 0.0
    for i in range(v.shape[0]):
        acc += v[i] * v[i]
    return math.sqrt(acc)


@njit(cache=True)
def _dp45_loop(
    model: int,
    par: np.ndarray,
    y0: np.ndarray,
    t_max: float,
    rtol: float,
    atol: float,
    max_step: float,
    steady_tol: float,
    record: bool,
    stop_at_steady: bool,
):
    """Adaptive Dormand-Prince 5(4) from t = 0 to t_max.

    Returns (status, t, y, f_norm, times[:m], states[:m]).  status:
    0 = derivative norm reached steady_tol scale, 1 = t_max reached,
    2 = step-size underflow.
    """
    n = y0.shape[0]
    t = 0.0
    y = y0.copy()
    ynew = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    ytmp = np.empty(n)

    _rhs(model, par, y, k1)
    fnorm = _norm(k1)

    cap = 1024 if record else 1
    ts = np.empty(cap)
    ys = np.empty((cap, n))
    count = 0
    if record:
        ts[0] = t
        for i in range(n):
            ys[0, i] = y[i]
        count = 1

    if stop_at_steady and fnorm < steady_tol * (_norm(y) + 1.0):
        return _STEADY, t, y, fnorm, ts[:count].copy(), ys[:count].copy()

    # initial step: the usual two-phase heuristic on scaled magnitudes
    d0 = 0.0
    d1 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y[i])
        d0 += (y[i] / sc) ** 2
        d1 += (k1[i] / sc) ** 2
    d0 = math.sqrt(d0 / n)
    d1 = math.sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, t_max, max_step)
    for i in range(n):
        ytmp[i] = y[i] + h0 * k1[i]
    _rhs(model, par, ytmp, k2)
    d2 = 0.0
    for i in range(n):
        sc = atol + rtol * abs(y[i])
        d2 += ((k2[i] - k1[i]) / sc) ** 2
    d2 = math.sqrt(d2 / n) / h0
    dm = max(d1, d2)
    if dm <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    h = min(100.0 * h0, h1, t_max, max_step)
    if not (h > 0.0 and math.isfinite(h)):
        # overflow-proof fallback for extreme tolerance settings
        h = min(1e-6, t_max, max_step)

    # Near a fixed point the error-controlled stepper keeps injecting
    # O(atol + rtol*|y|) perturbations, which puts a noise floor under
    # ||f|| far above steady_tol*(||y|| + 1).  When the flow speed enters
    # the terminal zone the effective tolerances are tightened (never
    # loosened beyond the requested ones) so the criterion stays
    # reachable; the rounding floor caps how far tightening can go.
    tighten = 1.0
    tighten_min = min(1.0, 5e-14 / rtol)

    status = _TMAX
    while t < t_max:
        atol_eff = atol * tighten
        rtol_eff = rtol * tighten
        floor = 1e-14 * max(1.0, abs(t))
        remaining = t_max - t
        if remaining <= floor:
            break  # arrived within rounding of the horizon
        if h > max_step:
            h = max_step
        if h > remaining:
            h = remaining
        if h < floor:
            # the error controller, not the horizon, drove h to zero
            status = _UNDERFLOW
            break

        # Dormand-Prince stages (FSAL: k1 already holds f(t, y))
        for i in range(n):
            ytmp[i] = y[i] + h * 0.2 * k1[i]
        _rhs(model, par, ytmp, k2)
        for i in range(n):
            ytmp[i] = y[i] + h * (0.075 * k1[i] + 0.225 * k2[i])
        _rhs(model, par, ytmp, k3)
        for i in range(n):
            ytmp[i] = y[i] + h * (
                (44.0 / 45.0) * k1[i]
                - (56.0 / 15.0) * k2[i]
                + (32.0 / 9.0) * k3[i]
            )
        _rhs(model, par, ytmp, k4)
        for i in range(n):
            ytmp[i] = y[i] + h * (
                (19372.0 / 6561.0) * k1[i]
                - (25360.0 / 2187.0) * k2[i]
                + (64448.0 / 6561.0) * k3[i]
                - (212.0 / 729.0) * k4[i]
            )
        _rhs(model, par, ytmp, k5)
        for i in range(n):
            ytmp[i] = y[i] + h * (
                (9017.0 / 3168.0) * k1[i]
                - (355.0 / 33.0) * k2[i]
                + (46732.0 / 5247.0) * k3[i]
                + (49.0 / 176.0) * k4[i]
                - (5103.0 / 18656.0) * k5[i]
            )
        _rhs(model, par, ytmp, k6)
        for i in range(n):
            ynew[i] = y[i] + h * (
                (35.0 / 384.0) * k1[i]
                + (500.0 / 1113.0) * k3[i]
                + (125.0 / 192.0) * k4[i]
                - (2187.0 / 6784.0) * k5[i]
                + (11.0 / 84.0) * k6[i]
            )
        _rhs(model, par, ynew, k7)

        # embedded 4th-order error estimate
        errnorm = 0.0
        for i in range(n):
            e = h * (
                (71.0 / 57600.0) * k1[i]
                - (71.0 / 16695.0) * k3[i]
                + (71.0 / 1920.0) * k4[i]
                - (17253.0 / 339200.0) * k5[i]
                + (22.0 / 525.0) * k6[i]
                - (1.0 / 40.0) * k7[i]
            )
            sc = atol_eff + rtol_eff * max(abs(y[i]), abs(ynew[i]))
            errnorm += (e / sc) ** 2
        errnorm = math.sqrt(errnorm / n)

        if errnorm <= 1.0:
            t += h
            for i in range(n):
                y[i] = ynew[i]
                k1[i] = k7[i]  # FSAL
            if record:
                if count == cap:
                    cap2 = cap * 2
                    ts2 = np.empty(cap2)
                    ys2 = np.empty((cap2, n))
                    ts2[:cap] = ts
                    ys2[:cap] = ys
                    ts = ts2
                    ys = ys2
                    cap = cap2
                ts[count] = t
                for i in range(n):
                    ys[count, i] = y[i]
                count += 1
            fnorm = _norm(k1)
            if stop_at_steady:
                target = steady_tol * (_norm(y) + 1.0)
                if fnorm < target:
                    status = _STEADY
                    break
                if fnorm < 1e4 * target and tighten > tighten_min:
                    tighten = max(0.25 * tighten, tighten_min)
                elif fnorm > 1e5 * target and tighten < 1.0:
                    tighten = min(4.0 * tighten, 1.0)
            if errnorm == 0.0:
                h *= 5.0
            else:
                h *= min(5.0, max(0.2, 0.9 * errnorm ** -0.2))
        else:
            h *= max(0.1, 0.9 * errnorm ** -0.2)

    return status, t, y, fnorm, ts[:count].copy(), ys[:count].copy()


_LABELS2 = ("rho11", "y", "x")
_LABELS3 = ("rho11", "rho22", "y", "x")


def _pack(p: PhysicalTwoLevel | PhysicalThreeLevel) -> tuple[int, np.ndarray]:
    if isinstance(p, PhysicalTwoLevel):
        par = np.array(
            [
                p.n_atoms,
                p.coupling_g,
                p.cavity_kappa,
                p.gamma_decay,
                p.pump_Gamma,
                gamma_perp_two(p),
                0.0,
            ]
        )
        return 2, par
    if isinstance(p, PhysicalThreeLevel):
        par = np.array(
            [
                p.n_atoms,
                p.coupling_g,
                p.cavity_kappa,
                p.gamma_21,
                p.gamma_02,
                p.gamma_10,
                gamma_perp_three(p),
            ]
        )
        return 3, par
    raise TypeError(f"unsupported model parameters: {type(p).__name__}")


def _state_array(
    p: PhysicalTwoLevel | PhysicalThreeLevel,
    state: BlochState2 | BlochState3,
) -> np.ndarray:
    if isinstance(p, PhysicalTwoLevel):
        if not isinstance(state, BlochState2):
            raise TypeError("two-level model needs a BlochState2 initial state")
        return np.array([state.rho11, state.y, state.x])
    if not isinstance(state, BlochState3):
        raise TypeError("three-level model needs a BlochState3 initial state")
    return np.array([state.rho11, state.rho22, state.y, state.x])


def _state_object(
    model: int, y: np.ndarray
) -> BlochState2 | BlochState3:
    if model == 2:
        return BlochState2(rho11=float(y[0]), y=float(y[1]), x=float(y[2]))
    return BlochState3(
        rho11=float(y[0]), rho22=float(y[1]), y=float(y[2]), x=float(y[3])
    )


def derivs_two(state: BlochState2, p: PhysicalTwoLevel) -> np.ndarray:
    """Time derivative (d rho11, d y, d x) of the reduced two-level system."""
    v = _state_array(p, state)
    out = np.empty(3)
    _, par = _pack(p)
    _rhs(2, par, v, out)
    return out


def derivs_three(state: BlochState3, p: PhysicalThreeLevel) -> np.ndarray:
    """Time derivative (d rho11, d rho22, d y, d x) of the reduced
    three-level system."""
    v = _state_array(p, state)
    out = np.empty(4)
    _, par = _pack(p)
    _rhs(3, par, v, out)
    return out


def initial_state(
    p: PhysicalTwoLevel | PhysicalThreeLevel, seed_field: float = 1e-3
) -> BlochState2 | BlochState3:
    """Default initial condition: no-field equilibrium populations with a
    small seed field.

    n = 0 is always a fixed point, so a seed is required for the
    trajectory to find the lasing branch; 1e-3 is small enough not to
    bias where it ends up.
    """
    if isinstance(p, PhysicalTwoLevel):
        _, rho11 = equilibrium_populations_two(p)
        return BlochState2(rho11=rho11, y=0.0, x=seed_field)
    _, rho11, rho22 = equilibrium_populations_three(p)
    return BlochState3(rho11=rho11, rho22=rho22, y=0.0, x=seed_field)


def fixed_point_state(
    p: PhysicalTwoLevel | PhysicalThreeLevel,
) -> BlochState2 | BlochState3:
    """Closed-form steady state expanded to a full dynamical state.

    On the lasing branch the field quadrature is x = sqrt(n) with the
    coherence slaved at y = kappa*x/(N*g); below threshold (or beyond the
    upper window edge) it is the no-field equilibrium.  Substituting the
    result into the equations of motion gives derivatives at the rounding
    floor, which is how the closed forms and the integrator are tied
    together.  Note the fixed point itself may be dynamically unstable in
    strongly pumped bad-cavity regimes; existence does not imply the
    trajectory ends there.
    """
    if isinstance(p, PhysicalTwoLevel):
        d, pump = reduce_two(p)
        res = n_two_level(d, pump)
        if res.photon_number > 0.0:
            x = math.sqrt(res.photon_number)
            y = p.cavity_kappa * x / (p.n_atoms * p.coupling_g)
            return BlochState2(rho11=res.populations[1], y=y, x=x)
        _, rho11 = equilibrium_populations_two(p)
        return BlochState2(rho11=rho11, y=0.0, x=0.0)

    res = n_three_physical(p)
    if res.photon_number > 0.0:
        x = math.sqrt(res.photon_number)
        y = p.cavity_kappa * x / (p.n_atoms * p.coupling_g)
        return BlochState3(
            rho11=res.populations[1], rho22=res.populations[2], y=y, x=x
        )
    _, rho11, rho22 = equilibrium_populations_three(p)
    return BlochState3(rho11=rho11, rho22=rho22, y=0.0, x=0.0)


def default_t_max(p: PhysicalTwoLevel | PhysicalThreeLevel) -> float:
    """1e3 times the inverse of the slowest nonzero rate of the model."""
    if isinstance(p, PhysicalTwoLevel):
        rates = (p.cavity_kappa, p.gamma_decay, p.pump_Gamma, p.gamma_ph)
    else:
        rates = (p.cavity_kappa, p.gamma_21, p.gamma_02, p.gamma_10, p.gamma_ph)
    slowest = min(r for r in rates if r > 0.0)
    return 1e3 / slowest


def _run(
    p: PhysicalTwoLevel | PhysicalThreeLevel,
    initial: BlochState2 | BlochState3 | None,
    config: IntegratorConfig,
    record: bool,
    stop_at_steady: bool,
):
    model, par = _pack(p)
    y0 = _state_array(p, initial if initial is not None else initial_state(p))
    t_max = config.t_max if config.t_max is not None else default_t_max(p)
    status, t, y, fnorm, ts, ys = _dp45_loop(
        model,
        par,
        y0,
        float(t_max),
        config.rel_tol,
        config.abs_tol,
        config.max_step,
        config.steady_tol,
        record,
        stop_at_steady,
    )
    if status == _UNDERFLOW:
        raise StiffnessError(t, y)
    return model, status, t, y, fnorm, ts, ys


def integrate(
    p: PhysicalTwoLevel | PhysicalThreeLevel,
    initial: BlochState2 | BlochState3 | None = None,
    config: IntegratorConfig = IntegratorConfig(),
    stop_at_steady: bool = False,
) -> TimeSeries:
    """Integrate one trajectory, sampling every accepted step.

    Runs to ``config.t_max`` (resolved per :func:`default_t_max` when
    None), or until the fixed-point criterion fires if
    ``stop_at_steady`` is set.  Raises :class:`StiffnessError` on step
    underflow.
    """
    model, status, _, _, fnorm, ts, ys = _run(
        p, initial, config, record=True, stop_at_steady=stop_at_steady
    )
    xcol = 2 if model == 2 else 3
    return TimeSeries(
        times=ts,
        states=ys,
        photon_numbers=ys[:, xcol] ** 2,
        state_labels=_LABELS2 if model == 2 else _LABELS3,
        steady=status == _STEADY,
        derivative_norm=fnorm,
    )


def settle(
    p: PhysicalTwoLevel | PhysicalThreeLevel,
    initial: BlochState2 | BlochState3 | None = None,
    config: IntegratorConfig = IntegratorConfig(),
) -> SettleResult:
    """Integrate until the scaled derivative norm marks a fixed point.

    The independent cross-check for every closed-form photon number: no
    steady-state algebra enters, only the equations of motion.  When
    t_max is exhausted first, the result carries ``converged = False``
    and the last state instead of raising.
    """
    model, status, t, y, fnorm, _, _ = _run(
        p, initial, config, record=False, stop_at_steady=True
    )
    state = _state_object(model, y)
    return SettleResult(
        photon_number=state.photon_number,
        state=state,
        time=float(t),
        derivative_norm=float(fnorm),
        converged=status == _STEADY,
    )
