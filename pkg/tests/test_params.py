import math

import numpy as np
import pytest

from conftest import assert_identity, log_uniform, random_three_level
from lasekit import (
    BlochState2,
    BlochState3,
    DimensionlessSchemeA,
    DimensionlessSchemeB,
    DimensionlessTwoLevel,
    PhysicalThreeLevel,
    PhysicalTwoLevel,
    PumpScheme,
    equilibrium_populations_three,
    expand_scheme_a,
    expand_scheme_b,
    expand_two,
    gamma_parallel_and_inversion,
    gamma_perp_three,
    gamma_perp_two,
    n_three_physical,
    reduce_three,
    reduce_two,
)


def two_level(Gamma=0.0, gamma=1.0, gph=0.0, N=4.0, g=1.0, kappa=1.0):
    return PhysicalTwoLevel(
        n_atoms=N, coupling_g=g, cavity_kappa=kappa,
        gamma_decay=gamma, pump_Gamma=Gamma, gamma_ph=gph,
    )


def three_level(g21, g02, g10, gph=0.0, N=100.0, g=1.0, kappa=1.0, scheme=PumpScheme.B):
    return PhysicalThreeLevel(
        n_atoms=N, coupling_g=g, cavity_kappa=kappa,
        gamma_21=g21, gamma_02=g02, gamma_10=g10, gamma_ph=gph, scheme=scheme,
    )


def test_gamma_perp_two_direct_substitution():
    assert gamma_perp_two(two_level(Gamma=0.0, gamma=2.0)) == 1.0
    assert gamma_perp_two(two_level(Gamma=1.0, gamma=1.0)) == 1.0
    assert gamma_perp_two(two_level(Gamma=3.0, gamma=1.0, gph=2.0)) == 3.0


def test_gamma_perp_three_direct_substitution():
    assert gamma_perp_three(three_level(1.0, 2.0, 0.1)) == 1.05
    assert gamma_perp_three(three_level(1.0, 0.0, 0.0, gph=2.0)) == 1.0


def test_gamma_perp_three_independent_of_gamma_21():
    rng = np.random.default_rng(7)
    for _ in range(50):
        g02, g10, gph = log_uniform(rng, 1e-3, 1e3, 3)
        vals = {
            gamma_perp_three(three_level(g21, float(g02), float(g10), float(gph)))
            for g21 in (0.1, 1.0, 10.0)
        }
        assert len(vals) == 1


def test_gamma_parallel_and_inversion_example():
    p = three_level(1.0, 2.0, 0.1)
    gpar, inv = gamma_parallel_and_inversion(p)
    assert gpar == pytest.approx(2.0 * 2.3 / 4.0, rel=1e-14)
    assert inv == pytest.approx(1.9 / 2.3, rel=1e-14)


def test_inversion_vanishes_without_net_pumping():
    _, inv = gamma_parallel_and_inversion(three_level(1.0, 2.0, 2.0))
    assert inv == 0.0
    _, inv = gamma_parallel_and_inversion(three_level(0.0, 2.0, 0.1))
    assert inv == 0.0


def test_gamma_parallel_rejects_zero_denominator():
    with pytest.raises(ValueError):
        gamma_parallel_and_inversion(three_level(0.0, 0.0, 0.1))


def test_decomposition_identity_reproduces_direct_steady_state():
    # effective-two-level form N*gpar*inv/(4k) - gperp*gpar/(4g^2) must
    # equal the direct three-level formula exactly (500 random rate sets)
    rng = np.random.default_rng(11)
    for _ in range(500):
        p = random_three_level(rng)
        gpar, inv = gamma_parallel_and_inversion(p)
        gperp = gamma_perp_three(p)
        via_decomposition = (
            p.n_atoms * gpar * inv / (4.0 * p.cavity_kappa)
            - gperp * gpar / (4.0 * p.coupling_g**2)
        )
        direct = n_three_physical(p).raw_bracket
        gain = p.n_atoms * gpar * abs(inv) / (4.0 * p.cavity_kappa)
        loss = gperp * gpar / (4.0 * p.coupling_g**2)
        assert_identity(via_decomposition, direct, gain + loss)


def test_reduce_two_direct_substitution():
    d, pump = reduce_two(two_level(Gamma=2.0, gamma=1.0, N=4.0, g=1.0, kappa=1.0))
    assert (d.photon_scale, d.saturation, d.dephasing, pump) == (1.0, 0.125, 0.0, 2.0)

    d, pump = reduce_two(two_level(Gamma=2.0, gamma=2.0, N=2000.0, g=1.0, kappa=1.0))
    assert (d.photon_scale, d.saturation, d.dephasing, pump) == (1000.0, 5e-4, 0.0, 1.0)


def test_reduce_expand_two_round_trip():
    rng = np.random.default_rng(13)
    for _ in range(100):
        d = DimensionlessTwoLevel(
            photon_scale=float(log_uniform(rng, 0.25, 1e6)),
            saturation=float(log_uniform(rng, 1e-8, 1.0)),
            dephasing=float(log_uniform(rng, 1e-6, 1e6)),
        )
        pump = float(log_uniform(rng, 1e-3, 1e6))
        d2, pump2 = reduce_two(expand_two(d, pump))
        # the gauge is fixed, so the round trip is the identity up to the
        # sqrt rounding in the coupling
        assert d2.photon_scale == d.photon_scale
        assert d2.dephasing == d.dephasing
        assert pump2 == pump
        assert d2.saturation == pytest.approx(d.saturation, rel=1e-14)


def test_expand_two_requires_positive_saturation():
    with pytest.raises(ValueError):
        expand_two(DimensionlessTwoLevel(1e3, 0.0, 0.0), 1.0)


def test_reduce_three_both_schemes():
    d, pump = reduce_three(three_level(1.0, 2.0, 0.1, scheme=PumpScheme.B))
    assert isinstance(d, DimensionlessSchemeB)
    assert (d.photon_scale, d.saturation, d.decay_ratio, d.dephasing) == (
        50.0, 0.005, 0.1, 0.0,
    )
    assert pump == 2.0

    d, pump = reduce_three(three_level(1.0, 2.0, 0.1, scheme=PumpScheme.A))
    assert isinstance(d, DimensionlessSchemeA)
    assert (d.photon_scale, d.saturation, d.decay_ratio, d.dephasing) == (
        100.0, 0.01, 0.05, 0.0,
    )
    assert pump == 0.5


def test_reduce_three_rejects_zero_reference_rate():
    with pytest.raises(ValueError):
        reduce_three(three_level(1.0, 0.0, 0.1, scheme=PumpScheme.A))
    with pytest.raises(ValueError):
        reduce_three(three_level(0.0, 1.0, 0.1, scheme=PumpScheme.B))


def test_reduce_expand_three_round_trip():
    rng = np.random.default_rng(17)
    for _ in range(100):
        args = dict(
            photon_scale=float(log_uniform(rng, 0.5, 1e6)),
            saturation=float(log_uniform(rng, 1e-8, 1.0)),
            decay_ratio=float(log_uniform(rng, 1e-4, 2.0)),
            dephasing=float(log_uniform(rng, 1e-6, 1e3)),
        )
        pump = float(log_uniform(rng, 1e-3, 1e3))
        da = DimensionlessSchemeA(**args)
        da2, pump2 = reduce_three(expand_scheme_a(da, pump))
        assert (da2.photon_scale, da2.decay_ratio, da2.dephasing, pump2) == (
            da.photon_scale, da.decay_ratio, da.dephasing, pump,
        )
        assert da2.saturation == pytest.approx(da.saturation, rel=1e-14)

        db = DimensionlessSchemeB(**args)
        db2, pump2 = reduce_three(expand_scheme_b(db, pump))
        assert (db2.photon_scale, db2.decay_ratio, db2.dephasing, pump2) == (
            db.photon_scale, db.decay_ratio, db.dephasing, pump,
        )
        assert db2.saturation == pytest.approx(db.saturation, rel=1e-14)


def test_equilibrium_populations_three_detailed_balance():
    p = three_level(1.0, 2.0, 0.1)
    rho00, rho11, rho22 = equilibrium_populations_three(p)
    assert rho00 + rho11 + rho22 == pytest.approx(1.0, abs=1e-15)
    # stationarity of the no-field rate equations
    assert p.gamma_02 * rho00 == pytest.approx(p.gamma_21 * rho22, rel=1e-14)
    assert p.gamma_21 * rho22 == pytest.approx(p.gamma_10 * rho11, rel=1e-14)


def test_equilibrium_populations_three_degenerate_rejected():
    with pytest.raises(ValueError):
        equilibrium_populations_three(three_level(0.0, 2.0, 0.0))


def test_parameter_validation():
    with pytest.raises(ValueError):
        two_level(gamma=0.0)
    with pytest.raises(ValueError):
        two_level(N=0.5)
    with pytest.raises(ValueError):
        two_level(Gamma=-1.0)
    with pytest.raises(ValueError):
        two_level(g=math.inf)
    with pytest.raises(ValueError):
        DimensionlessTwoLevel(photon_scale=0.0, saturation=1e-6)
    with pytest.raises(ValueError):
        DimensionlessSchemeB(photon_scale=1.0, saturation=-1e-6, decay_ratio=0.0)
    with pytest.raises(ValueError):
        BlochState2(rho11=1.5, y=0.0, x=0.0)
    with pytest.raises(ValueError):
        BlochState3(rho11=0.7, rho22=0.7, y=0.0, x=0.0)


def test_bloch_state_accessors():
    s2 = BlochState2(rho11=0.25, y=0.1, x=3.0)
    assert s2.rho00 == 0.75
    assert s2.photon_number == 9.0
    s3 = BlochState3(rho11=0.2, rho22=0.3, y=0.0, x=2.0)
    assert s3.rho00 == pytest.approx(0.5)
    assert s3.photon_number == 4.0
