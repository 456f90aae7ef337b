import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dsfprobe import (
    ImpuritySite,
    ProbeConfig,
    coupling_constants,
    cross_spectral_density,
    decay_rate,
    far_field_cross_form_factor,
    form_factor,
    spectral_density,
    super_ohmic_params,
    super_ohmic_spectral_density,
)

PROBE = ProbeConfig(mass_ratio=40.0 / 6.0, kappa=0.18, omega_a=1.0)

# frozen package values for the far-field cross spectral density with both
# dipoles along the separation axis at distance 5 ell (regression constants)
CROSS_REGRESSION = {
    0.6: 5.686312034178697e-07,
    1.0: 1.6050467069527348e-07,
}
AUTO_REGRESSION = {
    0.6: 4.405379925462316e-07,
    1.0: 3.7849945906640394e-06,
}


# ---------------------------------------------------------------- geometry


def test_oscillator_length():
    # ell = 1/sqrt(M omega_A) with M = mass_ratio * m
    assert PROBE.impurity_mass == pytest.approx(20.0 / 6.0)
    assert PROBE.ell == pytest.approx(1.0 / np.sqrt(20.0 / 6.0), rel=1e-14)


def test_ell_tracks_trap_frequency():
    p2 = PROBE.with_omega(4.0)
    assert p2.ell == pytest.approx(PROBE.ell / 2.0, rel=1e-14)
    assert p2.kappa == PROBE.kappa and p2.mass_ratio == PROBE.mass_ratio


def test_probe_config_validation():
    with pytest.raises(ValueError):
        ProbeConfig(mass_ratio=1.0, kappa=0.1, omega_a=-1.0)
    with pytest.raises(ValueError):
        ProbeConfig(mass_ratio=1.0, kappa=0.0, omega_a=1.0)
    with pytest.raises(ValueError):
        ProbeConfig(mass_ratio=-2.0, kappa=0.1, omega_a=1.0)


def test_impurity_site_validation():
    with pytest.raises(ValueError):
        ImpuritySite(position=(0.0, 0.0, 0.0), dipole=(1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        ImpuritySite(position=(0.0, 0.0), dipole=(1.0, 0.0, 0.0))


# ---------------------------------------------------------------- form factors


def test_form_factor_basics():
    ell = PROBE.ell
    assert form_factor(0.0, ell) == 0.0
    # maximum value 1/(3e) at q = sqrt(2)/ell
    qs = np.linspace(0.0, 10.0 / ell, 20001)
    vals = form_factor(qs, ell)
    assert vals.max() == pytest.approx(1.0 / (3.0 * np.e), rel=1e-6)
    assert qs[np.argmax(vals)] == pytest.approx(np.sqrt(2.0) / ell, rel=1e-3)
    assert form_factor(1.0 / ell, ell) == pytest.approx(np.exp(-0.5) / 6.0, rel=1e-14)


def test_coupling_constants_at_zero_momentum():
    ell, kappa = PROBE.ell, PROBE.kappa
    q0 = np.zeros(3)
    assert coupling_constants(q0, ell, kappa, (0, 0)) == pytest.approx(kappa)
    for a in (1, 2, 3):
        assert coupling_constants(q0, ell, kappa, (a, 0)) == 0.0
        assert coupling_constants(q0, ell, kappa, (a, a)) == pytest.approx(kappa)


def test_coupling_constants_symmetric_in_levels():
    ell, kappa = PROBE.ell, PROBE.kappa
    qvec = np.array([0.3, -0.7, 1.1])
    for g in range(4):
        for d in range(4):
            assert coupling_constants(qvec, ell, kappa, (g, d)) == pytest.approx(
                coupling_constants(qvec, ell, kappa, (d, g))
            )
    with pytest.raises(ValueError):
        coupling_constants(qvec, ell, kappa, (0, 4))


def test_excitation_couplings_sum_to_form_factor():
    # sum_a |lambda^(a0)|^2 = 3 kappa^2 Phi(q) for any direction of q
    ell, kappa = PROBE.ell, PROBE.kappa
    rng = np.random.default_rng(7)
    for _ in range(5):
        qvec = rng.normal(size=3)
        q = np.linalg.norm(qvec)
        total = sum(
            abs(coupling_constants(qvec, ell, kappa, (a, 0))) ** 2 for a in (1, 2, 3)
        )
        assert total == pytest.approx(3.0 * kappa**2 * form_factor(q, ell), rel=1e-10)


def test_cross_form_factor_limits():
    ell = PROBE.ell
    z = (0.0, 0.0, 1.0)
    same = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=z)
    # coincident traps reduce to the single-impurity form factor
    assert far_field_cross_form_factor(0.8, same, same, ell) == pytest.approx(
        form_factor(0.8, ell)
    )
    # dipoles perpendicular to the separation axis decouple exactly
    other = ImpuritySite(position=(20.0 * ell, 0.0, 0.0), dipole=z)
    assert far_field_cross_form_factor(0.8, same, other, ell) == 0.0


def test_cross_form_factor_warns_in_near_field():
    ell = PROBE.ell
    x = (1.0, 0.0, 0.0)
    a = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=x)
    b = ImpuritySite(position=(2.0 * ell, 0.0, 0.0), dipole=x)
    with pytest.warns(UserWarning, match="separation"):
        far_field_cross_form_factor(0.5, a, b, ell)


# ---------------------------------------------------------------- spectral density


def test_spectral_density_vanishes_at_nonpositive_frequency(point_uni):
    assert spectral_density(0.0, PROBE, point_uni, 0.01) == 0.0
    assert spectral_density(-0.5, PROBE, point_uni, 0.01) == 0.0


def test_spectral_density_nonnegative(point_uni):
    for nu in (0.3, 0.9, 1.6):
        assert spectral_density(nu, PROBE, point_uni, 0.01) >= 0.0


def test_two_routes_agree_below_continuum(point_bec):
    nu = 0.5 * point_bec.theta0
    broad = spectral_density(nu, PROBE, point_bec, 0.01, method="broadened")
    coll = spectral_density(nu, PROBE, point_bec, 0.01, method="collective")
    assert broad == pytest.approx(coll, rel=0.03)


def test_unknown_method_rejected(point_uni):
    with pytest.raises(ValueError):
        spectral_density(0.5, PROBE, point_uni, 0.01, method="exact")


def test_finite_temperature_guard_warns(point_uni):
    cold = ProbeConfig(mass_ratio=PROBE.mass_ratio, kappa=PROBE.kappa, omega_a=1.0, beta=2.0)
    with pytest.warns(UserWarning, match="beta"):
        spectral_density(0.5, cold, point_uni, 0.01)


def test_super_ohmic_low_frequency_form(point_uni):
    # collective-route I(nu) follows alpha wc^-4 nu^5 exp(-nu^2/2wc^2)
    alpha, wc = super_ohmic_params(PROBE, point_uni)
    assert wc == pytest.approx(point_uni.c / PROBE.ell, rel=1e-14)
    nus = np.array([0.02, 0.03, 0.045])
    got = np.array(
        [spectral_density(v, PROBE, point_uni, 0.01, method="collective") for v in nus]
    )
    ref = super_ohmic_spectral_density(nus, PROBE, point_uni)
    assert np.all(np.abs(got / ref - 1.0) < 0.05)
    slope = np.polyfit(np.log(nus), np.log(got), 1)[0]
    # the Gaussian cutoff nudges the local exponent slightly below 5
    assert slope == pytest.approx(5.0, abs=0.1)


def test_decay_rate_markov_diagnostics(point_bcs):
    probe = PROBE.with_omega(point_bcs.theta0)
    rate = decay_rate(probe, point_bcs, 0.01)
    assert rate.gamma == pytest.approx(2.0 * np.pi * rate.spectral, rel=1e-14)
    assert 0 < rate.gamma < 1e-3
    assert rate.markov_bandwidth_ratio < 0.1
    assert rate.markov_frequency_ratio < 0.1


# ---------------------------------------------------------------- cross spectra


def test_cross_spectral_density_regression(point_uni):
    ell = PROBE.ell
    x = (1.0, 0.0, 0.0)
    a = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=x)
    b = ImpuritySite(position=(5.0 * ell, 0.0, 0.0), dipole=x)
    for nu, ref in CROSS_REGRESSION.items():
        got = cross_spectral_density(nu, a, b, PROBE, point_uni, 0.01)
        assert got == pytest.approx(ref, rel=1e-6)
        auto = spectral_density(nu, PROBE, point_uni, 0.01)
        assert auto == pytest.approx(AUTO_REGRESSION[nu], rel=1e-6)


def test_cross_spectral_density_bounded_by_autocorrelation(point_uni):
    ell = PROBE.ell
    x = (1.0, 0.0, 0.0)
    a = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=x)
    b = ImpuritySite(position=(20.0 * ell, 0.0, 0.0), dipole=x)
    for nu in (0.6, 1.0):
        cross = cross_spectral_density(nu, a, b, PROBE, point_uni, 0.01)
        auto = spectral_density(nu, PROBE, point_uni, 0.01)
        assert abs(cross) < auto


def test_perpendicular_lattice_decouples(point_uni):
    # dipoles along z, separations in the xy plane: exact geometric zero
    ell = PROBE.ell
    z = (0.0, 0.0, 1.0)
    a = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=z)
    b = ImpuritySite(position=(20.0 * ell, 20.0 * ell, 0.0), dipole=z)
    for nu in (0.5, 1.0):
        cross = cross_spectral_density(nu, a, b, PROBE, point_uni, 0.01)
        auto = spectral_density(nu, PROBE, point_uni, 0.01)
        assert abs(cross) / auto < 1e-3


@settings(max_examples=20, deadline=None)
@given(q=st.floats(1e-3, 20.0), ell=st.floats(0.1, 3.0))
def test_form_factor_positive_and_bounded(q, ell):
    v = form_factor(q, ell)
    assert 0.0 <= v <= 1.0 / (3.0 * np.e) + 1e-12
