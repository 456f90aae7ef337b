"""Impurity probe: form factors, spectral density and decay rate.

A harmonically trapped impurity in its lowest vibrational levels couples to
the superfluid density; the decay rate of the first excited trap state is
Gamma = 2 pi I(omega_A) with I(nu) the spectral density of the gas, i.e. the
DSF filtered through the impurity's geometric form factor. Two independent
routes are provided: direct q-integration of the broadened DSF, and the
delta-function collective-mode route valid below the pair-breaking gap.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import susceptibility as sus
from .dsf import dispersion_table, dsf, threshold, c_nu
from .errors import NoModeAtFrequency
from .quadrature import adaptive_panel_integrate, graded_edges, merge_edges
from .units import M_FERMION, RHO_0


@dataclass(frozen=True)
class ProbeConfig:
    """Impurity species, coupling and trap frequency (gas units)."""

    mass_ratio: float
    kappa: float
    omega_a: float
    beta: float = np.inf

    def __post_init__(self):
        if not self.omega_a > 0:
            raise ValueError("omega_a must be positive")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.mass_ratio > 0:
            raise ValueError("mass_ratio must be positive")

    @property
    def impurity_mass(self):
        return self.mass_ratio * M_FERMION

    @property
    def ell(self):
        # harmonic oscillator length, recomputed so it always tracks omega_a
        return 1.0 / np.sqrt(self.impurity_mass * self.omega_a)

    def with_omega(self, omega_a):
        return ProbeConfig(
            mass_ratio=self.mass_ratio, kappa=self.kappa, omega_a=omega_a, beta=self.beta
        )


@dataclass(frozen=True)
class ImpuritySite:
    """Trap position and excitation (dipole) direction of one impurity."""

    position: tuple
    dipole: tuple

    def __post_init__(self):
        d = np.asarray(self.dipole, dtype=float)
        if len(self.position) != 3 or len(d) != 3:
            raise ValueError("position and dipole must be 3-vectors")
        if not np.isclose(np.linalg.norm(d), 1.0, rtol=0, atol=1e-10):
            raise ValueError("dipole must be a unit vector")


def form_factor(q, ell):
    """Dipole-channel form factor (1/6) ell^2 q^2 exp(-ell^2 q^2 / 2)."""
    q = np.asarray(q, dtype=float)
    x = ell * ell * q * q
    return x / 6.0 * np.exp(-0.5 * x)


def coupling_constants(qvec, ell, kappa, indices):
    """Trap-level coupling lambda^(gamma delta)_q for levels {0, x, y, z}.

    indices = (gamma, delta) with 0 the ground level and 1..3 the three
    first excited levels polarized along the Cartesian axes.
    """
    g, d = indices
    if g not in (0, 1, 2, 3) or d not in (0, 1, 2, 3):
        raise ValueError("indices must be in {0,1,2,3}")
    qvec = np.asarray(qvec, dtype=float)
    q2 = float(np.dot(qvec, qvec))
    env = np.exp(-0.25 * ell * ell * q2)
    if g == 0 and d == 0:
        return kappa * env
    if g == 0 or d == 0:
        a = (g + d) - 1  # the nonzero index names the excited axis
        return 1j * kappa / np.sqrt(2.0) * ell * qvec[a] * env
    if g == d:
        return kappa * (1.0 - 0.5 * ell * ell * q2) * env
    return -0.5 * kappa * ell * ell * qvec[g - 1] * qvec[d - 1] * env


def _sinc(x):
    return np.sinc(np.asarray(x) / np.pi)


def far_field_cross_form_factor(q, site_m, site_n, ell):
    """Cross form factor for two distant traps; m = n falls back to Phi(q)."""
    xm = np.asarray(site_m.position, dtype=float)
    xn = np.asarray(site_n.position, dtype=float)
    sep = xm - xn
    dist = np.linalg.norm(sep)
    if dist == 0.0:
        return form_factor(q, ell)
    if dist < 3.0 * ell:
        warnings.warn(
            f"far-field cross form factor used at separation {dist:.3g} < 3 ell",
            stacklevel=2,
        )
    xhat = sep / dist
    dm = float(np.dot(site_m.dipole, xhat))
    dn = float(np.dot(site_n.dipole, xhat))
    q = np.asarray(q, dtype=float)
    x = ell * ell * q * q
    return 0.5 * x * np.exp(-0.5 * x) * _sinc(q * dist) * dm * dn


def _beta_guard(probe, point):
    if np.isfinite(probe.beta) and probe.beta * point.theta0 < 10.0:
        warnings.warn(
            f"beta*Theta0 = {probe.beta * point.theta0:.2f} < 10: finite-temperature "
            "treatment keeps only the detailed-balance prefactor",
            stacklevel=3,
        )


def _q_edges(nu, probe, point, res):
    """Panel edges for the q-integral: collective ridge + continuum onsets."""
    ell = probe.ell
    q_max = max(6.0 / ell, 4.0)
    table = dispersion_table(point, res)
    pieces = [np.linspace(0.0, q_max, 9)]
    try:
        q_nu = table.invert(nu)
        width = max(1e-4, 0.01 / max(abs(table.domega_dq(q_nu)), 1e-3))
        pieces.append(graded_edges(q_nu, width / 4.0, max(0.0, q_nu - 0.5), min(q_max, q_nu + 0.5)))
    except NoModeAtFrequency:
        pass
    # continuum edges: wave vectors where the pair threshold crosses nu
    qs = np.linspace(1e-3, q_max, 121)
    th = np.array([threshold(q, point) for q in qs])
    cross = np.flatnonzero(np.diff(np.sign(th - nu)))
    for i in cross:
        qc = 0.5 * (qs[i] + qs[i + 1])
        pieces.append(graded_edges(qc, 5e-3, max(0.0, qc - 0.4), min(q_max, qc + 0.4)))
    flat = np.concatenate([np.atleast_1d(pc) for pc in pieces])
    return merge_edges(flat, lo=0.0, hi=q_max, min_width=1e-6), q_max


def spectral_density(nu, probe, point, epsilon, method="broadened", res=1.0, rel_tol=1e-4):
    """Impurity spectral density I(nu) in E_F.

    method = "broadened": (kappa^2 / 2 pi^2) int dq q^2 Phi(q) S(q, nu).
    method = "collective": delta-function mode route
    (kappa^2 / 2 pi^2) q_nu^2 Phi(q_nu) C_nu, valid below the continuum.
    """
    _beta_guard(probe, point)
    ell = probe.ell
    pref = probe.kappa**2 / (2.0 * np.pi**2)
    if method == "collective":
        c_val, q_nu = c_nu(nu, point, res=res, table=dispersion_table(point, res))
        return pref * q_nu**2 * form_factor(q_nu, ell) * c_val
    if method != "broadened":
        raise ValueError(f"unknown method {method!r}")
    if np.isinf(probe.beta) and nu <= 0:
        return 0.0
    edges, _ = _q_edges(abs(nu), probe, point, res)

    def integrand(qs):
        out = np.empty_like(qs)
        for i, q in enumerate(qs):
            if q <= 0:
                out[i] = 0.0
                continue
            s = dsf(q, nu, probe.beta, epsilon, point, res=res).value
            out[i] = q * q * form_factor(q, ell) * s
        return out

    val, _ = adaptive_panel_integrate(integrand, edges, n=8, rel_tol=rel_tol, max_panels=80)
    return pref * val


def cross_spectral_density(nu, site_m, site_n, probe, point, epsilon, res=1.0, rel_tol=1e-4):
    """Cross spectral density I_mn(nu) using the far-field cross form factor."""
    _beta_guard(probe, point)
    ell = probe.ell
    pref = probe.kappa**2 / (2.0 * np.pi**2)
    if np.isinf(probe.beta) and nu <= 0:
        return 0.0
    edges, _ = _q_edges(abs(nu), probe, point, res)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # near-field warning checked once below
        far_field_cross_form_factor(1.0, site_m, site_n, ell)
    sep = np.linalg.norm(np.subtract(site_m.position, site_n.position))
    if 0.0 < sep < 3.0 * ell:
        warnings.warn(f"cross spectral density at separation {sep:.3g} < 3 ell", stacklevel=2)

    def integrand(qs):
        out = np.empty_like(qs)
        for i, q in enumerate(qs):
            if q <= 0:
                out[i] = 0.0
                continue
            s = dsf(q, nu, probe.beta, epsilon, point, res=res).value
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                phi = far_field_cross_form_factor(q, site_m, site_n, ell)
            out[i] = q * q * phi * s
        return out

    val, _ = adaptive_panel_integrate(integrand, edges, n=8, rel_tol=rel_tol, max_panels=80)
    return pref * val


@dataclass(frozen=True)
class DecayRate:
    """Gamma = 2 pi I(omega_A) plus Markovian validity diagnostics."""

    gamma: float
    spectral: float
    markov_bandwidth_ratio: float  # Gamma * ell / c
    markov_frequency_ratio: float  # Gamma / omega_a


def decay_rate(probe, point, epsilon, method="broadened", res=1.0, rel_tol=1e-4):
    ii = spectral_density(
        probe.omega_a, probe, point, epsilon, method=method, res=res, rel_tol=rel_tol
    )
    gamma = 2.0 * np.pi * ii
    return DecayRate(
        gamma=gamma,
        spectral=ii,
        markov_bandwidth_ratio=gamma * probe.ell / point.c,
        markov_frequency_ratio=gamma / probe.omega_a,
    )


def super_ohmic_params(probe, point):
    """Low-frequency coupling strength alpha and cutoff omega_c = c / ell."""
    ell = probe.ell
    alpha = probe.kappa**2 * RHO_0 / (24.0 * np.pi**2 * M_FERMION * ell**2 * point.c**3)
    return alpha, point.c / ell


def super_ohmic_spectral_density(nu, probe, point):
    """Closed-form phonon-regime spectral density alpha wc^-4 nu^5 exp(-nu^2/2wc^2)."""
    alpha, wc = super_ohmic_params(probe, point)
    return alpha * wc**-4 * nu**5 * np.exp(-0.5 * (nu / wc) ** 2)
