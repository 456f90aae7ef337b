"""Dynamic structure factor, collective-mode dispersion and sum rules.

The DSF follows from the response via the fluctuation-dissipation prefactor.
Below the pair continuum the response has a real pole at omega_q solving
nu = Omega(q, nu); the mode dispersion, spectral weight and the phonon
density of states are extracted by root finding plus finite differences.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NoModeAtFrequency, RootBracketFailure
from . import susceptibility as sus
from .eos import pair_threshold
from .quadrature import graded_edges, merge_edges, adaptive_panel_integrate
from .units import M_FERMION, RHO_0

_GRAZE_TOL = 1e-3  # roots this close to the continuum edge count as merged


@dataclass(frozen=True)
class CollectiveModePoint:
    """Mode frequency and spectral weight at one wave vector."""

    q: float
    theta: float
    merged: bool
    omega: float | None = None
    weight: float | None = None
    c_value: float | None = None


@dataclass(frozen=True)
class DsfSample:
    q: float
    nu: float
    beta: float
    epsilon: float
    value: float


_threshold_cache = {}


def threshold(q, point):
    key = (round(q, 12), point)
    if key not in _threshold_cache:
        if len(_threshold_cache) > 4096:
            _threshold_cache.clear()
        _threshold_cache[key] = pair_threshold(q, point.delta, point.mu)
    return _threshold_cache[key]


def dsf(q, nu, beta, epsilon, point, res=1.0):
    """S(q, nu) from the broadened response and the FDT prefactor.

    beta = np.inf selects the zero-temperature spectrum (S = 0 for nu < 0).
    """
    if not q > 0 or not epsilon > 0:
        raise ValueError("q and epsilon must be positive")
    if np.isinf(beta):
        if nu <= 0:
            return DsfSample(q=q, nu=nu, beta=beta, epsilon=epsilon, value=0.0)
        im = sus.response(q, nu, epsilon, point, res=res).chi_total.imag
        return DsfSample(q=q, nu=nu, beta=beta, epsilon=epsilon, value=-im / np.pi)
    if nu == 0:
        raise ValueError("finite-beta DSF needs nu != 0")
    # chi(-nu + i eps) = conj chi(nu + i eps) since chi depends on z^2 only;
    # evaluating at |nu| keeps the resonance-refined grid for both signs
    im = sus.response(q, abs(nu), epsilon, point, res=res).chi_total.imag
    if nu < 0:
        im = -im
    val = -im / (np.pi * (1.0 - np.exp(-beta * nu)))
    return DsfSample(q=q, nu=nu, beta=beta, epsilon=epsilon, value=val)


def _omega_scalar(q, nu, point, res):
    return sus.omega_real(q, nu, point, res=res)


def _b_value(q, nu, point, res):
    blocks = sus.building_blocks(q, nu, 0.0, point, res=res)
    b, _ = sus.pole_parameters(blocks, point)
    return np.real(b)


def _domega_dnu(q, nu, point, res):
    """d Omega / d nu at fixed q, central difference + one Richardson step."""
    h = 1e-4 * max(nu, 1e-3)
    d1 = (_omega_scalar(q, nu + h, point, res) - _omega_scalar(q, nu - h, point, res)) / (2 * h)
    d2 = (_omega_scalar(q, nu + h / 2, point, res) - _omega_scalar(q, nu - h / 2, point, res)) / h
    return (4.0 * d2 - d1) / 3.0


def collective_dispersion(q, point, res=1.0, with_weight=True):
    """Solve nu = Omega(q, nu) on (0, Theta_q); Merged when no root exists."""
    if not q > 0:
        raise ValueError("q must be positive")
    theta = threshold(q, point)
    lo = 1e-6 * min(1.0, theta)
    hi = theta * (1.0 - 1e-8)
    nus = np.linspace(lo, hi, 64)
    # pole condition g = I11*I22 - nu^2 I12^2 is smooth on the whole window
    g = sus.pole_denominator_scan(q, nus, point, res=res)
    sign_changes = [
        (nus[i], nus[i + 1]) for i in np.flatnonzero(np.diff(np.sign(g)) != 0)
    ]
    if len(sign_changes) > 1:
        raise RootBracketFailure(
            f"{len(sign_changes)} pole-condition sign changes at q={q}; refine the scan"
        )
    if not sign_changes:
        return CollectiveModePoint(q=q, theta=theta, merged=True)
    a, b = sign_changes[0]
    ga = sus.pole_denominator(q, a, point, res=res)
    gb = sus.pole_denominator(q, b, point, res=res)
    if ga * gb > 0:
        # quadrature noise can flip an endpoint when g ~ q^4 is at roundoff
        raise RootBracketFailure(
            f"pole-condition endpoints do not bracket at q={q} (g={ga:.3e}, {gb:.3e})"
        )
    root = brentq(
        lambda x: sus.pole_denominator(q, x, point, res=res), a, b, xtol=1e-13, rtol=1e-14
    )
    if theta - root < _GRAZE_TOL:
        return CollectiveModePoint(q=q, theta=theta, merged=True)
    if not with_weight:
        return CollectiveModePoint(q=q, theta=theta, merged=False, omega=float(root))
    b_val = _b_value(q, root, point, res)
    dod = _domega_dnu(q, root, point, res)
    weight = b_val / (2.0 * root) / abs(1.0 - dod)
    return CollectiveModePoint(
        q=q, theta=theta, merged=False, omega=float(root), weight=float(weight)
    )


@dataclass
class DispersionTable:
    """Lazy table of mode points for one crossover point; supports inversion.

    Extends itself in q until either the requested frequency is covered or
    the mode merges with the continuum (the merge wave vector is bisected to
    ~1e-3 resolution). Mode points are cached so sweeps reuse solves.
    """

    point: object
    res: float = 1.0
    q_start: float = 0.05
    dq: float = 0.1
    q_cap: float = 12.0
    _qs: list = field(default_factory=list)
    _omegas: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict)
    q_merge: float = None
    _exhausted: bool = False

    def mode(self, q):
        key = round(q, 12)
        if key not in self._cache:
            self._cache[key] = collective_dispersion(q, self.point, res=self.res)
        return self._cache[key]

    def _append(self, q):
        m = self.mode(q)
        if not m.merged:
            self._qs.append(q)
            self._omegas.append(m.omega)
        return m

    def _bisect_merge(self, q_ok, q_bad):
        while q_bad - q_ok > 1e-3:
            mid = 0.5 * (q_ok + q_bad)
            if self._append(mid).merged:
                q_bad = mid
            else:
                q_ok = mid
        self.q_merge = q_bad
        self._exhausted = True

    def ensure_frequency(self, nu):
        if not self._qs:
            m = self._append(self.q_start)
            if m.merged:
                raise NoModeAtFrequency(
                    f"no unmerged mode even at q={self.q_start} for 1/kFa={self.point.inv_kfa}"
                )
        while not self._exhausted and max(self._omegas) < nu:
            q_next = self._qs[-1] + self.dq
            if q_next > self.q_cap:
                self._exhausted = True
                break
            if self._append(q_next).merged:
                self._bisect_merge(self._qs[-1], q_next)

    @property
    def max_frequency(self):
        return max(self._omegas) if self._qs else 0.0

    def invert(self, nu, refine=True):
        """Wave vector q_nu with omega_{q_nu} = nu.

        The mode point solves the pole condition g(q, nu) = 0, so the
        refinement is a direct root solve in q at fixed nu; the table only
        supplies the bracket. Both bracket ends stay below the continuum.
        """
        self.ensure_frequency(nu)
        qs = np.asarray(self._qs)
        oms = np.asarray(self._omegas)
        order = np.argsort(qs)
        qs, oms = qs[order], oms[order]
        if nu > oms.max():
            raise NoModeAtFrequency(
                f"nu={nu} above maximum unmerged mode frequency {oms.max():.6f}"
            )
        if nu <= oms[0]:
            q_lo = max(1e-5, self.q_start * nu / oms[0] / 1.5)
            q_hi = qs[0]
            q_est = self.q_start * nu / oms[0]
        else:
            i = np.searchsorted(oms, nu)
            q_lo, q_hi = qs[i - 1], qs[i]
            q_est = float(np.interp(nu, oms, qs))
        if not refine:
            return q_est

        def g(qq):
            return sus.pole_denominator(qq, nu, self.point, res=self.res)

        g_lo, g_hi = g(q_lo), g(q_hi)
        if g_lo == 0.0:
            return float(q_lo)
        if g_hi == 0.0:
            return float(q_hi)
        if g_lo * g_hi > 0:
            raise RootBracketFailure(
                f"pole condition does not bracket q_nu for nu={nu} "
                f"on [{q_lo:.6g}, {q_hi:.6g}]"
            )
        return float(brentq(g, q_lo, q_hi, xtol=1e-14, rtol=1e-14))

    def domega_dq(self, q):
        """Group velocity d omega_q / dq by Richardson-extrapolated differences."""
        h = max(5e-4 * q, 2e-5)

        def om(qq):
            m = self.mode(qq)
            if m.merged:
                raise NoModeAtFrequency(f"mode merged at q={qq}")
            return m.omega

        d1 = (om(q + h) - om(q - h)) / (2 * h)
        d2 = (om(q + h / 2) - om(q - h / 2)) / h
        return (4.0 * d2 - d1) / 3.0


_tables = {}


def dispersion_table(point, res=1.0):
    key = (point, res)
    if key not in _tables:
        _tables[key] = DispersionTable(point=point, res=res)
    return _tables[key]


def spectral_weight_smallq(q, point):
    """Long-wavelength spectral weight rho_0 * eps_q / (c q)."""
    if not q > 0:
        raise ValueError("q must be positive")
    eps_q = q * q / (2.0 * M_FERMION)
    return RHO_0 * eps_q / (point.c * q)


def c_nu(nu, point, res=1.0, table=None):
    """Mode weight in the fixed-frequency representation; returns (C, q_nu).

    C = B(q_nu, nu) / (2 nu |dOmega/dq|) with the derivative taken at fixed
    nu; together with the density of states it reproduces W_q by a change of
    variables in the mode delta function.
    """
    table = table or dispersion_table(point, res)
    q_nu = table.invert(nu)
    b_val = _b_value(q_nu, nu, point, res)
    h = max(5e-4 * q_nu, 2e-5)
    d1 = (_omega_scalar(q_nu + h, nu, point, res) - _omega_scalar(q_nu - h, nu, point, res)) / (2 * h)
    d2 = (_omega_scalar(q_nu + h / 2, nu, point, res) - _omega_scalar(q_nu - h / 2, nu, point, res)) / h
    dom_dq = (4.0 * d2 - d1) / 3.0
    c_val = b_val / (2.0 * nu * abs(dom_dq))
    return float(c_val), float(q_nu)


def phonon_dos(nu, point, res=1.0, table=None):
    """Density of single-phonon states q_nu^2 / (2 pi^2 |d omega/dq|)."""
    table = table or dispersion_table(point, res)
    q_nu = table.invert(nu)
    return q_nu**2 / (2.0 * np.pi**2 * abs(table.domega_dq(q_nu)))


def sum_rule_check(q, point, which, epsilon=0.01, res=1.0, nu_max=None):
    """Relative deviation of the broadened-spectrum sum rule integral.

    which = "f-sum": int nu S dnu against rho_0 eps_q.
    which = "compressibility": int S/nu dnu against rho_0/(2 m c^2).
    Returns (deviation, tail_estimate).
    """
    table = dispersion_table(point, res)
    theta0 = point.theta0
    if nu_max is None:
        nu_max = 10.0 * max(theta0, point.c * q, 1.0)
    try:
        mode = table.mode(q)
        omega_q = mode.omega if not mode.merged else None
    except RootBracketFailure:
        omega_q = None
    theta_q = threshold(q, point)

    edges = [1e-5, nu_max]
    if omega_q is not None:
        edges.append(graded_edges(omega_q, epsilon / 4.0, max(1e-5, omega_q - 0.3), min(nu_max, omega_q + 0.3)))
    edges.append(graded_edges(theta_q, max(epsilon / 2, 1e-3), max(1e-5, theta_q - 0.2), min(nu_max, theta_q + 0.5)))
    edges.append(np.geomspace(max(theta_q, 0.5), nu_max, 12))
    flat = []
    for e in edges:
        flat.extend(np.atleast_1d(e).tolist())
    all_edges = merge_edges(flat, lo=1e-5, hi=nu_max, min_width=1e-7)

    def integrand(nus):
        out = np.empty_like(nus)
        for i, v in enumerate(nus):
            s = dsf(q, v, np.inf, epsilon, point, res=res).value
            out[i] = v * s if which == "f-sum" else s / v
        return out

    val, _ = adaptive_panel_integrate(integrand, all_edges, n=8, rel_tol=1e-5, max_panels=60)
    # crude tail estimate from a power-law fit at the upper end
    s1 = integrand(np.array([0.8 * nu_max]))[0]
    s2 = integrand(np.array([nu_max]))[0]
    if s1 > 0 and s2 > 0 and s2 < s1:
        p = np.log(s2 / s1) / np.log(1.0 / 0.8)
        tail = s2 * nu_max / max(-p - 1.0, 0.5)
    else:
        tail = 0.0
    if which == "f-sum":
        target = RHO_0 * q * q / (2.0 * M_FERMION)
    elif which == "compressibility":
        target = RHO_0 / (2.0 * M_FERMION * point.c**2)
    else:
        raise ValueError(f"unknown sum rule {which!r}")
    return abs(val - target) / target, tail / target
