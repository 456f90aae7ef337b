"""Zero-temperature mean-field equations of state at fixed mean density.

The order parameter Delta and chemical potential mu are determined by the
renormalized gap equation and the density equation at rho_0 = 1/(3 pi^2),
solved with a damped 2-D Newton iteration. Derived quantities (sound speed,
pair gap, coherence length) are filled in on the solved point.

Everything is expressed in gas units (k_F = E_F = 1, m = 1/2); see units.py.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence
from .quadrature import gauss_legendre, panel_nodes, tail_nodes
from .units import M_FERMION, RHO_0

_TWO_PI_SQ = 2.0 * np.pi**2


def quasiparticle_energy(k, delta, mu):
    """Bogoliubov quasiparticle energy sqrt(Delta^2 + xi_k^2), xi_k = k^2 - mu."""
    k = np.asarray(k, dtype=float)
    return np.hypot(delta, k * k - mu)


def pair_gap(delta, mu):
    """Minimum energy of a two-quasiparticle excitation at zero momentum."""
    if mu >= 0:
        return 2.0 * delta
    return 2.0 * np.hypot(delta, mu)


def _k_quadrature(n_nodes):
    """Composite nodes on [0, inf): panels to k=6, then a tan-mapped tail."""
    n = max(12, n_nodes // 10)
    kb, wb = panel_nodes(np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0]), n)
    kt, wt = tail_nodes(6.0, 4.0, 3, n)
    return np.concatenate([kb, kt]), np.concatenate([wb, wt])


def eos_residuals(delta, mu, inv_kfa, n_nodes=640):
    """Residuals of the gap and density equations at (delta, mu)."""
    k, w = _k_quadrature(n_nodes)
    xi = k * k - mu
    e = np.hypot(delta, xi)
    gap = np.dot(w, k * k * (0.5 / (k * k) - 0.5 / e)) / _TWO_PI_SQ
    gap -= inv_kfa * M_FERMION / (4.0 * np.pi)
    # 1 - xi/e rewritten cancellation-free for the large-k tail
    dens = np.dot(w, k * k * delta**2 / (e * (e + xi))) / _TWO_PI_SQ - RHO_0
    return gap, dens


def j_integrals(delta, mu, n_nodes=640):
    """Momentum integrals J2 = sum 1/E^3, J4 = sum k^2/E^3 and J_xi = J4 - mu*J2."""
    k, w = _k_quadrature(n_nodes)
    e3 = quasiparticle_energy(k, delta, mu) ** 3
    j2 = np.dot(w, k * k / e3) / _TWO_PI_SQ
    j4 = np.dot(w, k**4 / e3) / _TWO_PI_SQ
    return j2, j4, j4 - mu * j2


def sound_speed(delta, mu, n_nodes=640):
    """Low-frequency speed of sound of the collective mode."""
    j2, j4, jxi = j_integrals(delta, mu, n_nodes)
    c2 = delta**2 * j2 * j4 / (3.0 * M_FERMION**2 * (delta**2 * j2**2 + jxi**2))
    return np.sqrt(c2)


@dataclass(frozen=True)
class CrossoverPoint:
    """Solved thermodynamic state at one interaction strength."""

    inv_kfa: float
    delta: float
    mu: float
    c: float
    theta0: float
    zeta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("superfluid point requires delta > 0")
        if not np.isclose(self.theta0, pair_gap(self.delta, self.mu), rtol=1e-10):
            raise ValueError("theta0 inconsistent with (delta, mu)")
        if not np.isclose(self.zeta, self.c / self.delta, rtol=1e-10):
            raise ValueError("zeta must equal c/delta")


def _newton(inv_kfa, guess, n_nodes, tol, max_iter):
    x = np.array(guess, dtype=float)
    res = np.array(eos_residuals(x[0], x[1], inv_kfa, n_nodes))
    for _ in range(max_iter):
        if np.max(np.abs(res)) < tol:
            return x, res
        jac = np.empty((2, 2))
        for j in range(2):
            h = 1e-6 * max(abs(x[j]), 1e-3)
            xp = x.copy()
            xp[j] += h
            xm = x.copy()
            xm[j] -= h
            rp = eos_residuals(xp[0], xp[1], inv_kfa, n_nodes)
            rm = eos_residuals(xm[0], xm[1], inv_kfa, n_nodes)
            jac[:, j] = (np.subtract(rp, rm)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(
                f"singular Jacobian at 1/kFa = {inv_kfa}", residuals=tuple(res)
            ) from exc
        lam = 1.0
        best = None
        while lam > 1e-6:
            xn = x + lam * step
            if xn[0] > 0:
                rn = np.array(eos_residuals(xn[0], xn[1], inv_kfa, n_nodes))
                if np.max(np.abs(rn)) < np.max(np.abs(res)) or lam < 2e-6:
                    best = (xn, rn)
                    break
            lam *= 0.5
        if best is None:
            break
        x, res = best
    if np.max(np.abs(res)) < tol:
        return x, res
    raise NonConvergence(
        f"EOS Newton failed at 1/kFa = {inv_kfa} "
        f"(residuals {res[0]:.3e}, {res[1]:.3e})",
        residuals=tuple(res),
    )


def solve_eos(inv_kfa, initial_guess=None, n_nodes=640, tol=1e-12, max_iter=80):
    """Solve the gap + density equations and fill in derived quantities.

    If no initial guess is supplied, the solver walks from the BCS-side anchor
    1/kFa = -2 (where (Delta, mu) = (0.1, 1.0) converges) toward the target in
    small continuation steps; this avoids basin failures near unitarity.
    An explicit guess skips the continuation so sweeps can parallelize.
    """
    if not np.isfinite(inv_kfa):
        raise ValueError("inv_kfa must be finite")
    if initial_guess is not None:
        x, _ = _newton(inv_kfa, initial_guess, n_nodes, tol, max_iter)
    else:
        anchor = -2.0
        x = np.array([0.1, 1.0])
        if inv_kfa <= anchor:
            x, _ = _newton(inv_kfa, x, n_nodes, tol, max_iter)
        else:
            for a in np.arange(anchor, inv_kfa, 0.25):
                x, _ = _newton(a, x, n_nodes, tol, max_iter)
            x, _ = _newton(inv_kfa, x, n_nodes, tol, max_iter)
    delta, mu = float(x[0]), float(x[1])
    c = float(sound_speed(delta, mu, n_nodes))
    theta0 = float(pair_gap(delta, mu))
    return CrossoverPoint(
        inv_kfa=float(inv_kfa),
        delta=delta,
        mu=mu,
        c=c,
        theta0=theta0,
        zeta=c / delta,
    )


def _pair_energy(k, u, q, delta, mu):
    """E_{k+q/2} + E_{k-q/2} with u = cos(angle between k and q)."""
    kp2 = k * k + 0.25 * q * q + k * q * u
    km2 = k * k + 0.25 * q * q - k * q * u
    return np.hypot(delta, kp2 - mu) + np.hypot(delta, km2 - mu)


_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a, b, iters=60):
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def pair_threshold(q, delta, mu, n_grid=64):
    """Threshold frequency Theta_q = min over k of E_{k+q/2} + E_{k-q/2}.

    Coarse 2-D grid over (k, cos theta), then golden-section refinement in
    each coordinate. The objective is even in cos theta, so u >= 0 suffices.
    """
    if q == 0:
        return pair_gap(delta, mu)
    kmax = max(4.0, 2.0 * q)
    ks = np.linspace(0.0, kmax, n_grid)
    us = np.linspace(0.0, 1.0, n_grid)
    vals = _pair_energy(ks[:, None], us[None, :], q, delta, mu)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    k0, u0 = ks[i], us[j]
    dk = kmax / (n_grid - 1)
    du = 1.0 / (n_grid - 1)
    for _ in range(4):
        k0, _ = _golden_min(
            lambda k: _pair_energy(k, u0, q, delta, mu),
            max(0.0, k0 - dk),
            min(kmax, k0 + dk),
        )
        u0, _ = _golden_min(
            lambda u: _pair_energy(k0, u, q, delta, mu),
            max(0.0, u0 - du),
            min(1.0, u0 + du),
        )
        dk *= 0.2
        du *= 0.2
    return float(_pair_energy(k0, u0, q, delta, mu))
