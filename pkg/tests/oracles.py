"""Independent oracles used to freeze reference values for the test suite.

Everything here deliberately avoids the package's own quadrature and solver
machinery: integrals go through scipy.integrate.quad (nested 1-D adaptive),
root finding through scipy.optimize, and minimization through dense grids.
The frozen constants in the test modules were produced by these functions.
"""

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, fsolve

M = 0.5  # fermion mass in gas units
RHO = 1.0 / (3.0 * np.pi**2)


# ---------------------------------------------------------------- equations of state


def eos_oracle(inv_kfa, guess=(0.7, 0.6)):
    """Gap + density equations solved with scipy.quad + fsolve."""

    def equations(x):
        delta, mu = x

        def gap_integrand(k):
            e = np.sqrt(delta**2 + (k * k - mu) ** 2)
            return k * k * (0.5 / (k * k) - 0.5 / e)

        def dens_integrand(k):
            xi = k * k - mu
            e = np.sqrt(delta**2 + xi * xi)
            return k * k * delta**2 / (e * (e + xi))

        g = quad(gap_integrand, 0, np.inf, limit=300, epsabs=1e-13, epsrel=1e-13)[0]
        d = quad(dens_integrand, 0, np.inf, limit=300, epsabs=1e-13, epsrel=1e-13)[0]
        return (
            g / (2 * np.pi**2) - inv_kfa * M / (4 * np.pi),
            d / (2 * np.pi**2) - RHO,
        )

    sol = fsolve(equations, guess, full_output=True, xtol=1e-13)
    x, info, ier, _ = sol
    assert ier == 1, f"oracle EOS solve failed at {inv_kfa}"
    return float(x[0]), float(x[1])


def sound_speed_oracle(delta, mu):
    def j_int(power):
        def f(k):
            e = np.sqrt(delta**2 + (k * k - mu) ** 2)
            return k**power / e**3

        return quad(f, 0, np.inf, limit=300, epsabs=1e-13, epsrel=1e-13)[0] / (
            2 * np.pi**2
        )

    j2, j4 = j_int(2), j_int(4)
    jxi = j4 - mu * j2
    return np.sqrt(delta**2 * j2 * j4 / (3 * M**2 * (delta**2 * j2**2 + jxi**2)))


# ---------------------------------------------------------------- pair threshold


def pair_threshold_oracle(q, delta, mu, n=2001):
    """Dense-grid minimum of E_{k+q/2} + E_{k-q/2} with one refinement pass."""

    def pair(k, u):
        kp2 = k * k + q * q / 4 + k * q * u
        km2 = k * k + q * q / 4 - k * q * u
        return np.sqrt(delta**2 + (kp2 - mu) ** 2) + np.sqrt(
            delta**2 + (km2 - mu) ** 2
        )

    ks = np.linspace(0, max(5.0, 2.5 * q), n)
    us = np.linspace(0, 1, 501)
    v = pair(ks[:, None], us[None, :])
    i, j = np.unravel_index(np.argmin(v), v.shape)
    k0, u0 = ks[i], us[j]
    dk, du = ks[1] - ks[0], us[1] - us[0]
    ks = np.linspace(max(0, k0 - dk), k0 + dk, 801)
    us = np.linspace(max(0, u0 - du), min(1, u0 + du), 801)
    v = pair(ks[:, None], us[None, :])
    return float(v.min())


# ---------------------------------------------------------------- response blocks


def _pair_vars(k, u, q, delta, mu):
    kp2 = k * k + q * q / 4 + k * q * u
    km2 = k * k + q * q / 4 - k * q * u
    xi = km2 - mu
    xip = kp2 - mu
    e = np.sqrt(delta**2 + xi * xi)
    ep = np.sqrt(delta**2 + xip * xip)
    return xi, xip, e, ep


def _resonant_u(k, q, nu, delta, mu):
    """u in (0,1) where E + E' = nu, if any (E+E' increases with u)."""

    def s(u):
        xi, xip, e, ep = _pair_vars(k, u, q, delta, mu)
        return e + ep - nu

    if s(0.0) > 0 or s(1.0) < 0:
        return None
    return brentq(s, 0.0, 1.0, xtol=1e-14)


def blocks_oracle(q, nu, epsilon, delta, mu, kmax=70.0):
    """A1, A2, I11, I22, I12, chi_pair by nested adaptive quadrature.

    The u-integral carries an explicit split point at the broadened resonance;
    the k-integral carries split points where the resonance band starts/ends.
    """
    z2 = (nu + 1j * epsilon) ** 2

    def u_integral(k, num):
        def f(u, part):
            xi, xip, e, ep = _pair_vars(k, u, q, delta, mu)
            den = (e + ep) ** 2 - z2
            vals = {
                "a1": (xi + xip) / den * (e + ep) / (e * ep),
                "a2": 1.0 / den * (e + ep) / (e * ep),
                "i11": (e * ep + xi * xip + delta**2) / den * (e + ep) / (e * ep)
                - 1.0 / np.sqrt(delta**2 + (k * k - mu) ** 2),
                "i22": (e * ep + xi * xip - delta**2) / den * (e + ep) / (e * ep)
                - 1.0 / np.sqrt(delta**2 + (k * k - mu) ** 2),
                "i12": 1.0 / den * (e * xip + ep * xi) / (e * ep),
                "pair": -(e * ep - xi * xip + delta**2) / den * (e + ep) / (e * ep),
            }
            v = vals[num]
            return v.real if part == 0 else v.imag

        ustar = _resonant_u(k, q, nu, delta, mu)
        pts = [ustar] if ustar is not None else None
        re = quad(f, 0, 1, args=(0,), points=pts, limit=200, epsabs=1e-12, epsrel=1e-10)[0]
        im = quad(f, 0, 1, args=(1,), points=pts, limit=200, epsabs=1e-12, epsrel=1e-10)[0]
        return re + 1j * im

    def band_edges():
        edges = []
        ks = np.linspace(1e-4, kmax, 4001)
        for ub in (0.0, 1.0):
            s = np.array(
                [sum(_pair_vars(k, ub, q, delta, mu)[2:]) - nu for k in ks]
            )
            idx = np.flatnonzero(np.diff(np.sign(s)))
            for i in idx:
                edges.append(brentq(
                    lambda k: sum(_pair_vars(k, ub, q, delta, mu)[2:]) - nu,
                    ks[i], ks[i + 1], xtol=1e-12,
                ))
        return sorted(edges)

    edges = band_edges()
    out = {}
    for name in ("a1", "a2", "i11", "i22", "i12", "pair"):
        def g(k, part):
            v = k * k * u_integral(k, name)
            return v.real if part == 0 else v.imag

        re = quad(g, 0, kmax, args=(0,), points=edges, limit=400, epsabs=1e-12, epsrel=1e-9)[0]
        re += quad(g, kmax, np.inf, args=(0,), limit=200, epsabs=1e-12, epsrel=1e-9)[0]
        im = quad(g, 0, kmax, args=(1,), points=edges, limit=400, epsabs=1e-12, epsrel=1e-9)[0]
        im += quad(g, kmax, np.inf, args=(1,), limit=200, epsabs=1e-12, epsrel=1e-9)[0]
        out[name] = (re + 1j * im) * 2.0 / (4.0 * np.pi**2)
    return out


def chi_coll_oracle(q, nu, epsilon, delta, mu, blocks=None):
    b = blocks or blocks_oracle(q, nu, epsilon, delta, mu)
    z2 = (nu + 1j * epsilon) ** 2
    num = (
        b["a1"] ** 2 * b["i11"]
        + z2 * b["a2"] ** 2 * b["i22"]
        - 2 * z2 * b["a1"] * b["a2"] * b["i12"]
    )
    den = b["i11"] * b["i22"] - z2 * b["i12"] ** 2
    return delta**2 * num / den


# ---------------------------------------------------------------- free fermions


def lindhard_oracle(q, nu, epsilon):
    """Particle-hole response of the ideal Fermi gas at T=0 (mu = 1, m = 1/2).

    Includes the spin-degeneracy factor 2 carried by the two-component gas.
    Evaluated by direct 2-D quadrature with the occupation step at k = 1.
    """
    z = nu + 1j * epsilon

    def inner(k, part):
        def f(u):
            de = q * q + 2.0 * k * q * u  # eps_{k+q} - eps_k at m = 1/2
            v = 1.0 / (z - de) - 1.0 / (z + de)
            return v.real if part == 0 else v.imag

        return quad(f, -1, 1, limit=200, epsabs=1e-12, epsrel=1e-10)[0]

    def outer(part):
        return quad(
            lambda k: k * k * inner(k, part), 0, 1, limit=200, epsabs=1e-12, epsrel=1e-9
        )[0]

    return 2.0 * (outer(0) + 1j * outer(1)) / (4.0 * np.pi**2)
