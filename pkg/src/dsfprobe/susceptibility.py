"""Complex density response of the superfluid from explicit momentum integrals.

The response splits into a pair-breaking part and a collective part built
from five 2-D momentum integrals (A1, A2, I11, I22, I12) evaluated at complex
frequency nu + i*epsilon. Isotropy reduces everything to integrals over
(k, u = cos theta); all integrands here are even in u, so u >= 0 suffices.

The near-resonance region, where E_{k+q/2} + E_{k-q/2} is close to nu, is
resolved with geometrically graded panels placed around the resonant angle
u*(k), which is unique because E + E' is monotone in |u|.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PoleSingular, QuadratureNotConverged
from .quadrature import gauss_legendre, graded_edges, merge_edges, panel_nodes, tail_nodes

_MEASURE = 2.0 / (4.0 * np.pi**2)  # int d^3k/(2pi)^3 -> this * int k^2 dk int_0^1 du


@dataclass(frozen=True)
class ChiBuildingBlocks:
    """The five momentum integrals at one (q, nu + i*epsilon)."""

    q: float
    nu: float
    epsilon: float
    a1: complex
    a2: complex
    i11: complex
    i22: complex
    i12: complex


@dataclass(frozen=True)
class ComplexResponse:
    q: float
    nu: float
    epsilon: float
    chi_pair: complex
    chi_coll: complex

    @property
    def chi_total(self):
        return self.chi_pair + self.chi_coll


def _pair_energies(k, u, q, delta, mu):
    xim = k * k + 0.25 * q * q - k * q * u - mu
    xip = k * k + 0.25 * q * q + k * q * u - mu
    em = np.hypot(delta, xim)
    ep = np.hypot(delta, xip)
    return xim, xip, em, ep


def _esum(k, u, q, delta, mu):
    _, _, em, ep = _pair_energies(k, u, q, delta, mu)
    return em + ep


def _base_k_edges(q, mu):
    ksplit = max(8.0, 2.0 * q + 4.0)
    base = np.array([0.0, 0.2, 0.45, 0.7, 0.95, 1.2, 1.5, 2.0, 2.6, 3.4, 4.5, 6.0, ksplit])
    if mu > 0:
        # cluster an edge at the Fermi surface where integrands vary fastest
        base = np.append(base, np.sqrt(mu))
    return merge_edges(base, lo=0.0, hi=ksplit, min_width=1e-4), ksplit


def _resonance_band(q, nu, delta, mu, ksplit):
    """k-intervals where some u in [0, 1] satisfies E + E' = nu."""
    kk = np.linspace(1e-5, ksplit, 1501)
    g0 = _esum(kk, 0.0, q, delta, mu)
    g1 = _esum(kk, 1.0, q, delta, mu)
    mask = (g0 <= nu) & (nu <= g1)
    if not mask.any():
        return []
    idx = np.flatnonzero(mask)
    splits = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[splits + 1]])
    ends = np.concatenate([idx[splits], [idx[-1]]])
    return [(kk[a], kk[b]) for a, b in zip(starts, ends)]


def _u_nodes_graded(ustar, step0, n_gl):
    """Per-row u panels graded around ustar (arrays), clipped to [0, 1]."""
    # symmetric edge matrix: ustar +/- step0 * (2^j - 1)
    npan = int(np.ceil(np.log2(1.0 / np.min(step0) + 1.0))) + 1
    grow = 2.0 ** np.arange(npan) - 1.0
    right = ustar[:, None] + step0[:, None] * grow[None, :]
    left = ustar[:, None] - step0[:, None] * grow[None, :]
    edges = np.concatenate([left[:, ::-1], right[:, 1:]], axis=1)
    edges = np.clip(edges, 0.0, 1.0)
    # ensure the full interval is covered
    edges = np.concatenate(
        [np.zeros((len(ustar), 1)), edges, np.ones((len(ustar), 1))], axis=1
    )
    edges = np.sort(edges, axis=1)
    x, w = gauss_legendre(n_gl)
    a = edges[:, :-1]
    b = edges[:, 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = half[..., None] * x + mid[..., None]
    wts = half[..., None] * w + np.zeros_like(pts)
    return pts.reshape(len(ustar), -1), wts.reshape(len(ustar), -1)


def _bisect_ustar(k, q, nu, delta, mu, iters=60):
    lo = np.zeros_like(k)
    hi = np.ones_like(k)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = _esum(k, mid, q, delta, mu) < nu
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def build_grid(q, nu, epsilon, delta, mu, res=1.0):
    """Flattened (k, u, weight) arrays for the reduced 2-D momentum integral.

    Weights absorb the k^2 measure and the overall 2/(4 pi^2) factor. nu <= 0
    or sub-threshold frequencies produce a smooth nu-independent grid.
    """
    nk = max(8, round(14 * res))
    nu_gl = max(8, round(14 * res))
    nu_res_gl = max(6, round(10 * res))

    kedges, ksplit = _base_k_edges(q, mu)
    bands = _resonance_band(q, nu, delta, mu, ksplit) if nu > 0 else []
    if bands:
        extra = []
        for klo, khi in bands:
            width = khi - klo
            n_sub = max(6, int(width / 0.2) + 1)
            extra.append(np.linspace(klo, khi, n_sub + 1))
            step = max(epsilon / 8.0, 1e-4)
            extra.append(graded_edges(klo, step, max(0.0, klo - 0.2), min(ksplit, klo + 0.2)))
            extra.append(graded_edges(khi, step, max(0.0, khi - 0.2), min(ksplit, khi + 0.2)))
        kedges = merge_edges(kedges, *extra, lo=0.0, hi=ksplit, min_width=1e-6)
    kb, wb = panel_nodes(kedges, nk)
    kt, wt = tail_nodes(ksplit, 4.0, 3, nk)
    karr = np.concatenate([kb, kt])
    kw = np.concatenate([wb, wt])

    g0 = _esum(karr, 0.0, q, delta, mu)
    g1 = _esum(karr, 1.0, q, delta, mu)
    resonant = (g0 < nu) & (nu < g1) if nu > 0 else np.zeros(len(karr), dtype=bool)
    near = np.zeros_like(resonant)
    if nu > 0:
        margin = 30.0 * epsilon
        near = (~resonant) & (
            ((g0 - nu > 0) & (g0 - nu < margin)) | ((nu - g1 > 0) & (nu - g1 < margin))
        )

    parts_k, parts_u, parts_w = [], [], []

    smooth = ~(resonant | near)
    if smooth.any():
        up, uw = panel_nodes(np.array([0.0, 0.5, 1.0]), nu_gl)
        ks = karr[smooth]
        parts_k.append(np.repeat(ks, len(up)))
        parts_u.append(np.tile(up, len(ks)))
        parts_w.append((kw[smooth][:, None] * uw[None, :]).reshape(-1))

    if resonant.any():
        ks = karr[resonant]
        ustar = _bisect_ustar(ks, q, nu, delta, mu)
        du = 1e-6
        slope = np.abs(
            _esum(ks, np.minimum(ustar + du, 1.0), q, delta, mu)
            - _esum(ks, np.maximum(ustar - du, 0.0), q, delta, mu)
        ) / (np.minimum(ustar + du, 1.0) - np.maximum(ustar - du, 0.0))
        step0 = np.clip(epsilon / np.maximum(slope, 1e-12) / 6.0, 1e-7, 0.05)
        up, uw = _u_nodes_graded(ustar, step0, nu_res_gl)
        parts_k.append(np.repeat(ks, up.shape[1]))
        parts_u.append(up.reshape(-1))
        parts_w.append((kw[resonant][:, None] * uw).reshape(-1))

    if near.any():
        ks = karr[near]
        anchor = np.where(g0[near] > nu, 0.0, 1.0)
        step0 = np.full(len(ks), 0.01)
        up, uw = _u_nodes_graded(anchor, step0, nu_res_gl)
        parts_k.append(np.repeat(ks, up.shape[1]))
        parts_u.append(up.reshape(-1))
        parts_w.append((kw[near][:, None] * uw).reshape(-1))

    K = np.concatenate(parts_k)
    U = np.concatenate(parts_u)
    W = np.concatenate(parts_w)
    good = W != 0.0
    K, U, W = K[good], U[good], W[good]
    return K, U, W * K * K * _MEASURE


def _raw_sums(K, U, W, q, z, delta, mu):
    """All momentum sums on a prepared grid at complex frequency z."""
    xim, xip, em, ep = _pair_energies(K, U, q, delta, mu)
    s = em + ep
    den = s * s - z * z
    fac = s / (em * ep * den)
    ek = np.hypot(delta, K * K - mu)
    sub = W @ (1.0 / ek)
    out = {
        "a1": W @ ((xim + xip) * fac),
        "a2": W @ fac,
        "i11": W @ ((em * ep + xim * xip + delta**2) * fac) - sub,
        "i22": W @ ((em * ep + xim * xip - delta**2) * fac) - sub,
        "i12": W @ ((em * xip + ep * xim) / (em * ep * den)),
        "chi_pair": -(W @ ((em * ep - xim * xip + delta**2) * fac)),
        "i11_identity": W @ ((z * z - (2.0 * K * q * U) ** 2) * s / (2.0 * em * ep * den)),
    }
    return out


_CACHE = {}
_CACHE_MAX = 4096


def _evaluate(q, nu, epsilon, delta, mu, res=1.0):
    key = (round(q, 12), round(nu, 12), round(epsilon, 12), round(delta, 12), round(mu, 12), res)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    K, U, W = build_grid(q, nu, epsilon, delta, mu, res=res)
    z = nu + 1j * epsilon if epsilon != 0.0 else nu
    out = _raw_sums(K, U, W, q, z, delta, mu)
    if len(_CACHE) >= _CACHE_MAX:
        _CACHE.clear()
    _CACHE[key] = out
    return out


def clear_cache():
    _CACHE.clear()


def building_blocks(q, nu, epsilon, point, res=1.0, check=False, rtol=1e-6):
    """A1, A2, I11, I22, I12 at (q, nu + i*epsilon) for a solved point.

    With check=True the evaluation is repeated at increased resolution and a
    QuadratureNotConverged is raised if the two disagree beyond rtol.
    """
    if not q > 0:
        raise ValueError("q must be positive")
    out = _evaluate(q, nu, epsilon, point.delta, point.mu, res=res)
    if check:
        fine = _evaluate(q, nu, epsilon, point.delta, point.mu, res=1.8 * res)
        for name in ("a1", "a2", "i11", "i22", "i12"):
            scale = max(abs(fine[name]), 1e-12)
            if abs(out[name] - fine[name]) / scale > rtol:
                raise QuadratureNotConverged(
                    f"{name} at (q={q}, nu={nu}) changed by "
                    f"{abs(out[name] - fine[name]) / scale:.2e} under refinement"
                )
        out = fine
    return ChiBuildingBlocks(
        q=q, nu=nu, epsilon=epsilon,
        a1=out["a1"], a2=out["a2"],
        i11=out["i11"], i22=out["i22"], i12=out["i12"],
    )


def chi_pair(q, nu, epsilon, point, res=1.0):
    """Pair-breaking contribution to the density response."""
    if not q > 0:
        raise ValueError("q must be positive")
    return _evaluate(q, nu, epsilon, point.delta, point.mu, res=res)["chi_pair"]


def chi_coll(q, nu, epsilon, blocks, point):
    """Collective-mode contribution assembled from the building blocks."""
    z = nu + 1j * epsilon if epsilon != 0.0 else nu + 0.0j
    num = (
        blocks.a1**2 * blocks.i11
        + z * z * blocks.a2**2 * blocks.i22
        - 2.0 * z * z * blocks.a1 * blocks.a2 * blocks.i12
    )
    den = blocks.i11 * blocks.i22 - z * z * blocks.i12**2
    if abs(den) < 1e-280:
        raise PoleSingular(
            f"response denominator underflow at (q={q}, nu={nu}); increase epsilon"
        )
    return point.delta**2 * num / den


def pole_parameters(blocks, point):
    """Compact pole form pieces: chi_coll = B / (z^2 - Omega^2)."""
    z = blocks.nu + 1j * blocks.epsilon if blocks.epsilon != 0.0 else blocks.nu + 0.0j
    omega2 = blocks.i11 * blocks.i22 / blocks.i12**2
    b = -point.delta**2 * (
        blocks.a1**2 * blocks.i11
        + z * z * blocks.a2**2 * blocks.i22
        - 2.0 * z * z * blocks.a1 * blocks.a2 * blocks.i12
    ) / blocks.i12**2
    return b, omega2


def chi_coll_pole_form(q, nu, epsilon, blocks, point):
    """chi_coll via the compact pole form; equals the direct assembly."""
    z = nu + 1j * epsilon if epsilon != 0.0 else nu + 0.0j
    b, omega2 = pole_parameters(blocks, point)
    den = z * z - omega2
    if abs(den) < 1e-280:
        raise PoleSingular(
            f"pole denominator underflow at (q={q}, nu={nu}); increase epsilon"
        )
    return b / den


def response(q, nu, epsilon, point, res=1.0):
    """Full density response chi = chi_pair + chi_coll at (q, nu + i*epsilon)."""
    out = _evaluate(q, nu, epsilon, point.delta, point.mu, res=res)
    blocks = ChiBuildingBlocks(
        q=q, nu=nu, epsilon=epsilon,
        a1=out["a1"], a2=out["a2"],
        i11=out["i11"], i22=out["i22"], i12=out["i12"],
    )
    return ComplexResponse(
        q=q, nu=nu, epsilon=epsilon,
        chi_pair=out["chi_pair"],
        chi_coll=chi_coll(q, nu, epsilon, blocks, point),
    )


def i11_identity_gap(q, nu, epsilon, point, res=1.0):
    """Relative gap between the direct I11 integral and its identity form."""
    out = _evaluate(q, nu, epsilon, point.delta, point.mu, res=res)
    return abs(out["i11"] - out["i11_identity"]) / abs(out["i11"])


def omega_real(q, nu, point, res=1.0):
    """Real pole function Omega(q, nu) = sqrt(I11*I22)/I12 below threshold.

    Returns NaN where I11*I22 < 0 (no propagating solution at this nu).
    """
    out = _evaluate(q, nu, 0.0, point.delta, point.mu, res=res)
    prod = np.real(out["i11"]) * np.real(out["i22"])
    if prod < 0:
        return np.nan
    return np.sqrt(prod) / np.real(out["i12"])


def omega_real_scan(q, nus, point, res=1.0):
    """Omega(q, nu) for an array of sub-threshold frequencies on one grid."""
    K, U, W = build_grid(q, -1.0, 0.0, point.delta, point.mu, res=res)
    xim, xip, em, ep = _pair_energies(K, U, q, point.delta, point.mu)
    s = em + ep
    ek = np.hypot(point.delta, K * K - point.mu)
    sub = W @ (1.0 / ek)
    nus = np.asarray(nus, dtype=float)
    den = s[:, None] ** 2 - nus[None, :] ** 2
    fac = (s / (em * ep))[:, None] / den
    i11 = W @ ((em * ep + xim * xip + point.delta**2)[:, None] * fac) - sub
    i22 = W @ ((em * ep + xim * xip - point.delta**2)[:, None] * fac) - sub
    i12 = W @ (((em * xip + ep * xim) / (em * ep))[:, None] / den)
    prod = i11 * i22
    with np.errstate(invalid="ignore"):
        omega = np.where(prod >= 0, np.sqrt(np.abs(prod)) / i12, np.nan)
    return omega


def pole_denominator(q, nu, point, res=1.0):
    """Collective pole condition g = I11*I22 - nu^2 I12^2 at epsilon = 0.

    Unlike Omega(q, nu), g stays real and smooth over the whole sub-threshold
    window, so it is the robust choice for bracketing the mode frequency.
    """
    out = _evaluate(q, nu, 0.0, point.delta, point.mu, res=res)
    i11, i22, i12 = (np.real(out[n]) for n in ("i11", "i22", "i12"))
    return i11 * i22 - nu * nu * i12 * i12


def pole_denominator_scan(q, nus, point, res=1.0):
    """g(q, nu) for an array of sub-threshold frequencies on one smooth grid."""
    K, U, W = build_grid(q, -1.0, 0.0, point.delta, point.mu, res=res)
    xim, xip, em, ep = _pair_energies(K, U, q, point.delta, point.mu)
    s = em + ep
    ek = np.hypot(point.delta, K * K - point.mu)
    sub = W @ (1.0 / ek)
    nus = np.asarray(nus, dtype=float)
    den = s[:, None] ** 2 - nus[None, :] ** 2
    fac = (s / (em * ep))[:, None] / den
    i11 = W @ ((em * ep + xim * xip + point.delta**2)[:, None] * fac) - sub
    i22 = W @ ((em * ep + xim * xip - point.delta**2)[:, None] * fac) - sub
    i12 = W @ (((em * xip + ep * xim) / (em * ep))[:, None] / den)
    return i11 * i22 - nus**2 * i12**2
