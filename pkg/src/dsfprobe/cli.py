"""Command line driver: figure-reproduction sweeps and validation suites.

Subcommands: eos, dispersion, dsf-grid, gamma, validate. Every run is driven
by one RunConfig (file + flag overrides) and writes deterministic CSV curves
and JSON reports into the output directory.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import load_config
from .dsf import (
    collective_dispersion,
    dispersion_table,
    dsf,
    spectral_weight_smallq,
    sum_rule_check,
)
from .eos import solve_eos
from .errors import (
    ConfigError,
    NoModeAtFrequency,
    NonConvergence,
    PoleSingular,
    QuadratureNotConverged,
    RootBracketFailure,
)
from .io import config_hash, write_curve, write_report
from .probe import (
    ImpuritySite,
    ProbeConfig,
    cross_spectral_density,
    decay_rate,
    spectral_density,
)
from .susceptibility import i11_identity_gap
from .units import V_FERMI

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VALIDATION = 4

_SOLVER_ERRORS = (
    NonConvergence,
    QuadratureNotConverged,
    PoleSingular,
    RootBracketFailure,
    NoModeAtFrequency,
)


def _tag(x):
    s = f"{x:+.2f}".replace("+", "p").replace("-", "m").replace(".", "_")
    return s


def _meta(cfg, **extra):
    # hash only the fields that influence the numbers, so reruns into a
    # different directory or with a different thread count compare byte-equal
    hashed = {
        k: v for k, v in cfg.as_dict().items()
        if k not in ("out_dir", "formats", "threads")
    }
    m = {"config_hash": config_hash(hashed)}
    m.update(extra)
    return m


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_eos(cfg):
    xs = list(cfg.inv_kfa)

    def solve(x):
        return solve_eos(x)

    pts = _pmap(solve, xs, cfg.threads)
    cols = {
        "inv_kfa": np.array(xs),
        "delta": np.array([p.delta for p in pts]),
        "mu": np.array([p.mu for p in pts]),
        "c": np.array([p.c for p in pts]),
        "theta0": np.array([p.theta0 for p in pts]),
        "zeta": np.array([p.zeta for p in pts]),
        # molecular-binding asymptote for the chemical potential (BEC side)
        "mu_bec_asymptote": -np.array(xs) ** 2,
        # weak-coupling sound-speed asymptote v_F/sqrt(3)
        "c_bcs_asymptote": np.full(len(xs), V_FERMI / np.sqrt(3.0)),
    }
    report = {
        "delta_monotone_increasing": bool(np.all(np.diff(cols["delta"]) > 0)),
        "mu_monotone_decreasing": bool(np.all(np.diff(cols["mu"]) < 0)),
        "c_monotone_decreasing": bool(np.all(np.diff(cols["c"]) < 0)),
        "rows": len(xs),
    }
    if "csv" in cfg.formats:
        write_curve(os.path.join(cfg.out_dir, "eos.csv"), cols, _meta(cfg))
    if "json" in cfg.formats:
        write_report(os.path.join(cfg.out_dir, "eos_report.json"), report)
    return EXIT_OK


def cmd_dispersion(cfg):
    qs = np.linspace(cfg.q_min, cfg.q_max, cfg.q_points)
    for x in cfg.inv_kfa:
        point = solve_eos(x)

        def one(q):
            return collective_dispersion(q, point, res=cfg.res)

        modes = _pmap(one, qs, cfg.threads)
        cols = {
            "q": qs,
            "theta_q": np.array([m.theta for m in modes]),
            "omega_q": np.array([np.nan if m.merged else m.omega for m in modes]),
            "weight": np.array([np.nan if m.merged else m.weight for m in modes]),
            "weight_smallq": np.array([spectral_weight_smallq(q, point) for q in qs]),
            "merged": np.array([int(m.merged) for m in modes]),
        }
        write_curve(
            os.path.join(cfg.out_dir, f"dispersion_{_tag(x)}.csv"),
            cols,
            _meta(cfg, inv_kfa=x, delta=point.delta, mu=point.mu, c=point.c,
                  theta0=point.theta0, zeta=point.zeta),
        )
    return EXIT_OK


def cmd_dsf_grid(cfg):
    qs = np.linspace(cfg.q_min, cfg.q_max, cfg.q_points)
    nus = np.linspace(cfg.nu_min, cfg.nu_max, cfg.nu_points)
    for x in cfg.inv_kfa:
        point = solve_eos(x)

        def one(pair):
            q, nu = pair
            return dsf(q, nu, cfg.beta, cfg.epsilon, point, res=cfg.res).value

        pairs = [(q, nu) for q in qs for nu in nus]
        vals = _pmap(one, pairs, cfg.threads)
        cols = {
            "q": np.array([p[0] for p in pairs]),
            "nu": np.array([p[1] for p in pairs]),
            "s": np.array(vals),
        }
        write_curve(
            os.path.join(cfg.out_dir, f"dsf_{_tag(x)}.csv"),
            cols,
            _meta(cfg, inv_kfa=x, epsilon=cfg.epsilon, beta=cfg.beta,
                  theta0=point.theta0),
        )
    return EXIT_OK


def cmd_gamma(cfg):
    omegas = np.linspace(cfg.omega_a_min, cfg.omega_a_max, cfg.omega_a_points)
    for x in cfg.inv_kfa:
        point = solve_eos(x)

        def one(wa):
            probe = ProbeConfig(
                mass_ratio=cfg.mass_ratio, kappa=cfg.kappa, omega_a=wa, beta=cfg.beta
            )
            d = decay_rate(probe, point, cfg.epsilon, res=cfg.res, rel_tol=cfg.rel_tol)
            try:
                g_coll = 2.0 * np.pi * spectral_density(
                    wa, probe, point, 0.0, method="collective", res=cfg.res
                )
            except (NoModeAtFrequency, RootBracketFailure):
                g_coll = np.nan
            return d, g_coll

        rows = _pmap(one, omegas, cfg.threads)
        cols = {
            "omega_a": omegas,
            "gamma": np.array([r[0].gamma for r in rows]),
            "gamma_collective": np.array([r[1] for r in rows]),
            "markov_bandwidth_ratio": np.array(
                [r[0].markov_bandwidth_ratio for r in rows]
            ),
            "markov_frequency_ratio": np.array(
                [r[0].markov_frequency_ratio for r in rows]
            ),
            "theta0": np.full(len(omegas), point.theta0),
        }
        if cfg.e_fermi_khz is not None:
            # E_F = 2 pi hbar f => rates in 1/s scale by 2 pi f
            cols["omega_a_khz"] = omegas * cfg.e_fermi_khz
            cols["gamma_per_s"] = cols["gamma"] * 2.0 * np.pi * cfg.e_fermi_khz * 1e3
        write_curve(
            os.path.join(cfg.out_dir, f"gamma_{_tag(x)}.csv"),
            cols,
            _meta(cfg, inv_kfa=x, mass_ratio=cfg.mass_ratio, kappa=cfg.kappa,
                  epsilon=cfg.epsilon, theta0=point.theta0),
        )
    return EXIT_OK


def cmd_validate(cfg):
    checks = {}
    point = solve_eos(0.0)

    # renormalization identity on a coarse grid
    gaps = []
    for q in (0.3, 0.8, 1.5):
        for nu in (0.3, 1.0, 2.2):
            gaps.append(i11_identity_gap(q, nu, cfg.epsilon, point, res=cfg.res))
    checks["identity_max_gap"] = {"value": max(gaps), "limit": 1e-6, "pass": max(gaps) < 1e-6}

    dev_f, _ = sum_rule_check(0.05, point, "f-sum", epsilon=cfg.epsilon, res=cfg.res)
    checks["f_sum_q005"] = {"value": dev_f, "limit": 0.03, "pass": dev_f < 0.03}
    dev_k, _ = sum_rule_check(0.05, point, "compressibility", epsilon=cfg.epsilon, res=cfg.res)
    checks["compressibility_q005"] = {"value": dev_k, "limit": 0.05, "pass": dev_k < 0.05}

    # two decoherence routes below the gap
    bec = solve_eos(1.0)
    devs = []
    for frac in (0.35, 0.6):
        probe = ProbeConfig(
            mass_ratio=cfg.mass_ratio, kappa=cfg.kappa, omega_a=frac * bec.theta0
        )
        full = spectral_density(probe.omega_a, probe, bec, cfg.epsilon, res=cfg.res)
        coll = spectral_density(probe.omega_a, probe, bec, 0.0, method="collective", res=cfg.res)
        devs.append(abs(full - coll) / coll)
    checks["two_route_max_dev"] = {"value": max(devs), "limit": 0.05, "pass": max(devs) < 0.05}

    # detailed balance at finite temperature
    beta = 10.0
    s_plus = dsf(0.5, 0.3, beta, cfg.epsilon, point, res=cfg.res).value
    s_minus = dsf(0.5, -0.3, beta, cfg.epsilon, point, res=cfg.res).value
    db = abs(s_minus / s_plus - np.exp(-beta * 0.3)) / np.exp(-beta * 0.3)
    checks["detailed_balance"] = {"value": db, "limit": 0.01, "pass": db < 0.01}

    # positivity sampling
    smin = min(
        dsf(q, nu, cfg.beta, cfg.epsilon, point, res=cfg.res).value
        for q in (0.2, 0.7, 1.4)
        for nu in (0.2, 0.9, 1.8, 2.6)
    )
    checks["dsf_min_sampled"] = {"value": smin, "limit": 0.0, "pass": smin >= 0.0}

    # far-apart impurities with perpendicular dipoles decouple
    probe = ProbeConfig(mass_ratio=cfg.mass_ratio, kappa=cfg.kappa, omega_a=1.0)
    b = 20.0 * probe.ell
    site_m = ImpuritySite(position=(0.0, 0.0, 0.0), dipole=(0.0, 0.0, 1.0))
    site_n = ImpuritySite(position=(b, 0.0, 0.0), dipole=(0.0, 0.0, 1.0))
    ratios = []
    for nu in (0.6, 1.2):
        i_nn = spectral_density(nu, probe, point, cfg.epsilon, res=cfg.res)
        i_mn = cross_spectral_density(nu, site_m, site_n, probe, point, cfg.epsilon, res=cfg.res)
        ratios.append(abs(i_mn) / i_nn)
    checks["decoupling_max_ratio"] = {
        "value": max(ratios), "limit": 1e-3, "pass": max(ratios) < 1e-3,
    }

    # broadening convergence study around the default working epsilon
    eps_list = (0.04, 0.02, 0.01, 0.005)
    s_eps = [dsf(0.5, 1.6, cfg.beta, e, point, res=cfg.res).value for e in eps_list]
    rel_steps = [abs(s_eps[i + 1] - s_eps[i]) / s_eps[-1] for i in range(len(s_eps) - 1)]
    checks["epsilon_convergence"] = {
        "epsilon": list(eps_list),
        "s_values": s_eps,
        "relative_steps": rel_steps,
        "limit": 0.05,
        "pass": rel_steps[-1] < 0.05,
    }

    ok = all(c["pass"] for c in checks.values())
    checks["all_pass"] = ok
    write_report(os.path.join(cfg.out_dir, "validation.json"), checks)
    return EXIT_OK if ok else EXIT_VALIDATION


_COMMANDS = {
    "eos": cmd_eos,
    "dispersion": cmd_dispersion,
    "dsf-grid": cmd_dsf_grid,
    "gamma": cmd_gamma,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dsfprobe",
        description="superfluid density response and impurity decoherence sweeps",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", default=None, help="TOML or JSON config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--epsilon", type=float, default=None, help="broadening in E_F")
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="restrict output to one format")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        overrides = {
            "out_dir": args.out,
            "epsilon": args.epsilon,
            "threads": args.threads,
            "formats": (args.format,) if args.format else None,
        }
        cfg = load_config(args.config, overrides)
        os.makedirs(cfg.out_dir, exist_ok=True)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SOLVER_ERRORS as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
