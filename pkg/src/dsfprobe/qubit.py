"""Two-level Lindblad dynamics of the trapped impurity.

The reduced dynamics of the lowest two trap levels under the Markovian
master equation is exactly solvable: the excited population decays as
exp(-Gamma t) and the coherence as exp(-Gamma t / 2) times a phase. The
fixed-step integrator here is a validation harness for that statement, and
mirrors the measurement loop of reconstructing Gamma from p1(t).
"""

from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge

_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|


@dataclass(frozen=True)
class QubitState:
    """2x2 density matrix in the {|0>, |1>} trap-level basis."""

    rho: tuple

    def __post_init__(self):
        r = self.matrix
        if r.shape != (2, 2):
            raise ValueError("state must be 2x2")
        if not np.allclose(r, r.conj().T, atol=1e-12):
            raise ValueError("state must be Hermitian")
        if abs(np.trace(r).real - 1.0) > 1e-12:
            raise ValueError("state must have unit trace")
        if np.linalg.eigvalsh(r).min() < -1e-12:
            raise ValueError("state must be positive semidefinite")

    @property
    def matrix(self):
        return np.asarray(self.rho, dtype=complex)

    @classmethod
    def from_matrix(cls, rho):
        rho = np.asarray(rho, dtype=complex)
        return cls(rho=tuple(map(tuple, rho)))

    @property
    def excited_population(self):
        return float(self.matrix[1, 1].real)

    @property
    def coherence(self):
        return complex(self.matrix[0, 1])


def _rhs(rho, omega_a, gamma):
    h = np.diag([0.0, omega_a])
    s = _SIGMA_MINUS
    sd = s.conj().T
    drho = 1j * (rho @ h - h @ rho)
    drho += gamma * (s @ rho @ sd - 0.5 * (sd @ s @ rho + rho @ sd @ s))
    return drho


def lindblad_step(state, omega_a, gamma, dt):
    """One classical 4th-order Runge-Kutta step of the master equation."""
    if dt * max(omega_a, gamma) >= 0.1:
        raise StepTooLarge(
            f"dt*max(omega_a, gamma) = {dt * max(omega_a, gamma):.3g} >= 0.1"
        )
    rho = state.matrix
    k1 = _rhs(rho, omega_a, gamma)
    k2 = _rhs(rho + 0.5 * dt * k1, omega_a, gamma)
    k3 = _rhs(rho + 0.5 * dt * k2, omega_a, gamma)
    k4 = _rhs(rho + dt * k3, omega_a, gamma)
    rho = rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    # re-symmetrize to keep the Hermiticity invariant at roundoff level
    rho = 0.5 * (rho + rho.conj().T)
    return QubitState.from_matrix(rho)


@dataclass(frozen=True)
class DecayTrajectory:
    times: tuple
    p1_integrated: tuple
    p1_closed_form: tuple
    gamma: float
    max_deviation: float

    def fitted_gamma(self):
        """Gamma reconstructed from a log-linear fit of the trajectory."""
        t = np.asarray(self.times)
        p = np.asarray(self.p1_integrated)
        mask = p > 0
        slope = np.polyfit(t[mask], np.log(p[mask]), 1)[0]
        return -slope

    def half_life(self):
        """First time where p1 drops below half its initial value."""
        t = np.asarray(self.times)
        p = np.asarray(self.p1_integrated)
        target = 0.5 * p[0]
        i = int(np.argmax(p <= target))
        if p[i] > target:
            raise ValueError("trajectory does not reach half the initial population")
        # linear interpolation inside the crossing interval
        t0, t1, p0, p1v = t[i - 1], t[i], p[i - 1], p[i]
        return t0 + (p0 - target) / (p0 - p1v) * (t1 - t0)


def decay_trajectory(probe, point, t_grid, gamma=None, epsilon=0.01, initial=None,
                     frame="rotating"):
    """Integrated p1(t) against the closed form exp(-Gamma t).

    gamma may be supplied directly (e.g. from a previous decay_rate call);
    otherwise it is computed from the probe and crossover point.

    frame = "rotating" integrates with the trap phase removed, so the step
    size is set by Gamma alone; populations are frame-independent and physical
    rates are orders of magnitude below omega_a, which would otherwise force
    millions of steps. frame = "lab" keeps the full unitary term.
    """
    from .probe import decay_rate

    if frame not in ("rotating", "lab"):
        raise ValueError(f"unknown frame {frame!r}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing with >= 2 points")
    if np.any(t_grid < 0):
        raise ValueError("times must be non-negative")
    if gamma is None:
        gamma = decay_rate(probe, point, epsilon).gamma
    omega_eff = probe.omega_a if frame == "lab" else 0.0
    state = initial or QubitState.from_matrix(np.diag([0.0, 1.0]))
    p0 = state.excited_population
    dt_max = 0.05 / max(omega_eff, gamma)
    p1 = [state.excited_population]
    t_now = t_grid[0]
    for t_next in t_grid[1:]:
        span = t_next - t_now
        n_sub = max(1, int(np.ceil(span / dt_max)))
        dt = span / n_sub
        for _ in range(n_sub):
            state = lindblad_step(state, omega_eff, gamma, dt)
        p1.append(state.excited_population)
        t_now = t_next
    closed = p0 * np.exp(-gamma * (t_grid - t_grid[0]))
    dev = float(np.max(np.abs(np.asarray(p1) - closed)))
    return DecayTrajectory(
        times=tuple(t_grid),
        p1_integrated=tuple(p1),
        p1_closed_form=tuple(closed),
        gamma=float(gamma),
        max_deviation=dev,
    )
