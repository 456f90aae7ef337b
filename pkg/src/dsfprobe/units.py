"""Dimensionless gas units.

All internal computations use k_F = 1 (wave vectors) and E_F = 1 (energies).
Since E_F = k_F^2/(2m), this fixes the fermion mass m = 1/2, the Fermi
velocity v_F = k_F/m = 2 and the mean density rho_0 = k_F^3/(3 pi^2).
Conversions to lab units happen only at the CLI boundary.
"""

from dataclasses import dataclass

import numpy as np

M_FERMION = 0.5
V_FERMI = 2.0
RHO_0 = 1.0 / (3.0 * np.pi**2)


@dataclass(frozen=True)
class GasUnits:
    """Marker for the k_F = E_F = 1 convention."""

    k_fermi: float = 1.0
    e_fermi: float = 1.0

    @property
    def mass(self):
        # E_F = k_F^2 / (2m)
        return self.k_fermi**2 / (2.0 * self.e_fermi)

    @property
    def v_fermi(self):
        return self.k_fermi / self.mass

    @property
    def density(self):
        return self.k_fermi**3 / (3.0 * np.pi**2)


GAS_UNITS = GasUnits()
