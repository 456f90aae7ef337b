"""Density response of a Fermi superfluid and impurity-qubit decoherence."""

__version__ = "0.1.0"

from .errors import (
    DsfProbeError,
    NonConvergence,
    QuadratureNotConverged,
    PoleSingular,
    RootBracketFailure,
    NoModeAtFrequency,
    StepTooLarge,
    ConfigError,
)
from .units import GAS_UNITS, GasUnits, M_FERMION, V_FERMI, RHO_0
from .eos import CrossoverPoint, solve_eos, pair_gap, pair_threshold, quasiparticle_energy
from .susceptibility import ComplexResponse, response, building_blocks, pole_parameters
from .probe import (
    DecayRate,
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
from .qubit import DecayTrajectory, QubitState, decay_trajectory, lindblad_step
from .config import RunConfig, load_config
from .dsf import (
    CollectiveModePoint,
    DispersionTable,
    DsfSample,
    collective_dispersion,
    dispersion_table,
    dsf,
    c_nu,
    phonon_dos,
    spectral_weight_smallq,
    sum_rule_check,
)

__all__ = [
    "DsfProbeError",
    "NonConvergence",
    "QuadratureNotConverged",
    "PoleSingular",
    "RootBracketFailure",
    "NoModeAtFrequency",
    "StepTooLarge",
    "ConfigError",
    "GAS_UNITS",
    "GasUnits",
    "M_FERMION",
    "V_FERMI",
    "RHO_0",
    "CrossoverPoint",
    "solve_eos",
    "pair_gap",
    "pair_threshold",
    "quasiparticle_energy",
    "ComplexResponse",
    "response",
    "building_blocks",
    "pole_parameters",
    "CollectiveModePoint",
    "DispersionTable",
    "DsfSample",
    "collective_dispersion",
    "dispersion_table",
    "dsf",
    "c_nu",
    "phonon_dos",
    "spectral_weight_smallq",
    "sum_rule_check",
    "DecayRate",
    "ImpuritySite",
    "ProbeConfig",
    "coupling_constants",
    "cross_spectral_density",
    "decay_rate",
    "far_field_cross_form_factor",
    "form_factor",
    "spectral_density",
    "super_ohmic_params",
    "super_ohmic_spectral_density",
    "DecayTrajectory",
    "QubitState",
    "decay_trajectory",
    "lindblad_step",
    "RunConfig",
    "load_config",
]
