"""Thermodynamics of a finite number of spin-polarized ideal fermions in an
anisotropic three-dimensional harmonic trap, with brute-force level sums as
a reference."""

__version__ = "0.1.0"

from .errors import (DomainError, InvalidInputError, NumericalConsistencyError,
                     NumericalError, RangeError, ResourceError, SolvabilityError,
                     TrappedFermiError)
from .trap_model import (DosCoefficients, PartitionCoefficients, TrapSpec, ZeroPointMode,
                         compute_dos_coefficients, compute_partition_coefficients,
                         density_of_states, partition_function_exact)
from .fermi_integrals import (Fugacity, fermi_integral, fermi_integral_derivative,
                              fermi_integral_log)
from .degenerate_limit import (CubicClassification, FermiEnergyResult, classify_cubic,
                               fermi_energy, particle_number_at)
from .finite_temperature import (FermiTemperatures, SweepTable, ThermoPoint,
                                 fermi_temperature, internal_energy, solve_fugacity,
                                 specific_heat_exact, specific_heat_paper22,
                                 sweep_temperature, thermo_point)
from .exact_oracle import (ShellFilling, SpectrumTruncation, closed_shell,
                           discrete_internal_energy, discrete_number, discrete_solve_mu,
                           discrete_specific_heat)
