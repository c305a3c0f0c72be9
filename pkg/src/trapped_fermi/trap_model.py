"""Anisotropic harmonic trap: partition-function expansion and smoothed
density of states.

All quantities are in reduced units with hbar = k_B = 1, so a trap
frequency, an energy and a temperature share one unit.  ``beta`` is the
inverse temperature 1/T.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidInputError, RangeError


class ZeroPointMode(str, enum.Enum):
    """Where single-particle energies are measured from.

    RELATIVE puts the ground state at zero (eps0 = 0); ABSOLUTE keeps the
    zero-point energy eps0 = (wx + wy + wz) / 2.
    """

    RELATIVE = "relative"
    ABSOLUTE = "absolute"


def _check_frequency(name, value):
    if not isinstance(value, (int, float, np.floating, np.integer)):
        raise InvalidInputError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidInputError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class TrapSpec:
    """Three angular trap frequencies plus the zero-point bookkeeping mode."""

    omega_x: float
    omega_y: float
    omega_z: float
    zero_point_mode: ZeroPointMode = ZeroPointMode.RELATIVE

    def __post_init__(self):
        for name in ("omega_x", "omega_y", "omega_z"):
            object.__setattr__(self, name, _check_frequency(name, getattr(self, name)))
        object.__setattr__(self, "zero_point_mode", ZeroPointMode(self.zero_point_mode))

    @classmethod
    def isotropic(cls, omega=1.0, zero_point_mode=ZeroPointMode.RELATIVE):
        return cls(omega, omega, omega, zero_point_mode)

    @property
    def frequencies(self) -> Tuple[float, float, float]:
        return (self.omega_x, self.omega_y, self.omega_z)

    @property
    def sorted_frequencies(self) -> Tuple[float, float, float]:
        # Every coefficient is computed from the sorted triple, which makes
        # the outputs bitwise invariant under permutations of the axes.
        return tuple(sorted(self.frequencies))

    @property
    def omega_max(self) -> float:
        return max(self.frequencies)

    @property
    def is_isotropic(self) -> bool:
        return self.omega_x == self.omega_y == self.omega_z

    @property
    def eps0(self) -> float:
        """Ground-state energy in the selected mode."""
        if self.zero_point_mode is ZeroPointMode.ABSOLUTE:
            wx, wy, wz = self.sorted_frequencies
            return 0.5 * (wx + wy + wz)
        return 0.0

    def with_mode(self, mode) -> "TrapSpec":
        return TrapSpec(self.omega_x, self.omega_y, self.omega_z, ZeroPointMode(mode))


@dataclass(frozen=True)
class PartitionCoefficients:
    """Coefficients of Q(beta) ~ a2/beta^3 + a1/beta^2 + a0/beta + a_minus1."""

    a2: float
    a1: float
    a0: float
    a_minus1: float


@dataclass(frozen=True)
class DosCoefficients:
    """rho(E) = b0 + b1*E + b2*E**2, together with the ground-state energy.

    ``frequencies`` is carried along when the coefficients come from a trap so
    that downstream code can flag temperatures outside the regime
    T >> max(omega).  Hand-built coefficients may leave it as ``None``.
    """

    b0: float
    b1: float
    b2: float
    eps0: float = 0.0
    mode: ZeroPointMode = ZeroPointMode.RELATIVE
    frequencies: Optional[Tuple[float, float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", ZeroPointMode(self.mode))
        if not (math.isfinite(self.b2) and self.b2 > 0.0):
            raise InvalidInputError(f"b2 must be finite and > 0, got {self.b2!r}")
        for name in ("b0", "b1", "eps0"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")

    @property
    def omega_max(self) -> Optional[float]:
        return None if self.frequencies is None else max(self.frequencies)


def compute_partition_coefficients(trap: TrapSpec) -> PartitionCoefficients:
    """High-temperature expansion coefficients of the trap partition function.

    Examples
    --------
    >>> compute_partition_coefficients(TrapSpec(1, 2, 3)).a_minus1  # doctest: +ELLIPSIS
    0.458333...
    """
    wx, wy, wz = trap.sorted_frequencies
    a2 = 1.0 / (wx * wy * wz)
    a1 = 0.5 * a2 * (wx + wy + wz)
    a0 = a2 * (wx * wx + wy * wy + wz * wz + 3.0 * (wx * wy + wy * wz + wz * wx)) / 12.0
    ratios = wx / wy + wx / wz + wy / wz + wy / wx + wz / wx + wz / wy
    a_minus1 = 0.125 + ratios / 24.0
    return PartitionCoefficients(a2=a2, a1=a1, a0=a0, a_minus1=a_minus1)


def compute_dos_coefficients(trap: TrapSpec) -> DosCoefficients:
    """Smoothed density-of-states coefficients for ``trap``.

    In relative mode the polynomial is the plain expansion (b1 = a1,
    b0 = a0).  In absolute mode the ground-state shift eps0 enters as
    b1 = a1 + eps0*a2 and b0 = a0 - eps0*a1 - eps0**2*a2.
    """
    a = compute_partition_coefficients(trap)
    eps0 = trap.eps0
    b2 = 0.5 * a.a2
    if trap.zero_point_mode is ZeroPointMode.ABSOLUTE:
        b1 = a.a1 + eps0 * a.a2
        b0 = a.a0 - eps0 * a.a1 - eps0 * eps0 * a.a2
    else:
        b1 = a.a1
        b0 = a.a0
    return DosCoefficients(
        b0=b0, b1=b1, b2=b2, eps0=eps0, mode=trap.zero_point_mode,
        frequencies=trap.frequencies,
    )


def density_of_states(coeffs: DosCoefficients, E):
    """Evaluate b0 + b1*E + b2*E**2 (scalar or array ``E``)."""
    E_arr = np.asarray(E, dtype=float)
    if np.any(~np.isfinite(E_arr)) or np.any(E_arr < 0.0):
        raise InvalidInputError("energy must be finite and >= 0")
    rho = coeffs.b0 + E_arr * (coeffs.b1 + coeffs.b2 * E_arr)
    return float(rho) if rho.ndim == 0 else rho


def expansion_value(coeffs: PartitionCoefficients, beta: float) -> float:
    """Truncated series a2/beta^3 + a1/beta^2 + a0/beta + a_minus1."""
    t = 1.0 / beta
    return ((coeffs.a2 * t + coeffs.a1) * t + coeffs.a0) * t + coeffs.a_minus1


def partition_function_exact(trap: TrapSpec, beta: float) -> float:
    """Closed-form product over the three axes, energies from the ground state."""
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise InvalidInputError(f"beta must be finite and > 0, got {beta!r}")
    q = 1.0
    for w in trap.sorted_frequencies:
        # -expm1(-x) keeps 1 - exp(-x) accurate for small x
        denom = -math.expm1(-beta * w)
        if denom == 0.0:
            raise RangeError(f"partition function overflows at beta*omega = {beta * w:g}")
        q /= denom
    if not math.isfinite(q):
        raise RangeError(f"partition function overflows at beta = {beta:g}")
    return q
