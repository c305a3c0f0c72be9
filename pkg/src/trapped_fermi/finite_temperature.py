"""Grand-canonical thermodynamics of the smoothed trap spectrum.

With rho(E) = b0 + b1 E + b2 E^2 and energies measured from the ground
state, every thermodynamic moment is a short sum of Fermi integrals:

    int_0^inf E^j rho(E) / (exp((E - mu)/T) + 1) dE
        = sum_k b_k Gamma(k + j + 1) T^(k + j + 1) f_(k + j + 1)(z).

Two conventions are supported.  ``"physical"`` keeps the Gamma weights and
is what every default path uses.  ``"literal"`` drops them, i.e.
N = b2 T^3 f3 + b1 T^2 f2 + b0 T f1 and U = b2 T^4 f4 + b1 T^3 f3 + b0 T^2 f2;
that chain is kept for side-by-side reporting, and it is the one the closed
forms for the Fermi temperature and the half-integer specific-heat formula
are built on.
"""

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DomainError, InvalidInputError, NumericalError, TrappedFermiError
from .fermi_integrals import Fugacity, fermi_integral_log
from .trap_model import DosCoefficients, ZeroPointMode

CONVENTIONS = ("physical", "literal")
Z_F_CONVENTION = "f3(z_F) = 1/3 with T_F0 = (3N/b2)^(1/3)"

LOG_Z_MIN = -745.0
LOG_Z_MAX = 709.0
EXPANSION_VALID_FACTOR = 5.0


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _check_positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidInputError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _check_relative(coeffs):
    if coeffs.mode is not ZeroPointMode.RELATIVE:
        raise InvalidInputError(
            "finite-temperature formulas drop the zero-point energy; "
            "use RELATIVE-mode coefficients")


def _weight(p, convention):
    return math.gamma(p) if convention == "physical" else 1.0


def _moment(coeffs, j, T, log_z, convention):
    """Value and partial derivatives (d/dT at fixed z, d/d ln z at fixed T)
    of the energy moment of order ``j`` (0: particle number, 1: energy)."""
    value = d_T = d_eta = 0.0
    for k, b in enumerate((coeffs.b0, coeffs.b1, coeffs.b2)):
        if b == 0.0:
            continue
        p = k + j + 1
        w = b * _weight(p, convention)
        Tp = T ** p
        f_p = fermi_integral_log(p, log_z)
        value += w * Tp * f_p
        d_T += w * p * T ** (p - 1) * f_p
        d_eta += w * Tp * fermi_integral_log(p - 1, log_z)
    return value, d_T, d_eta


def number_equation(coeffs: DosCoefficients, z, T, convention="physical") -> float:
    """Mean particle number at fugacity ``z`` and temperature ``T``."""
    _check_convention(convention)
    log_z = z.log_z if isinstance(z, Fugacity) else math.log(_check_positive("z", z))
    return _moment(coeffs, 0, _check_positive("T", T), log_z, convention)[0]


def solve_fugacity(coeffs: DosCoefficients, N, T, convention="physical",
                   maxiter=200) -> Fugacity:
    """Unique fugacity at which the mean particle number equals ``N``.

    Newton iteration on ln z inside a bisection bracket [-745, 709]; the
    particle number is strictly increasing in ln z so the bracket always
    holds the root.
    """
    _check_relative(coeffs)
    _check_convention(convention)
    N = _check_positive("N", N)
    if N < 1.0:
        raise InvalidInputError(f"N must be >= 1, got {N!r}")
    T = _check_positive("T", T)

    def residual(eta):
        n, _, dn = _moment(coeffs, 0, T, eta, convention)
        return n / N - 1.0, dn / N

    lo, hi = LOG_Z_MIN, LOG_Z_MAX
    if residual(hi)[0] < 0.0:
        raise NumericalError("particle number not reachable below ln z = 709",
                             {"N": N, "T": T})

    # classical guess, or the degenerate one mu ~ (3N/b2)^(1/3) when that is positive
    scale = sum(b * _weight(k + 1, convention) * T ** (k + 1)
                for k, b in enumerate((coeffs.b0, coeffs.b1, coeffs.b2)))
    eta = math.log(N / scale)
    if eta > 0.0:
        eta = (3.0 * N / coeffs.b2) ** (1.0 / 3.0) / T
    eta = min(max(eta, lo + 1.0), hi - 1.0)

    for it in range(maxiter):
        r, dr = residual(eta)
        if r == 0.0:
            return Fugacity(eta)
        if r < 0.0:
            lo = eta
        else:
            hi = eta
        step = r / dr if dr > 0.0 else math.nan
        new = eta - step
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - eta) <= 4e-16 * max(1.0, abs(new)) or hi - lo <= 4e-16 * max(1.0, abs(hi)):
            return Fugacity(new)
        eta = new
    raise NumericalError("fugacity solve did not converge",
                         {"N": N, "T": T, "bracket": (lo, hi), "log_z": eta,
                          "iterations": maxiter})


def internal_energy(coeffs: DosCoefficients, z, T, convention="physical") -> float:
    """Thermal energy measured from the ground state."""
    _check_convention(convention)
    log_z = z.log_z if isinstance(z, Fugacity) else math.log(_check_positive("z", z))
    return _moment(coeffs, 1, _check_positive("T", T), log_z, convention)[0]


def specific_heat_exact(coeffs: DosCoefficients, N, T, convention="physical",
                        z: Optional[Fugacity] = None) -> float:
    """Specific heat per particle (dU/dT at fixed N) / N.

    The fixed-N derivative is assembled analytically:
    dU/dT|_N = dU/dT|_z + dU/dln z * dln z/dT|_N with
    dln z/dT|_N = -(dN/dT|_z) / (dN/dln z).  ``z`` may be passed when the
    fugacity has already been solved.
    """
    N = _check_positive("N", N)
    T = _check_positive("T", T)
    if z is None:
        z = solve_fugacity(coeffs, N, T, convention)
    eta = z.log_z
    _, n_T, n_eta = _moment(coeffs, 0, T, eta, convention)
    _, u_T, u_eta = _moment(coeffs, 1, T, eta, convention)
    return (u_T - u_eta * n_T / n_eta) / N


def specific_heat_paper22(coeffs: DosCoefficients, N, T,
                          z: Optional[Fugacity] = None) -> float:
    """Closed form with f_{3/2}/f_{1/2} terms, kept term for term.

    It is evaluated at the fugacity of the literal number equation, which is
    the chain it was derived on.  Its classical limit is 2.5 rather than 3,
    so it is only ever reported next to :func:`specific_heat_exact`.
    """
    N = _check_positive("N", N)
    T = _check_positive("T", T)
    if z is None:
        z = solve_fugacity(coeffs, N, T, "literal")
    eta = z.log_z
    f = {n: fermi_integral_log(n, eta) for n in (0.5, 1, 1.5, 2, 3, 4)}
    b0, b1, b2 = coeffs.b0, coeffs.b1, coeffs.b2
    ratio = f[1.5] / f[0.5]
    total = (4.0 * b2 * T ** 3 * f[4] + 3.0 * b1 * T ** 2 * f[3] + 2.0 * b0 * T * f[2]
             - 1.5 * ratio * (b2 * T ** 3 * f[3] + b1 * T ** 2 * f[2] + b0 * T * f[1]))
    return total / N


@dataclass(frozen=True)
class FermiTemperatures:
    T_F0: float
    T_F: float
    z_F: float
    convention: str = Z_F_CONVENTION

    @property
    def ratio(self) -> float:
        return self.T_F / self.T_F0


def z_F_universal() -> Fugacity:
    """Root of f3(z) = 1/3 (independent of trap and N)."""
    lo, hi = -5.0, 5.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fermi_integral_log(3, mid) < 1.0 / 3.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return Fugacity(0.5 * (lo + hi))


def infinite_n_fermi_temperature(coeffs: DosCoefficients, N) -> float:
    return (3.0 * float(N) / coeffs.b2) ** (1.0 / 3.0)


def fermi_temperature(coeffs: DosCoefficients, N) -> FermiTemperatures:
    """Leading-order Fermi temperature and its finite-N corrected value.

    T_F0 = (3N/b2)^(1/3) and
    T_F = T_F0 [1 - (b1/3b2)(1/T_F0)(f2/f3) - (2b0/3b2)(1/T_F0^2)(f1/f3)]
    with all f evaluated at the universal z_F, f3(z_F) = 1/3.
    """
    _check_relative(coeffs)
    N = _check_positive("N", N)
    if N < 1.0:
        raise InvalidInputError(f"N must be >= 1, got {N!r}")
    T_F0 = infinite_n_fermi_temperature(coeffs, N)
    z_F = z_F_universal()
    f1, f2, f3 = (fermi_integral_log(n, z_F.log_z) for n in (1, 2, 3))
    r1 = coeffs.b1 / coeffs.b2
    r0 = coeffs.b0 / coeffs.b2
    bracket = 1.0 - (r1 / 3.0) * (f2 / f3) / T_F0 - (2.0 * r0 / 3.0) * (f1 / f3) / T_F0 ** 2
    if bracket <= 0.0:
        raise DomainError(
            f"finite-N correction drives T_F non-positive (bracket = {bracket:g}) at N = {N:g}")
    return FermiTemperatures(T_F0=T_F0, T_F=T_F0 * bracket, z_F=z_F.z)


@dataclass(frozen=True)
class ThermoPoint:
    N: float
    T: float
    z: float
    log_z: float
    mu: float
    U: float
    c_exact: float
    c_paper22: Optional[float]
    T_over_TF0: float
    expansion_valid: Optional[bool]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _expansion_valid(coeffs, T):
    w = coeffs.omega_max
    return None if w is None else bool(T >= EXPANSION_VALID_FACTOR * w)


def thermo_point(coeffs: DosCoefficients, N, T, paper22=True) -> ThermoPoint:
    """Solve one state point and collect every reported quantity.

    ``paper22=False`` skips the half-integer closed form and leaves
    ``c_paper22`` as None.
    """
    N = _check_positive("N", N)
    T = _check_positive("T", T)
    z = solve_fugacity(coeffs, N, T)
    U = internal_energy(coeffs, z, T)
    c = specific_heat_exact(coeffs, N, T, z=z)
    c22 = specific_heat_paper22(coeffs, N, T) if paper22 else None
    return ThermoPoint(
        N=N, T=T, z=z.z, log_z=z.log_z, mu=T * z.log_z, U=U, c_exact=c, c_paper22=c22,
        T_over_TF0=T / infinite_n_fermi_temperature(coeffs, N),
        expansion_valid=_expansion_valid(coeffs, T),
    )


def _failed_point(coeffs, N, T, exc):
    nan = math.nan
    return ThermoPoint(N=N, T=T, z=nan, log_z=nan, mu=nan, U=nan, c_exact=nan,
                       c_paper22=nan, T_over_TF0=T / infinite_n_fermi_temperature(coeffs, N),
                       expansion_valid=_expansion_valid(coeffs, T),
                       error=f"{type(exc).__name__}: {exc}")


COLUMNS = ("T", "T_over_TF0", "z", "mu", "U", "c_exact", "c_paper22", "expansion_valid")


def format_value(value) -> str:
    """Fixed 12-significant-digit text used by every serializer."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".12g")


@dataclass
class SweepTable:
    rows: List[ThermoPoint]
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def column(self, name) -> np.ndarray:
        return np.array([math.nan if getattr(r, name) is None else getattr(r, name)
                         for r in self.rows], dtype=float)

    @property
    def failures(self) -> List[ThermoPoint]:
        return [r for r in self.rows if not r.ok]

    def to_csv(self) -> str:
        lines = [f"# {k} = {format_metadata(v)}" for k, v in self.metadata.items()]
        lines.append(",".join(COLUMNS + ("error",)))
        for r in self.rows:
            cells = [format_value(getattr(r, c)) for c in COLUMNS]
            cells.append("" if r.error is None else r.error.replace(",", ";"))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return format_value(v)
            return v
        rows = []
        for r in self.rows:
            d = {c: clean(getattr(r, c)) for c in COLUMNS}
            if r.error is not None:
                d["error"] = r.error
            rows.append(d)
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2) + "\n"


def format_metadata(value) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(format_metadata(v) for v in value)
    if isinstance(value, float):
        return format_value(value)
    return str(value)


def sweep_temperature(coeffs: DosCoefficients, N, T_grid, metadata=None,
                      paper22=True) -> SweepTable:
    """One :class:`ThermoPoint` per temperature, in grid order.

    A point whose solve fails is kept with NaN values and an error message;
    it never aborts the sweep.
    """
    grid = np.asarray(T_grid, dtype=float).ravel()
    if grid.size == 0:
        raise InvalidInputError("temperature grid is empty")
    if np.any(~np.isfinite(grid)) or np.any(grid <= 0.0):
        raise InvalidInputError("temperatures must be finite and > 0")
    if np.any(np.diff(grid) <= 0.0):
        raise InvalidInputError("temperature grid must be strictly increasing")
    N = _check_positive("N", N)
    rows = []
    for T in grid:
        try:
            rows.append(thermo_point(coeffs, N, float(T), paper22=paper22))
        except TrappedFermiError as exc:
            rows.append(_failed_point(coeffs, N, float(T), exc))
    meta = {
        "N": N,
        "b0": coeffs.b0, "b1": coeffs.b1, "b2": coeffs.b2,
        "mode": coeffs.mode.value,
        "z_F convention": Z_F_CONVENTION,
    }
    if coeffs.frequencies is not None:
        meta = {"omega": list(coeffs.frequencies), **meta}
    meta.update(metadata or {})
    return SweepTable(rows=rows, metadata=meta)
