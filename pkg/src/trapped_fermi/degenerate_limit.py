"""Zero-temperature filling of the smoothed trap spectrum.

Integrating rho(E) = b0 + b1 E + b2 E^2 from 0 to E_F and setting the result
to an effective particle number N' gives the cubic

    E^3 + (3 b1 / 2 b2) E^2 + (3 b0 / b2) E - 3 N' / b2 = 0

whose smallest positive root is the Fermi energy.  The closed-form
approximate root and the three-root threshold quoted alongside that cubic
are evaluated here as diagnostics only; production values always come from
the bracketed root solve.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidInputError, SolvabilityError
from .trap_model import DosCoefficients


@dataclass(frozen=True)
class FermiEnergyResult:
    E_F: float
    E_F_asymptotic: float
    E_F_paper_approx: float
    N_prime: float
    residual: float
    residual_paper_approx: float


@dataclass(frozen=True)
class CubicClassification:
    """Root structure of the Fermi-energy cubic.

    ``p`` and ``q0`` are the depressed-cubic quantities; the constant term of
    the depressed cubic is ``q0 - 3 N'/b2``.  ``N_max_paper`` is the
    closed-form threshold with trailing factor b0/3, ``N_max_b2`` the same
    bracket with b2/3; both are ``None`` when p > 0.  ``three_root_window``
    is the open interval of N' over which three real roots exist, derived
    from the discriminant, or ``None`` if there is no such interval.
    """

    p: float
    q0: float
    N_max_paper: Optional[float]
    N_max_b2: Optional[float]
    three_root_window: Optional[Tuple[float, float]]
    N_prime: Optional[float]
    discriminant: Optional[float]
    real_root_count: int

    @property
    def N_max_diagnostic_only(self) -> bool:
        return self.N_max_paper is None or self.N_max_paper <= 0.0


def effective_particle_number(coeffs: DosCoefficients, N, literal=False) -> float:
    """N' = N + int_0^eps0 rho(E) dE.

    ``literal=True`` squares rather than cubes eps0 in the b2 term, a
    dimensionally inconsistent variant kept for comparison runs.
    """
    e = coeffs.eps0
    b2_term = coeffs.b2 * e ** 2 / 3.0 if literal else coeffs.b2 * e ** 3 / 3.0
    return float(N) + b2_term + 0.5 * coeffs.b1 * e ** 2 + coeffs.b0 * e


def particle_number_at(coeffs: DosCoefficients, E) -> float:
    """Number of smoothed states between eps0 and ``E``."""
    E = float(E)
    e0 = coeffs.eps0
    if not math.isfinite(E) or E < e0:
        raise InvalidInputError(f"energy must be >= eps0 = {e0:g}, got {E!r}")
    return (coeffs.b2 * (E ** 3 - e0 ** 3) / 3.0
            + coeffs.b1 * (E ** 2 - e0 ** 2) / 2.0
            + coeffs.b0 * (E - e0))


def _cubic_coefficients(coeffs, N_prime):
    b0, b1, b2 = coeffs.b0, coeffs.b1, coeffs.b2
    return 1.5 * b1 / b2, 3.0 * b0 / b2, -3.0 * N_prime / b2


def _cubic(E, a, b, c):
    return ((E + a) * E + b) * E + c


def _cubic_slope(E, a, b):
    return (3.0 * E + 2.0 * a) * E + b


def classify_cubic(coeffs: DosCoefficients, N=None, *, nprime_literal=False) -> CubicClassification:
    """Depressed-cubic quantities, closed-form thresholds and root count.

    With ``N`` given the discriminant is evaluated at that particle number.
    Without it, ``real_root_count`` reports 3 if any N >= 1 falls inside the
    three-root window and 1 otherwise.
    """
    b0, b1, b2 = coeffs.b0, coeffs.b1, coeffs.b2
    r1 = b1 / b2
    r0 = b0 / b2
    p = -0.75 * r1 ** 2 + 3.0 * r0
    q0 = 0.25 * r1 ** 3 - 1.5 * r0 * r1

    if p <= 0.0:
        bracket = -(-p / 3.0) ** 1.5 + q0
        N_max_paper = bracket * b0 / 3.0
        N_max_b2 = bracket * b2 / 3.0
    else:
        N_max_paper = N_max_b2 = None

    # y^3 + p y + q has three real roots iff 4 p^3 + 27 q^2 < 0, with
    # q = q0 - 3 N'/b2; solving for N' gives the window below.
    if p < 0.0:
        half_width = 2.0 * (-p / 3.0) ** 1.5
        window = (b2 * (q0 - half_width) / 3.0, b2 * (q0 + half_width) / 3.0)
    else:
        window = None

    if N is not None:
        N_prime = effective_particle_number(coeffs, N, literal=nprime_literal)
        q = q0 - 3.0 * N_prime / b2
        discriminant = -(4.0 * p ** 3 + 27.0 * q ** 2)
        real_root_count = 3 if discriminant > 0.0 else 1
    else:
        N_prime = discriminant = None
        N_prime_min = effective_particle_number(coeffs, 1.0, literal=nprime_literal)
        real_root_count = 3 if window is not None and window[1] > N_prime_min else 1

    return CubicClassification(
        p=p, q0=q0, N_max_paper=N_max_paper, N_max_b2=N_max_b2,
        three_root_window=window, N_prime=N_prime, discriminant=discriminant,
        real_root_count=real_root_count,
    )


def _solve_bracket(lo, hi, a, b, c, xtol=2e-15, maxiter=200):
    """Newton iteration safeguarded by bisection on a sign-changing bracket."""
    f_lo = _cubic(lo, a, b, c)
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = _cubic(x, a, b, c)
        if fx == 0.0:
            return x
        if (fx < 0.0) == (f_lo < 0.0):
            lo, f_lo = x, fx
        else:
            hi = x
        slope = _cubic_slope(x, a, b)
        x_new = x - fx / slope if slope != 0.0 else math.nan
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= xtol * abs(x_new) or hi - lo <= 4e-16 * hi:
            return x_new
        x = x_new
    return x


def fermi_energy(coeffs: DosCoefficients, N, *, nprime_literal=False) -> FermiEnergyResult:
    """Smallest root of the Fermi-energy cubic at or above eps0.

    In relative mode eps0 = 0 and this is the unique positive root.

    Examples
    --------
    >>> from trapped_fermi.trap_model import TrapSpec, compute_dos_coefficients
    >>> round(fermi_energy(compute_dos_coefficients(TrapSpec(1, 1, 1)), 10).E_F, 4)
    2.5263
    """
    N = float(N)
    if not math.isfinite(N) or N < 1.0:
        raise InvalidInputError(f"particle number must be >= 1, got {N!r}")
    b0, b1, b2 = coeffs.b0, coeffs.b1, coeffs.b2
    N_prime = effective_particle_number(coeffs, N, literal=nprime_literal)
    a, b, c = _cubic_coefficients(coeffs, N_prime)

    # N' may be negative in absolute mode (the polynomial dips below zero
    # under eps0); the real cube root keeps the asymptote defined
    asymptotic = float(np.cbrt(3.0 * N_prime / b2))
    paper_approx = asymptotic - 0.25 * b1 / b2 - 0.5 * b0 / b2

    if b0 == 0.0 and b1 == 0.0:
        root = asymptotic
        if root <= 0.0:
            raise SolvabilityError("effective particle number is not positive",
                                   classify_cubic(coeffs, N, nprime_literal=nprime_literal))
    else:
        # filled states lie above eps0, where the count is increasing
        lo = coeffs.eps0
        hi = asymptotic + 3.0 * (1.0 + b1 / b2 + abs(b0) / b2)
        # split the bracket at the cubic's turning points so that the first
        # sign change located is the smallest admissible root
        disc = a * a - 3.0 * b
        edges = [lo]
        if disc > 0.0:
            s = math.sqrt(disc)
            edges += sorted(x for x in ((-a - s) / 3.0, (-a + s) / 3.0) if lo < x < hi)
        edges.append(hi)
        root = None
        for lo_e, hi_e in zip(edges[:-1], edges[1:]):
            f_lo, f_hi = _cubic(lo_e, a, b, c), _cubic(hi_e, a, b, c)
            if hi_e <= lo_e:
                continue
            if f_lo == 0.0 and lo_e > 0.0:
                root = lo_e
                break
            if (f_lo < 0.0) != (f_hi < 0.0) or f_hi == 0.0:
                root = _solve_bracket(lo_e, hi_e, a, b, c)
                break
        if root is None:
            raise SolvabilityError(
                "no positive root of the Fermi-energy cubic in the search bracket",
                classify_cubic(coeffs, N, nprime_literal=nprime_literal),
                {"bracket": (lo, hi), "N_prime": N_prime})

    return FermiEnergyResult(
        E_F=root,
        E_F_asymptotic=asymptotic,
        E_F_paper_approx=paper_approx,
        N_prime=N_prime,
        residual=_cubic(root, a, b, c),
        residual_paper_approx=_cubic(paper_approx, a, b, c),
    )


def fermi_energy_curve(coeffs: DosCoefficients, N_values):
    """Vector of E_F over ``N_values`` (convenience for scans)."""
    return np.array([fermi_energy(coeffs, n).E_F for n in N_values])
