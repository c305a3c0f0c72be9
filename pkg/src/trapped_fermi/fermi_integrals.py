"""Complete Fermi-Dirac integrals

    f_n(z) = 1/Gamma(n) * int_0^inf x**(n-1) / (exp(x)/z + 1) dx

for the orders used by the trap thermodynamics, n in {0, 1/2, 1, 3/2, 2, 3, 4}.
f_0(z) = z/(1+z) closes the derivative recurrence z f_n'(z) = f_{n-1}(z).

Three evaluators cover the fugacity axis, selected on eta = ln z:

* alternating power series for z <= 1/2,
* adaptive quadrature for 1/2 < z < e**15 (and for half-integer orders at
  every z > 1/2),
* the exact Sommerfeld polynomial plus its exponentially small reflection
  term for integer orders at eta >= 15.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy import integrate

from .errors import InvalidInputError, NumericalConsistencyError

ORDERS = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0)

SERIES_MAX_LOG_Z = -math.log(2.0)
SOMMERFELD_MIN_LOG_Z = 15.0

# Dirichlet eta at even arguments: eta(0) = 1/2, eta(2) = pi^2/12, eta(4) = 7 pi^4/720
_ETA_EVEN = (0.5, math.pi ** 2 / 12.0, 7.0 * math.pi ** 4 / 720.0)

_QUAD_EPSREL = 1e-13
_QUAD_ACCEPT = 1e-10
# occupation beyond x = eta + _QUAD_TAIL is below exp(-_QUAD_TAIL)
_QUAD_TAIL = 60.0


def check_order(n) -> float:
    """Return ``n`` as a float if it is a supported order, else raise."""
    try:
        value = float(Fraction(n)) if isinstance(n, (str, Fraction)) else float(n)
    except (TypeError, ValueError):
        raise InvalidInputError(f"unsupported Fermi-integral order {n!r}") from None
    if value not in ORDERS:
        raise InvalidInputError(
            f"unsupported Fermi-integral order {n!r}; expected one of {ORDERS}")
    return value


@dataclass(frozen=True)
class Fugacity:
    """Fugacity stored through its logarithm so huge z stays representable."""

    log_z: float

    def __post_init__(self):
        if math.isnan(self.log_z) or self.log_z == math.inf:
            raise InvalidInputError(f"log fugacity must be finite, got {self.log_z!r}")

    @classmethod
    def from_z(cls, z) -> "Fugacity":
        return cls(math.log(_check_z(z)))

    @property
    def z(self) -> float:
        # overflows to inf beyond log_z ~ 709.78; use log_z there
        return math.exp(self.log_z) if self.log_z < 709.782712893384 else math.inf


def _check_z(z) -> float:
    z = float(z)
    if not (z > 0.0) or math.isnan(z):
        raise InvalidInputError(f"fugacity must be > 0, got {z!r}")
    if math.isinf(z):
        raise InvalidInputError("fugacity is infinite; pass a Fugacity(log_z) instead")
    return z


def as_log_fugacity(z) -> float:
    if isinstance(z, Fugacity):
        return z.log_z
    return math.log(_check_z(z))


def fermi_series(n, log_z):
    """Alternating series sum_k (-1)**(k+1) z**k / k**n, valid for z < 1."""
    n = check_order(n)
    if log_z >= 0.0:
        raise InvalidInputError("the power series needs z < 1")
    z = math.exp(log_z)
    total = 0.0
    power = 1.0
    for k in range(1, 5000):
        power *= z
        term = power / k ** n
        if k % 2 == 0:
            term = -term
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise NumericalConsistencyError(
        "Fermi series did not converge", {"order": n, "log_z": log_z})


def _fd_integrand(t, n, log_z):
    # x = t**2 removes the x**(n-1) endpoint singularity for n < 1
    arg = t * t - log_z
    if arg > 700.0:
        return 0.0
    return 2.0 * t ** (2.0 * n - 1.0) / (1.0 + math.exp(arg))


def fermi_quadrature(n, log_z):
    """Quadrature of the defining integral, mapped by x = t**2."""
    n = check_order(n)
    if n == 0.0:
        raise InvalidInputError("order 0 has no integral representation")
    upper = math.sqrt(max(log_z, 0.0) + _QUAD_TAIL)
    points = [math.sqrt(log_z)] if log_z > 0.0 else None
    value, abserr = integrate.quad(
        _fd_integrand, 0.0, upper, args=(n, log_z), points=points,
        epsabs=0.0, epsrel=_QUAD_EPSREL, limit=200)
    if not abserr <= _QUAD_ACCEPT * abs(value):
        raise NumericalConsistencyError(
            "quadrature error estimate above tolerance",
            {"order": n, "log_z": log_z, "value": value, "abserr": abserr})
    return value / math.gamma(n)


def sommerfeld_polynomial(n, log_z):
    """Terminating Sommerfeld expansion of f_n for integer n >= 1 (no tail)."""
    n = check_order(n)
    if n != int(n) or n < 1:
        raise InvalidInputError("the Sommerfeld polynomial is exact only for integer n >= 1")
    n = int(n)
    total = 0.0
    for k in range(n // 2 + 1):
        total += 2.0 * _ETA_EVEN[k] * log_z ** (n - 2 * k) / math.factorial(n - 2 * k)
    return total


def fermi_sommerfeld(n, log_z):
    """f_n for integer n at z > 1 via the reflection identity

    f_n(z) = P_n(ln z) + (-1)**(n+1) f_n(1/z),

    with P_n the Sommerfeld polynomial.  The tail f_n(1/z) is at most 1/z,
    so the polynomial alone is accurate to ~exp(-ln z) at large z.
    """
    n = check_order(n)
    if log_z <= 0.0:
        raise InvalidInputError("the reflection identity is used for z > 1 only")
    poly = sommerfeld_polynomial(n, log_z)
    tail = fermi_series(n, -log_z)
    return poly + tail if int(n) % 2 == 1 else poly - tail


def _log1p_exp(x):
    return x + math.log1p(math.exp(-x)) if x > 0.0 else math.log1p(math.exp(x))


@lru_cache(maxsize=8192)
def _fermi_log(n, log_z):
    if n == 0.0:
        return 1.0 / (1.0 + math.exp(-log_z)) if log_z > -700.0 else math.exp(log_z)
    if n == 1.0:
        return _log1p_exp(log_z)
    if log_z <= SERIES_MAX_LOG_Z:
        return fermi_series(n, log_z)
    if log_z >= SOMMERFELD_MIN_LOG_Z and n == int(n):
        return fermi_sommerfeld(n, log_z)
    return fermi_quadrature(n, log_z)


def fermi_integral_log(n, log_z) -> float:
    """f_n evaluated at z = exp(log_z)."""
    n = check_order(n)
    log_z = float(log_z)
    if math.isnan(log_z) or math.isinf(log_z):
        raise InvalidInputError(f"log fugacity must be finite, got {log_z!r}")
    return _fermi_log(n, log_z)


def fermi_integral(n, z) -> float:
    """Complete Fermi-Dirac integral f_n(z).

    ``z`` is a positive float or a :class:`Fugacity`.

    Examples
    --------
    >>> round(fermi_integral(1, 1.0), 10)
    0.6931471806
    >>> round(fermi_integral(3, 1.0), 10)
    0.9015426774
    """
    return fermi_integral_log(n, as_log_fugacity(z))


def fermi_integral_derivative(n, z) -> float:
    """d f_n / dz = f_{n-1}(z) / z, for orders whose n - 1 is also supported."""
    n = check_order(n)
    if n - 1.0 not in ORDERS:
        raise InvalidInputError(f"order {n - 1.0:g} is not supported, so f_{n:g}' is unavailable")
    log_z = as_log_fugacity(z)
    if log_z < -700.0:
        # f_{n-1}(z)/z = 1 - z/2**(n-1) + O(z**2); z itself is subnormal here
        return 1.0 - math.exp(log_z) / 2.0 ** (n - 1.0)
    return fermi_integral_log(n - 1.0, log_z) * math.exp(-log_z)
