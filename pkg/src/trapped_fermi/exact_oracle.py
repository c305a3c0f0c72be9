"""Brute-force grand-canonical sums over the discrete oscillator spectrum.

Levels are E = nx wx + ny wy + nz wz, measured from the ground state, each
holding at most one fermion.  Isotropic traps collapse to shells
E = n w with degeneracy (n + 1)(n + 2)/2; anisotropic traps enumerate every
level below the cutoff.  These sums are the reference the continuum
formulas are checked against, so they favour transparency over speed.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import optimize
from scipy.special import expit

from .errors import InvalidInputError, NumericalError, ResourceError
from .trap_model import TrapSpec, partition_function_exact

TAIL_RTOL = 1e-10
MAX_LEVELS = 50_000_000


@dataclass(frozen=True)
class SpectrumTruncation:
    """Energy cutoff and a rigorous bound on the occupation above it."""

    E_cutoff: float
    tail_bound: float = math.inf


@dataclass(frozen=True)
class ShellFilling:
    M: int
    N_shell: int
    E_gap: Tuple[float, float]
    U_exact: float


def shell_degeneracy(n):
    n = np.asarray(n)
    return (n + 1) * (n + 2) // 2


def closed_shell(M, omega=1.0) -> ShellFilling:
    """Isotropic trap with shells 0..M completely filled."""
    if M < 0 or int(M) != M:
        raise InvalidInputError(f"shell index must be a non-negative integer, got {M!r}")
    M = int(M)
    return ShellFilling(
        M=M,
        N_shell=(M + 1) * (M + 2) * (M + 3) // 6,
        E_gap=(M * omega, (M + 1) * omega),
        U_exact=omega * (M * (M + 1) * (M + 2) * (M + 3) // 8),
    )


def shell_filling_for(N) -> ShellFilling:
    """Largest closed shell holding at most ``N`` particles."""
    if N < 1:
        raise InvalidInputError("N must be >= 1")
    M = 0
    while (M + 2) * (M + 3) * (M + 4) // 6 <= N:
        M += 1
    return closed_shell(M)


# splitting exponents for the tail bound; the best one is taken per call
_SPLITS = (0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95)


def tail_bound(trap: TrapSpec, mu, T, E_cutoff) -> float:
    """Upper bound on sum_{E > E_cutoff} 1/(exp((E - mu)/T) + 1).

    For any 0 < s < 1 each occupation above the cutoff is below
    exp((mu - s E_cutoff)/T) exp(-(1 - s) E/T), and the remaining sum is at
    most the exact partition function at inverse temperature (1 - s)/T.
    The smallest bound over a fixed set of s is returned.
    """
    best = min((mu - s * E_cutoff) / T + math.log(partition_function_exact(trap, (1.0 - s) / T))
               for s in _SPLITS)
    return math.exp(min(best, 700.0))


def spectrum_truncation(trap: TrapSpec, mu, T, N_scale=1.0, rtol=TAIL_RTOL) -> SpectrumTruncation:
    """Smallest cutoff whose tail bound is below ``rtol * N_scale``."""
    log_target = math.log(rtol * max(N_scale, 1e-300))
    E_cut = min((mu + T * (math.log(partition_function_exact(trap, (1.0 - s) / T)) - log_target)) / s
                for s in _SPLITS)
    E_cut = max(E_cut, mu + 40.0 * T, 0.0) + trap.omega_max
    return SpectrumTruncation(E_cut, tail_bound(trap, mu, T, E_cut))


class _Levels:
    """Level energies and multiplicities up to a cutoff."""

    def __init__(self, trap: TrapSpec, E_cutoff):
        self.trap = trap
        self.E_cutoff = float(E_cutoff)
        if trap.is_isotropic:
            w = trap.omega_x
            n = np.arange(int(math.floor(self.E_cutoff / w)) + 1)
            if n.size > MAX_LEVELS:
                raise ResourceError(f"{n.size} shells exceed the level budget")
            self.E = n * w
            self.g = shell_degeneracy(n).astype(float)
        else:
            self.E = self._enumerate(trap.frequencies, self.E_cutoff)
            self.g = np.ones_like(self.E)

    @staticmethod
    def _enumerate(omegas, E_cut):
        wx, wy, wz = sorted(omegas, reverse=True)
        nmax = [int(math.floor(E_cut / w)) for w in (wx, wy, wz)]
        estimate = E_cut ** 3 / (6.0 * wx * wy * wz)
        if estimate > MAX_LEVELS:
            raise ResourceError(f"about {estimate:.3g} levels below the cutoff exceed the budget")
        ny = np.arange(nmax[1] + 1)[:, None]
        nz = np.arange(nmax[2] + 1)[None, :]
        yz = ny * wy + nz * wz
        chunks = []
        for nx in range(nmax[0] + 1):
            E = nx * wx + yz
            chunks.append(E[E <= E_cut])
        energies = np.concatenate(chunks)
        energies.sort()
        return energies

    def number(self, mu, T):
        return float(np.sum(self.g * expit((mu - self.E) / T)))

    def number_residual(self, mu, T, N):
        # count levels below mu exactly, then add particles above and
        # subtract holes below so the plateau inside a gap stays resolvable
        below = self.E <= mu
        filled = float(np.sum(self.g[below]))
        holes = float(np.sum(self.g[below] * expit((self.E[below] - mu) / T)))
        particles = float(np.sum(self.g[~below] * expit((mu - self.E[~below]) / T)))
        return (filled - N) + particles - holes

    def energy(self, mu, T):
        return float(np.sum(self.g * self.E * expit((mu - self.E) / T)))


def _check_T(T):
    T = float(T)
    if not math.isfinite(T) or T <= 0.0:
        raise InvalidInputError(f"T must be finite and > 0, got {T!r}")
    return T


def _levels_for(trap, mu, T, trunc, N_scale):
    need = spectrum_truncation(trap, mu, T, N_scale)
    if trunc is None or trunc.E_cutoff < need.E_cutoff:
        trunc = need
    return _Levels(trap, trunc.E_cutoff), trunc


def discrete_number(trap: TrapSpec, mu, T, trunc: Optional[SpectrumTruncation] = None) -> float:
    """Mean occupation summed over all levels (energies from the ground state).

    An explicit ``trunc`` is extended automatically when its cutoff is too
    low for the tail bound.
    """
    T = _check_T(T)
    mu = float(mu)
    # the bound is relative to the occupation of the lowest level
    scale = max(float(expit(mu / T)), 1e-300)
    levels, _ = _levels_for(trap, mu, T, trunc, scale)
    return levels.number(mu, T)


def discrete_internal_energy(trap: TrapSpec, mu, T, trunc: Optional[SpectrumTruncation] = None) -> float:
    """Mean energy summed over all levels, ground-state energy excluded."""
    T = _check_T(T)
    mu = float(mu)
    scale = max(float(expit(mu / T)), 1e-300)
    levels, _ = _levels_for(trap, mu, T, trunc, scale)
    return levels.energy(mu, T)


def _mu_floor(trap, N, T):
    # N(mu) <= exp(mu/T) Q(1/T), so at this mu the sum holds at most N/e
    log_q = math.log(partition_function_exact(trap, 1.0 / T))
    return T * (math.log(N) - log_q) - T


def _solve_mu_on(levels, N, T, lo, hi):
    r_lo = levels.number_residual(lo, T, N)
    r_hi = levels.number_residual(hi, T, N)
    if not (r_lo < 0.0 < r_hi):
        raise NumericalError("chemical potential not bracketed",
                             {"lo": lo, "hi": hi, "r_lo": r_lo, "r_hi": r_hi})
    mu, info = optimize.brentq(levels.number_residual, lo, hi, args=(T, N),
                               xtol=1e-15 * (abs(lo) + abs(hi) + T), rtol=1e-15,
                               maxiter=500, full_output=True, disp=False)
    if not info.converged:
        raise NumericalError("chemical potential solve did not converge",
                             {"N": N, "T": T, "iterations": info.iterations})
    return mu


def discrete_solve_mu(trap: TrapSpec, N, T, trunc: Optional[SpectrumTruncation] = None) -> float:
    """Chemical potential at which the discrete sum holds ``N`` particles."""
    T = _check_T(T)
    N = float(N)
    if not math.isfinite(N) or N < 1.0:
        raise InvalidInputError(f"N must be >= 1, got {N!r}")
    lo = _mu_floor(trap, N, T)
    # grow the upper end geometrically; levels built for hi are valid for
    # every mu <= hi, so the cutoff only reaches what the root needs
    step = T
    for _ in range(200):
        hi = lo + step
        levels, trunc = _levels_for(trap, hi, T, trunc, N)
        if levels.number_residual(hi, T, N) > 0.0:
            break
        lo, step = hi, 2.0 * step
    else:
        raise NumericalError("could not bracket the chemical potential", {"N": N, "T": T})
    mu = _solve_mu_on(levels, N, T, lo, hi)
    if abs(levels.number_residual(mu, T, N)) > 1e-12 * N:
        raise NumericalError("particle-number residual above tolerance",
                             {"N": N, "T": T, "mu": mu})
    return mu


def _energy_at_fixed_n(trap, N, T, trunc):
    mu = discrete_solve_mu(trap, N, T, trunc)
    return discrete_internal_energy(trap, mu, T, trunc)


def discrete_specific_heat(trap: TrapSpec, N, T, trunc: Optional[SpectrumTruncation] = None,
                           rel_step=1e-3) -> float:
    """Centred difference of the discrete energy at fixed N, per particle.

    The step h = rel_step * T is accepted only if the estimate with h/2
    agrees to 1e-4 relative (or to within the round-off floor of U).
    """
    T = _check_T(T)
    N = float(N)
    h = rel_step * T

    def centred(step):
        up = _energy_at_fixed_n(trap, N, T + step, trunc)
        down = _energy_at_fixed_n(trap, N, T - step, trunc)
        return (up - down) / (2.0 * step * N), max(abs(up), abs(down))

    c_h, U_scale = centred(h)
    c_half, _ = centred(0.5 * h)
    floor = 64.0 * np.finfo(float).eps * U_scale / (N * 0.5 * h)
    if abs(c_h - c_half) > 1e-4 * abs(c_half) + floor:
        raise NumericalError("finite-difference specific heat is step dependent",
                             {"c_h": c_h, "c_h/2": c_half, "T": T, "N": N})
    # Richardson combination of the two centred estimates
    return (4.0 * c_half - c_h) / 3.0
