"""
Level counting in a harmonic trap
=================================

The smoothed density of states of a 3D oscillator is a quadratic in E.
For an isotropic trap it reproduces the shell degeneracy exactly.
"""

import numpy as np

from trapped_fermi import (TrapSpec, compute_dos_coefficients, compute_partition_coefficients,
                           density_of_states, partition_function_exact)
from trapped_fermi.trap_model import expansion_value

# the coefficients of the high-temperature expansion of Q(beta)
trap = TrapSpec(1, 2, 3)
a = compute_partition_coefficients(trap)
print(f"a2 = {a.a2:.6f}, a1 = {a.a1:.6f}, a0 = {a.a0:.6f}, a_-1 = {a.a_minus1:.6f}")

# expansion vs the exact product of geometric series
for beta in (0.5, 0.1, 0.02):
    exact = partition_function_exact(trap, beta)
    print(f"beta = {beta:5.2f}  Q = {exact:14.4f}  expansion = {expansion_value(a, beta):14.4f}")

# isotropic shells: rho(n) equals (n+1)(n+2)/2 on every shell
iso = compute_dos_coefficients(TrapSpec(1, 1, 1))
n = np.arange(8)
print("shell:     ", n)
print("rho(n):    ", density_of_states(iso, n).astype(int))
print("degeneracy:", (n + 1) * (n + 2) // 2)

# the zero-point shift only changes the lower coefficients
shifted = compute_dos_coefficients(TrapSpec(1, 1, 1, "absolute"))
print(f"absolute mode: b2 = {shifted.b2}, b1 = {shifted.b1}, b0 = {shifted.b0}, eps0 = {shifted.eps0}")
