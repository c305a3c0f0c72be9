"""
Specific heat of 1e8 and 1e23 trapped fermions
==============================================

Sweeps c(T) for the (500, 600, 800) trap at two particle numbers on a
shared T/T_F0 grid and compares the curves pointwise.
"""

import numpy as np

from trapped_fermi import TrapSpec, compute_dos_coefficients, fermi_temperature, sweep_temperature
from trapped_fermi.finite_temperature import infinite_n_fermi_temperature

coeffs = compute_dos_coefficients(TrapSpec(500, 600, 800))
t = np.geomspace(0.02, 20, 200)
tables = {N: sweep_temperature(coeffs, N, t * infinite_n_fermi_temperature(coeffs, N))
          for N in (1e8, 1e23)}

small, large = (tables[N].column("c_exact") for N in (1e8, 1e23))
for i in range(0, 200, 20):
    print(f"T/T_F0 = {t[i]:8.4f}  c(1e8) = {small[i]:.6f}  c(1e23) = {large[i]:.6f}  "
          f"diff = {small[i] - large[i]:+.2e}")

# where does the finite cloud carry more heat per particle?
ahead = small > large
print(f"c(1e8) > c(1e23) on {ahead.sum()} of 200 points, "
      f"up to T/T_F0 = {t[ahead].max():.3f}")

# high T: the exact curve goes to 3, the half-integer closed form to 2.5
print(f"at T/T_F0 = 20: c_exact = {small[-1]:.5f}, "
      f"c_paper22 = {tables[1e8].column('c_paper22')[-1]:.5f}")

ft = fermi_temperature(coeffs, 1e8)
print(f"N = 1e8: T_F0 = {ft.T_F0:.2f}, T_F = {ft.T_F:.2f} (ratio {ft.ratio:.4f})")
