"""
Fermi-Dirac integrals across regimes
====================================

f_n(z) switches between a power series, quadrature and the Sommerfeld
polynomial.  At z = 1 every order equals the Dirichlet eta function.
"""

import math

from trapped_fermi import fermi_integral, fermi_integral_log
from trapped_fermi.fermi_integrals import fermi_quadrature, fermi_series, fermi_sommerfeld

# the eta checkpoints: eta(1) = ln 2, eta(4) = 7 pi^4 / 720
print(f"f1(1) = {fermi_integral(1, 1.0):.15f}   ln 2 = {math.log(2):.15f}")
print(f"f4(1) = {fermi_integral(4, 1.0):.15f}   7pi^4/720 = {7 * math.pi ** 4 / 720:.15f}")

# neighbouring methods agree where their domains overlap
eta = math.log(0.5)
print(f"z = 0.5: series {fermi_series(3, eta):.15e}  quadrature {fermi_quadrature(3, eta):.15e}")
eta = 20.0
print(f"ln z = 20: Sommerfeld {fermi_sommerfeld(3, eta):.15e}  quadrature {fermi_quadrature(3, eta):.15e}")

# small z: f_n(z) ~ z; large z: f_n ~ (ln z)^n / n!
for log_z in (-20, -2, 0, 2, 20, 200):
    values = "  ".join(f"{fermi_integral_log(n, log_z):11.4e}" for n in (0.5, 1, 2, 3, 4))
    print(f"ln z = {log_z:5}  f_(1/2, 1, 2, 3, 4) = {values}")
