"""
Continuum formulas against the discrete spectrum
================================================

Brute-force sums over oscillator levels give the grand-canonical answer
without any smoothing.  The continuum is accurate for T well above the
level spacing and degrades as T approaches it.
"""

from trapped_fermi import TrapSpec
from trapped_fermi.cli import oracle_compare_rows

rows = oracle_compare_rows(TrapSpec(1, 1, 1), 455, [0.3, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0])
print("   T   mu_cont    mu_disc    dU/U      dc/c     valid")
for r in rows:
    print(f"{r['T']:5.1f} {r['mu_continuum']:9.3f} {r['mu_discrete']:9.3f} "
          f"{r['U_rel_diff']:9.2e} {r['c_rel_diff']:9.2e}  {r['expansion_valid']}")
