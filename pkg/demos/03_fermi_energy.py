"""
Fermi energy of a finite cloud
==============================

At T = 0 the particles fill the smoothed spectrum up to E_F, the root of a
cubic.  Closed shells put the exact discrete answer in the middle of a gap.
"""

from trapped_fermi import (TrapSpec, classify_cubic, closed_shell, compute_dos_coefficients,
                           fermi_energy)

iso = compute_dos_coefficients(TrapSpec(1, 1, 1))

# 13 filled shells hold 455 fermions; the gap is between n = 12 and 13
shell = closed_shell(12)
res = fermi_energy(iso, shell.N_shell)
print(f"N = {shell.N_shell}: E_F = {res.E_F:.5f}, mid-gap = {sum(shell.E_gap) / 2}")

# the exact root against the leading cube root and the closed-form estimate
for N in (10, 1e3, 1e6, 1e9):
    r = fermi_energy(iso, N)
    print(f"N = {N:8.0e}  E_F = {r.E_F:12.5f}  (3N/b2)^(1/3) = {r.E_F_asymptotic:12.5f}  "
          f"estimate = {r.E_F_paper_approx:12.5f}  gap = {r.E_F - r.E_F_asymptotic:+.4f}")
print(f"limit of the gap: -b1/(2 b2) = {-iso.b1 / (2 * iso.b2)}")

# root structure of the cubic with the zero-point shift included
cls = classify_cubic(compute_dos_coefficients(TrapSpec(1, 1, 1, "absolute")))
print(f"p = {cls.p}, q0 = {cls.q0}, closed-form threshold = {cls.N_max_paper:.2f}, "
      f"three roots for N' in {tuple(round(x, 2) for x in cls.three_root_window)}")
