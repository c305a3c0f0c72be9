import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapped_fermi import (DosCoefficients, InvalidInputError, SolvabilityError, TrapSpec,
                           classify_cubic, compute_dos_coefficients, fermi_energy,
                           particle_number_at)
from trapped_fermi.degenerate_limit import effective_particle_number, fermi_energy_curve

from oracles import bisect, shell_count

ISO = compute_dos_coefficients(TrapSpec(1, 1, 1))
ISO_ABS = compute_dos_coefficients(TrapSpec(1, 1, 1, "absolute"))


def cubic_root_oracle(b0, b1, b2, N):
    f = lambda E: b2 * E ** 3 / 3 + b1 * E ** 2 / 2 + b0 * E - N
    return bisect(f, 0.0, (3 * N / b2) ** (1 / 3) + 10.0)


def test_particle_number_examples():
    assert particle_number_at(ISO, 2.5) == pytest.approx(2.5 ** 3 / 6 + 0.75 * 2.5 ** 2 + 2.5,
                                                          rel=1e-15)
    assert particle_number_at(ISO, 2.5) == pytest.approx(9.7917, abs=5e-5)
    assert shell_count(12) == 455
    # 1953.125/6 + 117.1875 + 12.5; within 0.05% of the 455 closed-shell count
    assert particle_number_at(ISO, 12.5) == pytest.approx(455.2083333333, rel=1e-12)
    assert abs(particle_number_at(ISO, 12.5) - shell_count(12)) / 455 < 5e-4
    assert particle_number_at(ISO, 0.0) == 0.0
    assert particle_number_at(ISO_ABS, ISO_ABS.eps0) == 0.0


def test_particle_number_below_eps0():
    with pytest.raises(InvalidInputError):
        particle_number_at(ISO_ABS, 1.0)
    with pytest.raises(InvalidInputError):
        particle_number_at(ISO, -1e-9)


def test_fermi_energy_small_n():
    res = fermi_energy(ISO, 10)
    assert res.E_F == pytest.approx(2.5263, abs=5e-5)
    assert res.E_F == pytest.approx(cubic_root_oracle(1.0, 1.5, 0.5, 10.0), rel=1e-13)
    assert res.N_prime == 10.0


def test_fermi_energy_closed_shell():
    res = fermi_energy(ISO, 455)
    assert res.E_F == pytest.approx(12.5, abs=0.005)
    assert res.E_F == pytest.approx(cubic_root_oracle(1.0, 1.5, 0.5, 455.0), rel=1e-13)


def test_fermi_energy_large_n():
    res = fermi_energy(ISO, 1e6)
    assert abs(res.E_F - (6e6) ** (1 / 3)) < 2.0
    assert res.E_F_asymptotic == pytest.approx((6e6) ** (1 / 3), rel=1e-15)


def test_residual_bound():
    for N in np.geomspace(1, 1e9, 19):
        res = fermi_energy(ISO, N)
        assert abs(res.residual) < 1e-10 * 3 * res.N_prime / ISO.b2


def test_roundtrip_relative_mode():
    for trap in (TrapSpec(1, 1, 1), TrapSpec(1, 2, 3), TrapSpec(500, 600, 800)):
        coeffs = compute_dos_coefficients(trap)
        for N in (1, 37, 1e4, 1e8):
            E = fermi_energy(coeffs, N).E_F
            assert particle_number_at(coeffs, E) == pytest.approx(N, rel=1e-10)


def test_roundtrip_absolute_mode():
    # N' may be negative here (N=1 gives N' = -0.3125) yet the root above eps0 exists
    for N in (1, 10, 455, 1e5):
        res = fermi_energy(ISO_ABS, N)
        assert res.E_F > ISO_ABS.eps0
        assert particle_number_at(ISO_ABS, res.E_F) == pytest.approx(N, rel=1e-10)
        assert res.N_prime == pytest.approx(N + _below_eps0(ISO_ABS), rel=1e-15)
    assert fermi_energy(ISO_ABS, 1).N_prime == pytest.approx(-0.3125, rel=1e-14)


def _below_eps0(c):
    e = c.eps0
    return c.b2 * e ** 3 / 3 + c.b1 * e ** 2 / 2 + c.b0 * e


def test_literal_nprime_switch():
    lit = effective_particle_number(ISO_ABS, 100, literal=True)
    cor = effective_particle_number(ISO_ABS, 100)
    assert cor - lit == pytest.approx(ISO_ABS.b2 * (1.5 ** 3 - 1.5 ** 2) / 3)
    assert fermi_energy(ISO_ABS, 100, nprime_literal=True).N_prime == lit
    assert effective_particle_number(ISO, 100, literal=True) == 100.0


def test_monotone_in_n():
    N = [10.0 ** k for k in range(10)]
    for coeffs in (ISO, ISO_ABS, compute_dos_coefficients(TrapSpec(500, 600, 800))):
        E = fermi_energy_curve(coeffs, N)
        assert np.all(np.diff(E) > 0)


def test_subleading_asymptote():
    gaps = [fermi_energy(ISO, N).E_F - fermi_energy(ISO, N).E_F_asymptotic
            for N in (1e3, 1e6, 1e9, 1e12)]
    errors = [abs(g + ISO.b1 / (2 * ISO.b2)) for g in gaps]
    assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    assert errors[-1] < 1e-3
    # the approximate root's constant differs from -b1/(2 b2) by b1/(4 b2) + b0/(2 b2)
    res = fermi_energy(ISO, 1e12)
    assert res.E_F_paper_approx - res.E_F == pytest.approx(-(0.25 * 3 + 0.5 * 2) + 1.5, abs=1e-3)


def test_exact_solve_supremacy():
    for N in np.geomspace(10, 1e6, 11):
        res = fermi_energy(ISO, N)
        assert abs(res.residual) * 1e6 <= abs(res.residual_paper_approx)


def test_classification_absolute_isotropic():
    cls = classify_cubic(ISO_ABS)
    assert cls.p == pytest.approx(-48.0, rel=1e-14)
    assert cls.q0 == pytest.approx(117.0, rel=1e-14)
    assert cls.N_max_paper == pytest.approx((-64 + 117) * (-3.5 / 3), rel=1e-14)
    assert cls.N_max_paper == pytest.approx(-61.83, abs=5e-3)
    assert cls.N_max_diagnostic_only
    assert cls.N_max_b2 == pytest.approx(53 * 0.5 / 3, rel=1e-14)


def test_three_root_window_matches_discriminant():
    cls = classify_cubic(ISO_ABS)
    lo, hi = cls.three_root_window
    for Np in np.linspace(lo - 5, hi + 5, 53):
        N = Np - _below_eps0(ISO_ABS)
        if N < 1:
            continue
        c = classify_cubic(ISO_ABS, N)
        # independent count from the companion-matrix roots
        a, b, k = 1.5 * ISO_ABS.b1 / ISO_ABS.b2, 3 * ISO_ABS.b0 / ISO_ABS.b2, -3 * c.N_prime / ISO_ABS.b2
        roots = np.roots([1.0, a, b, k])
        count = int(np.sum(np.abs(roots.imag) < 1e-9))
        assert c.real_root_count == count
        assert (c.discriminant > 0) == (lo < c.N_prime < hi)


def test_relative_mode_has_one_real_root():
    for trap in (TrapSpec(1, 1, 1), TrapSpec(1, 2, 3), TrapSpec(500, 600, 800)):
        coeffs = compute_dos_coefficients(trap)
        assert classify_cubic(coeffs).real_root_count == 1
        for N in (1, 10, 1e3, 1e9):
            assert classify_cubic(coeffs, N).real_root_count == 1


def test_pure_cubic():
    coeffs = DosCoefficients(0.0, 0.0, 0.5)
    res = fermi_energy(coeffs, 1234)
    assert res.E_F == pytest.approx((3 * 1234 / 0.5) ** (1 / 3), rel=4e-16)
    assert res.residual == pytest.approx(0.0, abs=1e-9)
    cls = classify_cubic(coeffs, 1234)
    assert cls.real_root_count == 1
    assert cls.N_max_paper == 0.0


def test_positive_p_has_no_closed_form_threshold():
    cls = classify_cubic(DosCoefficients(10.0, 1.0, 0.5))
    assert cls.p > 0
    assert cls.N_max_paper is None and cls.three_root_window is None


def test_invalid_particle_number():
    for bad in (0.5, 0.0, -3, math.nan, math.inf):
        with pytest.raises(InvalidInputError):
            fermi_energy(ISO, bad)


def test_solvability_error_carries_classification():
    # a strongly negative b1 drives the search bracket below eps0
    coeffs = DosCoefficients(0.0, -100.0, 0.5)
    with pytest.raises(SolvabilityError) as info:
        fermi_energy(coeffs, 1)
    assert info.value.classification.p == pytest.approx(-0.75 * 200 ** 2)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(1.0, 1e9))
def test_root_property(wx, wy, wz, N):
    coeffs = compute_dos_coefficients(TrapSpec(wx, wy, wz))
    res = fermi_energy(coeffs, N)
    assert res.E_F > 0
    assert particle_number_at(coeffs, res.E_F) == pytest.approx(N, rel=1e-10)
    assert res.E_F < res.E_F_asymptotic
