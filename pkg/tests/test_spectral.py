"""Spectral core: eigendata, numerical range, symmetry, sectors."""

import cmath
import math

import numpy as np
import pytest

from nsolab import (
    Coupling,
    DegenerateCouplingError,
    Sector,
    ValidationError,
    biorthogonal_pairing,
    eigenfunction_eval,
    eigenfunction_log_eval,
    eigenvalue,
    maximal_sector,
    numerical_range_boundary,
    numerical_range_membership,
    numerical_range_point,
    pairing_normalization,
    reduce_coupling,
    symmetry_reflect,
)


class TestCoupling:
    def test_branch_data(self):
        cp = Coupling(1 + 1j)
        assert abs(cp.sqrt_c**2 - cp.c) < 1e-15
        assert abs(cp.quarter_c**2 - cp.sqrt_c) < 1e-15
        assert cp.sqrt_c.real > 0
        assert cp.theta == pytest.approx(math.pi / 4)

    def test_imaginary_axis_boundary_case(self):
        cp = Coupling(1j)
        assert cp.theta == pytest.approx(math.pi / 2)
        assert cp.sqrt_c == pytest.approx(cmath.exp(1j * math.pi / 4))

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5 + 1j, -1j, complex("inf")])
    def test_rejects_bad_couplings(self, bad):
        with pytest.raises(ValidationError):
            Coupling(bad)

    def test_lower_halfplane_served_by_conjugation(self):
        with pytest.raises(ValidationError):
            Coupling(1 - 1j)
        cp, conjugated = reduce_coupling(1 - 1j)
        assert conjugated and cp.c == 1 + 1j
        cp, conjugated = reduce_coupling(2.0)
        assert not conjugated


class TestEigenvalues:
    def test_real_coupling_odd_integers(self):
        assert eigenvalue(Coupling(1.0), 2) == pytest.approx(5.0)

    def test_rotated_ground_state(self):
        assert eigenvalue(Coupling(1j), 0) == pytest.approx(cmath.exp(1j * math.pi / 4))

    def test_principal_branch_value(self):
        assert eigenvalue(Coupling(1 + 1j), 1) == pytest.approx(3 * cmath.sqrt(1 + 1j))

    def test_all_on_half_angle_ray(self):
        cp = Coupling(cmath.exp(1j * 1.1))
        for n in range(8):
            assert cmath.phase(eigenvalue(cp, n)) == pytest.approx(0.55)

    def test_rejects_negative_index(self):
        with pytest.raises(ValidationError):
            eigenvalue(Coupling(1.0), -1)


class TestEigenfunctions:
    def test_ground_state_at_origin(self):
        assert eigenfunction_eval(Coupling(1.0), 0, 0.0) == pytest.approx(1.0)

    def test_first_excited_real(self):
        # H_1(x) = 2x
        assert eigenfunction_eval(Coupling(1.0), 1, 1.0) == pytest.approx(2 * math.exp(-0.5))

    def test_rotated_ground_state_closed_form(self):
        got = eigenfunction_eval(Coupling(1j), 0, 2.0)
        want = (1j) ** 0.125 * cmath.exp(-2.0 * cmath.sqrt(1j))
        assert got == pytest.approx(want)
        assert abs(got) == pytest.approx(math.exp(-math.sqrt(2.0)))

    def test_log_form_consistency(self):
        cp = Coupling(2 + 1j)
        for n, x in [(0, 0.3), (3, -1.2), (7, 4.0)]:
            log_abs, phase = eigenfunction_log_eval(cp, n, x)
            val = eigenfunction_eval(cp, n, x)
            assert abs(val) == pytest.approx(math.exp(log_abs), rel=1e-12)
            assert cmath.phase(val) == pytest.approx(
                math.atan2(math.sin(phase), math.cos(phase)), abs=1e-12)

    def test_large_degree_large_argument_representable(self):
        # raw Hermite values overflow near n ~ 150; the log path must not
        log_abs, _ = eigenfunction_log_eval(Coupling(1.0), 200, 15.0)
        assert math.isfinite(log_abs)

    def test_design_extremes_stay_representable(self):
        # the degree cap is what keeps |log magnitude| under the guard
        for c in (1.0, 1j, 1e-6 + 1e-6j):
            log_abs, _ = eigenfunction_log_eval(Coupling(c), 200, 40.0)
            assert log_abs < 709.0
            assert complex(eigenfunction_eval(Coupling(c), 200, 40.0)) is not None

    def test_deep_tail_underflows_to_zero(self):
        assert eigenfunction_eval(Coupling(1.0), 0, 45.0) == 0.0

    def test_degree_cap(self):
        with pytest.raises(ValidationError):
            eigenfunction_eval(Coupling(1.0), 201, 0.0)


class TestBiorthogonality:
    @pytest.mark.parametrize("c", [1j, 1 + 1j, cmath.exp(1j * math.pi / 6)])
    def test_pairing_matrix(self, c):
        cp = Coupling(c)
        for n in range(0, 6):
            diag = biorthogonal_pairing(cp, n, n)
            assert diag == pytest.approx(pairing_normalization(n), rel=1e-10)
            for m in range(n + 1, 6):
                off = biorthogonal_pairing(cp, n, m)
                scale = math.sqrt(pairing_normalization(n) * pairing_normalization(m))
                assert abs(off) < 1e-10 * scale


class TestNumericalRange:
    def test_boundary_point(self):
        cp = Coupling(1j)
        assert numerical_range_membership(cp, 0.5 + 0.5j) == "boundary"
        pt = numerical_range_point(cp, 0.5 + 0.5j)
        assert pt.t1 == pytest.approx(0.5) and pt.t2 == pytest.approx(0.5)

    def test_interior_and_exterior(self):
        cp = Coupling(1j)
        assert numerical_range_membership(cp, 1 + 1j) == "interior"
        assert numerical_range_membership(cp, 0.1 + 0.1j) == "exterior"

    def test_negative_component_is_exterior(self):
        # t1 t2 = 1/4 with both negative must not classify as boundary
        cp = Coupling(1j)
        assert numerical_range_membership(cp, -0.5 - 0.5j) == "exterior"

    def test_real_coupling_degenerate(self):
        with pytest.raises(DegenerateCouplingError):
            numerical_range_membership(Coupling(1.0), 1.0)

    def test_boundary_parameterization(self):
        assert numerical_range_boundary(Coupling(1.0), 0.5) == pytest.approx(1.0)
        assert numerical_range_boundary(Coupling(1j), 1.0) == pytest.approx(1 + 0.25j)
        z0 = numerical_range_boundary(Coupling(1j), 0.5)
        assert z0 == pytest.approx(0.5 * (1 + 1j))  # |c|^(1/2)/2 (1 + c/|c|)

    def test_boundary_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            numerical_range_boundary(Coupling(1.0), 0.0)

    def test_boundary_classifies_as_boundary_across_scales(self):
        cp = Coupling(0.7 + 1.3j)
        for t in np.geomspace(1e-3, 1e3, 25):
            z = numerical_range_boundary(cp, t)
            assert numerical_range_membership(cp, z) == "boundary"

    def test_eigenvalues_interior(self):
        # spectrum strictly inside the numerical range for Im(c) != 0
        for c in (1j, 1 + 1j):
            cp = Coupling(c)
            for n in range(21):
                assert numerical_range_membership(cp, eigenvalue(cp, n)) == "interior"


class TestSymmetry:
    def test_fixed_axis(self):
        cp = Coupling(1j)
        z = cmath.exp(1j * math.pi / 4)
        assert symmetry_reflect(cp, z) == pytest.approx(z)

    def test_hand_values(self):
        cp = Coupling(1j)
        assert symmetry_reflect(cp, 1.0) == pytest.approx(1j)
        assert symmetry_reflect(cp, 2 + 1j) == pytest.approx(1 + 2j)

    def test_involution(self):
        rng = np.random.default_rng(11)
        cp = Coupling(0.4 + 0.9j)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal())
            back = symmetry_reflect(cp, symmetry_reflect(cp, z))
            assert back == pytest.approx(z, rel=1e-15, abs=1e-15)


class TestSector:
    def test_real_coupling_open_halfplane(self):
        s = maximal_sector(Coupling(1.0))
        assert (s.lower, s.upper) == (-math.pi / 2, math.pi / 2)
        assert s.closed_edges == (False, False)
        assert s.contains(1.0) and not s.contains(1j) and not s.contains(0.0)

    def test_imaginary_coupling_closed_quarter(self):
        s = maximal_sector(Coupling(1j))
        assert s.lower == pytest.approx(-math.pi / 2)
        assert s.upper == pytest.approx(0.0)
        assert s.closed_edges == (True, True)
        assert s.excludes_origin
        assert s.contains(-1j) and s.contains(1.0) and not s.contains(1j)

    def test_sixth_root_coupling(self):
        s = maximal_sector(Coupling(cmath.exp(1j * math.pi / 6)))
        assert s.upper == pytest.approx(math.pi / 3)
        assert s.contains(cmath.exp(1j * math.pi / 3))

    def test_invalid_angles_rejected(self):
        with pytest.raises(ValidationError):
            Sector(0.5, 0.2, (True, True), True)
