"""Hermite-basis truncation: entries, spectra, reliability protocol."""

import math

import numpy as np
import pytest

from nsolab import (
    Coupling,
    ValidationError,
    build_matrix,
    eigenvalue,
    eigenvalues,
    numerical_range_membership,
    reliable_eigenvalues,
    truncated_eigenvalues,
)
from nsolab.discretization import (
    diagnostics,
    dump_matrix,
    load_matrix_entries,
    truncation_spectrum,
)


def test_real_coupling_is_diagonal():
    m = build_matrix(Coupling(1.0), 3)
    assert np.allclose(m.entries, np.diag([1.0, 3.0, 5.0]))


def test_imaginary_coupling_entries_by_hand():
    m = build_matrix(Coupling(1j), 3).entries
    assert m[0, 0] == pytest.approx((1 + 1j) / 2)
    assert m[1, 1] == pytest.approx(3 * (1 + 1j) / 2)
    assert m[2, 2] == pytest.approx(5 * (1 + 1j) / 2)
    assert m[0, 2] == pytest.approx((1j - 1) * math.sqrt(2.0) / 2)
    assert m[0, 1] == 0 and m[1, 0] == 0


def test_complex_symmetry_exact():
    m = build_matrix(Coupling(0.3 + 2.1j), 40).entries
    assert np.max(np.abs(m - m.T)) == 0.0


def test_never_hermitian_unless_real():
    m = build_matrix(Coupling(1j), 8).entries
    assert np.max(np.abs(m - m.conj().T)) > 0.1


def test_eigenvalues_match_closed_form():
    cp = Coupling(1j)
    vals = truncated_eigenvalues(build_matrix(cp, 64), 11)
    exact = eigenvalues(cp, 11)
    assert np.max(np.abs(vals - exact) / np.abs(exact)) < 1e-8


def test_reliable_eigenvalues_examples():
    vals = truncated_eigenvalues(build_matrix(Coupling(1.0), 8), 3)
    assert np.allclose(vals, [1.0, 3.0, 5.0])

    vals, diags = reliable_eigenvalues(Coupling(1j), 128, 5)
    exact = eigenvalues(Coupling(1j), 5)
    assert np.max(np.abs(vals - exact) / np.abs(exact)) < 1e-8
    assert all(d.reliable for d in diags)

    vals, diags = reliable_eigenvalues(Coupling(1 + 1j), 128, 1)
    assert abs(vals[0] - eigenvalue(Coupling(1 + 1j), 0)) / abs(vals[0]) < 1e-8


def test_count_exceeding_dim_rejected():
    with pytest.raises(ValidationError):
        truncated_eigenvalues(build_matrix(Coupling(1.0), 4), 5)


def test_rayleigh_quotients_stay_in_numerical_range():
    # truncation compresses the numerical range: no exterior points
    cp = Coupling(1j)
    m = build_matrix(cp, 48).entries
    rng = np.random.default_rng(7)
    for _ in range(100):
        v = rng.standard_normal(48) + 1j * rng.standard_normal(48)
        v /= np.linalg.norm(v)
        q = complex(v.conj() @ m @ v)
        assert numerical_range_membership(cp, q, tol_scale=1e-6) != "exterior"


def test_convergence_monotone_under_doubling():
    cp = Coupling(1j)
    gaps = []
    for dim in (32, 64, 128):
        lam_n = truncation_spectrum(cp, dim)[16]
        lam_2n = truncation_spectrum(cp, 2 * dim)[16]
        gaps.append(abs(lam_n - lam_2n) / abs(lam_2n))
    assert gaps[0] > gaps[1] > gaps[2]


def test_diagnostics_rel_gap_definition():
    d = diagnostics("x", 1.0, 2.0, (8, 16))
    assert d.rel_gap == pytest.approx(0.5)
    assert not d.reliable
    d = diagnostics("x", 0.0, 0.0, (8, 16))
    assert d.rel_gap == 0.0 and d.reliable


def test_dump_roundtrip(tmp_path):
    m = build_matrix(Coupling(0.5 + 0.5j), 6)
    path = tmp_path / "matrix.txt"
    dump_matrix(m, path)
    text = path.read_text()
    assert text.startswith("N=6\n")
    assert len(text.strip().splitlines()) == 1 + 36
    back = load_matrix_entries(path)
    assert np.array_equal(back, m.entries)
