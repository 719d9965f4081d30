"""Resolvent engine: norms, grids, curve scans, exports."""

import cmath
import json
import math

import numpy as np
import pytest

from nsolab import (
    Coupling,
    SingularPointError,
    ValidationError,
    edge_scan,
    eigenvalue,
    eigenvalues,
    growth_curve_scan,
    conjecture_scan,
    numerical_range_membership,
    pseudospectra_grid,
    resolvent_norm,
    solve_conjecture_curve,
    symmetry_check,
)
from nsolab.resolvent import (
    GRID_CSV_HEADER,
    contour_to_json,
    grid_to_csv,
    omega_contains,
    scan_to_csv,
)

C1 = Coupling(1.0)
CI = Coupling(1j)


class TestResolventNorm:
    def test_selfadjoint_oracle_points(self):
        assert resolvent_norm(C1, 2.0, 64).norm == pytest.approx(1.0, rel=1e-10)
        assert resolvent_norm(C1, 0.0, 64).norm == pytest.approx(1.0, rel=1e-10)

    def test_lower_bound_floor_and_reliability(self):
        s = resolvent_norm(CI, 3.0, 128)
        assert s.norm >= 1.0 / abs(3.0 - cmath.exp(1j * math.pi / 4))
        assert s.reliable and s.diagnostics.rel_gap < 1e-6
        assert s.diagnostics.dim_pair == (128, 256)

    def test_universal_lower_bound_random_points(self):
        rng = np.random.default_rng(3)
        lam = eigenvalues(CI, 4 * 64)
        for _ in range(12):
            z = complex(rng.uniform(0, 8), rng.uniform(-2, 8))
            s = resolvent_norm(CI, z, 64)
            if s.reliable:
                assert s.norm >= 1.0 / np.min(np.abs(lam - z)) - 1e-9

    def test_eigenvalue_collision_raises(self):
        with pytest.raises(SingularPointError):
            resolvent_norm(C1, 3.0, 64)

    def test_small_dim_rejected(self):
        with pytest.raises(ValidationError):
            resolvent_norm(C1, 2.0, 8)


class TestGrid:
    def test_selfadjoint_distances(self):
        grid = pseudospectra_grid(C1, (0, 4, -1, 1), (5, 3), (0.5,), 64)
        by_z = {s.z: s for s in grid.samples}
        assert by_z[complex(2, 0)].norm == pytest.approx(1.0, rel=1e-10)
        assert by_z[complex(1, 1)].norm == pytest.approx(1.0, rel=1e-10)
        assert by_z[complex(1, -1)].norm == pytest.approx(1.0, rel=1e-10)

    def test_node_nearest_eigenvalue_is_maximal(self):
        grid = pseudospectra_grid(CI, (0, 2, 0, 2), (9, 9), (1.0,), 64)
        lam0 = eigenvalue(CI, 0)
        norms = [s.norm for s in grid.samples]
        dists = [abs(s.z - lam0) for s in grid.samples]
        assert int(np.argmax(norms)) == int(np.argmin(dists))

    def test_high_norm_nodes_inside_numerical_range(self):
        grid = pseudospectra_grid(CI, (0, 6, 0, 6), (21, 21), (0.1,), 64, workers=2)
        hit = 0
        for s in grid.samples:
            if s.reliable and s.norm >= 10.0:
                hit += 1
                assert numerical_range_membership(CI, s.z, tol_scale=1e-6) != "exterior"
        assert hit > 0

    def test_eigenvalue_node_gets_inf_marker(self):
        grid = pseudospectra_grid(C1, (1, 3, -1, 1), (3, 3), (1.0,), 64)
        hits = [s for s in grid.samples if s.z == 1.0 or s.z == 3.0]
        assert hits and all(s.norm == math.inf and s.reliable for s in hits)
        assert all(s.note == "singular" for s in hits)

    def test_row_major_layout(self):
        grid = pseudospectra_grid(C1, (0, 1, 2, 3), (2, 2), (1.0,), 16)
        assert [s.z for s in grid.samples] == [2j, 1 + 2j, 3j, 1 + 3j]

    def test_epsilons_validated(self):
        with pytest.raises(ValidationError):
            pseudospectra_grid(C1, (0, 1, 0, 1), (2, 2), (0.1, 1.0), 16)
        with pytest.raises(ValidationError):
            pseudospectra_grid(C1, (0, 1, 0, 1), (1, 2), (1.0,), 16)

    def test_worker_count_does_not_change_results(self):
        g1 = pseudospectra_grid(CI, (0, 3, 0, 3), (4, 4), (1.0,), 32, workers=1)
        g2 = pseudospectra_grid(CI, (0, 3, 0, 3), (4, 4), (1.0,), 32, workers=3)
        assert [s.norm for s in g1.samples] == [s.norm for s in g2.samples]


class TestSymmetryCheck:
    def test_fixed_axis_point(self):
        a, b, diff = symmetry_check(CI, 2.0 * cmath.exp(1j * math.pi / 4), 128)
        assert diff < 1e-12

    def test_reflected_pair(self):
        a, b, diff = symmetry_check(CI, 2.0, 128)
        assert diff < 1e-6

    def test_generic_coupling(self):
        a, b, diff = symmetry_check(Coupling(cmath.exp(1j * math.pi / 3)), 1 + 1j, 128)
        assert diff < 1e-6


class TestGrowthCurve:
    def test_monotone_past_dip(self):
        scan = growth_curve_scan(CI, 1.0, 0.5, (32, 64, 128, 256), 256, workers=2)
        norms = [r.sample.norm for r in scan.samples if r.sample.reliable]
        assert len(norms) == 4
        assert all(a < b for a, b in zip(norms, norms[1:]))
        assert scan.meta["largest_reliable_eta"] == 256

    def test_first_point_lower_bound(self):
        scan = growth_curve_scan(CI, 1.0, 0.5, (1.0,), 256)
        lam = eigenvalues(CI, 1024)
        z = scan.samples[0].sample.z
        assert scan.samples[0].sample.norm >= 1.0 / np.min(np.abs(lam - z))

    def test_contrast_scan_p0_stays_capped(self):
        # p = 0 runs parallel to an edge: norms stay bounded, cap stable in N
        etas = (1, 2, 4, 8, 16, 32)
        s256 = growth_curve_scan(CI, 1.0, 0.0, etas, 128)
        s512 = growth_curve_scan(CI, 1.0, 0.0, etas, 256)
        cap256 = max(r.sample.norm for r in s256.samples if r.sample.reliable)
        cap512 = max(r.sample.norm for r in s512.samples if r.sample.reliable)
        assert abs(cap256 - cap512) / cap512 < 1e-6

    def test_grid_validation(self):
        with pytest.raises(ValidationError):
            growth_curve_scan(CI, -1.0, 0.5, (1, 2), 64)
        with pytest.raises(ValidationError):
            growth_curve_scan(CI, 1.0, 0.5, (2, 1), 64)


class TestEdgeScan:
    def test_lower_edge_supremum_shape(self):
        scan = edge_scan(CI, "lower", np.arange(0.0, 21.0), 0.3, 128, workers=2)
        norms = [r.sample.norm for r in scan.samples]
        assert math.isfinite(scan.meta["sup_norm"])
        assert int(np.argmax(norms)) <= 2  # supremum attained at small eta
        # bounded tail: late samples vary little on the scale of the supremum
        tail = norms[-10:]
        assert (max(tail) - min(tail)) / scan.meta["sup_norm"] < 0.05

    def test_edges_agree_by_symmetry(self):
        etas = np.arange(0.0, 21.0)
        lo = edge_scan(CI, "lower", etas, 0.3, 128, workers=2)
        up = edge_scan(CI, "upper", etas, 0.3, 128, workers=2)
        rel = abs(lo.meta["sup_norm"] - up.meta["sup_norm"]) / lo.meta["sup_norm"]
        assert rel < 1e-6

    def test_eps_zero_finite(self):
        scan = edge_scan(CI, "lower", np.arange(0.0, 8.0), 0.0, 64)
        lam = eigenvalues(CI, 256)
        for r in scan.samples:
            assert math.isfinite(r.sample.norm)
            assert r.sample.norm >= 1.0 / np.min(np.abs(lam - r.sample.z)) - 1e-9

    def test_eps_cap_enforced(self):
        with pytest.raises(ValidationError):
            edge_scan(CI, "lower", (0.0, 1.0), 0.8, 64)  # >= Im(lambda_0)
        with pytest.raises(ValidationError):
            edge_scan(C1, "lower", (0.0, 1.0), 0.0, 64)  # needs Im(c) > 0
        with pytest.raises(ValidationError):
            edge_scan(CI, "lower", (-1.0, 1.0), 0.3, 64)
        with pytest.raises(ValidationError):
            edge_scan(CI, "sideways", (0.0, 1.0), 0.3, 64)


class TestConjectureScan:
    def test_curve_solve_residual(self):
        b, e_val, residual = solve_conjecture_curve(CI, 0, 0.25)
        assert residual < 1e-10
        assert b > 0 and e_val == pytest.approx(0.25)
        assert b * e_val + 1j * e_val**0.25 == pytest.approx(eigenvalue(CI, 0))

    def test_scan_emits_labeled_data(self):
        scan = conjecture_scan(CI, 0, 0.25, 0.5, 64,
                               eta_grid=np.geomspace(0.5, 25.0, 4))
        labels = {r.label.split(";")[0] for r in scan.samples}
        assert {"lower_boundary", "upper_boundary", "interior", "exterior"} <= labels
        assert scan.meta["curve_residual"] < 1e-10

    def test_degenerate_point_flagged_in_disk(self):
        pt = eigenvalue(CI, 0) + 0.25 * cmath.exp(1j * math.pi / 4)
        scan = conjecture_scan(CI, 0, 0.25, 0.5, 64, points=[pt])
        assert len(scan.samples) == 1
        assert scan.samples[0].label == "inside;disk:0"

    def test_omega_membership(self):
        b, e_val, _ = solve_conjecture_curve(CI, 0, 0.25)
        z = b * 4.0 + 1j * 4.0**0.25  # on the curve
        assert omega_contains(CI, b, 0.25, e_val, z)
        assert not omega_contains(CI, b, 0.25, e_val, 0.1 * z)
        assert not omega_contains(CI, b, 0.25, e_val, z * cmath.exp(-0.2j))

    def test_p_domain_validated(self):
        with pytest.raises(ValidationError):
            solve_conjecture_curve(CI, 0, 0.5)


class TestExports:
    def test_grid_csv_and_contour_json(self, tmp_path):
        grid = pseudospectra_grid(C1, (0, 2, -1, 1), (3, 3), (1.0, 0.5), 16)
        csv_path = tmp_path / "grid.csv"
        grid_to_csv(grid, csv_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == GRID_CSV_HEADER
        assert len(lines) == 1 + 9
        assert lines[1].count(",") == 4

        json_path = tmp_path / "grid.json"
        contour_to_json(grid, json_path)
        payload = json.loads(json_path.read_text())
        assert payload["epsilons"] == [1.0, 0.5]
        assert len(payload["nodes"]) == 9
        assert len(payload["nodes"][0]) == 3

    def test_scan_csv(self, tmp_path):
        scan = growth_curve_scan(CI, 1.0, 0.5, (1.0, 2.0), 32)
        path = tmp_path / "scan.csv"
        scan_to_csv(scan, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "param,re,im,norm,reliable,relgap,label"
        assert len(lines) == 3
