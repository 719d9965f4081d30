"""Resolvent norms, pseudospectra grids, and curve scans.

The resolvent norm ||(H_c - z)^{-1}|| is 1/sigma_min(H_N - z) by dense SVD,
always computed at two truncation dimensions (N, 2N); a sample is reliable
when the two agree to a relative gap below 1e-6.  Grid sweeps realize
epsilon-pseudospectra level data, curve scans follow blow-up rays
b*eta + c*eta^p and the bounded edge lines, and the exploratory scan for
the open inclusion conjecture emits data without asserting anything.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.optimize as spo

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - always bundled with scipy stacks here
    from contextlib import nullcontext

    def threadpool_limits(*_args, **_kwargs):
        return nullcontext()

from . import spectral
from .discretization import build_matrix, diagnostics
from .errors import (
    ConvergenceError,
    RootFindError,
    SingularPointError,
    ValidationError,
)

_SIGMA_FLOOR = 1e-30
_EIG_COLLISION_TOL = 1e-12

#: CSV headers fixed by the export contract.
GRID_CSV_HEADER = "re,im,norm,reliable,relgap"
SCAN_CSV_HEADER = "param,re,im,norm,reliable,relgap,label"


@dataclass(eq=False)
class ResolventSample:
    """One resolvent-norm evaluation with its truncation diagnostics."""

    z: complex
    norm: float
    diagnostics: object
    reliable: bool
    note: str = ""


@dataclass(eq=False)
class ScanSample:
    parameter: float
    sample: ResolventSample
    label: str = ""


@dataclass(eq=False)
class ScanResult:
    """Tagged table of scan samples plus scan-level metadata."""

    kind: str
    samples: list
    meta: dict = field(default_factory=dict)


@dataclass(eq=False)
class GridScan:
    """Row-major rectangle sweep; ``samples[j*nx + i]`` is node (re_i, im_j)."""

    coupling: object
    rectangle: tuple
    resolution: tuple
    samples: list
    epsilons: tuple
    dim: int


def default_workers():
    env = os.environ.get("NSO_WORKERS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _sigma_min(entries, z):
    try:
        svals = sla.svdvals(entries - z * np.eye(entries.shape[0]), check_finite=False)
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise ConvergenceError(f"SVD did not converge at z={z!r}: {exc}")
    return float(svals[-1])


def _sample_at(coupling, z, dim, mats):
    z = complex(z)
    lam = spectral.eigenvalues(coupling, 4 * dim)
    if np.min(np.abs(lam - z)) < _EIG_COLLISION_TOL:
        raise SingularPointError(f"z={z!r} coincides with an eigenvalue")
    s_small = _sigma_min(mats[0], z)
    s_big = _sigma_min(mats[1], z)
    if min(s_small, s_big) < _SIGMA_FLOOR:
        raise SingularPointError(f"z={z!r} is numerically an eigenvalue of the truncation")
    v_small = 1.0 / s_small
    v_big = 1.0 / s_big
    diag = diagnostics("resolvent_norm", v_small, v_big, (dim, 2 * dim))
    return ResolventSample(z=z, norm=v_big, diagnostics=diag, reliable=diag.reliable)


def resolvent_norm(coupling, z, dim):
    """Resolvent norm sample at z, via sigma_min SVDs at dims (N, 2N).

    The reported norm is the 2N value; ``diagnostics.values`` carries both.
    Raises :class:`SingularPointError` at eigenvalue collisions.
    """
    if dim < 16:
        raise ValidationError(f"truncation dimension must be >= 16, got {dim}")
    mats = (build_matrix(coupling, dim).entries, build_matrix(coupling, 2 * dim).entries)
    return _sample_at(coupling, z, dim, mats)


def _scan_points(coupling, zs, dim, workers=None, collision="flag"):
    """Evaluate many shifts against shared matrices; deterministic order.

    Per-node singularities become +inf markers ("flag" mode) instead of
    aborting the batch; other errors are recorded in the sample note.
    """
    if dim < 16:
        raise ValidationError(f"truncation dimension must be >= 16, got {dim}")
    mats = (build_matrix(coupling, dim).entries, build_matrix(coupling, 2 * dim).entries)
    workers = workers or default_workers()

    def one(z):
        try:
            return _sample_at(coupling, z, dim, mats)
        except SingularPointError:
            if collision == "flag":
                diag = diagnostics("resolvent_norm", math.inf, math.inf, (dim, 2 * dim))
                return ResolventSample(z=complex(z), norm=math.inf, diagnostics=diag,
                                       reliable=True, note="singular")
            raise
        except ConvergenceError as exc:
            diag = diagnostics("resolvent_norm", math.nan, math.nan, (dim, 2 * dim))
            return ResolventSample(z=complex(z), norm=math.nan, diagnostics=diag,
                                   reliable=False, note=f"error: {exc}")

    if workers > 1:
        # one BLAS thread per worker: multithreaded BLAS is a net loss on
        # the small per-node SVDs, and node-level parallelism is exact
        with threadpool_limits(limits=1):
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(one, zs))
    return [one(z) for z in zs]


def pseudospectra_grid(coupling, rectangle, resolution, epsilons, dim, workers=None):
    """Resolvent norms on a rectangle grid, for epsilon-pseudospectra contours.

    ``rectangle`` is (re_min, re_max, im_min, im_max); ``resolution`` is
    (nx, ny); ``epsilons`` must be positive and strictly decreasing.  Nodes
    colliding with eigenvalues get a +inf marker and stay reliable.
    """
    re_min, re_max, im_min, im_max = map(float, rectangle)
    nx, ny = map(int, resolution)
    if nx < 2 or ny < 2:
        raise ValidationError("grid resolution must be >= 2 in each direction")
    if not (re_max > re_min and im_max > im_min):
        raise ValidationError("grid rectangle is degenerate")
    eps = tuple(float(e) for e in epsilons)
    if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
        raise ValidationError("epsilons must be positive and strictly decreasing")
    res = np.linspace(re_min, re_max, nx)
    ims = np.linspace(im_min, im_max, ny)
    zs = [complex(r, i) for i in ims for r in res]
    samples = _scan_points(coupling, zs, dim, workers=workers, collision="flag")
    return GridScan(coupling=coupling, rectangle=(re_min, re_max, im_min, im_max),
                    resolution=(nx, ny), samples=samples, epsilons=eps, dim=dim)


def symmetry_check(coupling, z, dim):
    """Resolvent norms at z and at its reflection about the spectral axis.

    Returns ``(norm_z, norm_reflected, relative_difference)``; the
    difference is the test statistic for the reflection symmetry.
    """
    a = resolvent_norm(coupling, z, dim).norm
    b = resolvent_norm(coupling, spectral.symmetry_reflect(coupling, z), dim).norm
    return a, b, abs(a - b) / max(a, b)


def growth_curve_scan(coupling, b, p, eta_grid, dim, workers=None):
    """Resolvent norms along z = b*eta + c*eta^p.

    For 1/3 < p < 3 the norms diverge along the curve as eta grows; other
    exponents (e.g. p = 0, a line parallel to an edge) are accepted for
    contrast scans where the norms stay bounded.  Reliability flags mark
    where the fixed truncation stops being trustworthy.
    """
    b = float(b)
    if b <= 0:
        raise ValidationError(f"curve coefficient b must be positive, got {b}")
    etas = [float(e) for e in eta_grid]
    if any(e <= 0 for e in etas) or any(x >= y for x, y in zip(etas, etas[1:])):
        raise ValidationError("eta grid must be positive and strictly increasing")
    zs = [b * e + coupling.c * e**p for e in etas]
    raw = _scan_points(coupling, zs, dim, workers=workers)
    samples = [ScanSample(parameter=e, sample=s, label="growth_curve")
               for e, s in zip(etas, raw)]
    largest = max((e for e, s in zip(etas, raw) if s.reliable), default=None)
    return ScanResult(
        kind="growth_curve",
        samples=samples,
        meta={"b": b, "p": float(p), "dim": dim, "largest_reliable_eta": largest},
    )


def edge_scan(coupling, edge, eta_grid, eps, dim, workers=None):
    """Resolvent norms along one edge line of the numerical-range sector.

    ``edge`` is "lower" (z = eta + i*eps) or "upper" (z = c(eta - i eps)/|c|).
    Requires 0 <= eps < Im(lambda_0); the running supremum is reported in
    the metadata (the norms stay uniformly bounded along these lines).
    """
    if coupling.c.imag <= 0:
        raise ValidationError("edge scans need Im(c) > 0")
    if edge not in ("lower", "upper"):
        raise ValidationError(f"edge must be 'lower' or 'upper', got {edge!r}")
    eps = float(eps)
    lam0_im = spectral.eigenvalue(coupling, 0).imag
    if not (0.0 <= eps < lam0_im):
        raise ValidationError(f"need 0 <= eps < Im(lambda_0) = {lam0_im:.6g}, got {eps}")
    etas = [float(e) for e in eta_grid]
    if any(e < 0 for e in etas):
        raise ValidationError("eta grid must be nonnegative")
    if edge == "lower":
        zs = [complex(e, eps) for e in etas]
    else:
        zs = [coupling.c * complex(e, -eps) / abs(coupling.c) for e in etas]
    raw = _scan_points(coupling, zs, dim, workers=workers)
    samples = [ScanSample(parameter=e, sample=s, label=f"{edge}_edge")
               for e, s in zip(etas, raw)]
    reliable = [s for s in raw if s.reliable and math.isfinite(s.norm)]
    sup_small = max((s.diagnostics.values[0] for s in reliable), default=math.nan)
    sup_big = max((s.diagnostics.values[1] for s in reliable), default=math.nan)
    return ScanResult(
        kind="edge",
        samples=samples,
        meta={
            "edge": edge,
            "eps": eps,
            "dim": dim,
            "sup_norm": max((s.norm for s in reliable), default=math.nan),
            "sup_norm_dims": (sup_small, sup_big),
        },
    )


def solve_conjecture_curve(coupling, m, p):
    """Solve b*E + c*E^p = lambda_m for real b > 0, E > 0.

    E comes from a bracketed 1-D root find on the imaginary part, then b
    from the real part; returns ``(b, E, residual)``.
    """
    p = float(p)
    if not (0.0 < p < 1.0 / 3.0):
        raise ValidationError(f"conjecture exponent needs 0 < p < 1/3, got {p}")
    if coupling.c.imag <= 0:
        raise ValidationError("conjecture scan needs Im(c) > 0")
    lam = spectral.eigenvalue(coupling, m)
    target = lam.imag / coupling.c.imag  # E^p must equal this

    def g(e):
        return e**p - target

    lo, hi = 1e-12, 1.0
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e18:
            raise RootFindError("could not bracket E for the conjecture curve")
    try:
        e_val = spo.brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16)
    except ValueError as exc:
        raise RootFindError(f"E solve failed: {exc}")
    b = (lam.real - coupling.c.real * e_val**p) / e_val
    if b <= 0:
        raise RootFindError(f"curve coefficient b = {b:.6g} is not positive")
    residual = abs(b * e_val + coupling.c * e_val**p - lam)
    return float(b), float(e_val), float(residual)


def _omega_radius(coupling, b, p, eta):
    return abs(b * eta + coupling.c * eta**p)


def omega_contains(coupling, b, p, e_start, z, angle_tol=1e-9):
    """Membership in the region swept by arcs between the curve and its
    reflection, for radii at or beyond the curve point at ``e_start``."""
    z = complex(z)
    r = abs(z)
    r0 = _omega_radius(coupling, b, p, e_start)
    if r < r0 * (1.0 - 1e-12):
        return False
    hi = max(e_start * 2.0, 1.0)
    while _omega_radius(coupling, b, p, hi) < r:
        hi *= 2.0
        if hi > 1e18:
            return False
    eta = spo.brentq(lambda e: _omega_radius(coupling, b, p, e) - r, e_start, hi,
                     xtol=1e-14, rtol=8.9e-16)
    z_eta = b * eta + coupling.c * eta**p
    ang_lo = math.atan2(z_eta.imag, z_eta.real)
    ang_hi = coupling.theta - ang_lo  # reflected curve angle
    ang = math.atan2(z.imag, z.real)
    return ang_lo - angle_tol <= ang <= ang_hi + angle_tol


def conjecture_scan(coupling, m, p, delta, dim, eta_grid=None, points=None,
                    arc_fractions=(0.0, 0.5, 1.0), workers=None):
    """Exploratory data scan for the open inclusion conjecture (0 < p < 1/3).

    Emits resolvent norms on the boundary curves of the arc-swept region
    (the curve b*eta + c*eta^p and its reflection), on interior arc points,
    and on outside probes; explicit ``points`` override the generated grid.
    Samples within ``delta`` of an eigenvalue lambda_n, n <= m, are labeled
    with the excluded disk.  Data only; nothing is asserted.
    """
    if not (0.0 < float(delta) < 1.0):
        raise ValidationError(f"delta must be in (0, 1), got {delta}")
    if m < 0:
        raise ValidationError("m must be >= 0")
    b, e_start, residual = solve_conjecture_curve(coupling, m, p)
    lam = spectral.eigenvalues(coupling, m + 1)

    labeled = []
    if points is not None:
        for z in points:
            labeled.append((complex(z), _classify_conjecture_point(
                coupling, b, p, e_start, complex(z))))
    else:
        if eta_grid is None:
            eta_grid = np.geomspace(e_start, e_start * 100.0, 12)
        for eta in eta_grid:
            eta = float(eta)
            z_eta = b * eta + coupling.c * eta**p
            ang_lo = math.atan2(z_eta.imag, z_eta.real)
            ang_hi = coupling.theta - ang_lo
            r = abs(z_eta)
            for frac in arc_fractions:
                ang = ang_lo + float(frac) * (ang_hi - ang_lo)
                if frac == 0.0:
                    label = "lower_boundary"
                elif frac == 1.0:
                    label = "upper_boundary"
                else:
                    label = "interior"
                labeled.append((r * complex(math.cos(ang), math.sin(ang)), label))
            out_ang = ang_lo - 0.15
            if out_ang > -math.pi / 2:
                labeled.append((r * complex(math.cos(out_ang), math.sin(out_ang)),
                                "exterior"))
    zs = [z for z, _ in labeled]
    raw = _scan_points(coupling, zs, dim, workers=workers)
    samples = []
    for (z, label), s in zip(labeled, raw):
        dmin = np.abs(lam - z)
        k = int(np.argmin(dmin))
        if dmin[k] < delta:
            label = f"{label};disk:{k}"
        samples.append(ScanSample(parameter=abs(z), sample=s, label=label))
    return ScanResult(
        kind="conjecture",
        samples=samples,
        meta={"m": int(m), "p": float(p), "delta": float(delta), "b": b,
              "E": e_start, "curve_residual": residual, "dim": dim},
    )


def _classify_conjecture_point(coupling, b, p, e_start, z):
    return "inside" if omega_contains(coupling, b, p, e_start, z) else "outside"


# ---------------------------------------------------------------------------
# exports

def _fmt(x):
    return repr(float(x))


def grid_to_csv(grid, path):
    """Write a grid scan as CSV with header ``re,im,norm,reliable,relgap``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(GRID_CSV_HEADER + "\n")
        for s in grid.samples:
            fh.write(",".join([
                _fmt(s.z.real), _fmt(s.z.imag), _fmt(s.norm),
                "true" if s.reliable else "false", _fmt(s.diagnostics.rel_gap),
            ]) + "\n")


def contour_to_json(grid, path):
    """Write grid data for external contour plotters:
    ``{"epsilons": [...], "nodes": [[re, im, norm], ...]}``."""
    payload = {
        "epsilons": list(grid.epsilons),
        "nodes": [[s.z.real, s.z.imag, s.norm] for s in grid.samples],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def scan_to_csv(scan, path):
    """Write a curve scan as CSV with header ``param,re,im,norm,reliable,relgap,label``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SCAN_CSV_HEADER + "\n")
        for row in scan.samples:
            s = row.sample
            fh.write(",".join([
                _fmt(row.parameter), _fmt(s.z.real), _fmt(s.z.imag), _fmt(s.norm),
                "true" if s.reliable else "false", _fmt(s.diagnostics.rel_gap),
                row.label,
            ]) + "\n")
