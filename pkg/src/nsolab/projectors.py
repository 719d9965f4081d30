"""Spectral projectors, instability indices, and the resolvent decomposition.

The Riesz projector Q_n = (2 pi i)^{-1} * contour integral of the resolvent
around lambda_n is computed by the trapezoid rule on a circle (spectrally
accurate); its operator norm is the instability index kappa(lambda_n).
A second, independent route evaluates kappa for simple eigenvalues from the
eigenfunctions directly: since H_c is complex-symmetric, the adjoint
eigenfunction is the conjugate, so

    kappa(lambda_n) = (integral |Psi_n|^2 dx) / |integral Psi_n^2 dx|.

The banded structure of the truncation makes each contour node a cheap
pentadiagonal solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import spectral
from .discretization import (
    RELIABLE_REL_GAP,
    build_matrix,
    diagnostics,
    eigenvalue_diagnostics,
    truncation_spectrum,
)
from .errors import ContourError, UnreliableTruncationError, ValidationError
from .resolvent import resolvent_norm


@dataclass(eq=False)
class ProjectorData:
    """Truncated Riesz projector with contour metadata and diagnostics."""

    n: int
    matrix: np.ndarray
    norm: float
    contour: tuple  # (center, radius, node count)
    diagnostics: object


@dataclass(frozen=True)
class InstabilityIndex:
    n: int
    kappa: float
    method: str


def _banded_rep(entries):
    # (2,2)-banded storage for scipy.linalg.solve_banded
    dim = entries.shape[0]
    ab = np.zeros((5, dim), dtype=complex)
    ab[0, 2:] = entries[np.arange(dim - 2), np.arange(2, dim)]
    ab[2, :] = np.diag(entries)
    ab[4, :-2] = entries[np.arange(2, dim), np.arange(dim - 2)]
    return ab


def _projector_matrix(coupling, n, dim, contour_nodes, center, radius):
    entries = build_matrix(coupling, dim).entries
    eigs = truncation_spectrum(coupling, dim)
    clearance = np.min(np.abs(np.abs(eigs - center) - radius))
    if clearance < 10.0 * radius * np.finfo(float).eps:
        raise ContourError(
            f"contour around lambda_{n} passes within {clearance:.3e} of a "
            "truncated eigenvalue")
    phis = 2.0 * math.pi * np.arange(contour_nodes) / contour_nodes
    eye = np.eye(dim, dtype=complex)
    acc = np.zeros((dim, dim), dtype=complex)
    for phi in phis:  # ascending node order: deterministic summation
        z = center + radius * np.exp(1j * phi)
        ab = _banded_rep(z * eye - entries)
        acc += np.exp(1j * phi) * sla.solve_banded((2, 2), ab, eye)
    return (radius / contour_nodes) * acc


def projector(coupling, n, dim, contour_nodes=64):
    """Riesz projector onto the lambda_n eigenspace of the dim truncation.

    The contour is a circle centered at lambda_n with radius half the gap
    to the nearest neighboring eigenvalue (= |sqrt(c)|); the norm carries
    an (N, 2N) diagnostic.  Requires lambda_n to be reliable at this dim.
    """
    if contour_nodes < 16:
        raise ValidationError(f"contour needs >= 16 nodes, got {contour_nodes}")
    diag_n = eigenvalue_diagnostics(coupling, dim, n)
    if not diag_n.reliable:
        raise UnreliableTruncationError(
            f"lambda_{n} has rel_gap {diag_n.rel_gap:.2e} at dim {dim}; "
            f"threshold {RELIABLE_REL_GAP:.0e}")
    center = spectral.eigenvalue(coupling, n)
    radius = abs(coupling.sqrt_c)  # half the 2|sqrt(c)| spacing
    mat = _projector_matrix(coupling, n, dim, contour_nodes, center, radius)
    mat_big = _projector_matrix(coupling, n, 2 * dim, contour_nodes, center, radius)
    norm_small = float(sla.svdvals(mat, check_finite=False)[0])
    norm_big = float(sla.svdvals(mat_big, check_finite=False)[0])
    diag = diagnostics(f"projector_norm[{n}]", norm_small, norm_big, (dim, 2 * dim))
    return ProjectorData(n=n, matrix=mat, norm=norm_big, contour=(center, radius,
                         contour_nodes), diagnostics=diag)


def kappa_contour(coupling, n, dim, contour_nodes=64):
    return InstabilityIndex(n=n, kappa=projector(coupling, n, dim, contour_nodes).norm,
                            method="contour")


def kappa_biorthogonal(coupling, n, n_nodes=None):
    """Instability index from eigenfunction quadrature.

    Both integrals use a Gauss-Hermite grid rescaled to the eigenfunction
    decay; |Psi_n|^2 is then a polynomial times the weight, so the
    numerator is quadrature-exact.
    """
    if n > 20:
        raise ValidationError("biorthogonal kappa supports n <= 20")
    if n_nodes is None:
        n_nodes = max(120, 16 * (n + 1))
    u, w = np.polynomial.hermite.hermgauss(n_nodes)
    sigma = 1.0 / math.sqrt(coupling.sqrt_c.real)
    xs = sigma * u
    psi = spectral.eigenfunction_grid(coupling, n, xs)
    lift = w * np.exp(u**2)
    numerator = sigma * float(np.sum(lift * np.abs(psi) ** 2))
    denominator = sigma * complex(np.sum(lift * psi * psi))
    if abs(denominator) < 1e-20:
        raise ValidationError(
            f"self-pairing of Psi_{n} vanishes numerically ({abs(denominator):.2e}); "
            "degenerate configuration")
    return InstabilityIndex(n=n, kappa=numerator / abs(denominator),
                            method="biorthogonal")


def kappa_m_sum(coupling, m, dim, contour_nodes=64):
    """kappa_m = 1 + sum of ||Q_n|| for n <= m (contour-method norms)."""
    total = 1.0
    for n in range(m + 1):
        total += projector(coupling, n, dim, contour_nodes).norm
    return total


def eigenvector_complement_basis(coupling, m, dim):
    """Orthonormal basis of the truncation-level analogue of Ran(I - P_m).

    Since H is complex-symmetric, P_m f = sum_n Psi_n (Psi_n^T f) / (Psi_n^T
    Psi_n), so Ran(I - P_m) = {f : v_n^T f = 0, n <= m} is the orthogonal
    complement of the conjugated leading eigenvectors.  Building it from
    those m+1 constraints is far better conditioned than orthonormalizing
    the N-m-1 trailing eigenvectors.
    """
    entries = build_matrix(coupling, dim).entries
    vals, vecs = sla.eig(entries)
    order = np.argsort(np.abs(vals), kind="stable")
    lead = np.conj(vecs[:, order[: m + 1]])
    q, _ = sla.qr(lead, mode="full")
    return q[:, m + 1:]


def restricted_resolvent_norm(coupling, m, z, dim):
    """Resolvent norm of the truncation compressed to the invariant
    complement of the first m+1 eigenvectors."""
    entries = build_matrix(coupling, dim).entries
    basis = eigenvector_complement_basis(coupling, m, dim)
    compressed = basis.conj().T @ (entries - z * np.eye(dim)) @ basis
    smin = float(sla.svdvals(compressed, check_finite=False)[-1])
    return 1.0 / smin


def decomposition_bound_check(coupling, m, z, dim, contour_nodes=64):
    """Both sides of the resolvent decomposition estimate

        ||(H-z)^{-1}|| <= kappa_m (sum_n 1/|lambda_n - z| + restricted norm).

    Returns ``(lhs, rhs)``; the rank-one blocks act as multiplication by
    lambda_n, so their resolvent norms are exactly 1/|lambda_n - z|.
    """
    z = complex(z)
    lhs = resolvent_norm(coupling, z, dim).norm
    km = kappa_m_sum(coupling, m, dim, contour_nodes)
    lam = spectral.eigenvalues(coupling, m + 1)
    spikes = float(np.sum(1.0 / np.abs(lam - z)))
    rhs = km * (spikes + restricted_resolvent_norm(coupling, m, z, dim))
    return lhs, rhs


def index_table(coupling, n_max, dim, contour_nodes=64):
    """Rows (n, kappa_contour, kappa_biorthogonal, relgap) for n <= n_max."""
    rows = []
    for n in range(n_max + 1):
        kc = kappa_contour(coupling, n, dim, contour_nodes).kappa
        kb = kappa_biorthogonal(coupling, n).kappa
        rows.append((n, kc, kb, abs(kc - kb) / max(kc, kb)))
    return rows


def index_table_to_csv(rows, path):
    """Write an index table as CSV: ``n,kappa_contour,kappa_biorthogonal,relgap``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n,kappa_contour,kappa_biorthogonal,relgap\n")
        for n, kc, kb, gap in rows:
            fh.write(f"{n},{float(kc)!r},{float(kb)!r},{float(gap)!r}\n")
