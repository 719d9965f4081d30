"""Finite truncations of H_c in the Hermite basis of the real oscillator.

In the eigenbasis of the c = 1 oscillator the operator P^2 + c Q^2 is
pentadiagonal with exactly representable entries: diagonal
(1+c)(2n+1)/2 and second off-diagonals (c-1) sqrt((n+1)(n+2))/2.  Every
physical quantity read off a truncation carries an (N, 2N) agreement
diagnostic so that finite-dimensional artifacts cannot masquerade as
operator behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, ValidationError

#: Default reliability threshold on the (N, 2N) relative gap.
RELIABLE_REL_GAP = 1e-6

_GAP_FLOOR = 1e-30


@dataclass(eq=False)
class OperatorMatrix:
    """Dense N x N truncation of H_c; complex-symmetric, bandwidth 2."""

    coupling: object
    dim: int
    entries: np.ndarray
    bandwidth: int = 2


@dataclass(frozen=True)
class TruncationDiagnostics:
    """Agreement record for one quantity computed at dimensions (N, 2N).

    ``values`` holds the two computed values (real or complex);
    ``rel_gap`` is |v_N - v_2N| / max(|v_2N|, 1e-30).
    """

    dim_pair: tuple
    quantity_tag: str
    values: tuple
    rel_gap: float

    @property
    def reliable(self):
        return self.rel_gap < RELIABLE_REL_GAP


def diagnostics(tag, value_small, value_big, dim_pair):
    gap = abs(value_small - value_big) / max(abs(value_big), _GAP_FLOOR)
    return TruncationDiagnostics(tuple(dim_pair), tag, (value_small, value_big), gap)


def build_matrix(coupling, dim):
    """Pentadiagonal truncation of H_c; for c = 1 this is diag(2n+1)."""
    if dim < 1:
        raise ValidationError(f"matrix dimension must be >= 1, got {dim}")
    c = coupling.c
    n = np.arange(dim)
    entries = np.zeros((dim, dim), dtype=complex)
    entries[n, n] = (1.0 + c) * (2 * n + 1) / 2.0
    if dim > 2:
        k = np.arange(dim - 2)
        off = (c - 1.0) * np.sqrt((k + 1.0) * (k + 2.0)) / 2.0
        entries[k, k + 2] = off
        entries[k + 2, k] = off
    return OperatorMatrix(coupling=coupling, dim=dim, entries=entries)


def truncated_eigenvalues(matrix, count):
    """The ``count`` eigenvalues of the truncation closest to the origin,
    sorted by modulus."""
    if count > matrix.dim:
        raise ValidationError(f"count {count} exceeds dimension {matrix.dim}")
    try:
        vals = sla.eigvals(matrix.entries)
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise ConvergenceError(f"dense eigensolve failed at dim {matrix.dim}: {exc}")
    order = np.argsort(np.abs(vals), kind="stable")
    return vals[order][:count]


@lru_cache(maxsize=64)
def _spectrum_cached(coupling, dim):
    vals = truncated_eigenvalues(build_matrix(coupling, dim), dim)
    vals.setflags(write=False)
    return vals


def truncation_spectrum(coupling, dim):
    """All eigenvalues of the dim truncation, sorted by modulus (cached)."""
    return _spectrum_cached(coupling, dim)


def reliable_eigenvalues(coupling, dim, count):
    """Eigenvalues at dimension ``dim`` with (N, 2N) diagnostics.

    Returns ``(values, diags)`` where ``values`` come from the 2N solve
    (nearest-matched to the N ones) and each diagnostic carries both.
    """
    vals_n = truncation_spectrum(coupling, dim)[:count]
    vals_2n = truncation_spectrum(coupling, 2 * dim)[: min(count * 2, 2 * dim)]
    matched = np.empty(count, dtype=complex)
    diags = []
    for k in range(count):
        j = int(np.argmin(np.abs(vals_2n - vals_n[k])))
        matched[k] = vals_2n[j]
        diags.append(diagnostics(f"eigenvalue[{k}]", vals_n[k], vals_2n[j], (dim, 2 * dim)))
    return matched, diags


def eigenvalue_diagnostics(coupling, dim, n):
    """Diagnostics for the n-th eigenvalue (by modulus) of the dim truncation."""
    _, diags = reliable_eigenvalues(coupling, dim, n + 1)
    return diags[n]


def dump_matrix(matrix, path):
    """Plain-text dump: header ``N=<dim>`` then one "re im" pair per line,
    entries in column-major order."""
    flat = np.asarray(matrix.entries, dtype=complex).flatten(order="F")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"N={matrix.dim}\n")
        for v in flat:
            fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")


def load_matrix_entries(path):
    """Inverse of :func:`dump_matrix`; returns the dense complex array."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("N="):
            raise ValidationError(f"bad matrix dump header: {header!r}")
        dim = int(header[2:])
        data = np.loadtxt(fh)
    if data.shape != (dim * dim, 2):
        raise ValidationError("matrix dump has wrong entry count")
    flat = data[:, 0] + 1j * data[:, 1]
    return flat.reshape((dim, dim), order="F")
