"""Exact spectral data of the complex harmonic oscillator.

The operator is H_c = -d^2/dx^2 + c x^2 on L^2(R) with complex coupling c,
Re(c) > 0.  Everything here is closed-form: eigenvalues c^(1/2)(2n+1),
eigenfunctions built from Hermite polynomials with rotated argument, the
numerical range {t1 + c t2 : t1, t2 >= 0, t1 t2 >= 1/4}, the reflection
symmetry of the resolvent norm about the spectral axis, and the maximal
angular sector of semigroup parameters.  Other modules treat these values
as ground truth.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCouplingError, OverflowGuardError, ValidationError

#: Largest Hermite degree the evaluators accept.  The scaled recurrence keeps
#: magnitudes representable up to roughly this degree for |x| <= 40.
MAX_HERMITE_DEGREE = 200

_LOG_MAX = 709.0  # log of the largest finite double, minus a little headroom

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


class Coupling:
    """Validated complex coupling with its principal branch data.

    Attributes
    ----------
    c : complex
        The coupling constant; Re(c) > 0, or Re(c) = 0 with Im(c) > 0 (the
        purely imaginary boundary case, where Re(sqrt_c) > 0 still holds and
        the eigenfunctions still decay).
    sqrt_c : complex
        Principal square root; Re(sqrt_c) > 0.
    quarter_c : complex
        Principal fourth root; quarter_c**2 == sqrt_c.
    theta : float
        arg(c) in radians, in [0, pi/2] for the supported Im(c) >= 0 case.

    Couplings with Im(c) < 0 are rejected: all quantities for conj(c) are
    the conjugates of those for c, so callers should reduce to the upper
    half-plane first (see :func:`reduce_coupling`).
    """

    __slots__ = ("c", "sqrt_c", "quarter_c", "theta")

    def __init__(self, c):
        c = complex(c)
        if not math.isfinite(c.real) or not math.isfinite(c.imag):
            raise ValidationError(f"coupling must be finite, got {c!r}")
        if c.real < 0.0 or (c.real == 0.0 and c.imag <= 0.0):
            raise ValidationError(
                f"coupling must satisfy Re(c) > 0 (or Re(c) = 0 with Im(c) > 0), got {c!r}"
            )
        if c.imag < 0.0:
            raise ValidationError(
                f"coupling {c!r} has Im(c) < 0; compute with the conjugate "
                "coupling and conjugate the results (see reduce_coupling)"
            )
        self.c = c
        self.sqrt_c = cmath.sqrt(c)
        self.quarter_c = cmath.sqrt(self.sqrt_c)
        self.theta = cmath.phase(c)

    @property
    def is_selfadjoint(self):
        return self.c.imag == 0.0

    def __repr__(self):
        return f"Coupling({self.c!r})"

    def __eq__(self, other):
        return isinstance(other, Coupling) and self.c == other.c

    def __hash__(self):
        return hash(self.c)


def reduce_coupling(c):
    """Map any admissible coupling into the supported upper half-plane.

    Returns ``(coupling, conjugated)``.  When ``conjugated`` is True the
    caller asked about conj(coupling.c); every spectral quantity for that
    coupling is the complex conjugate of the one computed here.
    """
    c = complex(c)
    if c.imag < 0.0:
        return Coupling(c.conjugate()), True
    return Coupling(c), False


@dataclass(frozen=True)
class Sector:
    """Angular sector of the complex plane, vertex at the origin.

    ``closed_edges`` says whether the lower/upper boundary rays belong to
    the sector; ``excludes_origin`` removes the vertex itself.
    """

    lower: float
    upper: float
    closed_edges: tuple
    excludes_origin: bool

    def __post_init__(self):
        if not (-math.pi / 2 - 1e-15 <= self.lower < self.upper <= math.pi / 2 + 1e-15):
            raise ValidationError(
                f"sector angles must satisfy -pi/2 <= lower < upper <= pi/2, "
                f"got ({self.lower}, {self.upper})"
            )

    def contains(self, z, angle_tol=1e-12):
        """Membership test for a complex number, with edge tolerance in radians."""
        z = complex(z)
        if z == 0:
            return not self.excludes_origin
        a = cmath.phase(z)
        lo_ok = a > self.lower + angle_tol or (
            self.closed_edges[0] and a >= self.lower - angle_tol
        )
        hi_ok = a < self.upper - angle_tol or (
            self.closed_edges[1] and a <= self.upper + angle_tol
        )
        return lo_ok and hi_ok


@dataclass(frozen=True)
class EigenData:
    """Eigenvalue record: lambda_n = sqrt_c * (2n + 1)."""

    n: int
    lambda_n: complex


@dataclass(frozen=True)
class NumericalRangePoint:
    """Decomposition z = t1 + c*t2 together with its membership class."""

    t1: float
    t2: float
    z: complex
    classification: str

    @property
    def member(self):
        return self.classification != EXTERIOR


def eigenvalue(coupling, n):
    """n-th eigenvalue sqrt(c) * (2n + 1); all lie on the ray arg z = theta/2."""
    n = _check_index(n)
    return coupling.sqrt_c * (2 * n + 1)


def eigenvalues(coupling, count):
    """The first ``count`` eigenvalues as a complex array."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    return coupling.sqrt_c * (2 * np.arange(count) + 1)


def eigen_data(coupling, n):
    n = _check_index(n)
    return EigenData(n, eigenvalue(coupling, n))


def _check_index(n):
    if n != int(n) or n < 0:
        raise ValidationError(f"eigenvalue index must be a nonnegative integer, got {n!r}")
    return int(n)


def hermite_log(n, w):
    """Physicists' Hermite polynomial H_n at complex w, in log form.

    Returns ``(log_abs, phase)`` with H_n(w) = exp(log_abs + i*phase).
    The three-term recurrence is rescaled on the fly, so degrees up to
    :data:`MAX_HERMITE_DEGREE` stay representable where the raw values
    would overflow near n ~ 150.
    """
    n = _check_index(n)
    if n > MAX_HERMITE_DEGREE:
        raise ValidationError(f"Hermite degree {n} exceeds supported maximum {MAX_HERMITE_DEGREE}")
    w = complex(w)
    if n == 0:
        return 0.0, 0.0
    h_prev = 1.0 + 0.0j
    h_cur = 2.0 * w
    shift = 0.0
    for k in range(1, n):
        h_next = 2.0 * w * h_cur - 2.0 * k * h_prev
        h_prev, h_cur = h_cur, h_next
        mag = max(abs(h_prev), abs(h_cur))
        if mag > 1e130:
            h_prev /= mag
            h_cur /= mag
            shift += math.log(mag)
    if h_cur == 0:
        return -math.inf, 0.0
    return math.log(abs(h_cur)) + shift, cmath.phase(h_cur)


def hermite_log_grid(n, w):
    """Vectorized :func:`hermite_log` over an array of complex arguments."""
    n = _check_index(n)
    if n > MAX_HERMITE_DEGREE:
        raise ValidationError(f"Hermite degree {n} exceeds supported maximum {MAX_HERMITE_DEGREE}")
    w = np.asarray(w, dtype=complex)
    if n == 0:
        return np.zeros(w.shape), np.zeros(w.shape)
    h_prev = np.ones_like(w)
    h_cur = 2.0 * w
    shift = np.zeros(w.shape)
    for k in range(1, n):
        h_next = 2.0 * w * h_cur - 2.0 * k * h_prev
        h_prev, h_cur = h_cur, h_next
        mag = np.maximum(np.abs(h_prev), np.abs(h_cur))
        big = mag > 1e130
        if np.any(big):
            h_prev[big] /= mag[big]
            h_cur[big] /= mag[big]
            shift[big] += np.log(mag[big])
    absval = np.abs(h_cur)
    with np.errstate(divide="ignore"):
        log_abs = np.where(absval > 0, np.log(np.where(absval > 0, absval, 1.0)), -np.inf)
    return log_abs + shift, np.angle(h_cur)


def eigenfunction_log_eval(coupling, n, x):
    """Eigenfunction Psi_n(x) = c^(1/8) H_n(c^(1/4) x) exp(-sqrt(c) x^2 / 2),
    returned as ``(log_abs, phase)``.

    Evaluating in exponent space keeps degrees up to ~200 and |x| up to ~40
    representable; the combined value often is even where H_n alone is not.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("x must be finite")
    log_h, phase_h = hermite_log(n, coupling.quarter_c * x)
    log_c8 = math.log(abs(coupling.c)) / 8.0
    phase_c8 = coupling.theta / 8.0
    expo = -coupling.sqrt_c * x * x / 2.0
    return log_c8 + log_h + expo.real, phase_c8 + phase_h + expo.imag


def eigenfunction_eval(coupling, n, x):
    """Eigenfunction value Psi_n(x) as a complex number.

    Raises :class:`OverflowGuardError` if the log-magnitude exceeds the
    representable double range; deep tails underflow to 0.0.
    """
    log_abs, phase = eigenfunction_log_eval(coupling, n, x)
    if log_abs > _LOG_MAX:
        raise OverflowGuardError(
            f"|Psi_{n}({x})| has log-magnitude {log_abs:.1f}, beyond double range"
        )
    if log_abs == -math.inf:
        return 0.0 + 0.0j
    return cmath.rect(math.exp(log_abs), phase)


def eigenfunction_grid(coupling, n, xs):
    """Vectorized eigenfunction values over a real grid (complex array)."""
    xs = np.asarray(xs, dtype=float)
    log_h, phase_h = hermite_log_grid(n, coupling.quarter_c * xs)
    expo = -coupling.sqrt_c * xs * xs / 2.0
    log_abs = math.log(abs(coupling.c)) / 8.0 + log_h + expo.real
    if np.any(log_abs > _LOG_MAX):
        raise OverflowGuardError("eigenfunction grid values exceed double range")
    phase = coupling.theta / 8.0 + phase_h + expo.imag
    out = np.exp(log_abs) * np.exp(1j * phase)
    out[log_abs == -math.inf] = 0.0
    return out


def pairing_normalization(n):
    """Exact bilinear self-pairing integral of Psi_n Psi_n dx = 2^n n! sqrt(pi).

    Independent of c: rotating the integration contour reduces the pairing
    (no conjugation) to the classical real-line Hermite orthogonality.
    """
    n = _check_index(n)
    return float(2.0**n) * math.factorial(n) * math.sqrt(math.pi)


def biorthogonal_pairing(coupling, n, m, n_nodes=180):
    """Bilinear pairing integral of Psi_n(x) Psi_m(x) dx on a Gauss-Hermite grid.

    The grid is rescaled so the Gaussian decay of the integrand matches the
    e^{-u^2} weight; the known diagonal is :func:`pairing_normalization`,
    the off-diagonal vanishes (complex-symmetric biorthogonality).
    """
    nodes, weights = np.polynomial.hermite.hermgauss(n_nodes)
    sigma = 1.0 / math.sqrt(coupling.sqrt_c.real)
    xs = sigma * nodes
    vals = eigenfunction_grid(coupling, n, xs) * eigenfunction_grid(coupling, m, xs)
    # remove the implicit e^{-u^2} weight, reinstate the true integrand
    return sigma * np.sum(weights * np.exp(nodes**2) * vals)


def range_decompose(coupling, z):
    """Solve z = t1 + c*t2 for real (t1, t2); needs Im(c) != 0 for uniqueness."""
    if coupling.c.imag == 0.0:
        raise DegenerateCouplingError(
            "z = t1 + c*t2 is not a unique real decomposition for real c"
        )
    z = complex(z)
    t2 = z.imag / coupling.c.imag
    t1 = z.real - coupling.c.real * t2
    return t1, t2


def numerical_range_point(coupling, z, tol_scale=1e-9):
    """Classify z against Num(H_c) = {t1 + c t2 : t1, t2 >= 0, t1 t2 >= 1/4}.

    The boundary band is |t1*t2 - 1/4| <= tol_scale * max(1, |z|^2), a
    scale-aware absolute/relative blend.
    """
    z = complex(z)
    t1, t2 = range_decompose(coupling, z)
    band = tol_scale * max(1.0, abs(z) ** 2)
    prod = t1 * t2 - 0.25
    if t1 > 0.0 and t2 > 0.0 and abs(prod) <= band:
        cls = BOUNDARY
    elif t1 > 0.0 and t2 > 0.0 and prod > 0.0:
        cls = INTERIOR
    else:
        cls = EXTERIOR
    return NumericalRangePoint(t1, t2, z, cls)


def numerical_range_membership(coupling, z, tol_scale=1e-9):
    """Return "interior", "boundary" or "exterior" for z against Num(H_c)."""
    return numerical_range_point(coupling, z, tol_scale).classification


def numerical_range_boundary(coupling, t):
    """Boundary parameterization t + c/(4t); sweeping t > 0 traces the boundary."""
    t = float(t)
    if t <= 0.0:
        raise ValidationError(f"boundary parameter must be positive, got {t}")
    return t + coupling.c / (4.0 * t)


def symmetry_reflect(coupling, z):
    """Reflection e^{i theta} conj(z) about the spectral axis arg z = theta/2.

    The resolvent norm of H_c is invariant under this involution.
    """
    return cmath.exp(1j * coupling.theta) * complex(z).conjugate()


def maximal_sector(coupling):
    """Maximal angular sector of semigroup parameters tau for exp(-H_c tau).

    For Im(c) > 0 the closed sector [-pi/2, pi/2 - theta] minus the origin;
    for real c the open sector (-pi/2, pi/2).
    """
    if coupling.c.imag > 0.0:
        return Sector(
            lower=-math.pi / 2.0,
            upper=math.pi / 2.0 - coupling.theta,
            closed_edges=(True, True),
            excludes_origin=True,
        )
    return Sector(
        lower=-math.pi / 2.0,
        upper=math.pi / 2.0,
        closed_edges=(False, False),
        excludes_origin=True,
    )
