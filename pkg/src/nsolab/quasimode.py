"""JWKB quasi-modes certifying resolvent blow-up inside the numerical range.

A quasi-mode is f_eta = g * Phi with Phi = exp(-Psi), Psi a cubic phase
polynomial centered at x0 = alpha*sqrt(eta), and g a smooth cutoff on
|x - x0| <= 2*eta^(gamma/6).  Then

    H_c f - z f = g * p * Phi - 2 g' Phi' - g'' Phi

for an explicit quartic p(s) and pseudo-eigenvalue z, so the residual ratio
||H_c f - z f|| / ||f|| certifies the lower bound ||(H_c - z)^{-1}|| >= 1/ratio
with nothing but quadrature error.  The ratio tends to zero as eta grows,
and ||f_eta||^2 scales like eta^((gamma-1)/4).

All magnitudes are handled in exponent space (log|.| plus phase): a naive
evaluation of Phi overflows doubles beyond eta ~ 1e3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import panel_integrate
from .errors import QuadratureError, ValidationError

_T_SAMPLES = np.linspace(0.0, 2.0, 201)


@dataclass(frozen=True)
class QuasimodeParams:
    """Coupling (Im(c) > 0 required), bump location alpha > 0, envelope
    exponent gamma in [1, 3), and scale parameter eta > 0."""

    coupling: object
    alpha: float
    gamma: float
    eta: float

    def __post_init__(self):
        if self.coupling.c.imag <= 0:
            raise ValidationError("quasi-mode construction needs Im(c) > 0")
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if not 1.0 <= self.gamma < 3.0:
            raise ValidationError(f"gamma must lie in [1, 3), got {self.gamma}")
        if not self.eta > 0:
            raise ValidationError(f"eta must be positive, got {self.eta}")

    @property
    def x0(self):
        return self.alpha * math.sqrt(self.eta)

    @property
    def delta0(self):
        return self.gamma / 6.0

    @property
    def z_eta(self):
        """Pseudo-eigenvalue alpha^2 eta^gamma + c alpha^2 eta - i c eta^((1-gamma)/2).

        The sign of the i*c term is forced by the phase coefficients: it is
        the constant term of Psi'' - (Psi')^2 + c x^2 at s = 0, i.e. psi2
        - psi1^2 + c x0^2.  (A finite-difference check pins this down in
        the test suite.)
        """
        c = self.coupling.c
        a2 = self.alpha**2
        return (a2 * self.eta**self.gamma + c * a2 * self.eta
                - 1j * c * self.eta ** ((1.0 - self.gamma) / 2.0))

    @property
    def r_inner(self):
        return self.eta**self.delta0

    @property
    def r_outer(self):
        return 2.0 * self.eta**self.delta0


@dataclass(frozen=True)
class PhasePolynomial:
    """Coefficients of Psi(x0 + s) = psi1 s + psi2 s^2/2 + psi3 s^3/3."""

    psi1: complex
    psi2: complex
    psi3: complex

    @classmethod
    def from_params(cls, params):
        c = params.coupling.c
        a, g, eta = params.alpha, params.gamma, params.eta
        psi1 = 1j * a * eta ** (g / 2.0)
        psi2 = -1j * c * eta ** (0.5 - g / 2.0)
        psi3 = -1j * c / (2.0 * a) * eta ** (-g / 2.0) * (1.0 + c * eta ** (1.0 - g))
        return cls(psi1, psi2, psi3)

    def value(self, s):
        s = np.asarray(s, dtype=float)
        return self.psi1 * s + self.psi2 * s**2 / 2.0 + self.psi3 * s**3 / 3.0

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        return self.psi1 + self.psi2 * s + self.psi3 * s**2


@dataclass(frozen=True)
class ResidualPolynomial:
    """Coefficients of p(s) = c1 s + c3 s^3 + c4 s^4 (the s^2 term vanishes
    identically)."""

    c1: complex
    c3: complex
    c4: complex

    @classmethod
    def from_params(cls, params):
        c = params.coupling.c
        a, g, eta = params.alpha, params.gamma, params.eta
        u = c * eta ** (1.0 - g)
        c1 = -1j * c / a * eta ** (-g / 2.0) * (1.0 + u)
        c3 = c**2 / a * eta ** (0.5 - g) * (1.0 + u)
        c4 = c**2 / (4.0 * a**2) * eta ** (-g) * (1.0 + 2.0 * u + u**2)
        return cls(c1, c3, c4)

    def value(self, s):
        s = np.asarray(s, dtype=float)
        return self.c1 * s + self.c3 * s**3 + self.c4 * s**4


@dataclass(frozen=True)
class EnvelopeData:
    """|Phi(x0+s)|^2 = exp(-beta2 s^2 - beta3 s^3); both coefficients are
    positive when Im(c) > 0."""

    beta2: float
    beta3: float

    @classmethod
    def from_params(cls, params):
        c = params.coupling.c
        a, g, eta = params.alpha, params.gamma, params.eta
        beta2 = c.imag * eta ** (0.5 - g / 2.0)
        beta3 = c.imag * (1.0 + 2.0 * c.real * eta ** (1.0 - g)) / (3.0 * a) * eta ** (-g / 2.0)
        return cls(float(beta2), float(beta3))

    def log_sq(self, s):
        s = np.asarray(s, dtype=float)
        return -(self.beta2 * s**2 + self.beta3 * s**3)

    @property
    def minimum_location(self):
        """The envelope has a local maximum at s = 0 and a local minimum here."""
        return -2.0 * self.beta2 / (3.0 * self.beta3)


def _phi(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _phi_d1(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos]) / u[pos] ** 2
    return out


def _phi_d2(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos]) * (1.0 - 2.0 * u[pos]) / u[pos] ** 4
    return out


def _step(u):
    """Smooth step h = phi(u)/(phi(u)+phi(1-u)): 0 for u<=0, 1 for u>=1.

    Returns (h, h', h'') computed from the quotient identities
    h' = (A'D - A D')/D^2 and h'' = (A'' - 2h'D' - hD'')/D.
    """
    u = np.asarray(u, dtype=float)
    a = _phi(u)
    b = _phi(1.0 - u)
    d = a + b
    a1 = _phi_d1(u)
    b1 = -_phi_d1(1.0 - u)
    d1 = a1 + b1
    a2 = _phi_d2(u)
    d2 = a2 + _phi_d2(1.0 - u)
    h = a / d
    h1 = (a1 * d - a * d1) / d**2
    h2 = (a2 - 2.0 * h1 * d1 - h * d2) / d
    return h, h1, h2


class Cutoff:
    """Smooth cutoff in the centered variable s = x - x0.

    Identically 1 for |s| < r_inner, 0 for |s| > r_outer, with a mollifier
    transition built from the exp(-1/u) bump step; first and second
    derivatives are analytic.  ``q1`` and ``q2`` report the sampled
    sup-norm constants: |g'| <= q1 / width, |g''| <= q2 / width^2 with
    width = r_outer - r_inner.
    """

    def __init__(self, r_inner, r_outer, probe=4001):
        if not 0 < r_inner < r_outer:
            raise ValidationError("cutoff radii must satisfy 0 < r_inner < r_outer")
        self.r_inner = float(r_inner)
        self.r_outer = float(r_outer)
        self.width = self.r_outer - self.r_inner
        us = np.linspace(0.0, 1.0, probe)
        _, h1, h2 = _step(us)
        self.q1 = float(np.max(np.abs(h1)))
        self.q2 = float(np.max(np.abs(h2)))

    def _u(self, s):
        return (self.r_outer - np.abs(np.asarray(s, dtype=float))) / self.width

    def value(self, s):
        return _step(self._u(s))[0]

    def d1(self, s):
        s = np.asarray(s, dtype=float)
        return _step(self._u(s))[1] * (-np.sign(s) / self.width)

    def d2(self, s):
        return _step(self._u(s))[2] / self.width**2

    def __call__(self, s):
        return self.value(s)


def build_cutoff(delta0, eta):
    """Cutoff for the quasi-mode support: inner radius eta^delta0, outer
    radius 2*eta^delta0 (in the centered variable s = x - x0)."""
    if not eta > 0:
        raise ValidationError(f"eta must be positive, got {eta}")
    r = float(eta) ** float(delta0)
    return Cutoff(r, 2.0 * r)


def evaluate_quasimode(params, s):
    """Quasi-mode value f_eta(x0 + s) as ``(log_abs, phase)``.

    log|Phi| = -Re(Psi) and phase = -Im(Psi); the cutoff multiplies the
    magnitude (log 0 = -inf outside the support).  Exponent space cannot
    overflow for representable s.
    """
    phase_poly = PhasePolynomial.from_params(params)
    cutoff = build_cutoff(params.delta0, params.eta)
    psi = phase_poly.value(float(s))
    g = float(cutoff.value(float(s)))
    log_abs = -psi.real + (math.log(g) if g > 0 else -math.inf)
    return log_abs, -psi.imag


def envelope_log_magnitude(params, s):
    """log|Phi(x0+s)| without the cutoff (half the envelope log-square)."""
    return 0.5 * EnvelopeData.from_params(params).log_sq(s)


def envelope_dominates(params, t_samples=None):
    """Whether beta3 * r^3 t^3 <= beta2 * r^2 t^2 / 2 holds for all sampled
    t in [0, 2], with r = eta^delta0 (the cubic envelope term is dominated
    by the quadratic one on the cutoff support)."""
    env = EnvelopeData.from_params(params)
    r = params.eta**params.delta0
    t = _T_SAMPLES if t_samples is None else np.asarray(t_samples, dtype=float)
    lhs = env.beta3 * r**3 * t**3
    rhs = env.beta2 * r**2 * t**2 / 2.0
    return bool(np.all(lhs <= rhs + 1e-300))


def domination_threshold(coupling, alpha, gamma, eta_lo=1e-6, eta_hi=1e15):
    """Smallest eta (by bisection, to ~1e-3 relative) at which the envelope
    domination of :func:`envelope_dominates` holds; it then holds for every
    larger eta (the ratio is monotone for gamma in [1, 3))."""
    def ok(eta):
        return envelope_dominates(QuasimodeParams(coupling, alpha, gamma, eta))

    if ok(eta_lo):
        return float(eta_lo)
    if not ok(eta_hi):
        raise ValidationError("domination does not hold even at the upper probe")
    lo, hi = math.log(eta_lo), math.log(eta_hi)
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if ok(math.exp(mid)):
            hi = mid
        else:
            lo = mid
    return math.exp(hi)


@dataclass(eq=False)
class QuasimodeReport:
    """Norms, residual pieces and the certified resolvent lower bound."""

    params: QuasimodeParams
    norm_sq: float
    residual_norm: float
    ratio: float
    lower_bound: float
    pieces: tuple
    monomial_norms_sq: dict
    quad_error: float

    @property
    def z(self):
        return self.params.z_eta


def quasimode_report(params, rel_tol=1e-10, error_cap=1e-8):
    """Compute ||f_eta||^2, the residual and its three pieces by adaptive
    quadrature of exact analytic integrands.

    ``pieces`` are the norms of 2 g' Phi', g'' Phi, and the triangle bound
    sum_k |c_k| ||s^k g Phi||; the residual itself is assembled from the
    identity H(g Phi) - z g Phi = g p Phi - 2 g' Phi' - g'' Phi, so no
    numerical differentiation enters.  ``lower_bound = 1/ratio`` is a
    certified lower bound on the resolvent norm at z_eta up to the reported
    quadrature error.
    """
    env = EnvelopeData.from_params(params)
    phase_poly = PhasePolynomial.from_params(params)
    poly = ResidualPolynomial.from_params(params)
    cutoff = build_cutoff(params.delta0, params.eta)
    r_in, r_out = cutoff.r_inner, cutoff.r_outer

    gauss_width = 1.0 / math.sqrt(env.beta2)
    max_width = min(gauss_width / 4.0, cutoff.width / 6.0)
    breaks = (-r_in, 0.0, r_in)

    def integrate(tag, f):
        try:
            val, err = panel_integrate(f, -r_out, r_out, breakpoints=breaks,
                                       max_width=max_width, rel_tol=rel_tol)
        except QuadratureError as exc:
            raise QuadratureError(f"{tag}: {exc}")
        if val != 0 and err > error_cap * abs(val):
            raise QuadratureError(
                f"{tag}: estimated error {err:.2e} exceeds {error_cap:.0e} relative")
        return val, err

    def env_sq(s):
        return np.exp(env.log_sq(s))

    norm_sq, e0 = integrate("norm", lambda s: cutoff.value(s) ** 2 * env_sq(s))

    def residual_sq(s):
        g, g1, g2 = _cutoff_triple(cutoff, s)
        amp = g * poly.value(s) + 2.0 * g1 * phase_poly.derivative(s) - g2
        return np.abs(amp) ** 2 * env_sq(s)

    res_sq, e1 = integrate("residual", residual_sq)

    def piece1_sq(s):
        g1 = cutoff.d1(s)
        return 4.0 * g1**2 * np.abs(phase_poly.derivative(s)) ** 2 * env_sq(s)

    def piece2_sq(s):
        return cutoff.d2(s) ** 2 * env_sq(s)

    p1_sq, e2 = integrate("cutoff_gradient_piece", piece1_sq)
    p2_sq, e3 = integrate("cutoff_curvature_piece", piece2_sq)

    monomials = {}
    errs = [e0, e1, e2, e3]
    for k in (1, 3, 4):
        val, err = integrate(
            f"monomial[{k}]",
            lambda s, k=k: cutoff.value(s) ** 2 * s ** (2 * k) * env_sq(s),
        )
        monomials[k] = val
        errs.append(err)

    coeffs = {1: poly.c1, 3: poly.c3, 4: poly.c4}
    piece3 = sum(abs(coeffs[k]) * math.sqrt(max(monomials[k], 0.0)) for k in (1, 3, 4))
    pieces = (math.sqrt(max(p1_sq, 0.0)), math.sqrt(max(p2_sq, 0.0)), piece3)
    residual = math.sqrt(max(res_sq, 0.0))
    ratio = residual / math.sqrt(norm_sq)
    return QuasimodeReport(
        params=params,
        norm_sq=norm_sq,
        residual_norm=residual,
        ratio=ratio,
        lower_bound=1.0 / ratio,
        pieces=pieces,
        monomial_norms_sq=monomials,
        quad_error=float(sum(errs)),
    )


def _cutoff_triple(cutoff, s):
    s = np.asarray(s, dtype=float)
    u = cutoff._u(s)
    h, h1, h2 = _step(u)
    return h, h1 * (-np.sign(s) / cutoff.width), h2 / cutoff.width**2


@dataclass(eq=False)
class ScalingFit:
    """Least-squares scaling exponents across an eta sweep.

    ``exponent`` is the slope of log ||f||^2 vs log eta (target
    (gamma-1)/4); ``residual_exponents`` are slopes for the three residual
    pieces (the first two decay super-polynomially, so their slopes keep
    drifting downward); ``monomial_exponents[k]`` is the slope of
    log ||s^k g Phi||^2 (target (gamma-1)(2k+1)/4).
    """

    exponent: float
    residual_exponents: tuple
    monomial_exponents: dict
    threshold: float
    reports: list


def scaling_fit(coupling, alpha, gamma, eta_grid, rel_tol=1e-10):
    """Fit the norm and residual-piece scaling exponents over ``eta_grid``.

    The grid must be strictly increasing with at least 5 points, all above
    the envelope-domination threshold (reported in the result).
    """
    etas = np.asarray([float(e) for e in eta_grid])
    if etas.size < 5 or np.any(np.diff(etas) <= 0):
        raise ValidationError("eta grid must be strictly increasing with >= 5 points")
    threshold = domination_threshold(coupling, alpha, gamma)
    if etas[0] < threshold:
        raise ValidationError(
            f"eta grid starts below the envelope-domination threshold {threshold:.4g}")
    reports = [quasimode_report(QuasimodeParams(coupling, alpha, gamma, e),
                                rel_tol=rel_tol) for e in etas]
    log_eta = np.log(etas)

    def slope(values):
        vals = np.asarray(values, dtype=float)
        if np.any(vals <= 0):
            return -math.inf
        return float(np.polyfit(log_eta, np.log(vals), 1)[0])

    exponent = slope([r.norm_sq for r in reports])
    piece_slopes = tuple(slope([r.pieces[i] for r in reports]) for i in range(3))
    monomial_slopes = {k: slope([r.monomial_norms_sq[k] for r in reports])
                       for k in (1, 3, 4)}
    return ScalingFit(
        exponent=exponent,
        residual_exponents=piece_slopes,
        monomial_exponents=monomial_slopes,
        threshold=threshold,
        reports=reports,
    )


def sweep_to_csv(reports, path):
    """Write an eta sweep as CSV:
    ``eta,norm_sq,residual,ratio,lower_bound,piece1,piece2,piece3``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("eta,norm_sq,residual,ratio,lower_bound,piece1,piece2,piece3\n")
        for r in reports:
            row = [r.params.eta, r.norm_sq, r.residual_norm, r.ratio,
                   r.lower_bound, *r.pieces]
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
