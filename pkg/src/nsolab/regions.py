"""Region predicates and pseudospectra inclusion certificates.

Two region families enclose the small-epsilon pseudospectra:

* ``shifted_sector``: the open sector S(0, arg c) translated by
  delta * sqrt(c), 0 < delta < 1;
* ``sector_plus_disks``: the same sector translated by lambda_{m+1} - delta,
  united with open disks of radius delta around lambda_0 ... lambda_m.

A certificate realizes the existential "there is an epsilon" claim
constructively: epsilon = 0.9 / max{resolvent norm at reliable grid nodes
outside the region}, and then every reliable node with norm >= 1/epsilon
must lie inside.  All certificates are floating-point witnesses, not
interval-arithmetic proofs.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass

from . import spectral
from .errors import ValidationError

SHIFTED_SECTOR = "shifted_sector"
SECTOR_PLUS_DISKS = "sector_plus_disks"


@dataclass(frozen=True)
class InclusionRegion:
    """Predicate-ready region parameters.

    ``apex`` is the sector translation; ``theta`` its opening angle
    (= arg c); ``disks`` a tuple of (center, radius) pairs, empty for the
    plain shifted sector.
    """

    kind: str
    apex: complex
    theta: float
    delta: float
    m: int | None
    disks: tuple


def shifted_sector(coupling, delta):
    """S(0, arg c) + delta * sqrt(c); degenerate (empty) for real c."""
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must be in (0, 1), got {delta}")
    return InclusionRegion(kind=SHIFTED_SECTOR, apex=delta * coupling.sqrt_c,
                           theta=coupling.theta, delta=delta, m=None, disks=())


def sector_plus_disks(coupling, m, delta):
    """[S(0, arg c) + (lambda_{m+1} - delta)] union delta-disks at
    lambda_0 ... lambda_m."""
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must be in (0, 1), got {delta}")
    if m < 0:
        raise ValidationError("m must be >= 0")
    apex = spectral.eigenvalue(coupling, m + 1) - delta
    disks = tuple((spectral.eigenvalue(coupling, n), delta) for n in range(m + 1))
    return InclusionRegion(kind=SECTOR_PLUS_DISKS, apex=apex, theta=coupling.theta,
                           delta=delta, m=int(m), disks=disks)


def region_contains(region, z):
    """Exact geometric membership: open-sector angle test after the shift,
    plus open-disk distance tests."""
    z = complex(z)
    w = z - region.apex
    if w != 0:
        ang = cmath.phase(w)
        if 0.0 < ang < region.theta:
            return True
    return any(abs(z - center) < radius for center, radius in region.disks)


@dataclass(eq=False)
class Certificate:
    epsilon: float
    region: InclusionRegion
    holds: bool
    violations: list  # (re, im, norm) per violating node
    n_reliable: int


def certificate_epsilon(grid, region, safety=0.9):
    """Constructive witness: safety / max{norm at reliable nodes outside}.

    Raises if the grid has no reliable nodes outside the region (nothing to
    calibrate against).
    """
    outside = [s.norm for s in grid.samples
               if s.reliable and not region_contains(region, s.z)]
    finite = [v for v in outside if v == v and v != float("inf")]
    if not finite:
        raise ValidationError("no reliable finite nodes outside the region")
    return safety / max(finite)


def inclusion_certificate(grid, region, epsilon):
    """Check that every reliable node with norm >= 1/epsilon lies in the
    region; violating nodes are listed for diagnosis."""
    epsilon = float(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    reliable = [s for s in grid.samples if s.reliable]
    if not reliable:
        raise ValidationError("grid has no reliable samples")
    threshold = 1.0 / epsilon
    violations = []
    for s in reliable:
        if s.norm >= threshold and not region_contains(region, s.z):
            violations.append((s.z.real, s.z.imag, s.norm))
    return Certificate(epsilon=epsilon, region=region, holds=not violations,
                       violations=violations, n_reliable=len(reliable))


def certificate_to_json(cert, path):
    """Write a certificate as JSON:
    ``{"epsilon", "region", "holds", "violations"}``."""
    region = {
        "kind": cert.region.kind,
        "apex": [cert.region.apex.real, cert.region.apex.imag],
        "theta": cert.region.theta,
        "delta": cert.region.delta,
        "m": cert.region.m,
        "disks": [[c.real, c.imag, r] for c, r in cert.region.disks],
    }
    payload = {
        "epsilon": cert.epsilon,
        "region": region,
        "holds": cert.holds,
        "violations": [list(v) for v in cert.violations],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")
