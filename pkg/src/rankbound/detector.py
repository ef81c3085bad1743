"""Zero detection in boxes: the explicit counting identity and its weight.

For a function h(s) = 1 - c0 exp(-rate s), everything is known in closed
form: zeros, boundary values, decay.  lemma6_check evaluates both sides of
the weighted counting identity on such an h over a box and returns the
residual; the randomized family built on it is the package's evidence that
the identity (and hence the detector inequality derived from it) is coded
correctly.  density_main_term and zt_bound assemble the averaged counting
weight those detections feed into.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .quadrature import DEFAULT_TOL, IntegrationDomain, Measure, integrate

__all__ = [
    "SyntheticH",
    "DetectorBox",
    "MU",
    "lemma6_check",
    "detector_weight",
    "shrunk_box",
    "density_main_term",
    "zt_bound",
]

# Enlargement margin mu of the detection box: 2 mu + 1 = pi, the smallest
# aspect for which the corner weight stays >= 1.
MU = 0.5 * (math.pi - 1.0)


@dataclass(frozen=True)
class SyntheticH:
    """h(s) = 1 - c0 exp(-rate s): zeros on a vertical line, explicit decay."""

    c0: float
    rate: float

    def __post_init__(self) -> None:
        if math.isnan(self.c0) or self.c0 < 0.0:
            raise ValueError("c0 must be nonnegative")
        if math.isnan(self.rate) or self.rate <= 0.0:
            raise ValueError("rate must be positive")

    def log_abs(self, x: float, y: float) -> float:
        """log |h(x + i y)|, via log1p for accuracy when h is near 1."""
        w = self.c0 * math.exp(-self.rate * x)
        if w == 0.0:
            return 0.0
        return 0.5 * math.log1p(w * (w - 2.0 * math.cos(self.rate * y)))

    def zeros_in(self, t_lo: float, t_hi: float) -> list[tuple[float, float]]:
        """All zeros x0 + i y with t_lo <= y <= t_hi (x0 = log(c0)/rate)."""
        if self.c0 == 0.0:
            return []
        x0 = math.log(self.c0) / self.rate
        step = 2.0 * math.pi / self.rate
        k_lo = math.ceil(t_lo / step - 1e-12)
        k_hi = math.floor(t_hi / step + 1e-12)
        return [(x0, k * step) for k in range(k_lo, k_hi + 1)]


@dataclass(frozen=True)
class DetectorBox:
    """Right half-strip corner: sigma >= sigma_prime, t1 <= t <= t2."""

    sigma_prime: float
    t1: float
    t2: float

    def __post_init__(self) -> None:
        if not self.t2 > self.t1:
            raise ValueError("need t2 > t1")

    @property
    def width(self) -> float:
        return self.t2 - self.t1


def _boundary_distance(box: DetectorBox, x: float, y: float) -> float:
    """Distance from (x, y) to the three boundary pieces of the box."""
    # vertical segment {sigma'} x [t1, t2]
    dy = 0.0 if box.t1 <= y <= box.t2 else min(abs(y - box.t1), abs(y - box.t2))
    d_seg = math.hypot(x - box.sigma_prime, dy)
    # horizontal rays [sigma', inf) x {t1} and {t2}
    dx = 0.0 if x >= box.sigma_prime else box.sigma_prime - x
    d_low = math.hypot(dx, y - box.t1)
    d_high = math.hypot(dx, y - box.t2)
    return min(d_seg, d_low, d_high)


def lemma6_check(h: SyntheticH, box: DetectorBox, tol: float = 1e-9) -> tuple[float, float, float]:
    """Both sides of the weighted zero-counting identity, and their residual.

    Left side: 2 (t2 - t1) sum over zeros beta + i gamma strictly inside the
    box of sin(pi (gamma - t1)/w) sinh(pi (beta - sigma')/w), w = t2 - t1.
    Right side: the sin-weighted integral of log|h| up the segment plus the
    sinh-weighted integrals of log|h| along both rays.

    Preconditions enforced: rate > pi / w (otherwise the ray integrals do not
    converge absolutely and the identity is void) and no zero within 1e-6 of
    the boundary (the identity is discontinuous across it, so near-boundary
    configurations are rejected rather than silently misclassified).
    """
    w = box.width
    if h.c0 == 0.0:
        # log|h| vanishes identically: both sides are zero.
        return (0.0, 0.0, 0.0)
    if h.rate <= math.pi / w:
        raise ValueError(
            f"decay hypothesis violated: rate {h.rate} <= pi/(t2 - t1) = {math.pi / w:.6g}"
        )

    x0 = math.log(h.c0) / h.rate
    nearby = h.zeros_in(box.t1 - 1.0, box.t2 + 1.0)
    for bx, by in nearby:
        if _boundary_distance(box, bx, by) < 1e-6:
            raise ValueError(
                f"zero at {bx:.9g} + {by:.9g}i lies within 1e-6 of the box boundary"
            )

    lhs = 0.0
    for bx, by in nearby:
        if bx > box.sigma_prime and box.t1 < by < box.t2:
            lhs += (
                2.0
                * w
                * math.sin(math.pi * (by - box.t1) / w)
                * math.sinh(math.pi * (bx - box.sigma_prime) / w)
            )

    seg_cuts = [by for _, by in nearby if box.t1 < by < box.t2]
    seg = integrate(
        lambda t: math.sin(math.pi * (t - box.t1) / w) * h.log_abs(box.sigma_prime, t),
        IntegrationDomain(box.t1, box.t2),
        tol,
        breakpoints=seg_cuts,
    ).value

    # The ray integrand is sinh(pi (beta - sigma')/w) * (log|h| at both ray
    # heights); it decays like exp(-(rate - pi/w) beta).  Truncate where the
    # envelope is at least exp(-80) below its start, never closer than
    # 400/rate past sigma'.
    margin = h.rate - math.pi / w
    hi = box.sigma_prime + max(
        400.0 / h.rate,
        (80.0 + max(0.0, math.log(h.c0)) + h.rate * abs(box.sigma_prime)) / margin,
    )

    # Far out, log|h| shrinks like c0 exp(-rate beta) while sinh grows like
    # exp(pi beta / w); the product stays meaningful long after log|h| itself
    # underflows in doubles.  Past log(c0) - rate beta < -300 the quadratic
    # term of log1p is below 1e-260 relative, so log|h(beta, t1)| +
    # log|h(beta, t2)| = -(cos(rate t1) + cos(rate t2)) c0 exp(-rate beta)
    # exactly to double precision, and that product is taken in log space.
    cos_sum = math.cos(h.rate * box.t1) + math.cos(h.rate * box.t2)
    log_c0 = math.log(h.c0)

    def ray_integrand(beta: float) -> float:
        arg = math.pi * (beta - box.sigma_prime) / w
        if arg <= 0.0:
            return 0.0
        logs = log_c0 - h.rate * beta
        if logs > -300.0:
            la = h.log_abs(beta, box.t1) + h.log_abs(beta, box.t2)
            if la == 0.0:
                return 0.0
            if arg < 700.0:
                return math.sinh(arg) * la
            # sinh ~ exp/2 here; keep the product in log space
            return math.copysign(math.exp(arg + math.log(0.5 * abs(la))), la)
        if cos_sum == 0.0:
            return 0.0
        log_sinh = arg - math.log(2.0) if arg > 40.0 else math.log(math.sinh(arg))
        log_mag = log_sinh + logs + math.log(abs(cos_sum))
        if log_mag < -740.0:
            return 0.0
        return -math.copysign(math.exp(log_mag), cos_sum)

    ray_cuts = [x0] if box.sigma_prime < x0 < hi else []
    rays = integrate(
        ray_integrand, IntegrationDomain(box.sigma_prime, hi), tol, breakpoints=ray_cuts
    ).value

    rhs = seg + rays
    return (lhs, rhs, abs(lhs - rhs))


def shrunk_box(box: DetectorBox) -> tuple[float, float, float]:
    """(sigma, t1, t2) of the inner region whose zeros each weigh at least 1.

    The enlargement pulls sigma' back by w/(2 pi) and each t-edge in by
    mu w / pi, so a zero in the inner region sits far enough from the
    enlarged boundary that its sin and sinh factors clear the corner value.
    """
    w = box.width
    lam = math.pi / w
    return (
        box.sigma_prime + 0.5 / lam,
        box.t1 + MU / lam,
        box.t2 - MU / lam,
    )


def detector_weight(box: DetectorBox, beta: float, gamma: float) -> float:
    """Normalized counting weight of a zero beta + i gamma of the enlarged box.

    (lambda / (pi sin(pi mu/(2 mu + 1)))) * 2 w sinh(pi (beta - sigma')/w)
    * sin(pi (gamma - t1)/w) with lambda = pi/w.  For zeros inside the shrunk
    box this is >= 1, with the minimum 2 sinh(1/2)/... attained at the corners.
    """
    w = box.width
    lam = math.pi / w
    norm = math.pi * math.sin(math.pi * MU / (2.0 * MU + 1.0)) / lam
    return (
        2.0
        * w
        * math.sinh(math.pi * (beta - box.sigma_prime) / w)
        * math.sin(math.pi * (gamma - box.t1) / w)
        / norm
    )


def density_main_term(a: float, u: float) -> float:
    """(a^2/(1-a)^2) (F(1, u) - F(a, u)): the per-height density the detected
    zeros are averaged against."""
    if math.isnan(a) or not 0.0 < a < 1.0:
        raise ValueError("need a in (0, 1)")
    if math.isnan(u) or u <= 0.0:
        raise ValueError("need u > 0")
    pref = a * a / ((1.0 - a) * (1.0 - a))
    return pref * (kernels.big_f(1.0, u) - kernels.big_f(a, u))


def zt_bound(a: float, psi: Measure, tol: float = DEFAULT_TOL) -> float:
    """The integrated form: (a^2/(1-a)^2) (G_psi(1) - G_psi(a))."""
    if math.isnan(a) or not 0.0 < a < 1.0:
        raise ValueError("need a in (0, 1)")
    pref = a * a / ((1.0 - a) * (1.0 - a))
    return pref * (kernels.g_psi(1.0, psi, tol) - kernels.g_psi(a, psi, tol))
