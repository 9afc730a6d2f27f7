"""
Constant chain between the equivalent sub-Weibull characterisations,
empirical property audit, and concentration bounds for sums.

The four characterisations of a sub-Weibull(theta) variable are

1. tails:    P(|X| >= x) <= 2 exp(-(x/K1)^(1/theta))
2. moments:  ||X||_k <= K2 k^theta for k >= 1
3. MGF:      E exp((lam|X|)^(1/theta)) <= exp((lam K3)^(1/theta)), 0 < lam <= 1/K3
4. MGF at a point: E exp((|X|/K4)^(1/theta)) <= 2

and the constants are linked by K3 = K2 (2e/theta)^theta,
K4 >= K3 / (ln 2)^theta and K1 = K4.

The moment-to-MGF step is only sound for theta <= 2e: the constant X = 1
has K2 = 1 at every theta, but needs K3 >= 1 while (2e/theta)^theta < 1
beyond 2e. ``CHAIN_THETA_MAX`` marks that limit; audits above it are still
computed and flagged through ``details["chain_valid"]``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateSampleError, DomainError, ValidityError
from .moments import (
    MomentGrowthFit,
    fit_theta_from_moments,
    moment_constant,
    moment_growth_profile,
)
from .sampling import SampleSet

__all__ = [
    "CHAIN_THETA_MAX",
    "ConstantChain",
    "AuditReport",
    "chain_from_K2",
    "calibrate_K4",
    "empirical_mgf",
    "property_audit",
    "K_theta_from_sample",
    "sum_tail_bound",
    "confidence_radius",
    "boucheron_bound",
]

LN2 = math.log(2.0)
CHAIN_THETA_MAX = 2.0 * math.e


def _pos(name: str, v: float) -> float:
    v = float(v)
    if not (math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be finite and positive, got {v!r}")
    return v


@dataclass(frozen=True)
class ConstantChain:
    K1: float
    K2: float
    K3: float
    K4: float
    theta: float

    def to_dict(self) -> dict:
        return asdict(self)


def chain_from_K2(K2: float, theta: float) -> ConstantChain:
    """Propagate a moment constant through the MGF and tail properties.

    K4 takes its minimal admissible value K3 / (ln 2)^theta.
    """
    K2 = _pos("K2", K2)
    theta = _pos("theta", theta)
    K3 = K2 * (2.0 * math.e / theta) ** theta
    K4 = K3 / LN2**theta
    return ConstantChain(K1=K4, K2=K2, K3=K3, K4=K4, theta=theta)


def _abs(s) -> np.ndarray:
    v = s.values if isinstance(s, SampleSet) else np.asarray(s, dtype=float).ravel()
    return np.abs(v)


def empirical_mgf(s, K: float, theta: float) -> float:
    """Sample mean of ``exp((|Y|/K)^(1/theta))``; ``inf`` on overflow."""
    a = _abs(s)
    with np.errstate(over="ignore"):
        return float(np.mean(np.exp((a / K) ** (1.0 / theta))))


def calibrate_K4(s, theta: float, rtol: float = 1e-9) -> float:
    """Smallest K with sample mean of ``exp((|Y|/K)^(1/theta))`` at most 2.

    The mean is continuous and strictly decreasing in K, so bisection on
    ``log K`` converges to the unique root.
    """
    theta = _pos("theta", theta)
    a = _abs(s)
    m = float(a.max()) if a.size else 0.0
    if m == 0:
        raise DegenerateSampleError("cannot calibrate K4 on an all-zero sample")
    # work on |Y|/max so the result is exactly homogeneous in the sample scale
    z = a / m

    def excess(c: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.mean(np.exp((z / c) ** (1.0 / theta)))) - 2.0

    hi = 1.0 / LN2**theta
    while excess(hi) > 0:
        hi *= 2.0
    lo = hi / 2.0
    while excess(lo) <= 0:
        lo /= 2.0
    # invariant: excess(lo) > 0 >= excess(hi)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return m * hi


@dataclass
class AuditReport:
    theta: float
    K2_hat: float
    K4_hat: float
    tail_ok: bool
    moment_ok: bool
    mgf_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return self.tail_ok and self.moment_ok and self.mgf_ok

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "K2_hat": self.K2_hat,
            "K4_hat": self.K4_hat,
            "tail_ok": self.tail_ok,
            "moment_ok": self.moment_ok,
            "mgf_ok": self.mgf_ok,
            "details": self.details,
        }


def property_audit(s, theta: float, *, fit: MomentGrowthFit | None = None) -> AuditReport:
    """Evaluate the tail, moment and MGF characterisations on a sample.

    ``K2_hat`` is the upper equivalence constant of the moment-growth fit,
    ``max_k ||X||_k / k^theta_hat``, which does not depend on the audited
    ``theta``; every check therefore becomes easier as ``theta`` grows.

    * moment_ok: ``||X||_k <= K2_hat k^theta`` on every reliable order.
    * mgf_ok: the calibrated K4 is finite and the point-MGF inequality holds
      at the chain's K4 (i.e. ``K4_hat <= K4``).
    * tail_ok: empirical ``P(|X| >= x) <= 2 exp(-(x/K1)^(1/theta))`` at every
      sample point, with K1 from the chain.

    Margins are reported as ``log(bound/observed)`` style slacks; negative
    means violated.
    """
    theta = _pos("theta", theta)
    a = _abs(s)
    n = a.size
    if n < 100:
        raise DomainError(f"the audit needs at least 100 observations, got {n}")
    if float(a.max()) == 0:
        raise DegenerateSampleError("cannot audit an all-zero sample")

    profile = moment_growth_profile(a)
    if fit is None:
        fit = fit_theta_from_moments(profile)
    K2_hat = fit.ratio_max
    chain = chain_from_K2(K2_hat, theta)

    sel = profile.reliable & (profile.orders >= 1)
    if not np.any(sel):
        sel = profile.orders >= 1
    k = profile.orders[sel]
    log_slack = np.log(K2_hat * k**theta) - np.log(profile.norms[sel])
    # the tolerance absorbs the last-ulp rounding where the bound is attained
    moment_ok = bool(np.all(log_slack >= -1e-12))

    K4_hat = calibrate_K4(a, theta)
    mgf_ok = bool(math.isfinite(K4_hat) and K4_hat <= chain.K4)

    x = np.sort(a)[::-1]
    # P(|X| >= x_(j)) for the j-th largest value, ties counted fully
    surv = np.searchsorted(-x, -x, side="right") / n
    with np.errstate(over="ignore", divide="ignore"):
        bound = 2.0 * np.exp(-((x / chain.K1) ** (1.0 / theta)))
        tail_slack = np.log(bound) - np.log(surv)
    tail_ok = bool(np.all(surv <= bound))

    details = {
        "theta_hat": fit.theta_hat,
        "orders_checked": k.tolist(),
        "moment_min_log_slack": float(log_slack.min()),
        "mgf_log_slack": float(math.log(chain.K4 / K4_hat)),
        "tail_min_log_slack": float(np.min(tail_slack)),
        "chain": chain.to_dict(),
        "chain_valid": theta <= CHAIN_THETA_MAX,
    }
    return AuditReport(theta, K2_hat, K4_hat, tail_ok, moment_ok, mgf_ok, details)


def K_theta_from_sample(s, theta: float) -> float:
    """``e * K2`` with K2 the smallest moment constant at ``theta`` on the reliable orders."""
    profile = moment_growth_profile(s)
    if np.all(profile.norms == 0):
        raise DegenerateSampleError("cannot derive K_theta from an all-zero sample")
    return math.e * moment_constant(profile, theta)


def _bound_args(n, theta, K_theta) -> tuple[int, float, float]:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n), _pos("theta", theta), _pos("K_theta", K_theta)


def sum_tail_bound(x: float, n: int, theta: float, K_theta: float) -> float:
    """Bound ``exp(-(x/(n K_theta))^(1/theta))`` on ``P(|sum| >= x)``; needs x >= n K_theta."""
    n, theta, K_theta = _bound_args(n, theta, K_theta)
    x = float(x)
    if math.isnan(x):
        raise DomainError("x is NaN")
    if x < n * K_theta:
        raise ValidityError(f"the sum bound only holds for x >= n*K_theta = {n * K_theta}, got x={x}")
    return math.exp(-((x / (n * K_theta)) ** (1.0 / theta)))


def confidence_radius(alpha: float, n: int, theta: float, K_theta: float) -> float:
    """``n K_theta (log 1/alpha)^theta``: |sum| stays below it with probability >= 1 - alpha."""
    n, theta, K_theta = _bound_args(n, theta, K_theta)
    alpha = float(alpha)
    if not alpha > 0 or math.isnan(alpha):
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha >= 1.0 / math.e:
        raise ValidityError(f"the confidence statement needs alpha < 1/e, got {alpha}")
    return n * K_theta * math.log(1.0 / alpha) ** theta


def boucheron_bound(x: float, n: int, theta: float, K_theta: float) -> float:
    """``K exp(-(1/K) min(x^2/n, x^(1/theta) / n^((1-theta)/theta)))`` for theta <= 1.

    This is a bound, not a probability, and may exceed 1.
    """
    n, theta, K_theta = _bound_args(n, theta, K_theta)
    if theta > 1:
        raise ValidityError(f"this inequality requires theta <= 1, got {theta}")
    x = float(x)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    expo = min(x * x / n, x ** (1.0 / theta) / n ** ((1.0 - theta) / theta))
    return K_theta * math.exp(-expo / K_theta)
