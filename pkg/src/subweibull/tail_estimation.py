"""
Order-statistics regression estimator of the tail parameter.

For a Weibull law, ``log q(t) = theta * log log(1/(1-t)) + log(lambda)``.
The ``k`` largest observations ``Y_(n-i+1,n)`` approximate the quantiles of
order ``1 - i/n``, so the least-squares slope of ``log Y_(n-i+1,n)`` against
``log log(n/i)``, ``i = 1..k``, estimates ``theta``. The estimator runs on
absolute values so that signed samples can be used directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSampleError, DomainError
from .sampling import SampleSet

__all__ = ["TailEstimate", "order_statistics_desc", "estimate_theta", "qq_data", "QQ_HEADER"]

QQ_HEADER = "loglog_rank,log_order_stat"


@dataclass
class TailEstimate:
    theta_hat: float
    log_lambda_hat: float
    k_used: int
    n: int
    r_squared: float
    points: list[tuple[float, float]] = field(repr=False)
    n_excluded: int = 0

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat,
            "log_lambda_hat": self.log_lambda_hat,
            "k_used": self.k_used,
            "n": self.n,
            "r_squared": self.r_squared,
            "points": [[x, y] for x, y in self.points],
            "n_excluded": self.n_excluded,
        }


def _abs_values(s) -> np.ndarray:
    v = s.values if isinstance(s, SampleSet) else np.asarray(s, dtype=float).ravel()
    if v.size < 1:
        raise DomainError("empty sample")
    return np.abs(v)


def order_statistics_desc(s) -> np.ndarray:
    """Absolute values sorted nonincreasing (stable)."""
    a = _abs_values(s)
    return a[np.argsort(-a, kind="stable")]


def _top_k(a: np.ndarray, k: int) -> np.ndarray:
    if k >= a.size:
        return np.sort(a)[::-1]
    top = np.partition(a, a.size - k)[a.size - k:]
    return np.sort(top)[::-1]


def estimate_theta(s, k: int) -> TailEstimate:
    """Slope of the log-log quantile regression over the top ``k`` statistics."""
    a = _abs_values(s)
    n = a.size
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"k must be an integer, got {k!r}")
    k = int(k)
    if not 3 <= k <= n / 2:
        raise DomainError(f"need 3 <= k <= n/2, got k={k}, n={n}")

    top = _top_k(a, k)
    i = np.arange(1, k + 1, dtype=float)
    keep = top > 0
    if int(keep.sum()) < 3:
        raise DegenerateSampleError(
            f"only {int(keep.sum())} of the top {k} absolute order statistics are positive"
        )
    i, top = i[keep], top[keep]
    x = np.log(np.log(n / i))
    # work relative to the largest value so the slope is unaffected by the scale
    y_rel = np.log(top / top[0])
    xc = x - x.mean()
    yc = y_rel - y_rel.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ yc) / sxx
    log_top = math.log(top[0])
    intercept = float(y_rel.mean() - slope * x.mean()) + log_top

    ss_tot = float(yc @ yc)
    resid = yc - slope * xc
    ss_res = float(resid @ resid)
    r2 = 1.0 if ss_tot <= 1e-300 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))

    y = y_rel + log_top
    points = [(float(a_), float(b_)) for a_, b_ in zip(x, y)]
    return TailEstimate(
        theta_hat=slope,
        log_lambda_hat=intercept,
        k_used=k,
        n=n,
        r_squared=r2,
        points=points,
        n_excluded=int(k - keep.sum()),
    )


def qq_data(s, k: int) -> list[tuple[float, float]]:
    """Regression points ``(log log(n/i), log Y_(n-i+1,n))`` in increasing ``i``."""
    return estimate_theta(s, k).points
