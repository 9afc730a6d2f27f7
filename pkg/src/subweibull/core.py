r"""
Weibull and symmetric sub-Weibull distribution functions
========================================================

The Weibull law with tail parameter :math:`\theta` (shape :math:`1/\theta`)
has survival function

.. math::

   \bar F(x) = \exp(-b x^{1/\theta}) = \exp(-(x/\lambda)^{1/\theta}),
   \qquad b = \lambda^{-1/\theta},

so the *rate* ``b`` and the *scale* ``lambda`` describe the same law.
:class:`TailParams` stores both and derives one from the other.

All functions accept scalars or array-likes and return a ``float`` for
scalar input and an ``ndarray`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TailParams",
    "check_probability",
    "weibull_survival",
    "weibull_cdf",
    "weibull_quantile",
    "log_quantile",
    "symmetric_subweibull_survival",
    "symmetric_subweibull_isf",
]


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class TailParams:
    """Tail parameter ``theta`` together with both scale conventions.

    Construct with :meth:`from_scale` or :meth:`from_rate`; passing all three
    fields directly is allowed but they must be consistent.
    """

    theta: float
    scale_lambda: float
    rate_b: float

    def __post_init__(self):
        theta = _positive("theta", self.theta)
        lam = _positive("scale_lambda", self.scale_lambda)
        b = _positive("rate_b", self.rate_b)
        if not math.isclose(b, lam ** (-1.0 / theta), rel_tol=1e-9):
            raise DomainError(
                f"inconsistent parameters: rate_b={b} but scale_lambda^(-1/theta)="
                f"{lam ** (-1.0 / theta)}"
            )

    @classmethod
    def from_scale(cls, theta: float, scale_lambda: float = 1.0) -> TailParams:
        theta = _positive("theta", theta)
        lam = _positive("scale_lambda", scale_lambda)
        return cls(theta, lam, lam ** (-1.0 / theta))

    @classmethod
    def from_rate(cls, theta: float, rate_b: float = 1.0) -> TailParams:
        theta = _positive("theta", theta)
        b = _positive("rate_b", rate_b)
        return cls(theta, b ** (-theta), b)


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def check_probability(t, *, open_right: bool = False, open_left: bool = False) -> np.ndarray:
    """Validate probabilities in [0, 1] (optionally excluding an endpoint)."""
    arr = np.asarray(t, dtype=float)
    bad = ~np.isfinite(arr) | (arr < 0) | (arr > 1)
    if open_right:
        bad |= arr >= 1
    if open_left:
        bad |= arr <= 0
    if np.any(bad):
        lo = "(" if open_left else "["
        hi = ")" if open_right else "]"
        raise DomainError(f"probability outside {lo}0, 1{hi}: {arr[bad].ravel()[:5]}")
    return arr


def weibull_survival(x, p: TailParams):
    """P(X >= x) = exp(-b x^(1/theta)) for x >= 0; +inf maps to 0."""
    arr, scalar = _as_array(x)
    if np.any(np.isnan(arr) | (arr < 0) | (arr == -np.inf)):
        raise DomainError("weibull_survival requires x >= 0")
    with np.errstate(over="ignore"):
        out = np.exp(-p.rate_b * arr ** (1.0 / p.theta))
    return _out(out, scalar)


def weibull_cdf(x, p: TailParams):
    arr, scalar = _as_array(x)
    if np.any(np.isnan(arr) | (arr < 0)):
        raise DomainError("weibull_cdf requires x >= 0")
    with np.errstate(over="ignore"):
        out = -np.expm1(-p.rate_b * arr ** (1.0 / p.theta))
    return _out(out, scalar)


def weibull_quantile(t, p: TailParams):
    """q(t) = lambda * (-log(1 - t))^theta for 0 <= t < 1."""
    arr, scalar = _as_array(t)
    check_probability(arr, open_right=True)
    out = p.scale_lambda * (-np.log1p(-arr)) ** p.theta
    return _out(out, scalar)


def log_quantile(t, p: TailParams):
    """theta * log log(1/(1-t)) + log(lambda), evaluated without forming q(t).

    Stays finite where the quantile itself would underflow to zero.
    """
    arr, scalar = _as_array(t)
    check_probability(arr, open_left=True, open_right=True)
    out = p.theta * np.log(-np.log1p(-arr)) + math.log(p.scale_lambda)
    return _out(out, scalar)


def _cut_offset(theta: float, cut: float) -> tuple[float, float]:
    # scale-1 Weibull quantile at the cut level, and the density factor 1/(2(1-cut))
    if not 0 < cut < 1:
        raise DomainError(f"cut level must lie in (0, 1), got {cut}")
    return (-math.log1p(-cut)) ** theta, 0.5 / (1.0 - cut)


def symmetric_subweibull_survival(x, theta: float, cut: float = 0.95):
    r"""Survival function of the symmetrised Weibull tail beyond a cut quantile.

    The part of a scale-1 Weibull survival curve to the right of its ``cut``
    quantile is shifted to the origin and reflected, giving a law on the
    whole line with :math:`S(0) = 1/2` and :math:`S(x) + S(-x) = 1`. With the
    default ``cut=0.95`` this is

    .. math::

       S_\theta(x) = 10\,e^{-(x + \log(20)^\theta)^{1/\theta}}, \qquad x \ge 0.
    """
    theta = _positive("theta", theta)
    arr, scalar = _as_array(x)
    if np.any(np.isnan(arr)):
        raise DomainError("symmetric_subweibull_survival is undefined at NaN")
    offset, factor = _cut_offset(theta, cut)
    with np.errstate(over="ignore"):
        upper = factor * np.exp(-((np.abs(arr) + offset) ** (1.0 / theta)))
    out = np.where(arr >= 0, upper, 1.0 - upper)
    return _out(out, scalar)


def symmetric_subweibull_isf(s, theta: float, cut: float = 0.95):
    """Inverse of :func:`symmetric_subweibull_survival` on (0, 1)."""
    theta = _positive("theta", theta)
    arr, scalar = _as_array(s)
    check_probability(arr, open_left=True, open_right=True)
    offset, factor = _cut_offset(theta, cut)
    tail = np.minimum(arr, 1.0 - arr)
    magnitude = np.log(factor / tail) ** theta - offset
    magnitude = np.maximum(magnitude, 0.0)
    out = np.where(arr <= 0.5, magnitude, -magnitude)
    return _out(out, scalar)
