"""Replicate Monte Carlo calibration of the estimator bands used in the tests.

Run:  python scripts/calibrate.py [--reps 100]

Prints min / 1% / 5% / median / 95% / 99% / max of each statistic over
independent seeds. The frozen test bands are chosen from this output.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from subweibull import (
    RngStream,
    TailParams,
    estimate_theta,
    fit_theta_from_moments,
    moment_growth_profile,
    sample_gaussian,
    sample_weibull,
)
from subweibull.bnn import MlpConfig, draw_input, layer_theta_estimates, sample_unit_prior

QS = [0.0, 0.01, 0.05, 0.5, 0.95, 0.99, 1.0]


def report(name: str, values) -> None:
    v = np.asarray(values)
    q = " ".join(f"{x:7.3f}" for x in np.quantile(v, QS))
    print(f"{name:<34s} n={v.size:4d}  {q}   mean={v.mean():.3f} sd={v.std():.3f}")


def moment_slope(values) -> float:
    return fit_theta_from_moments(moment_growth_profile(values)).theta_hat


def weibull(n, theta, seed, stream=0):
    return sample_weibull(n, TailParams.from_scale(theta), RngStream(seed, stream)).values


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--offset", type=int, default=10_000, help="first seed (kept away from test seeds)")
    args = ap.parse_args()
    seeds = range(args.offset, args.offset + args.reps)
    n = 100_000
    print("quantiles:", QS)

    t0 = time.time()
    for theta in (0.5, 1.0, 2.0):
        report(f"tail est Weibull({theta}) n=1e5 k=1e3",
               [estimate_theta(weibull(n, theta, s), 1000).theta_hat for s in seeds])
    report("tail est Gaussian n=1e5 k=1e3",
           [estimate_theta(sample_gaussian(n, 0, 1, RngStream(s)), 1000).theta_hat for s in seeds])

    report("moment fit Gaussian n=1e5", [moment_slope(sample_gaussian(n, 0, 1, RngStream(s)).values) for s in seeds])
    report("moment fit Exp n=1e5", [moment_slope(weibull(n, 1.0, s)) for s in seeds])
    prod, total, sum10 = [], [], []
    for s in seeds:
        a, b = weibull(n, 0.5, s, 1), weibull(n, 1.0, s, 2)
        prod.append(moment_slope(a * b))
        total.append(moment_slope(a + b))
        sum10.append(moment_slope(sum(weibull(n, 1.0, s, 10 + j) for j in range(10))))
    report("moment fit W(.5)*W(1)", prod)
    report("moment fit W(.5)+W(1)", total)
    report("moment fit sum of 10 W(1)", sum10)
    print(f"[moments/tail done in {time.time() - t0:.1f}s]")

    x = draw_input(1000, 0)
    est = {1: [], 64: []}
    for width in (1, 64):
        cfg = MlpConfig(1000, (width,) * 3, np.sqrt(2.0))
        for s in seeds:
            ls = sample_unit_prior(cfg, x, 10_000, RngStream(s))
            est[width].append([e.theta_hat for e in layer_theta_estimates(ls, 100)])
    a, b = np.array(est[1]), np.array(est[64])
    for ell in range(3):
        report(f"bnn width 1 layer {ell + 1} n=1e4 k=1e2", a[:, ell])
    report("bnn width 64 layer 3 n=1e4 k=1e2", b[:, 2])
    inc = np.mean((a[:, 0] < a[:, 1]) & (a[:, 1] < a[:, 2]))
    print(f"fraction strictly increasing (width 1): {inc:.3f}")
    print(f"fraction width-64 layer 3 < width-1 layer 3: {np.mean(b[:, 2] < a[:, 2]):.3f}")
    print(f"fraction layer-1 in [0.4, 0.65]: {np.mean((a[:, 0] >= 0.4) & (a[:, 0] <= 0.65)):.3f}")
    print(f"fraction layer-2 in [0.8, 1.25]: {np.mean((a[:, 1] >= 0.8) & (a[:, 1] <= 1.25)):.3f}")
    print(f"[total {time.time() - t0:.1f}s]")


if __name__ == "__main__":
    main()
