"""
Seed-reproducible samplers.

Every sampler turns uniforms from a counter-based Philox stream into draws
by an inverse-CDF transform, so each variate consumes exactly one 64-bit
counter output and equal ``(seed, stream_id)`` always yields the same
sequence, independent of platform or of how callers split the work.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy.special import ndtri

from .core import TailParams, symmetric_subweibull_isf
from .errors import DomainError

__all__ = [
    "RngStream",
    "SampleSet",
    "sample_weibull",
    "sample_symmetric_subweibull",
    "sample_gaussian",
    "sample_uniform",
    "write_sample_csv",
    "read_sample_csv",
]

_U64 = 2**64
_INV_2_53 = 2.0**-53


@dataclass(frozen=True)
class RngStream:
    """Identifies one reproducible stream of uniforms.

    ``path`` addresses nested substreams (e.g. one per Monte Carlo draw); it
    is empty for top-level streams.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        for name, v in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not (isinstance(v, (int, np.integer)) and 0 <= int(v) < _U64):
                raise DomainError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def child(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, self.path + (int(index),))

    def bit_generator(self) -> np.random.Philox:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),) + self.path)
        return np.random.Philox(seq)

    def uniforms(self, n: int) -> np.ndarray:
        """n uniforms on the open interval (0, 1), 53-bit resolution."""
        raw = self.bit_generator().random_raw(int(n))
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53

    def describe(self) -> dict[str, Any]:
        d = {"seed": int(self.seed), "stream_id": int(self.stream_id)}
        if self.path:
            d["path"] = list(self.path)
        return d


@dataclass
class SampleSet:
    values: np.ndarray
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size < 1:
            raise DomainError("a SampleSet needs at least one value")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("SampleSet values must be finite")

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def scaled(self, c: float) -> SampleSet:
        prov = dict(self.provenance)
        prov["scaled_by"] = float(c)
        return SampleSet(self.values * c, prov)


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    return int(n)


def _provenance(generator: str, rng: RngStream, **params) -> dict[str, Any]:
    return {"generator": generator, **rng.describe(), "params": params}


def sample_weibull(n: int, p: TailParams, rng: RngStream) -> SampleSet:
    n = _check_n(n)
    u = rng.uniforms(n)
    # 1 - u is exactly representable on the 2^-53 grid, so -log(u) is the same law
    values = p.scale_lambda * (-np.log(u)) ** p.theta
    return SampleSet(
        values,
        _provenance("weibull", rng, theta=p.theta, scale_lambda=p.scale_lambda),
    )


def sample_symmetric_subweibull(
    n: int, theta: float, rng: RngStream, cut: float = 0.95
) -> SampleSet:
    n = _check_n(n)
    values = symmetric_subweibull_isf(rng.uniforms(n), theta, cut)
    return SampleSet(values, _provenance("symmetric_subweibull", rng, theta=theta, cut=cut))


def sample_gaussian(n: int, mean: float, std: float, rng: RngStream) -> SampleSet:
    n = _check_n(n)
    if not (math.isfinite(std) and std > 0 and math.isfinite(mean)):
        raise DomainError(f"need finite mean and std > 0, got mean={mean}, std={std}")
    values = mean + std * ndtri(rng.uniforms(n))
    return SampleSet(values, _provenance("gaussian", rng, mean=mean, std=std))


def sample_uniform(n: int, lo: float, hi: float, rng: RngStream) -> SampleSet:
    n = _check_n(n)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"need finite lo < hi, got lo={lo}, hi={hi}")
    values = lo + (hi - lo) * rng.uniforms(n)
    # rounding can land exactly on hi for wide ranges
    values = np.minimum(values, np.nextafter(hi, lo))
    return SampleSet(values, _provenance("uniform", rng, lo=lo, hi=hi))


def write_sample_csv(s: SampleSet, path: str | Path) -> None:
    """Single-column CSV preceded by one ``#`` comment line holding provenance."""
    lines = ["# provenance: " + json.dumps(s.provenance, sort_keys=True), "value"]
    lines.extend(repr(float(v)) for v in s.values)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_sample_csv(path: str | Path) -> SampleSet:
    """Read a sample CSV; the first column is used, comment lines are skipped."""
    provenance: dict[str, Any] = {"source": str(path)}
    values = []
    header_seen = False
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# provenance:"):
                try:
                    provenance.update(json.loads(line[len("# provenance:"):]))
                except json.JSONDecodeError:
                    pass
            continue
        cell = line.split(",")[0].strip()
        try:
            values.append(float(cell))
        except ValueError:
            if header_seen or values:
                raise DomainError(f"non-numeric value {cell!r} in {path}") from None
            header_seen = True
    if not values:
        raise DomainError(f"no numeric values in {path}")
    return SampleSet(np.array(values), provenance)
