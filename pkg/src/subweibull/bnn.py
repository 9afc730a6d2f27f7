"""
Prior samples of ReLU MLP units under iid Gaussian weights.

Propagation: ``g^(l) = W^(l) h^(l-1)``, ``h^(l) = relu(g^(l))``, ``h^(0) = x``.
With ``use_bias`` a constant 1 is appended to ``h^(l-1)`` and ``W^(l)`` gets
one extra column.

Two samplers produce the same joint law of ``(g^(1), ..., g^(L))``:

``"weights"``
    draws every weight matrix explicitly and runs the forward pass.
``"conditional"`` (default)
    uses that, given ``h^(l-1)``, the entries of ``W^(l) h^(l-1)`` are iid
    ``N(0, std^2 |h^(l-1)|^2)``. Each layer costs ``H_l`` normals per draw
    instead of ``H_l * H_(l-1)``, which makes wide inputs affordable.

Draw ``i`` always uses substream ``i`` of the weight stream, so results do
not depend on chunking or on the order draws are computed in.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .errors import DomainError
from .sampling import RngStream, sample_gaussian
from .tail_estimation import TailEstimate, estimate_theta

__all__ = [
    "MlpConfig",
    "ExperimentConfig",
    "LayerSamples",
    "PRESETS",
    "relu",
    "forward_pre_activations",
    "draw_weights",
    "draw_input",
    "sample_unit_prior",
    "layer_theta_estimates",
]


def relu(x):
    """Elementwise ``max(0, x)``."""
    out = np.maximum(np.asarray(x, dtype=float), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MlpConfig:
    input_dim: int
    widths: tuple[int, ...]
    weight_std: float = 1.0
    use_bias: bool = False
    activation: str = "relu"

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if int(self.input_dim) < 1:
            raise DomainError(f"input_dim must be positive, got {self.input_dim}")
        if len(self.widths) < 1:
            raise DomainError("need at least one hidden layer")
        if any(w < 1 for w in self.widths):
            raise DomainError(f"all widths must be positive, got {list(self.widths)}")
        if not (math.isfinite(self.weight_std) and self.weight_std > 0):
            raise DomainError(f"weight_std must be positive, got {self.weight_std}")
        if self.activation != "relu":
            raise DomainError(f"unsupported activation {self.activation!r}")

    @property
    def depth(self) -> int:
        return len(self.widths)

    def weight_shapes(self) -> list[tuple[int, int]]:
        fan_in = [self.input_dim, *self.widths[:-1]]
        extra = 1 if self.use_bias else 0
        return [(h, f + extra) for h, f in zip(self.widths, fan_in)]


def _augment(h: np.ndarray, use_bias: bool) -> np.ndarray:
    return np.append(h, 1.0) if use_bias else h


def forward_pre_activations(
    config: MlpConfig, x: Sequence[float], weights: Sequence[np.ndarray]
) -> list[np.ndarray]:
    """Exact forward recursion returning ``[g^(1), ..., g^(L)]``."""
    h = np.asarray(x, dtype=float).ravel()
    if h.size != config.input_dim:
        raise DomainError(f"input has length {h.size}, expected {config.input_dim}")
    if len(weights) != config.depth:
        raise DomainError(f"got {len(weights)} weight matrices for {config.depth} layers")
    out = []
    for ell, (W, shape) in enumerate(zip(weights, config.weight_shapes()), start=1):
        W = np.asarray(W, dtype=float)
        if W.shape != shape:
            raise DomainError(f"layer {ell}: weight shape {W.shape}, expected {shape}")
        g = W @ _augment(h, config.use_bias)
        out.append(g)
        h = np.maximum(g, 0.0)
    return out


def draw_weights(config: MlpConfig, rng: RngStream) -> list[np.ndarray]:
    """One set of iid ``N(0, weight_std^2)`` weight matrices, layer by layer."""
    shapes = config.weight_shapes()
    total = sum(a * b for a, b in shapes)
    flat = config.weight_std * ndtri(rng.uniforms(total))
    mats, pos = [], 0
    for a, b in shapes:
        mats.append(flat[pos:pos + a * b].reshape(a, b))
        pos += a * b
    return mats


def draw_input(input_dim: int, seed: int) -> np.ndarray:
    """The fixed network input, standard Gaussian entries."""
    return sample_gaussian(int(input_dim), 0.0, 1.0, RngStream(seed, 0)).values


@dataclass
class LayerSamples:
    """Draws of the designated unit of every layer; ``pre[l]`` has length ``n_draws``."""

    pre: list[np.ndarray]
    n_draws: int
    config: MlpConfig
    units: tuple[int, ...]
    input_seed: int | None = None
    weight_seed: int | None = None
    post: list[np.ndarray] | None = None
    full_pre: list[np.ndarray] | None = field(default=None, repr=False)

    def layer(self, ell: int) -> np.ndarray:
        """Pre-nonlinearity draws of layer ``ell`` (1-based)."""
        return self.pre[ell - 1]


def _check_units(config: MlpConfig, units) -> tuple[int, ...]:
    if units is None:
        units = (0,) * config.depth
    elif isinstance(units, (int, np.integer)):
        units = (int(units),) * config.depth
    units = tuple(int(u) for u in units)
    if len(units) != config.depth:
        raise DomainError(f"need one unit index per layer ({config.depth}), got {len(units)}")
    for ell, (u, h) in enumerate(zip(units, config.widths), start=1):
        if not 0 <= u < h:
            raise DomainError(f"unit index {u} out of range for layer {ell} of width {h}")
    return units


def sample_unit_prior(
    config: MlpConfig,
    x: Sequence[float],
    n_draws: int,
    rng: RngStream,
    units=None,
    *,
    method: str = "conditional",
    record_post: bool = False,
    record_full: bool = False,
    input_seed: int | None = None,
) -> LayerSamples:
    """Monte Carlo draws of one unit per layer with fresh weights per draw."""
    if isinstance(n_draws, bool) or not isinstance(n_draws, (int, np.integer)) or n_draws < 1:
        raise DomainError(f"n_draws must be a positive integer, got {n_draws!r}")
    n_draws = int(n_draws)
    units = _check_units(config, units)
    x = np.asarray(x, dtype=float).ravel()
    if x.size != config.input_dim:
        raise DomainError(f"input has length {x.size}, expected {config.input_dim}")
    if method not in ("conditional", "weights"):
        raise DomainError(f"unknown method {method!r}")

    L = config.depth
    pre = [np.empty(n_draws) for _ in range(L)]
    post = [np.empty(n_draws) for _ in range(L)] if record_post else None
    full = [np.empty((n_draws, h)) for h in config.widths] if record_full else None

    if method == "weights":
        for i in range(n_draws):
            gs = forward_pre_activations(config, x, draw_weights(config, rng.child(i)))
            for ell, g in enumerate(gs):
                pre[ell][i] = g[units[ell]]
                if post is not None:
                    post[ell][i] = max(g[units[ell]], 0.0)
                if full is not None:
                    full[ell][i] = g
    else:
        total = sum(config.widths)
        z = np.empty((n_draws, total))
        for i in range(n_draws):
            z[i] = ndtri(rng.child(i).uniforms(total))
        scale = np.full(n_draws, float(np.linalg.norm(_augment(x, config.use_bias))))
        pos = 0
        for ell, h in enumerate(config.widths):
            g = config.weight_std * scale[:, None] * z[:, pos:pos + h]
            pos += h
            pre[ell][:] = g[:, units[ell]]
            act = np.maximum(g, 0.0)
            if post is not None:
                post[ell][:] = act[:, units[ell]]
            if full is not None:
                full[ell][:] = g
            sq = np.einsum("ij,ij->i", act, act)
            if config.use_bias:
                sq = sq + 1.0
            scale = np.sqrt(sq)

    return LayerSamples(
        pre=pre,
        n_draws=n_draws,
        config=config,
        units=units,
        input_seed=input_seed,
        weight_seed=int(rng.seed),
        post=post,
        full_pre=full,
    )


def layer_theta_estimates(ls: LayerSamples, k: int) -> list[TailEstimate]:
    """Tail-parameter estimate of each layer's pre-nonlinearity draws."""
    return [estimate_theta(g, k) for g in ls.pre]


@dataclass
class ExperimentConfig:
    """Serialised experiment: network, Monte Carlo size, ``k`` and seeds."""

    input_dim: int
    widths: list[int]
    weight_std: float = 1.0
    use_bias: bool = False
    n_draws: int = 10_000
    k: int = 100
    input_seed: int = 0
    weight_seed: int = 1

    def __post_init__(self):
        self.widths = [int(w) for w in self.widths]
        for name in ("n_draws", "k"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        self.mlp()

    def mlp(self) -> MlpConfig:
        return MlpConfig(self.input_dim, tuple(self.widths), self.weight_std, self.use_bias)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        missing = {"input_dim", "widths"} - set(d)
        if missing:
            raise DomainError(f"missing config fields: {sorted(missing)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DomainError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(d, dict):
            raise DomainError("config must be a JSON object")
        return cls.from_dict(d)


PRESETS: dict[str, dict] = {
    # 10x reductions of the 100-layer experiment: 10 layers, widths 100..10
    "fig2-desk": dict(
        input_dim=1_000, widths=[100 - 10 * (l - 1) for l in range(1, 11)],
        weight_std=1.0, n_draws=10_000, k=100,
    ),
    "fig2-paper": dict(
        input_dim=10_000, widths=[1000 - 10 * (l - 1) for l in range(1, 101)],
        weight_std=1.0, n_draws=100_000, k=1_000,
    ),
    "fig3-desk": dict(
        input_dim=1_000, widths=[1, 1, 1], weight_std=math.sqrt(2.0), n_draws=10_000, k=100,
    ),
    "fig3-paper": dict(
        input_dim=10_000, widths=[1] * 10, weight_std=math.sqrt(2.0), n_draws=100_000, k=1_000,
    ),
}
