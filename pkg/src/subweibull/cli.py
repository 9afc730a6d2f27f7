"""Command-line interface.

Every command that writes files also writes ``<output>.manifest.json`` (or
``manifest.json`` inside an output directory) recording the exact argument
vector; ``subweibull replay MANIFEST`` re-runs it. Exit codes: 0 success,
2 usage or validation error, 3 degenerate data, 4 outside a bound's
validity region.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bnn import PRESETS, ExperimentConfig, draw_input, layer_theta_estimates, sample_unit_prior
from .concentration import (
    boucheron_bound,
    confidence_radius,
    property_audit,
    sum_tail_bound,
)
from .core import TailParams, symmetric_subweibull_survival
from .errors import DomainError, SubWeibullError
from .moments import fit_theta_from_moments, moment_growth_profile
from .sampling import (
    RngStream,
    SampleSet,
    read_sample_csv,
    sample_gaussian,
    sample_symmetric_subweibull,
    sample_uniform,
    sample_weibull,
    write_sample_csv,
)
from .tail_estimation import QQ_HEADER, estimate_theta

EXIT_USAGE = 2


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def write_manifest(path: Path, command: str, argv: Sequence[str], params: dict, outputs: list) -> None:
    manifest = {
        "command": command,
        "argv": list(argv),
        "params": params,
        "seeds": {k: v for k, v in params.items() if "seed" in k},
        "outputs": [str(o) for o in outputs],
        "tool": "subweibull",
        "version": __version__,
    }
    _write_json(path, manifest)


def _manifest_for(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _qq_csv(points) -> str:
    rows = [QQ_HEADER] + [f"{_fmt(x)},{_fmt(y)}" for x, y in points]
    return "\n".join(rows) + "\n"


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


# ---------------------------------------------------------------- commands


def cmd_sample(args, argv) -> int:
    rng = RngStream(args.seed, args.stream)
    if args.dist == "weibull":
        if args.rate is not None:
            p = TailParams.from_rate(args.theta, args.rate)
        else:
            p = TailParams.from_scale(args.theta, args.lam)
        s = sample_weibull(args.n, p, rng)
    elif args.dist == "symmetric":
        s = sample_symmetric_subweibull(args.n, args.theta, rng, cut=args.cut)
    elif args.dist == "gaussian":
        s = sample_gaussian(args.n, args.mean, args.std, rng)
    else:
        s = sample_uniform(args.n, args.lo, args.hi, rng)

    if args.out is None:
        sys.stdout.write("value\n" + "".join(_fmt(v) + "\n" for v in s.values))
        return 0
    out = Path(args.out)
    write_sample_csv(s, out)
    write_manifest(_manifest_for(out), "sample", argv, vars_clean(args), [out])
    return 0


def cmd_estimate(args, argv) -> int:
    s = read_sample_csv(args.input)
    k = args.k if args.k is not None else max(3, s.n // 100)
    est = estimate_theta(s, k)
    payload = json.dumps(est.to_dict(), indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(payload)
        if args.qq:
            _write_text(Path(args.qq), _qq_csv(est.points))
        return 0
    out = Path(args.out)
    qq = Path(args.qq) if args.qq else out.with_suffix(".qq.csv")
    _write_text(out, payload)
    _write_text(qq, _qq_csv(est.points))
    params = vars_clean(args)
    params["k"] = k
    write_manifest(_manifest_for(out), "estimate", argv, params, [out, qq])
    return 0


def survival_grid(xmin: float, xmax: float, num: int) -> np.ndarray:
    if not (math.isfinite(xmin) and math.isfinite(xmax) and xmin < xmax):
        raise DomainError(f"need finite xmin < xmax, got {xmin}, {xmax}")
    if num < 2:
        raise DomainError("the grid needs at least 2 points")
    x = np.linspace(xmin, xmax, num)
    if xmin <= 0 <= xmax:
        x = np.union1d(x, [0.0])
    return x


def survival_curves_csv(thetas: Sequence[float], x: np.ndarray, cut: float = 0.95) -> str:
    cols = [symmetric_subweibull_survival(x, th, cut) for th in thetas]
    header = "x," + ",".join(f"theta={th:g}" for th in thetas)
    rows = [header]
    for j, xv in enumerate(x):
        rows.append(",".join([_fmt(xv)] + [_fmt(c[j]) for c in cols]))
    return "\n".join(rows) + "\n"


def cmd_survival_curves(args, argv) -> int:
    if not args.thetas:
        raise DomainError("need at least one theta")
    for th in args.thetas:
        if not th > 0:
            raise DomainError(f"theta must be positive, got {th}")
    x = survival_grid(args.xmin, args.xmax, args.num)
    text = survival_curves_csv(args.thetas, x, args.cut)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    _write_text(out, text)
    write_manifest(_manifest_for(out), "survival-curves", argv, vars_clean(args), [out])
    return 0


def _experiment_from_args(args) -> ExperimentConfig:
    if (args.config is None) == (args.preset is None):
        raise DomainError("give exactly one of --config or --preset")
    if args.preset is not None:
        cfg = dict(PRESETS[args.preset])
    else:
        cfg = ExperimentConfig.load(args.config).to_dict()
    for name in ("n_draws", "k", "input_seed", "weight_seed"):
        v = getattr(args, name)
        if v is not None:
            cfg[name] = v
    if args.width is not None:
        cfg["widths"] = [args.width] * len(cfg["widths"])
    return ExperimentConfig.from_dict(cfg)


def cmd_bnn(args, argv) -> int:
    exp = _experiment_from_args(args)
    mlp = exp.mlp()
    layers = args.layers or list(range(1, mlp.depth + 1))
    for ell in layers:
        if not 1 <= ell <= mlp.depth:
            raise DomainError(f"layer {ell} out of range 1..{mlp.depth}")
    if exp.k > exp.n_draws / 2:
        raise DomainError(f"k={exp.k} exceeds n_draws/2")

    x = draw_input(exp.input_dim, exp.input_seed)
    ls = sample_unit_prior(
        mlp, x, exp.n_draws, RngStream(exp.weight_seed, 0),
        method=args.method, record_post=args.record_post, input_seed=exp.input_seed,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    cfg_path = out_dir / "config.json"
    _write_json(cfg_path, exp.to_dict())
    outputs.append(cfg_path)

    summary = []
    estimates = layer_theta_estimates(ls, exp.k) if not args.no_estimate else None
    for ell in layers:
        prov = {"generator": "bnn_unit_prior", "layer": ell, "unit": ls.units[ell - 1],
                "input_seed": exp.input_seed, "weight_seed": exp.weight_seed, "method": args.method}
        csv_path = out_dir / f"layer_{ell:03d}.csv"
        write_sample_csv(SampleSet(ls.layer(ell), prov), csv_path)
        outputs.append(csv_path)
        if ls.post is not None:
            post_path = out_dir / f"layer_{ell:03d}_post.csv"
            write_sample_csv(SampleSet(ls.post[ell - 1], {**prov, "post_nonlinearity": True}), post_path)
            outputs.append(post_path)
        if estimates is not None:
            est = estimates[ell - 1]
            est_path = out_dir / f"layer_{ell:03d}.estimate.json"
            _write_json(est_path, est.to_dict())
            qq_path = out_dir / f"layer_{ell:03d}.qq.csv"
            _write_text(qq_path, _qq_csv(est.points))
            outputs += [est_path, qq_path]
            summary.append({"layer": ell, "width": mlp.widths[ell - 1], "theta_hat": est.theta_hat,
                            "reference_theta": ell / 2})
    if summary:
        sum_path = out_dir / "summary.json"
        _write_json(sum_path, summary)
        outputs.append(sum_path)
        for row in summary:
            print(f"layer {row['layer']:3d}  width {row['width']:4d}  theta_hat {row['theta_hat']:.4f}")
    write_manifest(out_dir / "manifest.json", "bnn", argv, vars_clean(args) | {"experiment": exp.to_dict()},
                   outputs)
    return 0


def cmd_bound(args, argv) -> int:
    if (args.x is None) == (args.alpha is None):
        raise DomainError("give exactly one of --x or --alpha")
    if args.alpha is not None:
        if args.method != "corollary":
            raise DomainError("--alpha is only defined for the sum bound (--method corollary)")
        value = confidence_radius(args.alpha, args.n, args.theta, args.K_theta)
        kind = "confidence_radius"
    elif args.method == "corollary":
        value = sum_tail_bound(args.x, args.n, args.theta, args.K_theta)
        kind = "sum_tail_bound"
    else:
        value = boucheron_bound(args.x, args.n, args.theta, args.K_theta)
        kind = "boucheron_bound"
    print(_fmt(value))
    if args.out:
        out = Path(args.out)
        _write_json(out, {"kind": kind, "value": value, **vars_clean(args)})
        write_manifest(_manifest_for(out), "bound", argv, vars_clean(args), [out])
    return 0


def cmd_moments(args, argv) -> int:
    s = read_sample_csv(args.input)
    profile = moment_growth_profile(s)
    fit = fit_theta_from_moments(profile)
    payload = {"profile": profile.to_dict(), "fit": fit.to_dict()}
    return _emit_json(args, argv, "moments", payload)


def cmd_audit(args, argv) -> int:
    s = read_sample_csv(args.input)
    report = property_audit(s, args.theta)
    return _emit_json(args, argv, "audit", report.to_dict())


def cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    replay_argv = manifest.get("argv")
    if not isinstance(replay_argv, list):
        raise DomainError("manifest has no argv")
    return main(replay_argv)


def _emit_json(args, argv, command: str, payload) -> int:
    text = json.dumps(payload, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    _write_text(out, text)
    write_manifest(_manifest_for(out), command, argv, vars_clean(args), [out])
    return 0


def vars_clean(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subweibull", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw a seeded sample and write it as CSV")
    sp.add_argument("--dist", choices=["weibull", "symmetric", "gaussian", "uniform"], required=True)
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Weibull scale")
    sp.add_argument("--rate", type=float, default=None, help="Weibull rate b (overrides --lambda)")
    sp.add_argument("--cut", type=float, default=0.95)
    sp.add_argument("--mean", type=float, default=0.0)
    sp.add_argument("--std", type=float, default=1.0)
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=1.0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("estimate", help="order-statistics estimate of theta from a sample CSV")
    sp.add_argument("input", metavar="IN_CSV")
    sp.add_argument("--k", type=_positive_int, default=None, help="number of top order statistics (default n/100)")
    sp.add_argument("--out", default=None, help="TailEstimate JSON")
    sp.add_argument("--qq", default=None, help="QQ CSV (default: next to --out)")
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("survival-curves", help="symmetric sub-Weibull survival curves on a grid")
    sp.add_argument("--thetas", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0])
    sp.add_argument("--xmin", type=float, default=-5.0)
    sp.add_argument("--xmax", type=float, default=5.0)
    sp.add_argument("--num", type=int, default=1001)
    sp.add_argument("--cut", type=float, default=0.95)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_survival_curves)

    sp = sub.add_parser("bnn", help="prior samples of MLP units and per-layer theta estimates")
    sp.add_argument("--config", default=None, help="experiment JSON")
    sp.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--layers", type=_positive_int, nargs="+", default=None)
    sp.add_argument("--n-draws", dest="n_draws", type=_positive_int, default=None)
    sp.add_argument("--k", type=_positive_int, default=None)
    sp.add_argument("--width", type=_positive_int, default=None, help="override every layer width")
    sp.add_argument("--input-seed", dest="input_seed", type=int, default=None)
    sp.add_argument("--weight-seed", dest="weight_seed", type=int, default=None)
    sp.add_argument("--method", choices=["conditional", "weights"], default="conditional")
    sp.add_argument("--record-post", action="store_true")
    sp.add_argument("--no-estimate", action="store_true")
    sp.set_defaults(func=cmd_bnn)

    sp = sub.add_parser("bound", help="evaluate a concentration bound for sums")
    sp.add_argument("--method", choices=["corollary", "boucheron"], default="corollary")
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--K-theta", dest="K_theta", type=float, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("moments", help="moment-growth profile and fit of a sample CSV")
    sp.add_argument("input", metavar="IN_CSV")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("audit", help="empirical audit of the equivalent characterisations")
    sp.add_argument("input", metavar="IN_CSV")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    sp.add_argument("manifest")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except SubWeibullError as exc:
        print(f"subweibull {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"subweibull {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
