"""Command-line interface: scene rendering, point evaluation, verification.

Exit codes: 0 success, 2 configuration/usage errors, 3 budget violations.
Outputs are byte-deterministic for a fixed config and seed regardless of
--threads.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

import numpy as np

from ._kernels import BACKEND
from .basin import BasinVerdict, basin_membership, estimate_attracting_params
from .classify import Verdict, classify_grid
from .config import ConfigError, SceneConfig, config_hash, load_config
from .currents import equidist_potential, julia_heatmap, sample_green_on_slice
from .green import SequenceSpec, green_estimate, green_k, na_green
from .maps import ComplexPoint
from .output import write_grid_csv, write_json_report, write_pgm16
from .semigroup import BudgetError
from .verify import report_payload, run_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3

_SUBCOMMANDS = (
    "render-green",
    "render-julia",
    "classify",
    "green-eval",
    "na-green",
    "equidist",
    "basin",
    "verify",
)


def _resolve_threads(value: int) -> int:
    if value and value > 0:
        return value
    env = os.environ.get("HENON_LAB_THREADS", "")
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="henon-lab",
                                description="Certified semigroup Henon-map dynamics")
    sub = p.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="scene configuration file")
        sp.add_argument("--out", help="output path")
        sp.add_argument("--threads", type=int, default=0, help="0 = auto")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("--tail", type=int, default=None)
        if name == "verify":
            sp.add_argument("--profile", choices=("full", "quick"), default="full")
    return p


def _load(args) -> SceneConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = SceneConfig(scene="two-gen")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.depth is not None:
        cfg.max_depth = args.depth
        cfg.classify_depth = args.depth
    if args.tail is not None:
        cfg.tail_depth = args.tail
    if args.out:
        cfg.out = args.out
    return cfg


def _provenance(cfg: SceneConfig, command: str) -> dict:
    return {
        "tool": "henon-lab",
        "command": command,
        "config_sha256": config_hash(cfg),
        "scene": cfg.scene or "inline",
        "slice": cfg.slice_kind,
        "window": " ".join(repr(v) for v in cfg.window),
        "nx": cfg.nx,
        "ny": cfg.ny,
        "sign": cfg.sign,
        "max_depth": cfg.max_depth,
        "tail_depth": cfg.tail_depth,
        "classify_depth": cfg.classify_depth,
        "seed": cfg.seed,
        "backend": BACKEND,
    }


def _require_out(cfg: SceneConfig) -> str:
    if not cfg.out:
        raise ConfigError("no output path: set out = ... or pass --out")
    return cfg.out


def _cmd_render_green(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    spec = cfg.build_slice()
    grid = sample_green_on_slice(gs, spec, cfg.sign, cfg.max_depth, cfg.tail_depth,
                                 cfg.node_budget, threads)
    out = _require_out(cfg)
    prov = _provenance(cfg, "render-green")
    prov["field"] = "green_mid"
    if out.endswith(".csv"):
        write_grid_csv(out, spec, grid.values, grid.meta["widths"], prov)
    else:
        write_pgm16(out, grid.values, cfg.vmin, cfg.vmax, prov)
    print(f"render-green: wrote {out} (max width {grid.meta['max_width']:.3e})")
    return EXIT_OK


def _cmd_render_julia(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    spec = cfg.build_slice()
    heat = julia_heatmap(gs, spec, cfg.sign, cfg.max_depth, cfg.tail_depth,
                         cfg.node_budget, threads)
    out = _require_out(cfg)
    prov = _provenance(cfg, "render-julia")
    prov["field"] = "julia_heatmap"
    prov["total_mass"] = repr(heat.meta["total_mass"])
    if out.endswith(".csv"):
        write_grid_csv(out, spec, heat.values, None, prov)
    else:
        write_pgm16(out, heat.values, cfg.vmin, cfg.vmax, prov)
    print(f"render-julia: wrote {out} (slice mass {heat.meta['total_mass']:.4f})")
    return EXIT_OK


def _cmd_classify(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    spec = cfg.build_slice()
    grid = classify_grid(gs, spec, cfg.sign, cfg.classify_depth, cfg.node_budget, threads)
    out = _require_out(cfg)
    prov = _provenance(cfg, "classify")
    prov["field"] = "verdict"
    if out.endswith(".csv"):
        write_grid_csv(out, spec, grid.verdicts.astype(np.float64),
                       grid.cert_depths.astype(np.float64), prov)
    else:
        write_pgm16(out, grid.verdicts.astype(np.float64), 0.0, 3.0, prov)
    counts = {v.name: int((grid.verdicts == v.value).sum()) for v in Verdict}
    print(f"classify: wrote {out} {counts}")
    return EXIT_OK


def _cmd_green_eval(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    if cfg.point is None:
        raise ConfigError("green-eval needs point = x_re,x_im y_re,y_im")
    est = green_estimate(gs, cfg.point, cfg.sign, cfg.max_depth, cfg.tail_depth,
                         cfg.node_budget)
    gk = green_k(gs, cfg.point, cfg.level, cfg.sign)
    payload = {
        "provenance": _provenance(cfg, "green-eval"),
        "point": [cfg.point[0].real, cfg.point[0].imag, cfg.point[1].real, cfg.point[1].imag],
        "interval": [est.lo, est.hi],
        "width": est.width,
        "leaves": est.leaves,
        "flagged": est.flagged,
        "level_value": {"k": cfg.level, "value": gk},
    }
    if cfg.out:
        write_json_report(cfg.out, payload)
    print(f"green-eval: G in [{est.lo:.9f}, {est.hi:.9f}]  (G_{cfg.level} = {gk:.9f})")
    return EXIT_OK


def _sequence_of(cfg: SceneConfig) -> SequenceSpec:
    if cfg.sequence:
        return SequenceSpec.explicit(cfg.sequence)
    return SequenceSpec.seeded(cfg.seed, cfg.sequence_length)


def _cmd_na_green(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    if cfg.point is None:
        raise ConfigError("na-green needs point = x_re,x_im y_re,y_im")
    seq = _sequence_of(cfg)
    if cfg.sequence:
        k = len(cfg.sequence)
    else:
        k = min(max(cfg.level, 1), cfg.sequence_length)
    est = na_green(gs, seq, cfg.point, k, cfg.sign)
    payload = {
        "provenance": _provenance(cfg, "na-green"),
        "point": [cfg.point[0].real, cfg.point[0].imag, cfg.point[1].real, cfg.point[1].imag],
        "k": k,
        "interval": [est.lo, est.hi],
        "sequence": list(seq.materialize(gs.n0, k)),
    }
    if cfg.out:
        write_json_report(cfg.out, payload)
    print(f"na-green: value in [{est.lo:.9f}, {est.hi:.9f}] at k={k}")
    return EXIT_OK


def _cmd_equidist(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    if cfg.point is None:
        raise ConfigError("equidist needs point = x_re,x_im y_re,y_im")
    qy = np.zeros((1, 2), dtype=np.complex128)
    qy[0, 1] = 1.0
    est = green_estimate(gs, cfg.point, cfg.sign, cfg.max_depth, cfg.tail_depth,
                         cfg.node_budget)
    levels = list(range(2, cfg.level + 1, 2)) or [2]
    values = {str(k): equidist_potential(gs, qy, cfg.point, k, cfg.sign) for k in levels}
    payload = {
        "provenance": _provenance(cfg, "equidist"),
        "point": [cfg.point[0].real, cfg.point[0].imag, cfg.point[1].real, cfg.point[1].imag],
        "curve": "y=0",
        "green_interval": [est.lo, est.hi],
        "potential_by_level": values,
    }
    if cfg.out:
        write_json_report(cfg.out, payload)
    for k in levels:
        print(f"equidist: u_{k} = {values[str(k)]:.9f}  (G mid {est.mid:.9f})")
    return EXIT_OK


def _cmd_basin(cfg: SceneConfig, threads: int) -> int:
    gs = cfg.build_generator_set()
    ap = estimate_attracting_params(gs)
    if cfg.sequence:
        seq = SequenceSpec.explicit(cfg.sequence)
    else:
        # the schedule must cover the step budget
        seq = SequenceSpec.seeded(cfg.seed, max(cfg.sequence_length, cfg.max_steps))
    rng = np.random.default_rng(cfg.seed)
    counts = {v.name: 0 for v in BasinVerdict}
    n = 50
    for _ in range(n):
        v = rng.uniform(-ap.r, ap.r, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        res = basin_membership(gs, seq, z, cfg.max_steps, ap)
        counts[res.verdict.name] += 1
    payload = {
        "provenance": _provenance(cfg, "basin"),
        "contraction": {"r": ap.r, "alpha": ap.alpha, "samples": ap.samples},
        "ball_samples": n,
        "verdicts": counts,
    }
    if cfg.point is not None:
        res = basin_membership(gs, seq, cfg.point, cfg.max_steps, ap)
        payload["point_verdict"] = {"verdict": res.verdict.name, "steps": res.steps}
    if cfg.out:
        write_json_report(cfg.out, payload)
    print(f"basin: r={ap.r:.4f} alpha={ap.alpha:.4f} verdicts={counts}")
    return EXIT_OK


def _cmd_verify(cfg: SceneConfig, threads: int, profile: str) -> int:
    results = run_all(profile=profile, threads=threads)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}  ({r.elapsed:.2f}s)", file=sys.stderr)
    payload = report_payload(results, extra={"profile": profile, "backend": BACKEND})
    if cfg.out:
        write_json_report(cfg.out, payload)
    n_pass = sum(r.passed for r in results)
    print(f"verify: {n_pass}/{len(results)} checks passed (profile={profile})")
    return EXIT_OK if all(r.passed for r in results) else 1


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
        threads = _resolve_threads(args.threads if args.threads else cfg.threads)
        if args.command == "render-green":
            return _cmd_render_green(cfg, threads)
        if args.command == "render-julia":
            return _cmd_render_julia(cfg, threads)
        if args.command == "classify":
            return _cmd_classify(cfg, threads)
        if args.command == "green-eval":
            return _cmd_green_eval(cfg, threads)
        if args.command == "na-green":
            return _cmd_na_green(cfg, threads)
        if args.command == "equidist":
            return _cmd_equidist(cfg, threads)
        if args.command == "basin":
            return _cmd_basin(cfg, threads)
        if args.command == "verify":
            return _cmd_verify(cfg, threads, args.profile)
        parser.error(f"unknown command {args.command}")
    except ConfigError as e:
        print(f"henon-lab: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as e:
        print(f"henon-lab: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as e:
        print(f"henon-lab: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
