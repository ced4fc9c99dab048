"""Experiment harness: ``simplexlearn learn | reduce | verify``.

Commands synthesize a seeded ground-truth instance (a rotated and shifted
simplex, or a linearly mapped lp ball), run the corresponding pipeline,
score the result against the truth, and write one JSON report.  Every
report embeds the resolved configuration and a schema_version, and is
byte-identical across runs with the same configuration except for the
wall_time_ms field.

Exit codes: 0 on full success (complete recovery, converged reduction, or
all checks passed), 2 on an incomplete or failed-check run, 1 on usage or
runtime errors.  Reports go to --out, else to $SIMPLEXLEARN_OUT/<command>-
seed<seed>.json, else to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

OUT_ENV = "SIMPLEXLEARN_OUT"
SCHEMA_VERSION = 1

# flags each command accepts, for config-file validation (unknown keys are
# rejected rather than ignored)
_ALLOWED = {
    "learn": {"n", "t1", "t3", "m", "r", "seed", "threads", "out"},
    "reduce": {"problem", "n", "p", "t", "seed", "threads", "out"},
    "verify": {"suite", "n", "seed", "threads", "out"},
}


class SchemaError(ValueError):
    """A config file or flag combination violates the command schema."""


def _jsonify(value):
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonify(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _child_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)).generate_state(1)[0])


def _load_config_file(path: str, command: str) -> dict:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("config file must hold a JSON object")
    unknown = set(raw) - _ALLOWED[command]
    if unknown:
        raise SchemaError(f"unknown config fields for {command}: {sorted(unknown)}")
    return raw


def _resolve(args: argparse.Namespace, command: str, defaults: dict) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(defaults)
    if args.config is not None:
        merged.update(_load_config_file(args.config, command))
    for key in _ALLOWED[command]:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _validate_common(cfg: dict, command: str) -> None:
    n = cfg.get("n")
    if n is not None:
        if not isinstance(n, int) or isinstance(n, bool):
            raise SchemaError("n must be an integer")
        floor = 2 if command == "learn" else 1
        if n < floor:
            raise SchemaError(f"n must be >= {floor} for {command}")
    if cfg.get("threads") is not None and (not isinstance(cfg["threads"], int) or cfg["threads"] < 1):
        raise SchemaError("threads must be a positive integer")
    seed = cfg.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise SchemaError("seed must be a nonnegative integer")
    for key in ("t", "t1", "t3", "m", "r"):
        value = cfg.get(key)
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
            raise SchemaError(f"{key} must be a positive integer")


def _emit(payload: dict, cfg: dict, command: str) -> None:
    text = json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n"
    out = cfg.get("out")
    if out is None and os.environ.get(OUT_ENV):
        out = os.path.join(os.environ[OUT_ENV], f"{command}-seed{cfg['seed']}.json")
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    os.makedirs(directory, exist_ok=True)
    with open(out, "w") as fh:
        fh.write(text)
    print(f"wrote {out}")


def _synthesize_simplex(n: int, seed: int):
    """Seeded hidden instance: the isotropic simplex under a Haar-random
    rotation and a normal shift."""
    from .geometry import Simplex, isotropic_simplex
    from .sampling import substream

    rng = substream(seed, 97)
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    shift = rng.standard_normal(n)
    return Simplex(isotropic_simplex(n).vertices @ q.T + shift)


def cmd_learn(args: argparse.Namespace) -> int:
    from .evaluation import match_vertices, tv_distance_mc
    from .learner import LearnerConfig, learn_simplex
    from .sampling import simplex_source
    from .vertex_finder import IterationConfig

    cfg = _resolve(args, "learn", {"n": 5, "t1": 50_000, "t3": 50_000, "m": None, "r": None, "seed": 0})
    _validate_common(cfg, "learn")

    truth = _synthesize_simplex(cfg["n"], cfg["seed"])
    iteration = None
    if cfg["r"] is not None:
        iteration = IterationConfig(iterations=cfg["r"], sample_per_gradient=cfg["t3"])
    learner_config = LearnerConfig(
        t1=cfg["t1"], t3=cfg["t3"], m=cfg["m"], vertex_finder=iteration, seed=cfg["seed"]
    )
    started = time.perf_counter()
    learned = learn_simplex(simplex_source(truth, _child_seed(cfg["seed"], 98)), cfg["n"], learner_config)

    report = learned.report.to_dict()
    tv_std_error = None
    if learned.complete:
        match = match_vertices(truth, learned.simplex)
        report["per_vertex_match_error"] = list(match.per_vertex_error)
        tv = tv_distance_mc(truth, learned.simplex, 100_000, rng=_child_seed(cfg["seed"], 99))
        report["tv_estimate"] = tv.value
        tv_std_error = tv.std_error
    report["wall_time_ms"] = (time.perf_counter() - started) * 1000.0

    payload = {
        "command": "learn",
        "cli_config": cfg,
        "complete": learned.complete,
        "tv_std_error": tv_std_error,
        **report,
    }
    _emit(payload, cfg, "learn")
    return 0 if learned.complete else 2


def cmd_reduce(args: argparse.Namespace) -> int:
    from .evaluation import match_vertices
    from .ica import (
        compute_c_pn,
        lp_symmetric_difference,
        reduce_lp_to_ica,
        reduce_simplex_to_ica,
        separation_index,
    )
    from .sampling import P_MAX, SampleMatrix, sample_lp_ball, sample_simplex, substream

    cfg = _resolve(args, "reduce", {"problem": "simplex", "n": 3, "p": None, "t": 200_000, "seed": 0})
    _validate_common(cfg, "reduce")
    if cfg["problem"] not in ("simplex", "lp"):
        raise SchemaError("problem must be 'simplex' or 'lp'")
    if cfg["problem"] == "lp":
        if cfg["p"] is None:
            raise SchemaError("--p is required for --problem lp")
        if not 1.0 <= float(cfg["p"]) <= P_MAX:
            raise SchemaError(f"p must lie in [1, {P_MAX:g}]")

    n, t, seed = cfg["n"], cfg["t"], cfg["seed"]
    started = time.perf_counter()
    payload = {
        "command": "reduce",
        "cli_config": cfg,
        "problem": cfg["problem"],
        "n": n,
        "t": t,
        "seed": seed,
        "schema_version": SCHEMA_VERSION,
    }

    if cfg["problem"] == "simplex":
        truth = _synthesize_simplex(n, seed)
        sample = sample_simplex(truth, t, _child_seed(seed, 101))
        reduction = reduce_simplex_to_ica(sample, seed=seed)
        match = match_vertices(truth.vertices, reduction.vertices)
        lifted = np.vstack([truth.vertices.T, np.ones(n + 1)])
        payload.update(
            {
                "p": None,
                "matched_errors": list(match.per_vertex_error),
                "max_match_error": match.max_error,
                "separation_index": separation_index(reduction.estimate.separating @ lifted),
                "converged": reduction.estimate.converged,
                "permutation_note": reduction.estimate.permutation_note,
                "c_pn": None,
                "symdiff": None,
            }
        )
        converged = all(reduction.estimate.converged)
    else:
        p = float(cfg["p"])
        rng = substream(seed, 103)
        q1, r1 = np.linalg.qr(rng.standard_normal((n, n)))
        q1 = q1 * np.sign(np.diag(r1))
        a = q1 * rng.uniform(0.5, 2.0, size=n)  # rotation times per-axis scale
        ball = sample_lp_ball(n, p, t, _child_seed(seed, 104))
        sample = SampleMatrix(ball.points @ a.T, ball.seed, f"mapped({ball.source})")
        reduction = reduce_lp_to_ica(sample, p, seed=seed)
        c_pn = compute_c_pn(p, n, samples=200_000, seed=seed)
        payload.update(
            {
                "p": p,
                "matched_errors": None,
                "max_match_error": None,
                "separation_index": separation_index(reduction.estimate.separating @ a),
                "converged": reduction.estimate.converged,
                "permutation_note": reduction.estimate.permutation_note,
                "c_pn": {"value": c_pn.value, "std_error": c_pn.std_error, "samples": c_pn.samples},
                "symdiff": lp_symmetric_difference(a, reduction.mixing, p, seed=_child_seed(seed, 105)),
            }
        )
        converged = all(reduction.estimate.converged)

    payload["wall_time_ms"] = (time.perf_counter() - started) * 1000.0
    _emit(payload, cfg, "reduce")
    return 0 if converged else 2


def cmd_verify(args: argparse.Namespace) -> int:
    from .diagnostics import SUITES, run_suite

    cfg = _resolve(args, "verify", {"suite": "scaling", "n": None, "seed": 0})
    _validate_common(cfg, "verify")
    if cfg["suite"] not in SUITES:
        raise SchemaError(f"suite must be one of {sorted(SUITES)}")

    started = time.perf_counter()
    result = run_suite(cfg["suite"], seed=cfg["seed"], n=cfg["n"])
    payload = {
        "command": "verify",
        "cli_config": cfg,
        "schema_version": SCHEMA_VERSION,
        **result,
        "wall_time_ms": (time.perf_counter() - started) * 1000.0,
    }
    _emit(payload, cfg, "verify")
    return 0 if result["pass"] else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplexlearn",
        description="Simplex learning and ICA-reduction experiment harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        p.add_argument("--threads", type=int, default=None, help="accepted for interface compatibility; results never depend on it")
        p.add_argument("--out", type=str, default=None, help=f"report path (default ${OUT_ENV}/<command>-seed<seed>.json, else stdout)")
        p.add_argument("--config", type=str, default=None, help="JSON config file; explicit flags override it")

    learn = sub.add_parser("learn", help="learn a synthesized hidden simplex from uniform samples")
    learn.add_argument("--n", type=int, default=None, help="simplex dimension (default 5)")
    learn.add_argument("--t1", type=int, default=None, help="points for the affine frame estimate (default 50000)")
    learn.add_argument("--t3", type=int, default=None, help="fresh points per gradient evaluation (default 50000)")
    learn.add_argument("--m", type=int, default=None, help="repetition budget (default: coupon bound)")
    learn.add_argument("--r", type=int, default=None, help="fixed-point iterations per repetition (default 30)")
    common(learn)
    learn.set_defaults(func=cmd_learn)

    reduce_ = sub.add_parser("reduce", help="recover a synthesized instance through the ICA reduction")
    reduce_.add_argument("--problem", type=str, default=None, choices=["simplex", "lp"], help="instance family (default simplex)")
    reduce_.add_argument("--n", type=int, default=None, help="ambient dimension (default 3)")
    reduce_.add_argument("--p", type=float, default=None, help="lp-ball exponent, required for --problem lp")
    reduce_.add_argument("--t", type=int, default=None, help="sample size (default 200000)")
    common(reduce_)
    reduce_.set_defaults(func=cmd_reduce)

    verify = sub.add_parser("verify", help="run a statistical verification suite")
    verify.add_argument("--suite", type=str, default=None, choices=["scaling", "tv", "landscape"], help="suite name (default scaling)")
    verify.add_argument("--n", type=int, default=None, help="restrict the suite to one dimension")
    common(verify)
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ValueError) as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
