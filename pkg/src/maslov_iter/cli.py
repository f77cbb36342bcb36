"""Command-line front end.

Subcommands: index, verify, decompose, selftest.  Exit codes:
0 = all pass, 1 = identity violation / fixture failure, 2 = usage or
config error, 3 = numerical instability (gauge/rank not certifiable).

Configs are JSON with a schema_version field; matrices are row-major
nested arrays of [re, im] pairs.  `MASLOV_ITER_THREADS` caps trial
parallelism for `verify`.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import linalg as la
from .brake import BrakeSymmetry
from .decompositions import polar_decompose
from .errors import (
    ConfigError,
    GaugeUnstable,
    MaslovError,
    NonIsolatedCrossing,
    DegenerateCrossing,
    NotSymplectic,
    RankAmbiguous,
    SubdivisionLimit,
)
from .frames import LagrangianFrame, circle_graph_frame, graph_frame, product_space
from .maslov import graph_index, nullities, winding_pair
from .paths import matrix_from_json, matrix_to_json, path_from_dict
from .reporting import SCHEMA_VERSION, dump_json, run_campaign, write_trace_csv
from .selftest import run_selftest
from .spaces import SymplecticSpace, Tolerances, canonical_space, make_space
from .verify import SUITES

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (GaugeUnstable, RankAmbiguous, SubdivisionLimit,
                     NotSymplectic, DegenerateCrossing, NonIsolatedCrossing)


def _load_config(args) -> dict:
    if not args.config:
        return {}
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    version = cfg.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")
    return cfg


def _space_from_config(cfg: dict, tol: Tolerances) -> SymplecticSpace:
    spec = cfg.get("space")
    if spec is None:
        raise ConfigError("config needs a 'space' entry")
    if isinstance(spec, dict) and "canonical" in spec:
        return canonical_space(int(spec["canonical"]), tol)
    if isinstance(spec, dict) and "J" in spec:
        return make_space(matrix_from_json(spec["J"]), tol)
    raise ConfigError("space must be {'canonical': n} or {'J': matrix}")


def _tolerances(cfg: dict, args) -> Tolerances:
    tol = Tolerances()
    entries = dict(cfg.get("tolerances", {}))
    if getattr(args, "tol", None) is not None:
        entries["rank_rel"] = args.tol
    known = {"struct", "sympl", "lagr", "rank_rel"}
    bad = set(entries) - known
    if bad:
        raise ConfigError(f"unknown tolerance keys {sorted(bad)}")
    return tol.with_(**{k: float(v) for k, v in entries.items()})


def _v_frame(cfg: dict, space, pspace, brake: BrakeSymmetry | None):
    spec = cfg.get("v", {"kind": "circle", "z": [1.0, 0.0]})
    kind = spec.get("kind")
    if kind == "graph":
        return graph_frame(pspace, matrix_from_json(spec["matrix"]))
    if kind == "circle":
        z = spec.get("z", [1.0, 0.0])
        return circle_graph_frame(pspace, complex(z[0], z[1]))
    if kind == "product":
        if brake is None:
            raise ConfigError("product V needs a 'brake' entry in the config")
        return brake.product_frame(spec.get("left", "U+"), spec.get("right", "U+"))
    if kind == "frame":
        return LagrangianFrame(pspace, matrix_from_json(spec["columns"]))
    raise ConfigError(f"unknown V kind {kind!r}")


def _brake_from_config(cfg: dict, tol: Tolerances) -> BrakeSymmetry | None:
    spec = cfg.get("brake")
    if spec is None:
        return None
    if "K" in spec:
        return BrakeSymmetry(matrix_from_json(spec["K"]), tol)
    return BrakeSymmetry.random(int(spec["n"]), int(spec.get("seed", 0)), tol=tol)


def cmd_index(args) -> int:
    cfg = _load_config(args)
    tol = _tolerances(cfg, args)
    brake = _brake_from_config(cfg, tol)
    space = brake.space if (brake and "space" not in cfg) else _space_from_config(cfg, tol)
    if "path" not in cfg:
        raise ConfigError("config needs a 'path' entry")
    path = path_from_dict(space, cfg["path"])
    interval = tuple(cfg["interval"]) if "interval" in cfg else None
    pspace = product_space(space)
    v = _v_frame(cfg, space, pspace, brake)
    report = graph_index(path, v, interval, collect_trace=True)

    a, b = interval if interval else path.domain
    payload = report.to_dict()
    payload["schema_version"] = SCHEMA_VERSION
    payload["kind"] = "index"
    payload["endpoint_nullities"] = {
        "start": nullities(space, path.value(a), v)[0],
        "end": nullities(space, path.value(b), v)[0],
    }
    try:
        oracle = graph_index(path, v, interval, method="crossing-form")
        payload["crossing_table"] = oracle.to_dict()["crossings"]
        payload["oracle_index"] = oracle.index
    except (DegenerateCrossing, NonIsolatedCrossing) as exc:
        payload["crossing_table"] = None
        payload["crossing_table_note"] = str(exc)

    if args.csv_traces and report.trace is not None:
        write_trace_csv(args.csv_traces, *report.trace)
        payload["csv_traces"] = args.csv_traces
    if args.plot and report.trace is not None:
        from .plots import render_eigenangle_traces

        render_eigenangle_traces(*report.trace, out_path=args.plot,
                                 gauge_eps=report.gauge_eps)
        payload["figure"] = args.plot
    print(dump_json(payload, args.out))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    suite = args.suite or cfg.get("suite", "all")
    if suite not in SUITES:
        raise ConfigError(f"suite must be one of {SUITES}")
    trials = args.trials if args.trials is not None else int(cfg.get("trials", 100))
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    seed = args.seed if args.seed is not None else int(cfg.get("master_seed", 2024))
    dims = cfg.get("dims", [1, 3])
    ks = cfg.get("k_range", [2, 6])
    threads = int(os.environ.get("MASLOV_ITER_THREADS", "1"))
    report = run_campaign(suite, trials, seed, n_max=int(dims[1]),
                          k_max=int(ks[1]), threads=max(1, threads))
    payload = report.to_dict()
    if args.plot:
        from .plots import render_campaign_summary

        render_campaign_summary(payload, args.plot)
        payload["figure"] = args.plot
    print(dump_json(payload, args.out or cfg.get("out")))
    return EXIT_OK if report.failed == 0 else EXIT_VIOLATION


def cmd_decompose(args) -> int:
    cfg = _load_config(args)
    tol = _tolerances(cfg, args)
    space = _space_from_config(cfg, tol)
    nspace, transfer = space.normalized()
    payload: dict = {"schema_version": SCHEMA_VERSION, "kind": "decompose"}
    if "matrix" in cfg:
        M = matrix_from_json(cfg["matrix"])
        if la.opnorm(transfer - np.eye(space.dim)) > 1e-12:
            M = transfer @ M @ np.linalg.inv(transfer)
        factors = polar_decompose(nspace, M)
        payload.update({
            "A": matrix_to_json(factors.A),
            "U": matrix_to_json(factors.U),
            "S": matrix_to_json(factors.S),
            "S12": matrix_to_json(factors.S12),
            "U11": matrix_to_json(factors.U11),
            "U22": matrix_to_json(factors.U22),
            "residual": factors.residual,
            "off_block_residual": factors.off_block_residual,
        })
    if "path" in cfg:
        path = path_from_dict(nspace, cfg["path"])
        w_plus, w_minus = winding_pair(path)
        payload["winding_pair"] = [w_plus, w_minus]
    if "matrix" not in cfg and "path" not in cfg:
        raise ConfigError("decompose needs 'matrix' and/or 'path'")
    print(dump_json(payload, args.out))
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(verbose=True)
    failed = [r for r in results if not r[1]]
    if any("RankAmbiguous" in msg or "GaugeUnstable" in msg for _, ok, msg in results
           if not ok):
        return EXIT_NUMERICAL
    return EXIT_OK if not failed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maslov-iter",
        description="Maslov-type indices and iteration identities of complex "
                    "symplectic matrix paths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="index of a path against a Lagrangian")
    p_index.add_argument("--config", required=True)
    p_index.add_argument("--out")
    p_index.add_argument("--tol", type=float)
    p_index.add_argument("--csv-traces", dest="csv_traces")
    p_index.add_argument("--plot", help="render the eigenangle traces to this file")
    p_index.set_defaults(fn=cmd_index)

    p_verify = sub.add_parser("verify", help="randomized identity campaigns")
    p_verify.add_argument("--config")
    p_verify.add_argument("--suite", choices=SUITES)
    p_verify.add_argument("--trials", type=int)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--out")
    p_verify.add_argument("--tol", type=float)
    p_verify.add_argument("--plot", help="render the campaign summary to this file")
    p_verify.set_defaults(fn=cmd_verify)

    p_dec = sub.add_parser("decompose", help="polar/winding decomposition report")
    p_dec.add_argument("--config", required=True)
    p_dec.add_argument("--out")
    p_dec.add_argument("--tol", type=float)
    p_dec.set_defaults(fn=cmd_decompose)

    p_self = sub.add_parser("selftest", help="canonical fixture table")
    p_self.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical instability: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MaslovError as exc:
        print(f"identity violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
