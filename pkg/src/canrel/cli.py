"""Command-line entry point ``canrel``.

Exit status: 0 on success, 1 when an input violates a mathematical
precondition (the error class is printed), 2 on I/O or parse errors.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import lab
from .errors import DomainError
from .formats import (
    FormatError,
    decode_matrix,
    decode_path,
    decode_relation,
    dump_json,
    encode_matrix,
    encode_relation,
    encode_subspace,
    is_matrix,
    is_relation,
    load_json,
)
from .index import extended_mean_index, index_homogeneity, lift_angle, mean_index
from .linalg import RANK_TOL
from .relations import compose, decompose, extended_graph_part, in_exceptional_set, power
from .spectral import angle, rho, rho_hat, rho_squared


@dataclass(frozen=True)
class Config:
    tol: float = RANK_TOL
    seed: int = 0
    output: str = "text"
    trace_path: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.output not in ("text", "json"):
            raise ValueError(f"output must be text or json, got {self.output!r}")


def _default_tol() -> float:
    env = os.environ.get("CANREL_TOL")
    return float(env) if env else RANK_TOL


def _complex(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _angle12(z: complex) -> float:
    return float(f"{angle(z):.12g}")


def _emit(obj, out=None):
    print(dump_json(obj), file=out or sys.stdout)


# ---------------------------------------------------------------- commands

def _relation_report(rel) -> dict:
    inv = rel.invariants
    member, margin = in_exceptional_set(rel)
    ds = rel.distinguished
    return {
        "n": rel.n,
        "invariants": inv.as_dict(),
        "in_H": member,
        "margin": margin,
        "lagrangian_residual": rel.lagrangian_residual,
        "kernel": encode_subspace(ds.kernel),
        "halo": encode_subspace(ds.halo),
        "domain": encode_subspace(ds.domain),
        "range": encode_subspace(ds.range),
    }


def cmd_relation(args, cfg: Config) -> int:
    rel = decode_relation(load_json(args.file), cfg.tol)
    if args.action == "info":
        _emit(_relation_report(rel))
        return 0
    if args.action == "compose":
        if not args.other:
            raise FormatError("compose needs a second relation file (applied first)")
        out = compose(rel, decode_relation(load_json(args.other), cfg.tol))
    elif args.action == "power":
        if args.k is None:
            raise FormatError("power needs -k <exponent>")
        out = power(rel, args.k)
    else:
        dec = extended_graph_part(rel) if args.extended else decompose(rel)
        if dec is None:
            _emit({"graph_part": None, "invariants": rel.invariants.as_dict()})
            return 0
        _emit({
            "invariants": rel.invariants.as_dict(),
            "graph_unique": dec.graph_unique,
            "kernel": encode_subspace(dec.kernel),
            "halo": encode_subspace(dec.halo),
            "v_s": encode_subspace(dec.v_s),
            "v_g": encode_subspace(dec.v_g),
            "vg_basis": encode_matrix(dec.vg_basis),
            "phi": encode_matrix(dec.phi),
        })
        return 0
    if args.out:
        dump_json(encode_relation(out), args.out)
    report = {"relation": encode_relation(out), "invariants": out.invariants.as_dict()}
    _emit(report)
    return 0


def cmd_rho(args, cfg: Config) -> int:
    obj = load_json(args.file)
    if is_matrix(obj):
        a = decode_matrix(obj)
        r, r2 = rho(a), rho_squared(a)
        report = {"rho": _complex(r), "rho_angle": _angle12(r),
                  "rho_squared": _complex(r2), "rho_squared_angle": _angle12(r2)}
    elif is_relation(obj):
        rel = decode_relation(obj, cfg.tol)
        member, margin = in_exceptional_set(rel)
        rh = rho_hat(rel, warn=False)
        report = {"rho_hat": _complex(rh), "rho_hat_angle": _angle12(rh),
                  "invariants": rel.invariants.as_dict(), "margin": margin}
    else:
        raise FormatError("expected a matrix or a relation")
    if cfg.output == "json":
        _emit(report)
    else:
        for key, val in report.items():
            print(f"{key}: {val}")
    return 0


def cmd_index(args, cfg: Config) -> int:
    path = decode_path(load_json(args.file), cfg.tol)
    trace = lift_angle(path, args.grid, args.max_depth)
    report = {"delta_hat": trace.index, "samples": len(trace.ts), "refinement_depth": trace.refinement_depth}
    if path.is_graph_path:
        report["delta"] = mean_index(path, args.grid, args.max_depth)
    if args.power is not None:
        lhs, rhs = index_homogeneity(path, args.power, args.grid, args.max_depth)
        report["power"] = args.power
        report["delta_hat_power"] = lhs
        report["power_times_delta_hat"] = rhs
    if cfg.trace_path:
        with open(cfg.trace_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re", "im", "theta"])
            for t, v, th in zip(trace.ts, trace.values, trace.angles):
                w.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag)), repr(float(th))])
    _emit(report)
    return 0


def _scenario_kwargs(name: str, args, cfg: Config) -> dict:
    kw = {}
    accepts = {
        "squared_example": {"n"},
        "composition_discontinuity": {"n", "seed", "steps"},
        "converse_example": set(),
        "hyperbolicity": {"n", "k", "seed", "steps"},
        "continuity_sweep": {"n", "k", "seed", "steps"},
        "codimension_proxy": {"seed"},
    }[name]
    if "n" in accepts and args.n is not None:
        kw["n"] = args.n
    if "k" in accepts and args.k is not None:
        kw["k"] = args.k
    if "seed" in accepts:
        kw["seed"] = cfg.seed
    if "steps" in accepts and args.steps is not None:
        kw["steps"] = args.steps
    if name == "continuity_sweep":
        n = kw.setdefault("n", 2)
        kw.setdefault("k", max(1, n // 2))
    if name == "codimension_proxy" and args.quick:
        kw.update(draws=500, paths=20, points=200)
    return kw


def cmd_lab(args, cfg: Config) -> int:
    names = sorted(lab.SCENARIOS) if args.scenario == "all" else [args.scenario]
    reports = []
    for name in names:
        if name not in lab.SCENARIOS:
            raise FormatError(f"unknown scenario {name!r}; choose from {sorted(lab.SCENARIOS)} or 'all'")
        reports.append(lab.run_scenario(name, **_scenario_kwargs(name, args, cfg)))
    payload = [r.as_dict() for r in reports]
    if args.json_target and args.json_target != "-":
        dump_json(payload, args.json_target)
    if args.json_target == "-":
        _emit(payload)
    else:
        for r in reports:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
            for key, val in r.metrics.items():
                print(f"    {key} = {val}")
            for note in r.notes:
                print(f"    note: {note}")
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="relative rank tolerance (default 1e-9, or $CANREL_TOL)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--json", dest="json_target", nargs="?", const="-", default=argparse.SUPPRESS,
                        metavar="FILE", help="machine-readable output; with FILE, write a report there")

    p = argparse.ArgumentParser(prog="canrel", parents=[common],
                                description="Linear canonical relations, rho-hat and extended mean indices.")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("relation", parents=[common], help="inspect or combine relations")
    pr.add_argument("action", choices=["info", "compose", "power", "decompose"])
    pr.add_argument("file", help="relation JSON; for compose, the relation applied second")
    pr.add_argument("other", nargs="?", help="compose only: relation applied first")
    pr.add_argument("-k", type=int, help="power only: exponent")
    pr.add_argument("-o", "--out", help="write the resulting relation JSON here")
    pr.add_argument("--extended", action="store_true",
                    help="decompose only: allow relations in H through the extended graph part")
    pr.set_defaults(func=cmd_relation)

    ph = sub.add_parser("rho", parents=[common], help="rho and rho^2 of a matrix, or rho-hat of a relation")
    ph.add_argument("file")
    ph.set_defaults(func=cmd_rho)

    pi = sub.add_parser("index", parents=[common], help="extended mean index of a path")
    pi.add_argument("file", help="path JSON")
    pi.add_argument("--trace", help="write t, re, im, theta samples to this CSV file")
    pi.add_argument("--power", type=int, help="also report the homogeneity pair for this power")
    pi.add_argument("--grid", type=int, default=64, help="initial samples (default 64)")
    pi.add_argument("--max-depth", type=int, default=24, help="bisection depth limit (default 24)")
    pi.set_defaults(func=cmd_index)

    pl = sub.add_parser("lab", parents=[common], help="verification scenarios")
    lsub = pl.add_subparsers(dest="lab_command", required=True)
    run = lsub.add_parser("run", parents=[common], help="run a scenario or 'all'")
    run.add_argument("scenario", help=f"one of {', '.join(sorted(lab.SCENARIOS))}, or all")
    run.add_argument("--n", type=int)
    run.add_argument("--k", type=int)
    run.add_argument("--steps", type=int)
    run.add_argument("--quick", action="store_true", help="smaller codimension proxy sample")
    run.set_defaults(func=cmd_lab)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    json_target = getattr(args, "json_target", None)
    try:
        cfg = Config(
            tol=getattr(args, "tol", None) or _default_tol(),
            seed=getattr(args, "seed", 0),
            output="json" if json_target else "text",
            trace_path=getattr(args, "trace", None),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args.json_target = json_target
    try:
        return args.func(args, cfg)
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, FormatError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
