"""Command-line front end.

Subcommands::

    partmax run      one algorithm, ``--reps`` repetitions, rows appended to a CSV
    partmax sweep    vary b or k; writes solution.csv and query.csv
    partmax bounds   gamma'/alpha' for the app plus every approximation ratio
    partmax quantify exact gamma/alpha by enumeration

Settings come from an optional JSON ``--config`` file; command-line flags
override it.  Repetition ``r`` at swept value ``v`` uses the child seed
``child_seed(seed, v, r)`` (see :func:`partmax.rng.child_seed`); run uses
``v = b``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import algorithms as alg
from .errors import ConfigError, PartmaxError
from .influence import (
    RealizationSet,
    assign_degree_weights,
    balanced_random_groups,
    equal_budgets,
    lemma3_bounds,
    load_json_instance,
    load_snap_edgelist,
    monte_carlo_oracle,
    random_graph,
)
from .matroid import PartitionMatroid
from .oracle import normalize
from .quantify import NonSubmodParams, exact_gamma_alpha, ratio_report
from .rng import child_seed
from .summarization import (
    det_objective,
    gaussian_gram,
    lemma4_gamma_bound,
    load_features_csv,
    segment_partition,
)
from .synthetic import FAMILIES, random_oracle

APPS = ("influence", "summarization", "synthetic")
ALGS = tuple(alg.ALGORITHMS)


@dataclass
class ExperimentConfig:
    app: str = "synthetic"
    alg: list = field(default_factory=lambda: ["greedy"])
    b: int = 4
    k: int = 2
    eps: float = 0.5
    delta: float = 0.001
    gamma_prime: str | float = "auto"
    alpha_prime: str | float = "auto"
    reps: int = 10
    seed: int = 0
    realizations: int = 100
    input: str | None = None
    features: str | None = None
    output: str | None = None
    vary: str | None = None
    values: list = field(default_factory=list)
    exact: bool = False
    family: str = "modular"
    nodes: int = 10
    bandwidth: str | float = "median"
    timing: bool = False

    def validate(self):
        if self.app not in APPS:
            raise ConfigError(f"unknown app {self.app!r}")
        for a in self.alg:
            if a not in ALGS:
                raise ConfigError(f"unknown algorithm {a!r}; choose from {ALGS}")
        if self.b < 1 or self.k < 1:
            raise ConfigError("b and k must be positive")
        if not 0 < self.eps < 1:
            raise ConfigError("eps must lie in (0, 1)")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        if self.reps < 1 or self.realizations < 1:
            raise ConfigError("reps and realizations must be positive")
        for name in ("gamma_prime", "alpha_prime"):
            v = getattr(self, name)
            if v == "auto":
                continue
            try:
                v = float(v)
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a number or 'auto'")
            if not 0 <= v <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
            setattr(self, name, v)
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        return self


class Instance:
    """One concrete problem: matroid, normalized oracle, and where to get
    gamma'/alpha' when they are ``auto``."""

    def __init__(self, matroid, oracle, raw_offset=0.0, bound=None, meta=None):
        self.matroid = matroid
        self.oracle = oracle
        self.raw_offset = raw_offset
        self.bound = bound
        self.meta = meta or {}


class Builder:
    """Loads the app data once and builds instances for given (b, k, seed)."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        if cfg.app == "influence":
            self._load_graph()
        elif cfg.app == "summarization":
            self._load_features()

    def _load_graph(self):
        cfg = self.cfg
        if cfg.input is None:
            g = random_graph(cfg.nodes, 3, rng=child_seed(cfg.seed, 0xC0FFEE))
        elif str(cfg.input).endswith(".json"):
            g = load_json_instance(cfg.input)
        else:
            g = load_snap_edgelist(cfg.input)
        if g.p0 is None:
            assign_degree_weights(g)
        self.graph = g
        r = RealizationSet.sample(g.num_edges, cfg.realizations, seed=cfg.seed)
        self.oracle = normalize(monte_carlo_oracle(g, r))

    def _load_features(self):
        cfg = self.cfg
        if cfg.features is None:
            raise ConfigError("summarization needs --features")
        F = load_features_csv(cfg.features)
        bw = cfg.bandwidth if cfg.bandwidth == "median" else float(cfg.bandwidth)
        self.gram = gaussian_gram(F, bw)
        self.oracle = normalize(det_objective(self.gram))

    def build(self, b: int, k: int, seed: int) -> Instance:
        cfg = self.cfg
        if cfg.app == "influence":
            g = self.graph
            m = PartitionMatroid(balanced_random_groups(g.n, k, seed), equal_budgets(b, k))
            return Instance(m, self.oracle, self.oracle.offset,
                            lambda: lemma3_bounds(g, m.b),
                            {"nodes": g.n, "edges": g.num_edges, "seeds": g.seeds.tolist()})
        if cfg.app == "summarization":
            if b % k:
                raise ConfigError(f"b={b} is not a multiple of k={k}")
            n = self.gram.shape[0]
            m = segment_partition(n, k, b // k)
            A = np.eye(n) + self.gram
            return Instance(m, self.oracle, self.oracle.offset,
                            lambda: lemma4_gamma_bound(A, m.b), {"frames": n})
        # synthetic: the objective is fixed by the master seed, groups by `seed`
        n = cfg.nodes
        o = random_oracle(cfg.family, n, child_seed(cfg.seed, 0xFA))
        m = PartitionMatroid(balanced_random_groups(n, k, seed), equal_budgets(b, k))
        return Instance(m, normalize(o), 0.0, None, {"family": cfg.family, "nodes": n})


def resolve_params(cfg: ExperimentConfig, inst: Instance) -> NonSubmodParams:
    """gamma'/alpha' for the randomized algorithms: explicit values win, then
    exact enumeration under ``--exact``, then the app bound."""
    gp, ap = cfg.gamma_prime, cfg.alpha_prime
    if gp != "auto" and ap != "auto":
        return NonSubmodParams(float(gp), float(ap), "given")
    if cfg.exact:
        auto = exact_gamma_alpha(inst.matroid, inst.oracle)
    elif inst.bound is not None:
        auto = inst.bound()
    else:
        raise ConfigError("'auto' gamma'/alpha' needs an influence or summarization "
                          "app, or --exact")
    return NonSubmodParams(auto.gamma if gp == "auto" else float(gp),
                           auto.alpha if ap == "auto" else float(ap),
                           auto.provenance if "auto" in (gp, ap) else "given")


def run_one(cfg, inst: Instance, name: str, seed: int, params=None):
    m, o = inst.matroid, inst.oracle
    if name == "greedy":
        return alg.greedy(m, o)
    if name == "thr":
        return alg.threshold_greedy(m, o, cfg.eps)
    if name == "brute":
        return alg.brute_force(m, o)
    if name == "resgreedy":
        return alg.residual_greedy(m, o, seed)
    if params is None:
        params = resolve_params(cfg, inst)
    if name == "prob":
        return alg.prob(m, o, params.gamma, params.alpha, seed)
    return alg.fast_prob(m, o, params.gamma, params.alpha, cfg.delta, seed)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


RUN_COLUMNS = ["app", "algorithm", "b", "k", "seed", "objective", "raw_objective", "queries"]


def cmd_run(cfg: ExperimentConfig, out=None) -> list[dict]:
    out = out or sys.stdout
    builder = Builder(cfg)
    rows = []
    meta_printed = False
    for rep in range(cfg.reps):
        seed = child_seed(cfg.seed, cfg.b, rep)
        inst = builder.build(cfg.b, cfg.k, seed)
        params = None
        if {"prob", "fastprob"} & set(cfg.alg):
            params = resolve_params(cfg, inst)
        if not meta_printed:
            meta = dict(inst.meta)
            if params is not None:
                meta.update(gamma_prime=params.gamma, alpha_prime=params.alpha,
                            provenance=params.provenance)
            print("# " + json.dumps(meta), file=out)
            meta_printed = True
        for name in cfg.alg:
            t0 = time.perf_counter()
            res = run_one(cfg, inst, name, seed, params)
            dt = time.perf_counter() - t0
            row = dict(app=cfg.app, algorithm=name, b=cfg.b, k=cfg.k, seed=seed,
                       objective=res.objective, raw_objective=res.objective + inst.raw_offset,
                       queries=res.queries)
            if cfg.timing:
                row["wall_time"] = dt
            rows.append(row)
            print(f"{name:10s} rep={rep} objective={res.objective:.6g} "
                  f"queries={res.queries}", file=out)
    if cfg.output:
        cols = RUN_COLUMNS + (["wall_time"] if cfg.timing else [])
        path = Path(cfg.output)
        new = not path.exists() or path.stat().st_size == 0
        with open(path, "a", newline="") as fh:
            w = csv.writer(fh)
            if new:
                w.writerow(cols)
            for r in rows:
                w.writerow([_fmt(r[c]) for c in cols])
    return rows


def cmd_sweep(cfg: ExperimentConfig, out=None):
    out = out or sys.stdout
    if cfg.vary not in ("b", "k"):
        raise ConfigError("--vary must be 'b' or 'k'")
    if not cfg.values:
        raise ConfigError("--values is required for sweep")
    builder = Builder(cfg)
    head = "B" if cfg.vary == "b" else "num_groups"
    sol_rows, q_rows = [], []
    for v in cfg.values:
        b, k = (v, cfg.k) if cfg.vary == "b" else (cfg.b, v)
        objs = {a: [] for a in cfg.alg}
        qs = {a: [] for a in cfg.alg}
        for rep in range(cfg.reps):
            seed = child_seed(cfg.seed, v, rep)
            inst = builder.build(b, k, seed)
            params = None
            if {"prob", "fastprob"} & set(cfg.alg):
                params = resolve_params(cfg, inst)
            for name in cfg.alg:
                res = run_one(cfg, inst, name, seed, params)
                objs[name].append(res.objective)
                qs[name].append(res.queries)
        sol_rows.append([v] + [float(np.mean(objs[a])) for a in cfg.alg])
        q_rows.append([v] + [float(np.mean(qs[a])) for a in cfg.alg])
        print(f"{head}={v} " + " ".join(
            f"{a}:{np.mean(objs[a]):.4g}/{np.mean(qs[a]):.0f}q" for a in cfg.alg), file=out)
    outdir = Path(cfg.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for fname, rows in (("solution.csv", sol_rows), ("query.csv", q_rows)):
        with open(outdir / fname, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([head] + list(cfg.alg))
            for r in rows:
                w.writerow([r[0]] + [_fmt(x) for x in r[1:]])
    return sol_rows, q_rows


def _clean(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def cmd_bounds(cfg: ExperimentConfig, out=None, exact_only=False) -> dict:
    out = out or sys.stdout
    builder = Builder(cfg)
    inst = builder.build(cfg.b, cfg.k, child_seed(cfg.seed, cfg.b, 0))
    m = inst.matroid
    if exact_only or cfg.exact:
        params = exact_gamma_alpha(m, inst.oracle)
    elif inst.bound is not None:
        params = inst.bound()
    else:
        raise ConfigError("no bound available for the synthetic app; use --exact")
    report = {
        "gamma": params.gamma, "alpha": params.alpha,
        "provenance": params.provenance, "degenerate": params.degenerate,
        "n": m.n, "b": m.b, "b_hat": m.b_hat, "n_bar": m.n_bar, "eps": cfg.eps,
    }
    if not exact_only:
        rr = ratio_report(params, m, cfg.eps)
        report.update({k: _clean(v) for k, v in asdict(rr).items()})
        report["greedy_ratio"] = _clean(rr.greedy_ratio if params.gamma > 0 else math.inf)
        report["thrgreedy_ratio"] = _clean(rr.thrgreedy_ratio if params.gamma > 0 else math.inf)
    print(json.dumps(report, indent=2), file=out)
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partmax", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--app", choices=APPS)
    common.add_argument("--alg", help="algorithm name(s), comma separated")
    common.add_argument("--b", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--eps", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--gamma-prime", dest="gamma_prime")
    common.add_argument("--alpha-prime", dest="alpha_prime")
    common.add_argument("--reps", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--realizations", type=int)
    common.add_argument("--input")
    common.add_argument("--features")
    common.add_argument("--output")
    common.add_argument("--vary", choices=("b", "k"))
    common.add_argument("--values", help="comma-separated integers")
    common.add_argument("--exact", action="store_true", default=None)
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--nodes", type=int, help="size of a generated instance")
    common.add_argument("--bandwidth")
    common.add_argument("--timing", action="store_true", default=None,
                        help="add a wall_time column to run output")
    for name in ("run", "sweep", "bounds", "quantify"):
        sub.add_parser(name, parents=[common])
    return p


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for f in fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            data[f.name] = v
    if isinstance(data.get("alg"), str):
        data["alg"] = [a.strip() for a in data["alg"].split(",") if a.strip()]
    if isinstance(data.get("values"), str):
        try:
            data["values"] = [int(x) for x in data["values"].split(",") if x.strip()]
        except ValueError:
            raise ConfigError("--values must be comma-separated integers")
    if args.command == "sweep" and "alg" not in data:
        data["alg"] = ["greedy", "thr", "fastprob", "resgreedy"]
    return ExperimentConfig(**data).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "run":
            cmd_run(cfg)
        elif args.command == "sweep":
            cmd_sweep(cfg)
        elif args.command == "bounds":
            cmd_bounds(cfg)
        else:
            cmd_bounds(cfg, exact_only=True)
    except PartmaxError as exc:
        print(json.dumps({"error": exc.category, "message": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
