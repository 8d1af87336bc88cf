"""Batch command-line front end.

    partfam cluster --builtin P2
    partfam anneal --builtin P1 --seed-sweep 10 --json
    partfam tune --responses responses.csv
    partfam oracle --builtin P1

Exit codes: 0 success, 2 input validation, 3 config validation, 4 enumeration
cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import time

from .annealing import AnnealConfig, ConfigError, anneal, cluster_stage, run_pipeline
from .clustering import default_family_count, export_dendrogram
from .dataset import BUILTIN_IDS, DatasetError, builtin_dataset, load_matrix
from .oracle import DEFAULT_CAP, EnumerationCapError, brute_force_optimum
from .report import PUBLISHED, SCHEMA_VERSION, RunReport, perfection_percentage
from .tuning import DEFAULT_FACTORS, TaguchiDesign, tune

EXIT_INPUT, EXIT_CONFIG, EXIT_CAP = 2, 3, 4
CONFIG_ENV = "PARTFAM_CONFIG"
_CONFIG_KEYS = ("t_init", "t_final", "alpha", "markov_len", "seed", "stagnation_limit")


class InputError(Exception):
    pass


def _load(args):
    if args.builtin:
        return args.builtin.upper(), builtin_dataset(args.builtin)
    if args.input:
        try:
            return args.input, load_matrix(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from exc
    raise InputError("give --builtin or --input")


def _add_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--builtin", choices=BUILTIN_IDS, type=str.upper, help="bundled problem")
    g.add_argument("--input", metavar="PATH", help="CSV/TSV or JSON part-code file")
    p.add_argument("--families", type=int, metavar="N", help="number of families (default ceil(m/4))")
    p.add_argument("--ranges", choices=("fixed", "observed"), default="fixed",
                   help="attribute range: fixed 9 or each column's observed range")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _ranges(args):
    return "observed" if args.ranges == "observed" else None


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config(args) -> AnnealConfig:
    values: dict = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    flags = {"t_init": args.t_init, "t_final": args.t_final, "alpha": args.alpha,
             "markov_len": args.markov, "seed": args.seed,
             "stagnation_limit": args.stagnation_limit}
    values.update({k: v for k, v in flags.items() if v is not None})
    cfg = AnnealConfig(**values, strict_count=args.strict_count)
    if cfg.t_final >= cfg.t_init:
        raise ConfigError(f"t_final ({cfg.t_final}) must be below t_init ({cfg.t_init})")
    return cfg


def cmd_cluster(args) -> int:
    name, matrix = _load(args)
    result = cluster_stage(matrix, args.families, _ranges(args))
    part, f = result.clinkage, result.clinkage_objective
    if args.dendrogram:
        _emit(export_dendrogram(result.tree, args.dendrogram_format), args.dendrogram)
    if args.linkage_out:
        _emit(result.tree.to_csv(), args.linkage_out)
    if args.distance_out:
        _emit(result.distance.to_csv(), args.distance_out)
    n = part.n_families
    if args.json:
        print(json.dumps({
            "schema_version": SCHEMA_VERSION, "dataset": name, "n_families": n,
            "families": part.families(one_based=True), "objective": f,
            "perfection_pct": perfection_percentage(f, n),
        }, indent=2))
    else:
        print(f"dataset: {name}   families: {n}")
        for k, fam in enumerate(part.families(one_based=True), 1):
            print(f"  Family {k} {{{','.join(map(str, fam))}}}")
        print(f"objective: {f:.6f}   perfection: {perfection_percentage(f, n):.2f}%")
    return 0


def cmd_anneal(args) -> int:
    name, matrix = _load(args)
    cfg = _config(args)
    start = time.process_time()
    result = run_pipeline(matrix, args.families, cfg, _ranges(args))
    seeds: tuple = ()
    sa = result.sa
    if args.seed_sweep:
        seeds = tuple(range(cfg.seed, cfg.seed + args.seed_sweep))
        runs = [sa] + [anneal(result.clinkage, result.similarity, cfg.replace(seed=s))
                       for s in seeds[1:]]
        # best objective, earliest seed on ties
        sa = max(runs, key=lambda r: (r.best_objective, -r.config.seed))
        result = dataclasses.replace(result, sa=sa)
    cpu = time.process_time() - start if args.timing else None
    if args.trace_out:
        _emit(sa.trace_csv(), args.trace_out)
    report = RunReport.from_pipeline(name, result, seeds, cpu)
    print(report.to_json() if args.json else report.to_text(), end="" if not args.json else "\n")
    return 0


def _read_responses(path: str) -> list[float]:
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if rows and "response" in [c.strip().lower() for c in rows[0]]:
        col = [c.strip().lower() for c in rows[0]].index("response")
        rows = [[r[col]] for r in rows[1:]]
    try:
        values = [float(r[-1]) for r in rows]
    except ValueError as exc:
        raise InputError(f"non-numeric response in {path}: {exc}") from exc
    if len(values) != 9:
        raise InputError(f"expected 9 responses in {path}, got {len(values)}")
    return values


def _read_levels(path: str) -> TaguchiDesign:
    """JSON ``{"t_init": [..3..], "alpha": [...], "markov_len": [...]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read levels file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("levels file must map factor names to level lists")
    factors = []
    for name, default in DEFAULT_FACTORS:
        levels = data.get(name, default)
        if not isinstance(levels, (list, tuple)) or len(levels) != 3:
            raise ConfigError(f"L9 requires 3 levels per factor; got {levels!r} for {name!r}")
        factors.append((name, tuple(levels)))
    return TaguchiDesign(tuple(factors))


def cmd_tune(args) -> int:
    design = _read_levels(args.levels) if args.levels else TaguchiDesign()
    if args.responses:
        report = tune(_read_responses(args.responses), design=design)
    else:
        _, matrix = _load(args)
        report = tune(matrix=matrix, design=design, seeds=range(args.seeds),
                      n_families=args.families)
    if args.csv_out:
        _emit(report.to_csv(), args.csv_out)
    if args.json:
        print(report.to_json())
        return 0
    names = report.design.names
    print("experiment  " + "  ".join(f"{n:>10}" for n in names) + "    response    S/N")
    for r in range(9):
        s = report.design.settings(r)
        sn = f"{report.sn_ratios[r]:8.4f}" if report.sn_ratios is not None else ""
        print(f"{r + 1:>10}  " + "  ".join(f"{s[n]:>10}" for n in names)
              + f"  {report.responses[r]:10.5f}  {sn}")
    t = report.table
    print("\nresponse table")
    for lvl in range(3):
        print(f"  level {lvl + 1}   " + "  ".join(f"{t.level_means[i, lvl]:10.3f}" for i in range(3)))
    print("  delta     " + "  ".join(f"{d:10.3f}" for d in t.delta))
    print("  rank      " + "  ".join(f"{r:>10}" for r in t.rank))
    print("\nANOVA")
    print(f"  {'source':<10}{'df':>4}{'SS':>12}{'MS':>12}{'F':>8}{'p':>8}{'%SS':>8}")
    for row in (*report.anova.factors, report.anova.residual, report.anova.total):
        f = f"{row.f_ratio:8.2f}" if row.f_ratio is not None else " " * 8
        p = f"{row.p_value:8.3f}" if row.p_value is not None else " " * 8
        pc = f"{row.pct_contribution:8.2f}" if row.pct_contribution is not None else " " * 8
        print(f"  {row.source:<10}{row.df:>4}{row.ss:12.6f}{row.ms:12.6f}{f}{p}{pc}")
    rec = report.recommended
    print("\nrecommended: " + ", ".join(f"{n}={getattr(rec, n)}" for n in names))
    return 0


def cmd_oracle(args) -> int:
    name, matrix = _load(args)
    n = args.families or default_family_count(matrix.m)
    part, f = brute_force_optimum(matrix, n, cap=args.cap, ranges=_ranges(args))
    golden = None
    if args.builtin and args.ranges == "fixed" and PUBLISHED[name]["n"] == n:
        golden = PUBLISHED[name]["sapfocs_value"]
    out = {
        "schema_version": SCHEMA_VERSION, "dataset": name, "n_families": n,
        "families": part.families(one_based=True), "objective": f,
    }
    if golden is not None:
        out["published_value"] = golden
        out["published_is_optimal"] = golden >= f - 1e-4
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"dataset: {name}   families: {n}")
        for k, fam in enumerate(out["families"], 1):
            print(f"  Family {k} {{{','.join(map(str, fam))}}}")
        print(f"exact optimum: {f:.6f}")
        if golden is not None:
            verdict = "optimal" if out["published_is_optimal"] else "not optimal"
            print(f"published annealing value {golden} is {verdict}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partfam", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="complete-linkage families")
    _add_source(p)
    p.add_argument("--dendrogram", metavar="PATH", help="write the dendrogram here")
    p.add_argument("--dendrogram-format", default="newick", choices=("newick", "dot", "json"))
    p.add_argument("--linkage-out", metavar="PATH", help="linkage matrix CSV")
    p.add_argument("--distance-out", metavar="PATH", help="distance matrix CSV")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("anneal", help="complete linkage refined by simulated annealing")
    _add_source(p)
    p.add_argument("--config", metavar="PATH", help=f"JSON config (default ${CONFIG_ENV})")
    p.add_argument("--t-init", type=float)
    p.add_argument("--t-final", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--markov", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--seed-sweep", type=int, metavar="K", help="best of K consecutive seeds")
    p.add_argument("--stagnation-limit", type=int)
    p.add_argument("--strict-count", action="store_true",
                   help="advance the move counter on non-worsening moves only")
    p.add_argument("--trace-out", metavar="PATH", help="convergence trace CSV")
    p.add_argument("--timing", action="store_true", help="include CPU seconds in the report")
    p.set_defaults(func=cmd_anneal)

    p = sub.add_parser("tune", help="L9 Taguchi design over t_init, alpha, markov_len")
    _add_source(p, required=False)
    p.add_argument("--responses", metavar="PATH", help="analyse these 9 responses instead of running")
    p.add_argument("--levels", metavar="PATH", help="JSON file with 3 levels per factor")
    p.add_argument("--seeds", type=int, default=5, help="replicate seeds per design row")
    p.add_argument("--csv-out", metavar="PATH", help="design/responses CSV")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("oracle", help="exact optimum by enumeration")
    _add_source(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum partitions to enumerate")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
