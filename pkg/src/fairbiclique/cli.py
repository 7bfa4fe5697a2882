"""Command-line front end: enumerate, prune, oracle and bench subcommands."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .bigraph import FairnessParams, Model
from .enumeration import Algorithm, EnumConfig, EnumResult, Ordering, run_enumeration
from .errors import FairBicliqueError, TimeLimitExceeded
from .io import DatasetSpec, FileAttrs, RandomAttrs, RunRecord, load_dataset, write_bench_csv, write_results
from .oracle import oracle_fair_bicliques
from .pruning import Mode, PruneMethod, prune

log = logging.getLogger("fairbiclique")

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2
DEFAULT_THETA = Fraction(2, 5)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for time limits here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rand_attrs(text: str) -> tuple[int, int]:
    try:
        ku, kv = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected KU,KV, e.g. 2,2") from None
    if ku < 1 or kv < 1:
        raise argparse.ArgumentTypeError("domain sizes must be at least 1")
    return ku, kv


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("dataset")
    g.add_argument("--edges", required=True, help="edge list, one 'upper lower' pair per line")
    g.add_argument("--attrs-upper", help="'id label' file for upper vertices")
    g.add_argument("--attrs-lower", help="'id label' file for lower vertices")
    g.add_argument("--rand-attrs", type=_rand_attrs, metavar="KU,KV", help="random labels with KU upper and KV lower values")
    g.add_argument("--seed", type=int, default=0, help="seed for --rand-attrs (default 0)")
    g.add_argument("--comment-prefixes", default="%#", help="characters that start comment lines (default '%%#')")


def _add_param_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("fairness parameters")
    g.add_argument("--model", choices=[m.value for m in Model], default="ssfbc")
    g.add_argument("--alpha", type=int, required=True, help="upper-side threshold (>= 1)")
    g.add_argument("--beta", type=int, required=True, help="lower-side per-attribute threshold (>= 1)")
    g.add_argument("--delta", type=int, default=2, help="max class-size difference (default 2)")
    g.add_argument("--theta", type=Fraction, help="ratio bound for pssfbc/pbsfbc (default 0.4)")
    g.add_argument("--prune", choices=[m.value for m in PruneMethod], default="cfcore")
    g.add_argument("--prune-iterate", action="store_true", help="repeat the colorful pipeline until nothing changes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairbiclique", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="enumerate fair bicliques")
    _add_dataset_args(e)
    _add_param_args(e)
    e.add_argument("--algo", choices=[a.value for a in Algorithm], default="bcempp")
    e.add_argument("--order", choices=[o.value for o in Ordering], default="deg")
    e.add_argument("--out", required=True, help="result file")
    e.add_argument("--format", choices=["lines", "jsonl"], default="lines")
    e.add_argument("--time-limit", type=float, metavar="SECS", help="stop after SECS seconds (exit 2, partial output)")

    pr = sub.add_parser("prune", help="run fcore/cfcore and print survivor counts")
    _add_dataset_args(pr)
    _add_param_args(pr)

    o = sub.add_parser("oracle", help="brute-force reference results (small graphs only)")
    _add_dataset_args(o)
    _add_param_args(o)
    o.add_argument("--out", required=True)
    o.add_argument("--format", choices=["lines", "jsonl"], default="lines")

    b = sub.add_parser("bench", help="run a parameter grid and write a CSV")
    b.add_argument("--grid", required=True, help="JSON grid file (see README)")
    b.add_argument("--out", required=True, help="CSV output path")
    b.add_argument("--jobs", type=int, default=1, help="grid cells run in parallel (default 1)")
    return parser


def _params(args) -> FairnessParams:
    model = Model(args.model)
    if args.alpha < 1 or args.beta < 1:
        raise UsageError("--alpha and --beta must be at least 1")
    if args.delta < 0:
        raise UsageError("--delta must be nonnegative")
    theta = args.theta
    if theta is not None and not model.proportion:
        raise UsageError(f"--theta needs a proportion model (pssfbc or pbsfbc), not {model.value}")
    if model.proportion and theta is None:
        theta = DEFAULT_THETA
    try:
        return FairnessParams(args.alpha, args.beta, args.delta, theta or Fraction(0), model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dataset(args) -> DatasetSpec:
    files = (args.attrs_upper, args.attrs_lower)
    if any(files) and args.rand_attrs:
        raise UsageError("use either --attrs-upper/--attrs-lower or --rand-attrs, not both")
    if any(files):
        if not all(files):
            raise UsageError("--attrs-upper and --attrs-lower go together")
        mode = FileAttrs(*files)
    else:
        ku, kv = args.rand_attrs or (2, 2)
        mode = RandomAttrs(args.seed, ku, kv)
    return DatasetSpec(args.edges, mode, tuple(args.comment_prefixes))


def _meta(spec: DatasetSpec, p: FairnessParams, prune_method: str) -> dict:
    return {
        "dataset": spec.edge_path,
        "model": p.model.value,
        "alpha": p.alpha,
        "beta": p.beta,
        "delta": p.delta,
        "theta": str(p.theta) if p.model.proportion else None,
        "seed": spec.seed,
        "attrs": "random" if spec.seed is not None else "files",
        "prune": prune_method,
    }


def _cmd_enumerate(args) -> int:
    p = _params(args)
    algo = Algorithm(args.algo)
    if p.model.proportion and algo is not Algorithm.BCEMPP:
        raise UsageError(f"{p.model.value} is only available with --algo bcempp")
    spec = _dataset(args)
    g = load_dataset(spec)
    cfg = EnumConfig(p, Ordering(args.order), algo, PruneMethod(args.prune), args.time_limit, args.prune_iterate)
    code = EXIT_OK
    try:
        result = run_enumeration(g, cfg)
    except TimeLimitExceeded as exc:
        result = exc.result
        code = EXIT_TIMEOUT
        log.warning("time limit hit after %d results; output is partial", result.count)
    meta = _meta(spec, p, args.prune)
    summary = {
        "algorithm": algo.value,
        "ordering": args.order,
        "nodes_expanded": result.nodes_expanded,
        "prune_ms": round(result.prune_ms, 3),
        "search_ms": round(result.search_ms, 3),
        "survivors_fcore": list(result.fcore_survivors),
        "survivors_final": list(result.final_survivors),
    }
    n = write_results(result.bicliques, g, args.out, args.format, meta, result.complete, summary)
    print(f"{n} bicliques written to {args.out}" + ("" if result.complete else " (incomplete)"))
    return code


def _cmd_prune(args) -> int:
    p = _params(args)
    g = load_dataset(_dataset(args))
    mode = Mode.BI_SIDE if p.model.bi_side else Mode.SINGLE_SIDE
    before = g.survivors()
    report = prune(g, p.alpha, p.beta, mode, PruneMethod(args.prune), iterate=args.prune_iterate)
    print(f"input      upper={before[0]} lower={before[1]}")
    for name, (u, v) in report.stages:
        print(f"{name:<14} upper={u} lower={v}")
    print(f"prune_ms={report.total_ms:.3f}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    p = _params(args)
    spec = _dataset(args)
    g = load_dataset(spec)
    found = oracle_fair_bicliques(g, p)
    n = write_results(found, g, args.out, args.format, _meta(spec, p, args.prune))
    print(f"{n} bicliques written to {args.out}")
    return EXIT_OK


def _grid_cells(grid: dict) -> list[dict]:
    """Expand a grid into one dict per run, skipping invalid model/algorithm pairs."""

    def listify(key, default):
        v = grid.get(key, default)
        return v if isinstance(v, list) else [v]

    cells = []
    for ds in grid["datasets"]:
        for model, algo, order, a, b, d in itertools.product(
            listify("models", "ssfbc"),
            listify("algorithms", "bcempp"),
            listify("orderings", "deg"),
            listify("alpha", 1),
            listify("beta", 1),
            listify("delta", 2),
        ):
            m = Model(model)
            if m.proportion and algo != "bcempp":
                continue
            thetas = listify("theta", str(DEFAULT_THETA)) if m.proportion else [None]
            for theta in thetas:
                cells.append(
                    {
                        "dataset": ds,
                        "model": model,
                        "algorithm": algo,
                        "ordering": order,
                        "alpha": a,
                        "beta": b,
                        "delta": d,
                        "theta": theta,
                        "prune": grid.get("prune", "cfcore"),
                        "time_limit": grid.get("time_limit"),
                    }
                )
    return cells


def _dataset_from_grid(ds: dict) -> DatasetSpec:
    if "attrs_upper" in ds:
        mode = FileAttrs(ds["attrs_upper"], ds["attrs_lower"])
    else:
        ku, kv = _rand_attrs(str(ds.get("rand_attrs", "2,2")))
        mode = RandomAttrs(int(ds.get("seed", 0)), ku, kv)
    return DatasetSpec(ds["edges"], mode, tuple(ds.get("comment_prefixes", "%#")))


def _run_cell(cell: dict) -> RunRecord:
    ds = cell["dataset"]
    spec = _dataset_from_grid(ds)
    g = load_dataset(spec)
    theta = Fraction(str(cell["theta"])) if cell["theta"] is not None else Fraction(0)
    p = FairnessParams(int(cell["alpha"]), int(cell["beta"]), int(cell["delta"]), theta, Model(cell["model"]))
    cfg = EnumConfig(
        p,
        Ordering(cell["ordering"]),
        Algorithm(cell["algorithm"]),
        PruneMethod(cell["prune"]),
        cell["time_limit"],
    )
    try:
        result: EnumResult = run_enumeration(g, cfg, collect=False)
    except TimeLimitExceeded as exc:
        result = exc.result
        log.warning("cell %s timed out", cell)
    return RunRecord(
        dataset=ds.get("name", ds["edges"]),
        model=p.model.value,
        algorithm=cfg.algorithm.value,
        ordering=cfg.ordering.value,
        alpha=p.alpha,
        beta=p.beta,
        delta=p.delta,
        theta=str(p.theta) if p.model.proportion else "",
        seed="" if spec.seed is None else str(spec.seed),
        survivors_fcore=sum(result.fcore_survivors),
        survivors_cfcore=sum(result.final_survivors),
        prune_ms=result.prune_ms,
        search_ms=result.search_ms,
        results=result.count,
        nodes_expanded=result.nodes_expanded,
    )


def _cmd_bench(args) -> int:
    try:
        with open(args.grid, encoding="utf-8") as fh:
            grid = json.load(fh)
        cells = _grid_cells(grid)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad grid file: {exc}") from None
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_run_cell, cells))
    else:
        records = [_run_cell(c) for c in cells]
    write_bench_csv(records, args.out)
    print(f"{len(records)} runs written to {args.out}")
    return EXIT_OK


COMMANDS = {
    "enumerate": _cmd_enumerate,
    "prune": _cmd_prune,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fairbiclique: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FairBicliqueError, OSError) as exc:
        print(f"fairbiclique: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
