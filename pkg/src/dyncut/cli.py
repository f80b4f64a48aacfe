"""Command line front end: stream replay and oracle benchmarks.

    dyncut run --graph g.txt --stream s.txt --mode desk --seed 7 [--emit-cut]
    dyncut bench --family gnp --n 14 --ops 100 --trials 50 --oracle

Graph files start with "n m" followed by m lines "u v". Stream files hold
"+ u v", "- u v" and "?" lines. Blank lines and lines starting with # are
ignored in both.
"""
from __future__ import annotations

import argparse
import csv
import os
import random
import sys
from pathlib import Path

from .generators import FAMILIES, make_graph, random_stream
from .graph import DynamicGraph, GraphError, parse_graph, parse_stream
from .localkcut import derive_seed
from .master import MasterState
from .oracle import OracleLimitError, exact_min_cut
from .params import Params

BENCH_COLUMNS = ["step", "query_value", "instance", "exact_boundary"]
ORACLE_COLUMNS = ["exact_min_cut", "ratio"]


def _lambda_arg(text: str):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _common(p: argparse.ArgumentParser, lambda_default) -> None:
    p.add_argument("--mode", choices=("paper", "desk"), default="desk")
    p.add_argument("--seed", type=int, default=None, help="falls back to $DYNCUT_SEED, then 0")
    p.add_argument("--eps", type=float, default=None, help="default 0.1, or 0.04 with --mode paper")
    p.add_argument("--phi", type=float, default=0.25)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--lambda-min", type=_lambda_arg, default=lambda_default,
                   help="desk mode only; 'auto' uses the exact min cut of the initial graph")
    p.add_argument("--lambda-max", type=float, default=None, help="desk mode only; default 1.2 * lambda-min")
    p.add_argument("--restart-factor", type=float, default=1.0)
    p.add_argument("--batch-multiplier", type=float, default=1.0,
                   help="scales the LocalKCut batch sizes of --mode paper, which are huge at any size")
    p.add_argument("--parallel-instances", type=int, default=1)
    p.add_argument("--diag-dir", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyncut", description="approximate dynamic global minimum cut")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay an update stream and answer its queries")
    run.add_argument("--graph", type=Path, required=True)
    run.add_argument("--stream", type=Path, required=True)
    run.add_argument("--emit-cut", action="store_true")
    run.add_argument("--oracle", action="store_true", help="append the exact min cut to every answer")
    _common(run, 4.0)

    bench = sub.add_parser("bench", help="random graphs and streams, CSV on stdout")
    bench.add_argument("--family", choices=FAMILIES, default="gnp")
    bench.add_argument("--n", type=int, default=12)
    bench.add_argument("--max-edges", type=int, default=50)
    bench.add_argument("--ops", type=int, default=100)
    bench.add_argument("--query-every", type=int, default=5)
    bench.add_argument("--trials", type=int, default=1)
    bench.add_argument("--oracle", action="store_true", help="add exact_min_cut and ratio columns")
    bench.add_argument("--out", type=Path, default=None)
    _common(bench, "auto")
    return ap


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("DYNCUT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise GraphError(f"DYNCUT_SEED is not an integer: {env!r}") from None


def make_params(args, g: DynamicGraph) -> Params:
    kw = dict(phi=args.phi, alpha=args.alpha, rho=args.rho, restart_factor=args.restart_factor,
              batch_multiplier=args.batch_multiplier)
    if args.mode == "paper":
        return Params.theoretical(max(g.n, 2), eps=0.04 if args.eps is None else args.eps, **kw)
    lo = args.lambda_min
    if lo == "auto":
        lo = max(1.0, float(exact_min_cut(g).boundary)) if g.n >= 2 else 1.0
    hi = args.lambda_max if args.lambda_max is not None else 1.2 * lo
    return Params(eps=0.1 if args.eps is None else args.eps, lambda_min=lo, lambda_max=hi, **kw)


def _write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        return
    cols: list[str] = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, restval="")
        w.writeheader()
        w.writerows(rows)


class _Diag:
    """Per-query level rows and final cluster rows, written to --diag-dir."""

    def __init__(self, directory: Path | None):
        self.dir = directory
        self.levels: list[dict] = []
        self.clusters: list[dict] = []

    def snapshot(self, ms: MasterState, step: int, final: bool = False) -> None:
        if self.dir is None:
            return
        for inst in ms._unique():
            for row in inst.hierarchy.diagnostics():
                self.levels.append(dict(step=step, instance=inst.i, p=inst.p, **row))
            if final:
                for L in inst.hierarchy.levels:
                    if not L.base:
                        self.clusters += [dict(instance=inst.i, **r) for r in L.cd.diagnostics()]

    def write(self, prefix: str = "") -> None:
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        _write_csv(self.dir / f"{prefix}levels.csv", self.levels)
        _write_csv(self.dir / f"{prefix}clusters.csv", self.clusters)


def replay(ms: MasterState, ops: list[tuple], diag: _Diag | None = None):
    """Yield (step, result, side, exact_boundary) for every '?' in ops."""
    step = 0
    for op in ops:
        if op[0] == "?":
            r = ms.query()
            if diag is not None:
                diag.snapshot(ms, step)
            if r is None:
                yield step, None, None, None
            else:
                side, b = ms.extract_cut(r)
                yield step, r, side, b
        else:
            step += 1
            try:
                ms.apply_update(op)
            except GraphError as exc:
                raise GraphError(f"update {step} ({op[0]} {op[1]} {op[2]}): {exc}") from None
    if diag is not None:
        diag.snapshot(ms, step, final=True)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def cmd_run(args, out) -> int:
    seed = resolve_seed(args.seed)
    try:
        g = parse_graph(args.graph.read_text())
    except GraphError as exc:
        raise GraphError(f"{args.graph}: {exc}") from None
    try:
        ops = parse_stream(args.stream.read_text())
    except GraphError as exc:
        raise GraphError(f"{args.stream}: {exc}") from None
    ms = MasterState(g, make_params(args, g), seed=seed, parallel=args.parallel_instances)
    diag = _Diag(args.diag_dir)
    for _, r, side, b in replay(ms, ops, diag):
        if r is None:
            line = "value=none instance=none exact_boundary=none"
        else:
            line = f"value={_fmt(r.value)} instance={r.instance} exact_boundary={b}"
        if args.oracle:
            line += f" exact_min_cut={exact_min_cut(ms.source).boundary}"
        print(line, file=out)
        if args.emit_cut and side is not None:
            print("cut=" + " ".join(map(str, sorted(side))), file=out)
    diag.write()
    return 0


def cmd_bench(args, out) -> int:
    seed = resolve_seed(args.seed)
    fh = open(args.out, "w", newline="") if args.out else out
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_COLUMNS + (ORACLE_COLUMNS if args.oracle else []))
        diag = _Diag(args.diag_dir)
        for t in range(args.trials):
            rng = random.Random(derive_seed(seed, t, 0xBE))
            g = make_graph(args.family, args.n, rng, args.max_edges)
            ops = random_stream(g, args.ops, rng, args.query_every, max_edges=args.max_edges)
            ms = MasterState(g, make_params(args, g), seed=derive_seed(seed, t),
                             parallel=args.parallel_instances)
            for step, r, _, b in replay(ms, ops, diag):
                row = [step, "" if r is None else _fmt(r.value), "" if r is None else r.instance,
                       "" if b is None else b]
                if args.oracle:
                    lam = exact_min_cut(ms.source).boundary
                    ratio = "" if r is None or lam == 0 else _fmt(r.value / lam)
                    row += [lam, ratio]
                w.writerow(row)
        diag.write("bench_")
    finally:
        if fh is not out:
            fh.close()
    return 0


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args, out)
        return cmd_bench(args, out)
    except (GraphError, OracleLimitError, ValueError, OSError) as exc:
        print(f"dyncut: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
