"""Command-line interface: ``powerbounds {bounds,oracle,spectrum,reproduce}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import __version__
from .bounds import (
    BoundError,
    BoundReport,
    SolverFailure,
    bound_cvetkovic,
    bound_elphick_wocjan_classic,
    bound_haemers_extended,
    bound_hoffman,
    bound_inertial_general,
    bound_ratio_chi_k,
    bound_ratio_general,
    bounds_corollary22,
    bounds_walk_regular,
    greedy_quadratic_second_inertial,
    max_g_polynomial,
    milp_inertia_per_vertex,
    milp_inertia_walk_regular,
    milp_second_inertial,
    minor_polynomial,
)
from .bounds.report import COUNT_TOL, FAILED, OK
from .generators import from_spec, load_fixture
from .graph import Graph, GraphError, graph_power, parse_edge_list, read_graph6_stream
from .oracle import DEFAULT_BUDGET, OracleResult, alpha_k_exact, chi_k_exact
from .spectral import EigenvalueError, Polynomial, Spectrum, closed_form_spectrum_odd_graph, eigenvalues_symmetric
from . import reference as ref

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# configuration and input
# --------------------------------------------------------------------------

@dataclass
class RunConfig:
    graphs: list[Graph]
    k: int = 2
    methods: list[str] = field(default_factory=list)
    fmt: str = "text"
    tol: float = COUNT_TOL
    big_m: float | None = None
    jobs: int = 1
    budget: int = DEFAULT_BUDGET
    first_optimal: bool = False
    poly: Polynomial | None = None


def _read_g6(arg: str) -> list[Graph]:
    if arg == "-":
        return list(read_graph6_stream(sys.stdin))
    path = Path(arg)
    if path.is_file():
        graphs = list(read_graph6_stream(path.read_text().splitlines()))
        stem = path.stem
        return [g if g.name else g.renamed(stem if len(graphs) == 1 else f"{stem}#{i}")
                for i, g in enumerate(graphs)]
    return [load_fixture(arg)]


def load_graphs(args: argparse.Namespace) -> list[Graph]:
    try:
        if args.gen:
            g = from_spec(args.gen)
            return [g if g.name else g.renamed(args.gen)]
        if args.g6:
            graphs = _read_g6(args.g6)
        else:
            path = Path(args.edges)
            graphs = [parse_edge_list(path.read_text(), name=path.stem)]
    except (GraphError, OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if not graphs:
        raise InputError("input contains no graphs")
    return graphs


def parse_poly(text: str | None) -> Polynomial | None:
    if not text:
        return None
    try:
        return Polynomial(tuple(float(c) for c in text.split(",")))
    except ValueError as exc:
        raise InputError(f"bad --poly {text!r}: expected comma-separated ascending coefficients") from exc


# --------------------------------------------------------------------------
# method registry
# --------------------------------------------------------------------------

@dataclass
class Context:
    G: Graph
    k: int
    cfg: RunConfig
    _spectrum: Spectrum | None = None
    _power_spectrum: Spectrum | None = None

    @property
    def spectrum(self) -> Spectrum:
        if self._spectrum is None:
            self._spectrum = eigenvalues_symmetric(self.G)
        return self._spectrum

    @property
    def power_spectrum(self) -> Spectrum:
        if self._power_spectrum is None:
            self._power_spectrum = (self.spectrum if self.k == 1
                                    else eigenvalues_symmetric(graph_power(self.G, self.k)))
        return self._power_spectrum

    @property
    def poly(self) -> Polynomial:
        if self.cfg.poly is not None:
            return self.cfg.poly
        return Polynomial((0.0,) * self.k + (1.0,))


def _classic(fn) -> Callable[[Context], list[BoundReport]]:
    def run(ctx: Context) -> list[BoundReport]:
        rep = fn(ctx)
        rep.k = ctx.k
        rep.params["applied_to"] = "G^k"
        return [rep]
    return run


def _oracle(fn, method: str) -> Callable[[Context], list[BoundReport]]:
    def run(ctx: Context) -> list[BoundReport]:
        t0 = time.perf_counter()
        res: OracleResult = fn(ctx.G, ctx.k, ctx.cfg.budget)
        rep = BoundReport(method, res.kind, res.k, float(res.value), None, not res.timed_out,
                          params={"witness": res.witness, "nodes_explored": res.nodes_explored,
                                  "timed_out": res.timed_out})
        rep.millis = (time.perf_counter() - t0) * 1000.0
        return [rep]
    return run


def _only(name: str) -> Callable[[Context], list[BoundReport]]:
    def run(ctx: Context) -> list[BoundReport]:
        return [r for r in bounds_corollary22(ctx.G, ctx.k, ctx.spectrum, tol=ctx.cfg.tol) if r.method == name]
    return run


def _greedy(ctx: Context) -> list[BoundReport]:
    if ctx.k != 2:
        raise BoundError("greedy-quadratic is defined for k = 2 only")
    return [greedy_quadratic_second_inertial(ctx.spectrum, G=ctx.G)]


METHODS: dict[str, Callable[[Context], list[BoundReport]]] = {
    "cvetkovic": _classic(lambda c: bound_cvetkovic(c.power_spectrum, tol=c.cfg.tol)),
    "hoffman": _classic(lambda c: bound_hoffman(c.power_spectrum)),
    "ew": _classic(lambda c: bound_elphick_wocjan_classic(c.power_spectrum, tol=c.cfg.tol)),
    "inertial": lambda c: [bound_inertial_general(c.G, c.poly, c.k, c.spectrum, tol=c.cfg.tol)],
    "ratio": lambda c: [bound_ratio_general(c.G, c.poly, c.k, c.spectrum)],
    "wr": lambda c: bounds_walk_regular(c.spectrum, c.poly, c.k, G=c.G, tol=c.cfg.tol),
    "cor22": lambda c: bounds_corollary22(c.G, c.k, c.spectrum, tol=c.cfg.tol),
    "cor22-ratio": _only("cor22-ratio"),
    "cor22-inertia": _only("cor22-inertia"),
    "cor22-chi-ratio": _only("cor22-chi-ratio"),
    "cor22-chi-inertia": _only("cor22-chi-inertia"),
    "ratio-chi": lambda c: [bound_ratio_chi_k(c.G, c.poly, c.k, c.spectrum)],
    "haemers": lambda c: [bound_haemers_extended(c.spectrum, c.poly, c.k, G=c.G, tol=c.cfg.tol)],
    "greedy-quadratic": _greedy,
    "minor-poly": lambda c: minor_polynomial(c.spectrum, c.k, G=c.G)[1],
    "llp": lambda c: max_g_polynomial(c.spectrum, c.k, G=c.G)[1],
    "milp-wr": lambda c: [milp_inertia_walk_regular(c.spectrum, c.k, G=c.G, big_m=c.cfg.big_m)],
    "milp-vertex": lambda c: [milp_inertia_per_vertex(c.G, c.k, c.spectrum, big_m=c.cfg.big_m,
                                                      jobs=c.cfg.jobs, first_optimal=c.cfg.first_optimal)],
    "milp-second": lambda c: [milp_second_inertial(c.spectrum, c.k, G=c.G, big_m=c.cfg.big_m, jobs=c.cfg.jobs)],
    "oracle": _oracle(alpha_k_exact, "oracle"),
    "oracle-chi": _oracle(chi_k_exact, "oracle-chi"),
}

DEFAULT_METHODS = "cor22-ratio,milp-wr,milp-vertex"


def run_method(name: str, ctx: Context) -> list[BoundReport]:
    try:
        return METHODS[name](ctx)
    except (BoundError, ValueError, GraphError) as exc:
        return [BoundReport(name, "alpha", ctx.k, status=FAILED, message=str(exc))]


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _fmt_num(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        if not math.isfinite(x):
            return "-"
        return f"{x:.6g}"
    return str(x)


def render_table(headers: Sequence[str], rows: Iterable[Sequence]) -> str:
    rows = [[_fmt_num(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    out = [line, "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(line.rstrip() for line in out)


def render_csv(headers: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for r in rows:
        w.writerow(["" if c is None else c for c in r])
    return buf.getvalue().rstrip("\n")


def emit(text: str) -> None:
    sys.stdout.write(text + "\n")


REPORT_COLUMNS = ("graph", "n", "method", "kind", "k", "raw_value", "int_value", "verified", "status",
                  "millis", "message")


def _report_row(g: Graph, r: BoundReport) -> list:
    return [g.name, g.n, r.method, r.kind, r.k, r.raw_value, r.int_value, r.verified, r.status,
            round(r.millis, 3), r.message]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_bounds(cfg: RunConfig) -> int:
    code = EXIT_OK
    results = []
    for G in cfg.graphs:
        ctx = Context(G, cfg.k, cfg)
        reports = []
        for name in cfg.methods:
            try:
                reports += run_method(name, ctx)
            except (SolverFailure, EigenvalueError) as exc:
                reports.append(BoundReport(name, "alpha", cfg.k, status=FAILED, message=str(exc)))
                code = EXIT_SOLVER
        if code == EXIT_OK and not all(r.usable for r in reports):
            code = EXIT_MISMATCH
        results.append((G, reports))
    if cfg.fmt == "json":
        emit(json.dumps({"command": "bounds", "k": cfg.k, "graphs": [
            {"name": G.name, "n": G.n, "reports": [r.to_json() for r in reps]} for G, reps in results]},
            indent=2))
    else:
        rows = [_report_row(G, r) for G, reps in results for r in reps]
        emit(render_csv(REPORT_COLUMNS, rows) if cfg.fmt == "csv" else render_table(REPORT_COLUMNS, rows))
    return code


def cmd_oracle(cfg: RunConfig, chi: bool) -> int:
    code = EXIT_OK
    out = []
    for G in cfg.graphs:
        try:
            res = chi_k_exact(G, cfg.k, cfg.budget) if chi else alpha_k_exact(G, cfg.k, cfg.budget)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if res.timed_out:
            code = EXIT_SOLVER
        out.append((G, res))
    if cfg.fmt == "json":
        emit(json.dumps({"command": "oracle", "k": cfg.k, "results": [
            dict(graph=G.name, n=G.n, **r.to_json()) for G, r in out]}, indent=2))
    else:
        headers = ("graph", "n", "kind", "k", "value", "nodes_explored", "timed_out", "witness")
        rows = [[G.name, G.n, r.kind, r.k, r.value, r.nodes_explored, r.timed_out,
                 " ".join(map(str, r.witness))] for G, r in out]
        emit(render_csv(headers, rows) if cfg.fmt == "csv" else render_table(headers, rows))
    return code


def cmd_spectrum(cfg: RunConfig) -> int:
    out = []
    for G in cfg.graphs:
        out.append((G, eigenvalues_symmetric(G)))
    if cfg.fmt == "json":
        emit(json.dumps({"command": "spectrum", "graphs": [
            {"name": G.name, "n": G.n, "distinct": [float(t) for t in S.distinct],
             "mult": [int(m) for m in S.mult]} for G, S in out]}, indent=2))
    else:
        headers = ("graph", "eigenvalue", "multiplicity")
        rows = [[G.name, round(float(t), 10), int(m)] for G, S in out for t, m in zip(S.distinct, S.mult)]
        emit(render_csv(headers, rows) if cfg.fmt == "csv" else render_table(headers, rows))
    return EXIT_OK


# --------------------------------------------------------------------------
# table reproduction
# --------------------------------------------------------------------------

@dataclass
class Cell:
    row: str
    column: str
    published: object
    computed: object
    asserted: bool
    note: str = ""

    @property
    def match(self) -> bool | None:
        if self.published is None or self.computed is None:
            return None
        if isinstance(self.published, float) or isinstance(self.computed, float):
            return abs(float(self.published) - float(self.computed)) <= 1e-8
        return self.published == self.computed

    def to_json(self) -> dict:
        return {"row": self.row, "column": self.column, "published": self.published, "computed": self.computed,
                "match": self.match, "asserted": self.asserted, "note": self.note}


def reproduce_t1(cfg: RunConfig) -> list[Cell]:
    cells = []
    for row in ref.TABLE1:
        G = from_spec(row.source)
        reps = {r.method: r for r in bounds_corollary22(G, row.k)}
        rat = reps["cor22-ratio"]
        oracle = alpha_k_exact(G, row.k, cfg.budget).value
        asserted = not row.compare_only
        note = "printed ratio orientation, see README" if row.compare_only else ""
        cells.append(Cell(row.name, "bound", row.alpha, rat.int_value if rat.verified else None, asserted, note))
        cells.append(Cell(row.name, "bound (printed form)", row.alpha,
                          int(math.floor(rat.params["printed_value"] + 1e-9)), False))
        cells.append(Cell(row.name, f"alpha_{row.k}", row.alpha, oracle, True))
    return cells


def reproduce_t2(cfg: RunConfig) -> list[Cell]:
    cells = []
    for row in ref.TABLE2:
        G = from_spec(row.source)
        S = eigenvalues_symmetric(G)
        first = milp_inertia_per_vertex(G, 2, S, big_m=cfg.big_m, jobs=cfg.jobs)
        second = greedy_quadratic_second_inertial(S, G=G)
        alpha = alpha_k_exact(G, 2, cfg.budget).value
        cells.append(Cell(row.name, "prior bound", row.prior, None, False, "not computed"))
        cells.append(Cell(row.name, "theta_2", row.theta, None, False, "not computed"))
        cells.append(Cell(row.name, "MILP first", row.milp_first,
                          first.int_value if first.verified else None, True))
        second_only = row.name in ref.TABLE2_COMPARE_ONLY_SECOND
        cells.append(Cell(row.name, "MILP second", row.milp_second, second.params.get("alpha_companion"),
                          not second_only, "not reproduced, see README" if second_only else ""))
        cells.append(Cell(row.name, "alpha_2", row.alpha, alpha, True))
    return cells


def reproduce_t4(cfg: RunConfig) -> list[Cell]:
    cells = []
    for row in ref.TABLE4:
        name = f"O_{row.ell} (k={row.k})"
        rep = milp_inertia_walk_regular(closed_form_spectrum_odd_graph(row.ell), row.k, big_m=cfg.big_m)
        cells.append(Cell(name, "MILP bound", row.bound, rep.int_value if rep.verified else None, True))
        if row.root is not None:
            cells.append(Cell(name, "key root", row.root, round(ref.odd_graph_key_root(row.ell), 10), True,
                              "root of the rebuilt key polynomial"))
            printed = ref.table4_root(row)
            cells.append(Cell(name, "key root (printed polynomial)", row.root, round(printed, 10), False))
        if row.ell <= ref.TABLE4_ORACLE_MAX_ELL:
            G = from_spec(f"odd:{row.ell}")
            cells.append(Cell(name, f"alpha_{row.k}", row.alpha, alpha_k_exact(G, row.k, cfg.budget).value, True))
        else:
            cells.append(Cell(name, f"alpha_{row.k}", row.alpha, None, False, "beyond oracle scale"))
    return cells


def reproduce_t5(cfg: RunConfig) -> list[Cell]:
    cells = []
    for n, milp, alpha in zip(ref.TABLE5_N, ref.TABLE5_MILP, ref.TABLE5_ALPHA):
        G = from_spec(f"prism:{n}")
        rep = milp_inertia_walk_regular(eigenvalues_symmetric(G), 2, G=G, big_m=cfg.big_m)
        cells.append(Cell(f"n={n}", "MILP bound", milp, rep.int_value if rep.verified else None, True))
        cells.append(Cell(f"n={n}", "alpha_2", alpha, alpha_k_exact(G, 2, cfg.budget).value, True))
    return cells


REPRODUCERS = {"t1": reproduce_t1, "t2": reproduce_t2, "t4": reproduce_t4, "t5": reproduce_t5}


def cmd_reproduce(table: str, cfg: RunConfig) -> int:
    try:
        cells = REPRODUCERS[table](cfg)
    except SolverFailure as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return EXIT_SOLVER
    failed = [c for c in cells if c.asserted and c.match is not True]
    if cfg.fmt == "json":
        emit(json.dumps({"command": "reproduce", "table": table, "cells": [c.to_json() for c in cells],
                         "asserted": sum(c.asserted for c in cells), "mismatches": len(failed)}, indent=2))
    else:
        headers = ("row", "column", "published", "computed", "match", "asserted", "note")
        rows = [[c.row, c.column, c.published, c.computed, {None: "-", True: "yes", False: "NO"}[c.match],
                 "yes" if c.asserted else "compare-only", c.note] for c in cells]
        if cfg.fmt == "csv":
            emit(render_csv(headers, rows))
        else:
            emit(render_table(headers, rows))
            emit(f"\n{len(failed)} mismatch(es) among {sum(c.asserted for c in cells)} asserted cells")
    return EXIT_MISMATCH if failed else EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator spec, e.g. odd:4, prism:10, gp:8,3, pg2:2, bowtie:cycle:8,cycle:12")
    src.add_argument("--g6", help="graph6 file (one graph per line), '-' for stdin, or a shipped fixture name")
    src.add_argument("--edges", help="edge-list file")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle branch-node budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powerbounds",
                                     description="Eigenvalue bounds on alpha_k and chi_k of graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate bounds on one or more graphs")
    _add_input(b)
    _add_common(b)
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--method", default=DEFAULT_METHODS,
                   help=f"comma-separated list from: {', '.join(METHODS)}")
    b.add_argument("--poly", help="ascending coefficients of p for inertial/ratio/wr/ratio-chi/haemers "
                                  "(default x^k)")
    b.add_argument("--tol", type=float, default=COUNT_TOL, help="sign-count tolerance")
    b.add_argument("--big-m", type=float, default=None,
                   help="use the big-M formulation with this initial M (default: indicator constraints)")
    b.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="workers for vertex/ell sweeps")
    b.add_argument("--first-optimal", action="store_true",
                   help="stop the vertex sweep at the first optimum that meets the trivial lower limit")

    o = sub.add_parser("oracle", help="exact alpha_k (or chi_k with --chi)")
    _add_input(o)
    _add_common(o)
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--chi", action="store_true")

    s = sub.add_parser("spectrum", help="distinct adjacency eigenvalues and multiplicities")
    _add_input(s)
    s.add_argument("--format", choices=("text", "json", "csv"), default="text")

    r = sub.add_parser("reproduce", help="recompute a published table side by side")
    r.add_argument("table", choices=sorted(REPRODUCERS))
    _add_common(r)
    r.add_argument("--big-m", type=float, default=None)
    r.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "reproduce":
            cfg = RunConfig([], fmt=args.format, big_m=args.big_m, jobs=args.jobs, budget=args.budget)
            return cmd_reproduce(args.table, cfg)
        graphs = load_graphs(args)
        if args.command == "spectrum":
            return cmd_spectrum(RunConfig(graphs, fmt=args.format))
        if args.k < (1 if args.command == "bounds" else 0):
            raise InputError(f"--k must be at least {1 if args.command == 'bounds' else 0}")
        if args.command == "oracle":
            return cmd_oracle(RunConfig(graphs, k=args.k, fmt=args.format, budget=args.budget), args.chi)
        methods = [m.strip() for m in args.method.split(",") if m.strip()]
        unknown = [m for m in methods if m not in METHODS]
        if unknown or not methods:
            raise InputError(f"unknown method(s): {', '.join(unknown) or '(none)'}")
        cfg = RunConfig(graphs, k=args.k, methods=methods, fmt=args.format, tol=args.tol,
                        big_m=args.big_m, jobs=max(1, args.jobs), budget=args.budget,
                        first_optimal=args.first_optimal, poly=parse_poly(args.poly))
        return cmd_bounds(cfg)
    except InputError as exc:
        sys.stderr.write(f"powerbounds: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
