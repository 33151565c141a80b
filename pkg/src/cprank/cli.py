"""Command-line front end.

Exit codes: 0 on success, 1 when the analysis answer is negative (not
copositive, no witness, a failed certificate), 2 on bad input.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import case_engine, copositive, cp_decomp, io
from .graphs import label_str
from .matrix_core import (
    NotNonnegative,
    SymMatrix,
    dd_orbit_witness,
    fmt_fraction,
    fmt_set,
    graph_of,
)
from .zero_structure import TooLarge, tf_exact

FORMATS = ("text", "json", "dot")
DOT_COMMANDS = {"tf", "cp bound"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple
    fmt: str = "text"
    jobs: int = 1
    eps: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise io.InputError(f"unknown format {self.fmt}")
        if self.fmt == "dot" and self.command not in DOT_COMMANDS:
            raise io.InputError(f"--format dot is not available for '{self.command}'")
        if not self.eps > 0:
            raise io.InputError("--eps must be positive")
        if self.jobs < 1:
            raise io.InputError("--jobs must be at least 1")


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("CPRANK_JOBS", "1")))
    except ValueError:
        return 1


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", dest="fmt", default="text", help="text, json or dot")
    p.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (env CPRANK_JOBS)")
    p.add_argument("--eps", type=float, default=1e-6, help="entry floor for the nearly-positive search")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized restarts")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cprank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    cop = sub.add_parser("copositive", help="copositivity").add_subparsers(dest="sub", required=True)
    cop.add_parser("check", parents=[common], help="decide copositivity exactly").add_argument("matrix")
    sub.add_parser("zeros", parents=[common], help="zero supports, minimal zeros and W").add_argument("matrix")
    sub.add_parser("irreducible", parents=[common], help="E_ij-irreducibility flags").add_argument("matrix")
    sub.add_parser("tf", parents=[common], help="largest triangle-free subgraph").add_argument("graph")
    cp = sub.add_parser("cp", help="cp-rank").add_subparsers(dest="sub", required=True)
    cp.add_parser("bound", parents=[common], help="graph-rule bound with derivation").add_argument("matrix")
    dec = sub.add_parser("decomp", help="cp-decomposition moves").add_subparsers(dest="sub", required=True)
    dec.add_parser("pairmove", parents=[common], help="apply the pair move to a two-term decomposition").add_argument("decomp")
    dec.add_parser("distinct", parents=[common], help="make supports pairwise distinct").add_argument("decomp")
    dec.add_parser("dd", parents=[common], help="size-2 decomposition of a matrix in the DD orbit").add_argument("input")
    t1 = sub.add_parser("table1", help="the 44 support families").add_subparsers(dest="sub", required=True)
    ver = t1.add_parser("verify", parents=[common], help="certify every case")
    ver.add_argument("--case", type=int, action="append", help="restrict to case k (repeatable)")
    ver.add_argument("--dot-dir", help="write the case graphs as DOT files here")
    kn = t1.add_parser("knowledge", parents=[common], help="zero-support facts for one case")
    kn.add_argument("--case", type=int, required=True)
    sub.add_parser("horn", parents=[common], help="print the Horn matrix")
    sub.add_parser("nearly-positive", parents=[common], help="orthogonal Q with Y Q^T entrywise positive").add_argument("matrix")
    return parser


# --- rendering helpers -----------------------------------------------------------

def _fmt_vec(v) -> str:
    return "(" + ", ".join(fmt_fraction(x) for x in v) + ")"


def _fmt_matrix(rows) -> str:
    cells = [[fmt_fraction(x) for x in r] for r in rows]
    w = max((len(c) for r in cells for c in r), default=1)
    return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells) + "\n"


def _edges_text(edges) -> str:
    return "\n".join(f"  {label_str(a)} -- {label_str(b)}" for a, b in edges)


# --- commands ------------------------------------------------------------------------

def _load_matrix(path) -> SymMatrix:
    return io.matrix_from_json(io.read_json(path))


def cmd_copositive_check(cfg: RunConfig, out) -> int:
    A = _load_matrix(cfg.inputs[0])
    res = copositive.simplex_minimum(A)
    ok = res.value >= 0
    if cfg.fmt == "json":
        out.write(io.dumps({
            "copositive": ok,
            "min_value": io.frac_json(res.value),
            "minimizers": [{"face": sorted(s), "point": [io.frac_json(x) for x in p]} for s, p in res.faces],
        }))
    else:
        out.write(f"copositive: {'yes' if ok else 'no'}\n")
        out.write(f"min over simplex: {fmt_fraction(res.value)}\n")
        for s, p in res.faces:
            out.write(f"  attained on {fmt_set(s)} at {_fmt_vec(p)}\n")
    return 0 if ok else 1


def cmd_zeros(cfg: RunConfig, out) -> int:
    A = _load_matrix(cfg.inputs[0])
    if not copositive.is_copositive(A):
        out.write("not copositive\n")
        return 1
    report = copositive.zeros_report(A)
    W = copositive.minimal_zeros(A)
    if cfg.fmt == "json":
        out.write(io.dumps({
            "zero_supports": [{"support": sorted(z.support), "minimal": z.minimal,
                               "witness": [io.frac_json(x) for x in z.vector]} for z in report],
            "W": [[io.frac_json(x) for x in r] for r in W.rows()],
        }))
    else:
        out.write(f"{len(report)} zero supports:\n")
        for z in report:
            tag = "minimal" if z.minimal else ""
            out.write(f"  {fmt_set(z.support):<16}{tag:<8} {_fmt_vec(z.vector)}\n")
        out.write(f"W ({W.n} x {W.k}), columns {', '.join(fmt_set(s) for s in W.supports)}:\n")
        out.write(_fmt_matrix(W.rows()))
    return 0


def cmd_irreducible(cfg: RunConfig, out) -> int:
    A = _load_matrix(cfg.inputs[0])
    if not copositive.is_copositive(A):
        out.write("not copositive\n")
        return 1
    irr = copositive.irreducibility(A)
    if cfg.fmt == "json":
        out.write(io.dumps({
            "n_irreducible": irr.n_irreducible,
            "n_tilde_irreducible": irr.n_tilde_irreducible,
            "flags": [{"i": i, "j": j, "irreducible": f,
                       "witness": None if irr.witnesses[(i, j)] is None else [io.frac_json(x) for x in irr.witnesses[(i, j)]]}
                      for (i, j), f in sorted(irr.flags.items())],
        }))
    else:
        out.write(f"N-irreducible: {irr.n_irreducible}\nN~-irreducible: {irr.n_tilde_irreducible}\n")
        for (i, j), f in sorted(irr.flags.items()):
            w = irr.witnesses[(i, j)]
            out.write(f"  E_{i}{j}: {'yes' if f else 'no '}" + (f"  via {_fmt_vec(w)}" if w else "") + "\n")
    return 0


def cmd_tf(cfg: RunConfig, out) -> int:
    g = io.read_graph(cfg.inputs[0])
    try:
        value, witness = tf_exact(g)
    except TooLarge as exc:
        raise io.InputError(str(exc)) from exc
    if cfg.fmt == "json":
        out.write(io.dumps({"tf": value, "witness": g.with_edges(witness).to_json()["edges"]}))
    elif cfg.fmt == "dot":
        out.write(g.with_edges(witness).to_dot("tf_witness"))
    else:
        out.write(f"tf = {value}\nwitness ({len(witness)} edges):\n{_edges_text(witness)}\n")
    return 0


def cmd_cp_bound(cfg: RunConfig, out) -> int:
    A = _load_matrix(cfg.inputs[0])
    if not A.is_nonnegative():
        out.write("matrix has a negative entry, so it is not completely positive\n")
        return 1
    g = graph_of(A)
    try:
        d = cp_decomp.derive_cpr_bound(g)
    except ValueError as exc:
        raise io.InputError(str(exc)) from exc
    if cfg.fmt == "json":
        out.write(io.dumps({"bound": d.value, "graph": g.to_json(), "derivation": d.to_json()}))
    elif cfg.fmt == "dot":
        out.write(g.to_dot("G_A"))
    else:
        out.write(f"cpr(A) <= {d.value}\n" + "\n".join(d.lines()) + "\n")
    return 0


def _write_decomp(cfg: RunConfig, out, d) -> None:
    if cfg.fmt == "json":
        out.write(io.dumps(io.decomposition_to_json(d)))
    else:
        for t in d.terms:
            out.write(f"{fmt_fraction(t.weight)} * {_fmt_vec(t.vector)}  support {fmt_set(t.support)}\n")


def cmd_decomp(cfg: RunConfig, out, action: str) -> int:
    data = io.read_json(cfg.inputs[0])
    if action == "dd":
        if "terms" in data:
            A = io.decomposition_from_json(data).realize()
        else:
            A = io.matrix_from_json(data)
        try:
            d = dd_orbit_witness(A)
        except NotNonnegative as exc:
            out.write(f"{exc}\n")
            return 1
        if d is None:
            out.write("not in the orbit of a diagonally dominant matrix\n")
            return 1
        _write_decomp(cfg, out, cp_decomp.dd_decomposition(A, d))
        return 0
    decomp = io.decomposition_from_json(data)
    if action == "distinct":
        _write_decomp(cfg, out, cp_decomp.distinct_supports(decomp))
        return 0
    if len(decomp.terms) != 2:
        raise io.InputError("pairmove needs exactly two terms (b, d)")
    try:
        nb, nd = cp_decomp.pairmove(*decomp.terms)
    except cp_decomp.SupportNotNested as exc:
        out.write(f"{exc}\n")
        return 1
    terms = tuple(t for t in (nb, nd) if t is not None)
    _write_decomp(cfg, out, cp_decomp.WeightedCpDecomposition(decomp.n, terms))
    return 0


def cmd_table1_verify(cfg: RunConfig, out, cases, dot_dir) -> int:
    if cases and any(not 1 <= c <= 44 for c in cases):
        raise io.InputError("--case must be in 1..44")
    try:
        report = case_engine.verify_theorem_main(jobs=cfg.jobs, cases=cases)
    except case_engine.CaseFailed as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    if dot_dir:
        target = Path(dot_dir)
        target.mkdir(parents=True, exist_ok=True)
        for name, g in case_engine.figure_graphs().items():
            (target / f"{name}.dot").write_text(g.to_dot(name))
    out.write(io.dumps(report.to_json()) if cfg.fmt == "json" else report.to_text())
    return 0 if report.ok else 1


def cmd_table1_knowledge(cfg: RunConfig, out, case) -> int:
    if not 1 <= case <= 44:
        raise io.InputError("--case must be in 1..44")
    e = case_engine.entry(case)
    k = case_engine.case_knowledge(e)
    if cfg.fmt == "json":
        out.write(io.dumps({"case": case, "family": io.family_to_json(e.family), **k.to_json()}))
    else:
        out.write(f"case {case}: " + ", ".join(fmt_set(s) for s in e.family.supports) + "\n")
        for title, table in (("confirmed", k.confirmed), ("excluded", k.excluded)):
            out.write(f"{title}:\n")
            for s in sorted(table, key=lambda s: (len(s), sorted(s))):
                out.write(f"  {fmt_set(s):<12} {table[s]}\n")
    return 0


def cmd_horn(cfg: RunConfig, out) -> int:
    H = copositive.horn_matrix()
    if cfg.fmt == "json":
        out.write(io.dumps(io.matrix_to_json(H)))
    else:
        out.write(_fmt_matrix(H.rows))
    return 0


def cmd_nearly_positive(cfg: RunConfig, out) -> int:
    data = io.read_json(cfg.inputs[0])
    try:
        Y = np.array(data["rows"] if isinstance(data, dict) else data, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise io.InputError(f"malformed matrix: {exc!r}") from exc
    try:
        Q = cp_decomp.nearly_positive_witness(Y, eps=cfg.eps, seed=cfg.seed)
    except cp_decomp.WitnessNotFound as exc:
        out.write(f"{exc}\n")
        return 1
    except ValueError as exc:
        raise io.InputError(str(exc)) from exc
    P = Y @ Q.T
    if cfg.fmt == "json":
        out.write(io.dumps({"Q": Q.tolist(), "YQt": P.tolist(), "min_entry": float(P.min())}))
    else:
        out.write("Q =\n" + "\n".join(" ".join(f"{x: .12f}" for x in r) for r in Q) + "\n")
        out.write(f"min entry of Y Q^T: {P.min():.3e}\n")
    return 0


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    command = args.cmd + (f" {args.sub}" if getattr(args, "sub", None) else "")
    inputs = tuple(getattr(args, k) for k in ("matrix", "graph", "decomp", "input") if hasattr(args, k))
    try:
        cfg = RunConfig(command, inputs, args.fmt, args.jobs, args.eps, args.seed)
        if command == "copositive check":
            return cmd_copositive_check(cfg, out)
        if command == "zeros":
            return cmd_zeros(cfg, out)
        if command == "irreducible":
            return cmd_irreducible(cfg, out)
        if command == "tf":
            return cmd_tf(cfg, out)
        if command == "cp bound":
            return cmd_cp_bound(cfg, out)
        if args.cmd == "decomp":
            return cmd_decomp(cfg, out, args.sub)
        if command == "table1 verify":
            return cmd_table1_verify(cfg, out, args.case, args.dot_dir)
        if command == "table1 knowledge":
            return cmd_table1_knowledge(cfg, out, args.case)
        if command == "horn":
            return cmd_horn(cfg, out)
        if command == "nearly-positive":
            return cmd_nearly_positive(cfg, out)
    except (io.InputError, copositive.DimensionTooLarge) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    parser.error(f"unhandled command {command}")
    return 2


def main() -> None:
    sys.exit(run())
