"""Certify cp-rank bounds for the 44 potential minimal-support families in order 6.

Each family comes with the strategy that bounds cp-ranks of matrices
orthogonal to an exceptional extremal copositive M with those minimal
supports.  Every strategy emits a :class:`BoundCertificate` whose payload
can be re-checked by :func:`recheck_certificate` with graph and support
operations alone.
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, product

from .copositive import HILDEBRAND_SUPPORTS, horn_matrix, minimal_zeros, zero_supports
from .cp_decomp import cpr_wheel, derive_cpr_bound, max_cpr_bound
from .graphs import LabeledGraph, is_forest, is_outerplanar, is_wheel_subgraph, label_str
from .matrix_core import SymMatrix, fmt_set
from .zero_structure import (
    SupportFamily,
    ZeroSupportKnowledge,
    apply_inference_rules,
    forced_signs,
    graph_GM,
    graph_GV_over,
    irreducibility_prune,
    sign_obstruction,
    tf_exact,
)

TABLE_SHA256 = "36347bb2f9fb88e3edabfeb53fd4f4c079c1930a01e3d4ad15a7ede5d66e1ec9"
STRATEGIES = ("DD", "LOW_DEGREE", "OMEGA_SPLIT", "TF", "PRUNE_PATTERN", "PRUNE_FOREST", "PRUNE_CUBE", "H_PLUS_0")
GLOBAL_BOUND = 9
N = 6


class DataCorrupt(RuntimeError):
    pass


class StrategyInapplicable(ValueError):
    pass


class CaseFailed(AssertionError):
    def __init__(self, case_id, message: str):
        super().__init__(f"case {case_id}: {message}")
        self.case_id = case_id


@dataclass(frozen=True)
class Table1Entry:
    id: int
    family: SupportFamily
    strategy: str
    pivot: frozenset | None = None
    psd_checks: tuple = ()
    prune_subsets: tuple = ()
    reference_tf: int | None = None

    @property
    def k(self) -> int:
        return self.family.k


def _table_text() -> str:
    return resources.files("cprank").joinpath("data/table1.json").read_text()


def load_table1(text: str | None = None) -> list[Table1Entry]:
    text = _table_text() if text is None else text
    digest = hashlib.sha256(text.encode()).hexdigest()
    if digest != TABLE_SHA256:
        raise DataCorrupt(f"table checksum {digest} does not match")
    out = []
    for row in json.loads(text):
        pivot = row.get("pivot")
        out.append(Table1Entry(
            id=row["id"],
            family=SupportFamily.of(N, row["supports"]),
            strategy=row["strategy"],
            pivot=frozenset(pivot) if pivot else None,
            psd_checks=tuple(frozenset(s) for s in row.get("psd_checks", ())),
            prune_subsets=tuple(frozenset(s) for s in row.get("prune_subsets", ())),
            reference_tf=row.get("reference_tf"),
        ))
    if [e.id for e in out] != list(range(1, 45)):
        raise DataCorrupt("ids must run 1..44")
    return out


def entry(case_id: int) -> Table1Entry:
    return load_table1()[case_id - 1]


# --- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class BoundCertificate:
    case_id: int | str
    strategy: str
    bound: int
    witnesses: dict = field(default_factory=dict)
    uses_p6: bool = False

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "strategy": self.strategy,
            "bound": self.bound,
            "uses_p6": self.uses_p6,
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_json(cls, data: dict) -> BoundCertificate:
        return cls(data["case_id"], data["strategy"], data["bound"], data["witnesses"], data["uses_p6"])


def _sets(xs) -> list[list[int]]:
    return [sorted(s) for s in xs]


def _sorted_sets(xs):
    return sorted(xs, key=lambda s: (len(s), tuple(sorted(s))))


def _excluded_json(knowledge: ZeroSupportKnowledge, only=None) -> list[dict]:
    keys = _sorted_sets(knowledge.excluded if only is None else [s for s in only if s in knowledge.excluded])
    return [{"support": sorted(s), "rule": knowledge.excluded[s]} for s in keys]


def case_knowledge(e: Table1Entry, extra: dict | None = None) -> ZeroSupportKnowledge:
    """Inference-rule closure plus the non-PSD facts the case relies on."""
    injected = dict(extra or {})
    for s in e.psd_checks:
        why = sign_obstruction(e.family, s)
        if why is None:
            raise CaseFailed(e.id, f"M[{fmt_set(s)}] is not shown to be non-PSD")
        injected.setdefault(s, f"not-psd M[{fmt_set(s)}]: {why}")
    return apply_inference_rules(e.family, injected)


def _crowded_candidates(e: Table1Entry, knowledge: ZeroSupportKnowledge) -> list[frozenset]:
    """Possible zero supports holding three or more minimal supports."""
    return [c for c in e.family.candidates() if c not in knowledge.excluded and len(e.family.members_in(c)) >= 3]


def _two_member_payload(e: Table1Entry, knowledge: ZeroSupportKnowledge) -> dict:
    open_cands = [c for c in e.family.candidates() if c not in knowledge.excluded]
    return {
        "open_candidates": [{"support": sorted(c), "members": _sets(e.family.members_in(c))} for c in open_cands],
        "excluded": _excluded_json(knowledge, e.family.candidates()),
    }


def _pivot_check(e: Table1Entry, pivot) -> frozenset:
    pivot = frozenset(pivot) if pivot is not None else e.pivot
    if pivot is None or pivot not in e.family.supports:
        raise StrategyInapplicable(f"pivot {pivot and fmt_set(pivot)} is not a minimal support")
    return pivot


def _removed_edges_payload(e: Table1Entry, g: LabeledGraph, knowledge: ZeroSupportKnowledge) -> list[dict]:
    gm = graph_GM(e.family)
    out = []
    for a, b in gm.edge_list():
        if not g.has_edge(a, b):
            u = a | b
            out.append({"edge": [sorted(a), sorted(b)], "union": sorted(u), "rule": knowledge.excluded.get(u, "")})
    return out


# --- strategies ------------------------------------------------------------------

def strategy_dd(e: Table1Entry, knowledge: ZeroSupportKnowledge | None = None) -> BoundCertificate:
    """Every zero combines at most two minimal zeros, so X X^T is in the orbit of a DD matrix."""
    knowledge = knowledge or case_knowledge(e)
    crowded = _crowded_candidates(e, knowledge)
    if crowded:
        raise StrategyInapplicable(
            "possible zero supports with three or more minimal supports: " + ", ".join(fmt_set(c) for c in crowded)
        )
    k = e.k
    return BoundCertificate(e.id, "DD", k * k // 4, {"k": k, **_two_member_payload(e, knowledge)})


def strategy_low_degree(e: Table1Entry, pivot=None, knowledge: ZeroSupportKnowledge | None = None) -> BoundCertificate:
    knowledge = knowledge or case_knowledge(e)
    pivot = _pivot_check(e, pivot)
    g = graph_GV_over(e.family, knowledge)
    deg = g.degree(pivot)
    if not 1 <= deg <= 2:
        raise StrategyInapplicable(f"pivot {fmt_set(pivot)} has degree {deg}")
    rest = g.remove_vertex(pivot)
    rest_bound, p6 = max_cpr_bound(rest.order)
    return BoundCertificate(e.id, "LOW_DEGREE", deg + rest_bound, {
        "graph": g.to_json(),
        "pivot": sorted(pivot),
        "degree": deg,
        "neighbors": _sets(g.neighbors(pivot)),
        "remainder_order": rest.order,
        "remainder_bound": rest_bound,
        "remainder_rule_bound": derive_cpr_bound(rest).value,
        "removed_edges": _removed_edges_payload(e, g, knowledge),
    }, p6)


def strategy_omega_split(e: Table1Entry, pivot=None, knowledge: ZeroSupportKnowledge | None = None) -> BoundCertificate:
    """Split a minimal factorization by whether a column's support contains the pivot.

    Columns containing the pivot can be taken with pairwise distinct supports
    strictly larger than the pivot, so there are at most t of them; the rest
    live on the graph without the pivot.
    """
    knowledge = knowledge or case_knowledge(e)
    pivot = _pivot_check(e, pivot)
    above = [c for c in e.family.candidates() if pivot < c and c not in knowledge.excluded]
    t = len(above)
    if t > 3:
        raise StrategyInapplicable(f"{t} possible zero supports strictly contain {fmt_set(pivot)}")
    rest_bound, p6 = max_cpr_bound(e.k - 1)
    return BoundCertificate(e.id, "OMEGA_SPLIT", t + rest_bound, {
        "pivot": sorted(pivot),
        "supersets": _sets(above),
        "t": t,
        "remainder_order": e.k - 1,
        "remainder_bound": rest_bound,
        "excluded_supersets": _excluded_json(knowledge, [c for c in e.family.candidates() if pivot < c]),
    }, p6)


def strategy_tf(e: Table1Entry, knowledge: ZeroSupportKnowledge | None = None) -> BoundCertificate:
    knowledge = knowledge or case_knowledge(e)
    crowded = _crowded_candidates(e, knowledge)
    if crowded:
        raise StrategyInapplicable(
            "possible zero supports with three or more minimal supports: " + ", ".join(fmt_set(c) for c in crowded)
        )
    g = graph_GM(e.family)
    tf, witness = tf_exact(g)
    # the shorter argument: at most one minimal support of size 2
    short = sum(1 for s in e.family.supports if len(s) == 2) <= 1
    return BoundCertificate(e.id, "TF", max(e.k, tf), {
        "k": e.k,
        "graph": g.to_json(),
        "tf": tf,
        "tf_witness": [[sorted(a), sorted(b)] for a, b in witness],
        "reference_tf": e.reference_tf,
        "short_argument_applies": short,
        **_two_member_payload(e, knowledge),
    })


def _prune_forest(e: Table1Entry, knowledge: ZeroSupportKnowledge) -> BoundCertificate:
    extra = {}
    for sub in e.prune_subsets:
        found = irreducibility_prune(e.family, sub)
        if not found:
            raise StrategyInapplicable(f"pairs of {fmt_set(sub)} are not all covered")
        for s, why in found:
            extra.setdefault(s, why)
    pruned = case_knowledge(e, extra)
    g = graph_GV_over(e.family, pruned)
    if not is_forest(g):
        raise StrategyInapplicable("pruned graph is not a forest")
    d = derive_cpr_bound(g)
    return BoundCertificate(e.id, "PRUNE_FOREST", d.value, {
        "prune_subsets": _sets(e.prune_subsets),
        "graph_gm": graph_GM(e.family).to_json(),
        "graph": g.to_json(),
        "removed_edges": _removed_edges_payload(e, g, pruned),
        "derivation": d.to_json(),
    }, d.uses_p6)


def _cube_configurations(base: LabeledGraph, cycles: list[list], incompatible: set) -> list[LabeledGraph]:
    """All graphs keeping, on each pruned cycle, an edge set with no incompatible pair."""
    per_cycle = []
    for cyc in cycles:
        opts = []
        for r in range(len(cyc) + 1):
            for keep in combinations(cyc, r):
                if not any(frozenset((a, b)) in incompatible for a, b in combinations(keep, 2)):
                    opts.append(keep)
        per_cycle.append(opts)
    fixed = base.edges - {edge for cyc in cycles for edge in cyc}
    return [base.with_edges(fixed | {edge for part in choice for edge in part}) for choice in product(*per_cycle)]


def _prune_cube(e: Table1Entry, knowledge: ZeroSupportKnowledge) -> BoundCertificate:
    base = graph_GV_over(e.family, knowledge)
    cycles, incompatible, notes = [], set(), []
    for sub in e.prune_subsets:
        cyc = sorted((edge for edge in base.edges if frozenset().union(*edge) <= sub),
                     key=lambda ed: tuple(sorted(frozenset().union(*ed))))
        cycles.append(cyc)
        for a, b in combinations(cyc, 2):
            if not a & b:
                continue
            ua, ub = frozenset().union(*a), frozenset().union(*b)
            if irreducibility_prune(e.family, sub, assumed=(ua, ub)):
                incompatible.add(frozenset((a, b)))
                notes.append({"subset": sorted(sub), "unions": [sorted(ua), sorted(ub)]})
    configs = _cube_configurations(base, cycles, incompatible)
    bound, worst = 0, None
    for g in configs:
        if not g.is_triangle_free():
            raise StrategyInapplicable("a surviving configuration has a triangle")
        val = max(g.order, g.size)
        if val > bound:
            bound, worst = val, g
    return BoundCertificate(e.id, "PRUNE_CUBE", bound, {
        "prune_subsets": _sets(e.prune_subsets),
        "graph": base.to_json(),
        "bipartite": _is_bipartite(base),
        "cycle_edges": [[[sorted(a), sorted(b)] for a, b in (tuple(ed) for ed in cyc)] for cyc in cycles],
        "incompatible": notes,
        "configurations": len(configs),
        "max_edges": max(g.size for g in configs),
        "worst_graph": worst.to_json(),
    })


def _is_bipartite(g: LabeledGraph) -> bool:
    import networkx as nx

    return nx.is_bipartite(g.to_networkx())


def horn_pattern_blocks(family: SupportFamily) -> list[tuple[frozenset, list[int]]]:
    """(n-1)-subsets on which the size-2 members form a Hamiltonian cycle, with the cycle order."""
    out = []
    for sub in combinations(range(1, family.n + 1), family.n - 1):
        sub = frozenset(sub)
        pairs = [p for p in family.pairs() if p <= sub]
        if len(pairs) != len(sub):
            continue
        g = LabeledGraph.build(sorted(sub), [tuple(p) for p in pairs])
        if g.is_connected() and all(d == 2 for d in g.degrees().values()):
            order, prev = [min(sub)], None
            while len(order) < len(sub):
                nxt = [u for u in g.neighbors(order[-1]) if u != prev and u not in order]
                prev = order[-1]
                order.append(min(nxt))
            out.append((sub, order))
    return out


def rebuild_pm1_matrix(family: SupportFamily) -> SymMatrix | None:
    """The unit-diagonal matrix whose off-diagonal entries are all forced to +-1, if they are."""
    signs = forced_signs(family)
    n = family.n
    rows = [[Fraction(1) if i == j else None for j in range(n)] for i in range(n)]
    for i, j in combinations(range(1, n + 1), 2):
        s = signs.get(frozenset((i, j)))
        if s is None:
            return None
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = Fraction(s)
    return SymMatrix(rows)


def _prune_pattern(e: Table1Entry, knowledge: ZeroSupportKnowledge) -> BoundCertificate:
    fam = e.family
    if any(len(s) != 2 for s in fam.supports):
        raise StrategyInapplicable("needs all minimal supports of size 2")
    blocks = horn_pattern_blocks(fam)
    if not blocks:
        raise StrategyInapplicable("no principal block carries the Horn pattern")
    M = rebuild_pm1_matrix(fam)
    if M is None:
        raise StrategyInapplicable("entries of M are not all forced to +-1")
    g = graph_GV_over(fam, knowledge)
    # a confirmed complete bipartite K_{2,2} block: its two perfect matchings span
    # the same cone boundary (v1 + v2 = v3 + v4), so one matching edge can be dropped
    dropped = []
    for sigma in _sorted_sets(knowledge.confirmed):
        inside = [p for p in fam.pairs() if p <= sigma]
        if len(sigma) != 4 or len(inside) != 4:
            continue
        matchings = sorted(
            (tuple(sorted((a, b), key=lambda s: sorted(s))) for a, b in combinations(inside, 2) if not a & b),
            key=lambda m: [sorted(s) for s in m],
        )
        if len(matchings) == 2:
            (a1, b1), (a2, b2) = matchings
            lhs = [sum(1 for s in (a1, b1) if i in s) for i in range(1, N + 1)]
            rhs = [sum(1 for s in (a2, b2) if i in s) for i in range(1, N + 1)]
            if lhs == rhs and g.has_edge(a2, b2):
                dropped.append((a2, b2, sigma))
    reduced = g.without_edges((a, b) for a, b, _ in dropped)
    pivot = _pivot_check(e, None)
    deg = reduced.degree(pivot)
    if not 1 <= deg <= 2:
        raise StrategyInapplicable(f"pivot {fmt_set(pivot)} has degree {deg}")
    rest = reduced.remove_vertex(pivot)
    if not (rest.is_connected() and is_outerplanar(rest)):
        raise StrategyInapplicable("remainder is not connected outerplanar")
    tf, witness = tf_exact(rest)
    if tf < rest.order:
        raise StrategyInapplicable("remainder has tf below its order")
    return BoundCertificate(e.id, "PRUNE_PATTERN", deg + tf, {
        "horn_blocks": [{"subset": sorted(s), "cycle": c} for s, c in blocks],
        "matrix_upper": [str(x) for x in M.upper()],
        "graph_gv": g.to_json(),
        "dropped_edges": [{"edge": [sorted(a), sorted(b)], "block": sorted(s)} for a, b, s in dropped],
        "graph": reduced.to_json(),
        "pivot": sorted(pivot),
        "degree": deg,
        "remainder_tf": tf,
        "remainder_tf_witness": [[sorted(a), sorted(b)] for a, b in witness],
        "excluded": _excluded_json(knowledge, [s for s in fam.candidates() if pivot <= s]),
    })


def strategy_prune(e: Table1Entry, knowledge: ZeroSupportKnowledge | None = None) -> BoundCertificate:
    knowledge = knowledge or case_knowledge(e)
    if e.strategy == "PRUNE_FOREST":
        return _prune_forest(e, knowledge)
    if e.strategy == "PRUNE_CUBE":
        return _prune_cube(e, knowledge)
    if e.strategy == "PRUNE_PATTERN":
        return _prune_pattern(e, knowledge)
    raise StrategyInapplicable(f"case {e.id} has no pruning argument")


def run_strategy(e: Table1Entry, strategy: str | None = None) -> BoundCertificate:
    strategy = strategy or e.strategy
    knowledge = case_knowledge(e)
    if strategy == "DD":
        return strategy_dd(e, knowledge)
    if strategy == "LOW_DEGREE":
        return strategy_low_degree(e, knowledge=knowledge)
    if strategy == "OMEGA_SPLIT":
        return strategy_omega_split(e, knowledge=knowledge)
    if strategy == "TF":
        return strategy_tf(e, knowledge)
    if strategy.startswith("PRUNE"):
        if strategy != e.strategy:
            raise StrategyInapplicable(f"case {e.id} has no {strategy} argument")
        return strategy_prune(e, knowledge)
    raise ValueError(f"unknown strategy {strategy}")


# --- zero-diagonal extremals ---------------------------------------------------------

def _hub_graph(supports, edges_between, hub) -> LabeledGraph:
    verts = list(supports) + [hub]
    return LabeledGraph.build(verts, list(edges_between) + [(s, hub) for s in supports])


def lemma_h_plus_0() -> tuple[int, int, list[BoundCertificate]]:
    """Bounds for matrices orthogonal to H + 0 with H Horn (exact) or Hildebrand (pattern)."""
    M = horn_matrix().direct_sum(SymMatrix.zeros(1))
    W = minimal_zeros(M)
    zs = zero_supports(M)
    sups = list(W.supports)
    g = LabeledGraph.build(sups, [(a, b) for a, b in combinations(sups, 2) if a | b in zs])
    if not is_wheel_subgraph(g):
        raise CaseFailed("horn+0", "graph of minimal zeros is not inside the wheel")
    horn = BoundCertificate("horn+0", "H_PLUS_0", cpr_wheel(g.order), {
        "minimal_supports": _sets(sups),
        "zero_supports": _sets(_sorted_sets(zs)),
        "graph": g.to_json(),
        "shape": f"W_{g.order}",
    })
    hfam = SupportFamily(5, HILDEBRAND_SUPPORTS)
    inner = graph_GM(hfam)
    hub = frozenset({6})
    star = _hub_graph(hfam.supports, [tuple(ed) for ed in inner.edges], hub)
    if not is_forest(star):
        raise CaseFailed("hildebrand+0", "graph is not a tree")
    hild = BoundCertificate("hildebrand+0", "H_PLUS_0", max(star.order, star.size), {
        "minimal_supports": _sets(list(hfam.supports) + [hub]),
        "graph": star.to_json(),
        "shape": "star" if inner.size == 0 else "tree",
    })
    return horn.bound, hild.bound, [horn, hild]


# --- independent re-checks ---------------------------------------------------------

def _g(data) -> LabeledGraph:
    return LabeledGraph.from_json(data)


def _check_removed(e: Table1Entry, g: LabeledGraph, excluded: set):
    gm = graph_GM(e.family)
    assert g.is_subgraph_of(gm), "graph is not inside G(M)"
    for edge in gm.edges - g.edges:
        assert frozenset().union(*edge) in excluded, f"edge with union {fmt_set(frozenset().union(*edge))} removed without reason"


def recheck_certificate(cert: BoundCertificate, e: Table1Entry | None = None) -> bool:
    """Recompute a certificate's bound from its payload; raise AssertionError on mismatch."""
    w = cert.witnesses
    s = cert.strategy
    if s == "H_PLUS_0":
        g = _g(w["graph"])
        if w["shape"].startswith("W_"):
            assert is_wheel_subgraph(g)
            assert cert.bound == cpr_wheel(g.order)
        else:
            assert is_forest(g)
            assert cert.bound == max(g.order, g.size)
        return True
    e = e or entry(cert.case_id)
    fam = e.family
    if s in ("DD", "TF"):
        for c in w["open_candidates"]:
            assert len(fam.members_in(frozenset(c["support"]))) <= 2
        listed = {frozenset(c["support"]) for c in w["open_candidates"]} | {frozenset(x["support"]) for x in w["excluded"]}
        assert listed >= set(fam.candidates()), "a candidate is unaccounted for"
    if s == "DD":
        assert cert.bound == w["k"] ** 2 // 4 and w["k"] == fam.k
    elif s == "TF":
        g = _g(w["graph"])
        assert g.edges == graph_GM(fam).edges
        wit = g.with_edges((frozenset(a), frozenset(b)) for a, b in w["tf_witness"])
        assert wit.is_subgraph_of(g) and wit.is_triangle_free() and wit.size == w["tf"]
        assert tf_exact(g)[0] == w["tf"]
        assert cert.bound == max(fam.k, w["tf"])
    elif s == "LOW_DEGREE":
        g = _g(w["graph"])
        _check_removed(e, g, {frozenset(r["union"]) for r in w["removed_edges"] if r["rule"]})
        pivot = frozenset(w["pivot"])
        assert g.degree(pivot) == w["degree"] <= 2
        assert cert.bound == w["degree"] + max_cpr_bound(g.order - 1)[0]
    elif s == "OMEGA_SPLIT":
        pivot = frozenset(w["pivot"])
        above = {frozenset(x) for x in w["supersets"]}
        excl = {frozenset(x["support"]) for x in w["excluded_supersets"]}
        for c in fam.candidates():
            if pivot < c:
                assert c in above or c in excl
        assert len(above) <= 3
        assert cert.bound == len(above) + max_cpr_bound(fam.k - 1)[0]
    elif s == "PRUNE_FOREST":
        g = _g(w["graph"])
        _check_removed(e, g, {frozenset(r["union"]) for r in w["removed_edges"] if r["rule"]})
        assert is_forest(g)
        assert cert.bound == max(g.order, g.size)
    elif s == "PRUNE_CUBE":
        base = _g(w["graph"])
        assert base.is_subgraph_of(graph_GM(fam)) and _is_bipartite(base)
        cycles = [[frozenset((frozenset(a), frozenset(b))) for a, b in cyc] for cyc in w["cycle_edges"]]
        inc = set()
        for note in w["incompatible"]:
            ua, ub = (frozenset(u) for u in note["unions"])
            sub = frozenset(note["subset"])
            assert irreducibility_prune(fam, sub, assumed=(ua, ub))
            edges = {frozenset().union(*ed): ed for cyc in cycles for ed in cyc}
            inc.add(frozenset((edges[ua], edges[ub])))
        configs = _cube_configurations(base, cycles, inc)
        assert all(g.is_triangle_free() for g in configs)
        assert cert.bound == max(max(g.order, g.size) for g in configs)
    elif s == "PRUNE_PATTERN":
        g = _g(w["graph"])
        assert g.is_subgraph_of(graph_GM(fam))
        pivot = frozenset(w["pivot"])
        rest = g.remove_vertex(pivot)
        assert g.degree(pivot) == w["degree"] <= 2
        assert rest.is_connected() and is_outerplanar(rest)
        tf = tf_exact(rest)[0]
        assert tf == w["remainder_tf"] >= rest.order
        M = SymMatrix.from_upper(N, [Fraction(x) for x in w["matrix_upper"]])
        for sub in w["horn_blocks"]:
            cyc = sub["cycle"]
            for i, j in combinations(range(5), 2):
                step = min(j - i, 5 - (j - i))
                assert M[cyc[i] - 1, cyc[j] - 1] == (-1 if step == 1 else 1), "block is not a Horn permutation"
        assert cert.bound == w["degree"] + tf
    else:
        raise ValueError(f"unknown strategy {s}")
    return True


# --- the global statement ------------------------------------------------------------

@dataclass(frozen=True)
class CaseResult:
    certificate: BoundCertificate
    alternatives: dict  # strategy -> bound or reason it does not apply


@dataclass(frozen=True)
class TheoremReport:
    cases: tuple
    h_plus_0: tuple
    max_bound: int
    tf_comparison: tuple  # (case, computed, reference)
    p6_free: bool
    reduction: tuple

    @property
    def ok(self) -> bool:
        return self.max_bound <= GLOBAL_BOUND and self.p6_free

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_bound": self.max_bound,
            "p6_free": self.p6_free,
            "cases": [
                {"certificate": r.certificate.to_json(), "alternatives": r.alternatives} for r in self.cases
            ],
            "h_plus_0": [c.to_json() for c in self.h_plus_0],
            "tf_comparison": [
                {"case": c, "tf": t, "reference": ref, "match": t == ref} for c, t, ref in self.tf_comparison
            ],
            "reduction": list(self.reduction),
        }

    def to_text(self) -> str:
        lines = [f"{'case':>4}  {'strategy':<14}{'bound':>5}  alternatives"]
        for r in self.cases:
            c = r.certificate
            alts = ", ".join(f"{k}={v}" for k, v in r.alternatives.items() if isinstance(v, int))
            lines.append(f"{c.case_id:>4}  {c.strategy:<14}{c.bound:>5}  {alts}")
        for c in self.h_plus_0:
            lines.append(f"{c.case_id:>12}  {c.strategy:<10}{c.bound:>3}  {c.witnesses['shape']}")
        lines.append("tf(G(M)) against reference values:")
        for case, tf, ref in self.tf_comparison:
            mark = "ok" if tf == ref else "DIFFERS"
            lines.append(f"  case {case}: computed {tf}, reference {ref}  {mark}")
        lines.append(f"certificates free of p_6: {self.p6_free}")
        lines.extend(self.reduction)
        verdict = "holds" if self.ok else "FAILS"
        lines.append(f"maximum bound {self.max_bound}; cpr(A) <= {GLOBAL_BOUND} {verdict}")
        return "\n".join(lines) + "\n"


REDUCTION = (
    "zero diagonal entry in M: covered by the H+0 bounds (7 and 6)",
    "positive diagonal in M: covered by the 44 case certificates (<= 9)",
    "remaining boundary part of CP_6 without a <= 9 bound: matrices with some zero entries",
)


def _alternatives(e: Table1Entry) -> dict:
    out = {}
    for s in ("DD", "TF", "LOW_DEGREE", "OMEGA_SPLIT"):
        if s == e.strategy:
            continue
        if s in ("LOW_DEGREE", "OMEGA_SPLIT") and e.pivot is None:
            continue
        try:
            out[s] = run_strategy(e, s).bound
        except (StrategyInapplicable, ValueError) as exc:
            out[s] = f"inapplicable: {exc}"
    return out


def verify_case(case_id: int) -> CaseResult:
    e = entry(case_id)
    try:
        cert = run_strategy(e)
    except StrategyInapplicable as exc:
        raise CaseFailed(case_id, f"{e.strategy} does not apply: {exc}") from exc
    try:
        recheck_certificate(cert, e)
    except AssertionError as exc:
        raise CaseFailed(case_id, f"certificate re-check failed: {exc}") from exc
    if cert.bound > GLOBAL_BOUND:
        raise CaseFailed(case_id, f"bound {cert.bound} exceeds {GLOBAL_BOUND}")
    if cert.uses_p6:
        raise CaseFailed(case_id, "certificate relies on p_6")
    return CaseResult(cert, _alternatives(e))


def verify_theorem_main(jobs: int = 1, cases=None) -> TheoremReport:
    ids = sorted(cases) if cases else list(range(1, 45))
    if jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(verify_case, ids))
    else:
        results = [verify_case(i) for i in ids]
    horn, hild, hcerts = lemma_h_plus_0()
    for c in hcerts:
        recheck_certificate(c)
    if horn > 7 or hild > 6:
        raise CaseFailed("h+0", f"bounds {horn}, {hild}")
    comparison = []
    for r in results:
        ref = r.certificate.witnesses.get("reference_tf")
        if r.certificate.strategy == "TF" and ref is not None:
            comparison.append((r.certificate.case_id, r.certificate.witnesses["tf"], ref))
    p6_free = not any(r.certificate.uses_p6 for r in results) and not any(c.uses_p6 for c in hcerts)
    return TheoremReport(
        cases=tuple(results),
        h_plus_0=tuple(hcerts),
        max_bound=max([r.certificate.bound for r in results] + [horn, hild]),
        tf_comparison=tuple(comparison),
        p6_free=p6_free,
        reduction=REDUCTION,
    )


# --- figure graphs -------------------------------------------------------------------

def figure_graphs() -> dict[str, LabeledGraph]:
    """The case graphs worth drawing, keyed by a file stem."""
    out = {"case05_gm": graph_GM(entry(5).family)}
    c36 = run_strategy(entry(36))
    out["case36_reduced"] = _g(c36.witnesses["graph"])
    for i in range(37, 43):
        out[f"case{i}_gm"] = graph_GM(entry(i).family)
    c43 = run_strategy(entry(43))
    out["case43_gm"] = _g(c43.witnesses["graph_gm"])
    out["case43_pruned"] = _g(c43.witnesses["graph"])
    out["case44_gm"] = graph_GM(entry(44).family)
    return out


def describe_graph(g: LabeledGraph) -> str:
    return ", ".join(f"{label_str(a)}-{label_str(b)}" for a, b in g.edge_list())
