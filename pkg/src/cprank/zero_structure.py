"""Combinatorics of minimal-support families of copositive matrices.

Everything here works on supports alone, in the setting of an exceptional
extremal copositive ``M`` of order n with unit diagonal: size-2 minimal
supports are exactly the -1 entries of M, and a zero support has at most
n - 2 elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .graphs import LabeledGraph, complete_bipartition
from .matrix_core import fmt_set


class InconsistentFamily(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SupportFamily:
    n: int
    supports: tuple[frozenset, ...]

    def __post_init__(self):
        sups = tuple(frozenset(s) for s in self.supports)
        object.__setattr__(self, "supports", sups)
        if len(set(sups)) != len(sups):
            raise ValueError("supports must be pairwise distinct")
        for s in sups:
            if len(s) < 2:
                raise ValueError(f"support {fmt_set(s)} has fewer than two elements")
            if not s <= frozenset(range(1, self.n + 1)):
                raise ValueError(f"support {fmt_set(s)} is not inside 1..{self.n}")

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> SupportFamily:
        return cls(n, tuple(frozenset(s) for s in sets))

    @property
    def k(self) -> int:
        return len(self.supports)

    @property
    def max_zero_support(self) -> int:
        return self.n - 2

    def members_in(self, sigma: frozenset) -> list[frozenset]:
        return [s for s in self.supports if s <= sigma]

    def pairs(self) -> list[frozenset]:
        return [s for s in self.supports if len(s) == 2]

    def candidates(self) -> list[frozenset]:
        """All unions of members with at most n - 2 elements, sorted."""
        cap = self.max_zero_support
        found = {s for s in self.supports if len(s) <= cap}
        frontier = set(found)
        while frontier:
            new = set()
            for a in frontier:
                for s in self.supports:
                    u = a | s
                    if len(u) <= cap and u not in found:
                        new.add(u)
            found |= new
            frontier = new
        return sorted(found, key=_key)


def _key(s: frozenset):
    return (len(s), tuple(sorted(s)))


@dataclass(frozen=True)
class ZeroSupportKnowledge:
    """What the rules settle about zero supports, each fact with the rule that gave it."""

    confirmed: dict = field(default_factory=dict)  # frozenset -> provenance
    excluded: dict = field(default_factory=dict)
    contradictions: tuple = ()

    def status(self, sigma: frozenset) -> str:
        if sigma in self.confirmed:
            return "confirmed"
        if sigma in self.excluded:
            return "excluded"
        return "unknown"

    def to_json(self) -> dict:
        return {
            "confirmed": [{"support": sorted(s), "rule": r} for s, r in sorted(self.confirmed.items(), key=lambda t: _key(t[0]))],
            "excluded": [{"support": sorted(s), "rule": r} for s, r in sorted(self.excluded.items(), key=lambda t: _key(t[0]))],
            "contradictions": list(self.contradictions),
        }


def pair_graph(family: SupportFamily, sigma: frozenset) -> LabeledGraph:
    """Graph on sigma whose edges are the size-2 members inside sigma (the -1 pattern of M[sigma])."""
    return LabeledGraph.build(sorted(sigma), [tuple(s) for s in family.pairs() if s <= sigma])


def _spans_connected(g: LabeledGraph) -> bool:
    touched = set().union(*g.edges) if g.edges else set()
    return touched == set(g.vertices) and g.is_connected()


def apply_inference_rules(family: SupportFamily, extra_excluded: dict | None = None) -> ZeroSupportKnowledge:
    """Close the known facts about zero supports under the support rules.

    Rules (first provenance wins):

    * minimal-support: every member is a zero support.
    * shared-index-pair: members {a,b}, {b,c} give zero support {a,b,c}
      and rule out {a,c}.
    * meeting-pairs: three size-2 members meeting pairwise give a zero
      support of size 4.
    * zero-union-triangle: three members with pairwise zero-support unions
      give their union as a zero support (a contradiction if too large).
    * size3-member: a 4-set holding a size-3 member is a zero support only
      if it holds exactly two members.
    * three-members: a candidate holding three or more members needs them all
      of size 2, forming a spanning complete bipartite graph.
    * minus-one-pattern: when the size-2 members inside a candidate form a
      connected spanning graph, the candidate is a zero support iff that
      graph is complete bipartite.
    """
    confirmed: dict = {}
    excluded: dict = dict(extra_excluded or {})
    contradictions: list = []
    cap = family.max_zero_support
    cands = family.candidates()

    def confirm(s, why):
        if s not in confirmed:
            confirmed[s] = why
            return True
        return False

    def exclude(s, why):
        if s not in excluded:
            excluded[s] = why
            return True
        return False

    for s in family.supports:
        confirm(s, "minimal-support")
    pairs = family.pairs()
    for p, q in combinations(pairs, 2):
        if len(p & q) == 1:
            u = p | q
            confirm(u, f"shared-index-pair {fmt_set(p)}+{fmt_set(q)}")
            exclude(p ^ q, f"shared-index-pair {fmt_set(p)}+{fmt_set(q)}")
    for trio in combinations(pairs, 3):
        if all(a & b for a, b in combinations(trio, 2)):
            u = frozenset().union(*trio)
            if len(u) == 4:
                confirm(u, "meeting-pairs " + "+".join(fmt_set(s) for s in trio))
    for sigma in cands:
        inside = family.members_in(sigma)
        if len(sigma) == 4 and any(len(s) == 3 for s in inside) and len(inside) >= 3:
            exclude(sigma, f"size3-member: {len(inside)} members inside")
        if len(inside) >= 3:
            ok = all(len(s) == 2 for s in inside)
            if ok:
                parts = complete_bipartition(pair_graph(family, sigma))
                ok = parts is not None and set().union(*inside) == sigma
            if not ok:
                exclude(sigma, f"three-members: {len(inside)} members not a spanning complete bipartite pair graph")
        if len(sigma) >= 3:
            g = pair_graph(family, sigma)
            if _spans_connected(g):
                if complete_bipartition(g) is None:
                    exclude(sigma, "minus-one-pattern: connected, not complete bipartite")
                else:
                    confirm(sigma, "minus-one-pattern: spanning complete bipartite")

    changed = True
    while changed:
        changed = False
        for trio in combinations(family.supports, 3):
            unions = [a | b for a, b in combinations(trio, 2)]
            if all(u in confirmed for u in unions):
                u = frozenset().union(*trio)
                why = "zero-union-triangle " + "+".join(fmt_set(s) for s in trio)
                if len(u) <= cap:
                    changed |= confirm(u, why)
                elif why not in contradictions:
                    contradictions.append(f"{why}: union {fmt_set(u)} has more than {cap} elements")
    clash = set(confirmed) & set(excluded)
    if clash:
        s = min(clash, key=_key)
        raise InconsistentFamily(
            f"{fmt_set(s)} both confirmed ({confirmed[s]}) and excluded ({excluded[s]})"
        )
    return ZeroSupportKnowledge(confirmed, excluded, tuple(contradictions))


def forced_signs(family: SupportFamily) -> dict:
    """Off-diagonal entries of M fixed by the family: -1 on size-2 members, +1 on {a,c} for members {a,b},{b,c}."""
    out = {p: -1 for p in family.pairs()}
    for p, q in combinations(family.pairs(), 2):
        if len(p & q) == 1:
            out.setdefault(p ^ q, 1)
    return out


def sign_obstruction(family: SupportFamily, sigma) -> str | None:
    """Why M[sigma] cannot be positive semidefinite, judging from forced +-1 entries, or None.

    In a PSD matrix with unit diagonal an entry -1 makes two Gram vectors
    opposite and +1 makes them equal, so forced entries propagate with a sign.
    Inconsistent signs, or a propagated -1 on a pair that is not a size-2
    member (a -1 entry would make it a size-2 zero support), rule out PSD.
    """
    sigma = frozenset(sigma)
    signs = {p: s for p, s in forced_signs(family).items() if p <= sigma}
    parent = {i: i for i in sigma}
    parity = {i: 0 for i in sigma}

    def find(i):
        if parent[i] == i:
            return i, 0
        r, par = find(parent[i])
        parent[i], parity[i] = r, parity[i] ^ par
        return r, parity[i]

    for p in sorted(signs, key=_key):
        a, b = sorted(p)
        (ra, pa), (rb, pb) = find(a), find(b)
        want = 1 if signs[p] == -1 else 0
        if ra == rb:
            if pa ^ pb != want:
                return f"forced signs around {fmt_set(p)} are inconsistent"
        else:
            parent[rb], parity[rb] = ra, pa ^ pb ^ want
    members = set(family.pairs())
    for a, b in combinations(sorted(sigma), 2):
        (ra, pa), (rb, pb) = find(a), find(b)
        if ra == rb and pa != pb and frozenset((a, b)) not in members:
            return f"entry ({a},{b}) would be -1 but {{{a},{b}}} is not a minimal support"
    return None


# --- graphs on the family -----------------------------------------------------------

def graph_GM(family: SupportFamily) -> LabeledGraph:
    """Members as vertices, an edge when the union has at most n - 2 elements."""
    cap = family.max_zero_support
    return LabeledGraph.build(
        family.supports,
        [(a, b) for a, b in combinations(family.supports, 2) if len(a | b) <= cap],
    )


def graph_GV_over(family: SupportFamily, knowledge: ZeroSupportKnowledge) -> LabeledGraph:
    """G(M) minus edges whose union is known not to be a zero support; contains G_V(M)."""
    g = graph_GM(family)
    return g.without_edges(e for e in g.edges if frozenset().union(*e) in knowledge.excluded)


def graph_GV_confirmed(family: SupportFamily, knowledge: ZeroSupportKnowledge) -> LabeledGraph:
    """Edges whose union is a known zero support; contained in G_V(M)."""
    g = graph_GM(family)
    return g.with_edges(e for e in g.edges if frozenset().union(*e) in knowledge.confirmed)


# --- largest triangle-free subgraph -------------------------------------------------

MAX_TF_EDGES = 21


def _edge_triangles(g: LabeledGraph, edges: list) -> list[tuple[int, int, int]]:
    idx = {frozenset(e): k for k, e in enumerate(edges)}
    out = []
    for a, b, c in g.triangles():
        out.append(tuple(sorted((idx[frozenset((a, b))], idx[frozenset((b, c))], idx[frozenset((a, c))]))))
    return out


def _min_deletion(tris, keep: frozenset, drop: frozenset, bound: int) -> int | None:
    """Fewest deleted edges (containing drop, avoiding keep) hitting every triangle.

    Returns None when no solution beats ``bound``.
    """
    best = [bound]

    def rec(dropped: frozenset, kept: frozenset):
        open_tris = [t for t in tris if not dropped.intersection(t)]
        if not open_tris:
            if len(dropped) < best[0]:
                best[0] = len(dropped)
            return
        if len(dropped) + packing_bound(open_tris, kept) >= best[0]:
            return
        t = open_tris[0]
        choices = [e for e in t if e not in kept]
        for pos, e in enumerate(choices):
            rec(dropped | {e}, kept | frozenset(choices[:pos]))

    def packing_bound(open_tris, kept):
        used, count = set(), 0
        for t in open_tris:
            free = [e for e in t if e not in kept]
            if not free:
                return 10 ** 9
            if not used.intersection(free):
                used.update(free)
                count += 1
        return count

    rec(drop, keep)
    return best[0] if best[0] < bound else None


def tf_exact(g: LabeledGraph) -> tuple[int, list[tuple]]:
    """Size of a largest triangle-free subgraph and the lexicographically first one.

    Branch and bound on a minimum triangle-hitting edge set, pruned by
    edge-disjoint triangle packings; the witness is then fixed greedily in the
    canonical edge order.
    """
    edges = g.edge_list()
    m = len(edges)
    if m > MAX_TF_EDGES:
        raise TooLarge(f"{m} edges exceeds {MAX_TF_EDGES}")
    tris = _edge_triangles(g, edges)
    tau = _min_deletion(tris, frozenset(), frozenset(), m + 1)
    keep, drop = frozenset(), frozenset()
    for e in range(m):
        trial = _min_deletion(tris, keep | {e}, drop, tau + 1)
        if trial == tau:
            keep = keep | {e}
        else:
            drop = drop | {e}
    witness = [edges[e] for e in sorted(keep)]
    assert len(witness) == m - tau
    assert g.with_edges(witness).is_triangle_free()
    return m - tau, witness


# --- irreducibility pruning ---------------------------------------------------------

def pairs_covered(family: SupportFamily, subset: frozenset, assumed: Iterable[frozenset] = ()) -> list[frozenset]:
    """Pairs of ``subset`` not inside any member (or assumed zero support) contained in ``subset``."""
    cover = [s for s in family.supports if s <= subset] + [frozenset(a) for a in assumed if frozenset(a) <= subset]
    return [frozenset(p) for p in combinations(sorted(subset), 2) if not any(set(p) <= c for c in cover)]


def irreducibility_prune(family: SupportFamily, five_subset, assumed: Iterable[frozenset] = ()) -> list[tuple[frozenset, str]]:
    """Rule out every zero support of size n - 2 inside an (n-1)-subset whose pairs are all covered.

    Covering every pair by zeros inside the subset makes that principal
    submatrix irreducible with respect to all off-diagonal E_ij; a zero
    support of size n - 2 there would make it, and then M, positive
    semidefinite.  ``assumed`` adds hypothetical zero supports to the cover.
    """
    sub = frozenset(five_subset)
    if len(sub) != family.n - 1:
        raise ValueError(f"subset must have {family.n - 1} elements")
    if pairs_covered(family, sub, assumed):
        return []
    why = f"irreducible-principal-block {fmt_set(sub)}"
    if assumed:
        why += " assuming " + ",".join(fmt_set(a) for a in assumed)
    return [(frozenset(c), why) for c in combinations(sorted(sub), family.n - 2)]
