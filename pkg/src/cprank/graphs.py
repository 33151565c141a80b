"""Small undirected simple graphs with hashable vertex labels.

Labels are ints (matrix indices) or frozensets of ints (supports, drawn as
``{1,2,5}``).  Vertex order is kept as given and defines the canonical edge
order used for deterministic output.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable

import networkx as nx


def label_str(v) -> str:
    if isinstance(v, (frozenset, set)):
        return "{" + ",".join(str(i) for i in sorted(v)) + "}"
    return str(v)


def parse_label(s: str):
    s = s.strip()
    if s.startswith("{") and s.endswith("}"):
        inner = s[1:-1].strip()
        return frozenset(int(t) for t in inner.split(",")) if inner else frozenset()
    if re.fullmatch(r"-?\d+", s):
        return int(s)
    return s


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"loop or malformed edge {e!r}")
            if not e <= vs:
                raise ValueError(f"edge {e!r} has an endpoint outside the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[Hashable], edges: Iterable[tuple] = ()) -> LabeledGraph:
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def _pos(self):
        return {v: i for i, v in enumerate(self.vertices)}

    def edge_list(self) -> list[tuple]:
        """Edges as (u, v) pairs, u before v in vertex order, sorted canonically."""
        pos = self._pos()
        out = [tuple(sorted(e, key=pos.__getitem__)) for e in self.edges]
        return sorted(out, key=lambda uv: (pos[uv[0]], pos[uv[1]]))

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbors(self, v) -> list:
        return [u for u in self.vertices if u != v and frozenset((u, v)) in self.edges]

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> dict:
        return {v: self.degree(v) for v in self.vertices}

    def remove_vertex(self, v) -> LabeledGraph:
        return LabeledGraph(
            tuple(u for u in self.vertices if u != v),
            frozenset(e for e in self.edges if v not in e),
        )

    def induced(self, vs: Iterable) -> LabeledGraph:
        keep = set(vs)
        return LabeledGraph(
            tuple(u for u in self.vertices if u in keep),
            frozenset(e for e in self.edges if e <= keep),
        )

    def with_edges(self, edges: Iterable) -> LabeledGraph:
        """Same vertex set, the given edge set."""
        return LabeledGraph(self.vertices, frozenset(frozenset(e) for e in edges))

    def without_edges(self, edges: Iterable) -> LabeledGraph:
        gone = {frozenset(e) for e in edges}
        return LabeledGraph(self.vertices, self.edges - gone)

    def is_subgraph_of(self, other: LabeledGraph) -> bool:
        return set(self.vertices) <= set(other.vertices) and self.edges <= other.edges

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def components(self) -> list[frozenset]:
        pos = self._pos()
        comps = [frozenset(c) for c in nx.connected_components(self.to_networkx())]
        return sorted(comps, key=lambda c: min(pos[v] for v in c))

    def is_connected(self) -> bool:
        return self.order > 0 and len(self.components()) == 1

    def triangles(self) -> list[tuple]:
        pos = self._pos()
        out = []
        for a, b, c in combinations(self.vertices, 3):
            if self.has_edge(a, b) and self.has_edge(b, c) and self.has_edge(a, c):
                out.append((a, b, c))
        return sorted(out, key=lambda t: tuple(pos[x] for x in t))

    def is_triangle_free(self) -> bool:
        for e in self.edges:
            a, b = tuple(e)
            for c in self.vertices:
                if c not in e and self.has_edge(a, c) and self.has_edge(b, c):
                    return False
        return True

    def distances_from(self, v) -> dict:
        return dict(nx.single_source_shortest_path_length(self.to_networkx(), v))

    def canonical_key(self):
        return (frozenset(self.vertices), self.edges)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {_dot_id(name)} {{"]
        for v in self.vertices:
            lines.append(f'  "{label_str(v)}";')
        for u, v in self.edge_list():
            lines.append(f'  "{label_str(u)}" -- "{label_str(v)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        def enc(v):
            return sorted(v) if isinstance(v, frozenset) else v

        return {
            "vertices": [enc(v) for v in self.vertices],
            "edges": [[enc(u), enc(v)] for u, v in self.edge_list()],
        }

    @classmethod
    def from_json(cls, data: dict) -> LabeledGraph:
        def dec(v):
            return frozenset(v) if isinstance(v, list) else v

        vertices = [dec(v) for v in data["vertices"]]
        return cls.build(vertices, [(dec(u), dec(v)) for u, v in data["edges"]])


def _dot_id(name: str) -> str:
    return name if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) else f'"{name}"'


_DOT_EDGE = re.compile(r'("[^"]*"|[A-Za-z0-9_]+)\s*--\s*("[^"]*"|[A-Za-z0-9_]+)')
_DOT_NODE = re.compile(r'^\s*("[^"]*"|[A-Za-z0-9_]+)\s*(\[[^\]]*\])?\s*;?\s*$')


def parse_dot(text: str) -> LabeledGraph:
    """Parse the undirected DOT subset written by :meth:`LabeledGraph.to_dot`."""
    body = text[text.index("{") + 1: text.rindex("}")]
    vertices, edges = [], []

    def add(tok):
        lab = parse_label(tok.strip('"'))
        if lab not in vertices:
            vertices.append(lab)
        return lab

    for stmt in re.split(r"[;\n]", body):
        stmt = stmt.strip()
        if not stmt:
            continue
        m = _DOT_EDGE.search(stmt)
        if m:
            edges.append((add(m.group(1)), add(m.group(2))))
        elif _DOT_NODE.match(stmt) and "=" not in stmt.split("[")[0]:
            add(_DOT_NODE.match(stmt).group(1))
    return LabeledGraph.build(vertices, edges)


# --- named graphs -------------------------------------------------------------

def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph.build(range(1, n + 1), combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> LabeledGraph:
    return LabeledGraph.build(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph.build(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def complete_bipartite_graph(m: int, k: int) -> LabeledGraph:
    left = range(1, m + 1)
    right = range(m + 1, m + k + 1)
    return LabeledGraph.build(range(1, m + k + 1), [(a, b) for a in left for b in right])


def wheel_graph(n: int) -> LabeledGraph:
    """W_n: rim cycle on 1..n-1, hub n."""
    rim = cycle_graph(n - 1)
    return LabeledGraph.build(range(1, n + 1), [tuple(e) for e in rim.edges] + [(i, n) for i in range(1, n)])


# --- predicates ---------------------------------------------------------------

@dataclass(frozen=True)
class GraphPredicates:
    connected: bool
    triangle_free: bool
    forest: bool
    complete_bipartite: tuple | None  # (part, part) when true
    outerplanar: bool
    degrees: dict


def complete_bipartition(g: LabeledGraph) -> tuple | None:
    """The parts (A, B) if g is K_{|A|,|B|} on all its vertices, else None."""
    if g.size == 0 or not g.is_connected():
        return None
    colour = {g.vertices[0]: 0}
    stack = [g.vertices[0]]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in colour:
                colour[u] = 1 - colour[v]
                stack.append(u)
            elif colour[u] == colour[v]:
                return None
    a = tuple(v for v in g.vertices if colour[v] == 0)
    b = tuple(v for v in g.vertices if colour[v] == 1)
    return (a, b) if g.size == len(a) * len(b) else None


def is_forest(g: LabeledGraph) -> bool:
    return g.size == g.order - len(g.components())


def is_outerplanar(g: LabeledGraph) -> bool:
    """Outerplanar iff adding one vertex adjacent to everything keeps it planar."""
    h = g.to_networkx()
    apex = ("__apex__",)
    h.add_edges_from((apex, v) for v in g.vertices)
    return nx.check_planarity(h)[0]


def graph_predicates(g: LabeledGraph) -> GraphPredicates:
    return GraphPredicates(
        connected=g.is_connected(),
        triangle_free=g.is_triangle_free(),
        forest=is_forest(g),
        complete_bipartite=complete_bipartition(g),
        outerplanar=is_outerplanar(g),
        degrees=g.degrees(),
    )


def is_wheel_subgraph(g: LabeledGraph) -> bool:
    """True if g is a spanning subgraph of the wheel on its vertex set (order >= 4).

    That holds iff some vertex h leaves g - h a subgraph of a Hamiltonian cycle
    of the remaining vertices: a disjoint union of paths, or the cycle itself.
    """
    if g.order < 4:
        return False
    for hub in g.vertices:
        rest = g.remove_vertex(hub)
        degs = rest.degrees().values()
        if any(d > 2 for d in degs):
            continue
        if is_forest(rest):
            return True
        # a single cycle through every remaining vertex
        if rest.is_connected() and all(d == 2 for d in degs):
            return True
    return False
