from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from cprank.graphs import (
    LabeledGraph,
    complete_bipartite_graph,
    complete_bipartition,
    complete_graph,
    cycle_graph,
    graph_predicates,
    is_forest,
    is_outerplanar,
    is_wheel_subgraph,
    parse_dot,
    path_graph,
    wheel_graph,
)
from oracles import outerplanar_by_circle


@st.composite
def small_graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return LabeledGraph.build(range(1, n + 1), [p for p, keep in zip(pairs, mask) if keep])


def test_named_graphs():
    assert complete_graph(5).size == 10
    assert cycle_graph(5).size == 5
    assert path_graph(4).size == 3
    assert complete_bipartite_graph(2, 3).size == 6
    w = wheel_graph(6)
    assert w.size == 10 and w.degree(6) == 5


def test_complete_bipartition():
    assert complete_bipartition(complete_bipartite_graph(2, 2)) == ((1, 2), (3, 4))
    assert complete_bipartition(path_graph(4)) is None
    assert complete_bipartition(complete_graph(3)) is None
    star = complete_bipartite_graph(1, 3)
    assert complete_bipartition(star) == ((1,), (2, 3, 4))


def test_outerplanar_known():
    assert is_outerplanar(cycle_graph(6))
    assert not is_outerplanar(complete_graph(4))
    assert not is_outerplanar(complete_bipartite_graph(2, 3))
    assert is_outerplanar(complete_graph(4).without_edges([(1, 2)]))


@given(small_graphs())
@settings(max_examples=300)
def test_outerplanar_matches_circle_embedding(g):
    assert is_outerplanar(g) == outerplanar_by_circle(g.vertices, g.edge_list())


def test_wheel_subgraph():
    assert is_wheel_subgraph(wheel_graph(6))
    assert is_wheel_subgraph(wheel_graph(6).without_edges([(1, 2), (3, 6)]))
    assert not is_wheel_subgraph(complete_graph(5))
    assert is_wheel_subgraph(complete_graph(4))


@given(small_graphs(max_n=6))
@settings(max_examples=200)
def test_wheel_subgraph_matches_relabelled_wheels(g):
    from itertools import permutations

    expected = False
    if g.order >= 4:
        for perm in permutations(g.vertices):
            w = wheel_graph(g.order)
            relabel = {i + 1: v for i, v in enumerate(perm)}
            edges = {frozenset(relabel[x] for x in e) for e in w.edges}
            if g.edges <= edges:
                expected = True
                break
    assert is_wheel_subgraph(g) == expected


def test_forest_and_predicates():
    p = graph_predicates(path_graph(5))
    assert p.connected and p.forest and p.triangle_free and p.outerplanar
    assert not is_forest(cycle_graph(4))


def test_dot_roundtrip_with_set_labels():
    g = LabeledGraph.build([frozenset({1, 2}), frozenset({2, 5, 6}), frozenset({3})],
                           [(frozenset({1, 2}), frozenset({2, 5, 6}))])
    text = g.to_dot("case")
    assert '"{1,2}" -- "{2,5,6}"' in text
    back = parse_dot(text)
    assert back == g


@given(small_graphs())
@settings(max_examples=100)
def test_json_roundtrip(g):
    assert LabeledGraph.from_json(g.to_json()) == g
