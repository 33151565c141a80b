from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cprank.copositive import horn_matrix, minimal_zeros
from cprank.cp_decomp import (
    KNOWN_MAX_CPR,
    NotDD,
    NotInCone,
    NotTriangleFree,
    SupportNotNested,
    Term,
    WeightedCpDecomposition,
    WitnessNotFound,
    cpr_bound_rules,
    cpr_triangle_free,
    cpr_wheel,
    dd_decomposition,
    derive_cpr_bound,
    distinct_supports,
    factor_through_zeros,
    max_cpr_bound,
    nearly_positive_witness,
    pairmove,
)
from cprank.graphs import (
    LabeledGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    path_graph,
    wheel_graph,
)
from cprank.matrix_core import SymMatrix, dd_orbit_witness, outer_sum


def realized(terms, n):
    return outer_sum(n, ((t.vector, t.weight) for t in terms if t is not None))


@st.composite
def nested_pairs(draw):
    n = draw(st.integers(1, 6))
    d = [draw(st.integers(0, 5)) for _ in range(n)]
    if not any(d):
        d[draw(st.integers(0, n - 1))] = draw(st.integers(1, 5))
    supp = [i for i, x in enumerate(d) if x]
    keep = draw(st.lists(st.sampled_from(supp), min_size=1, unique=True))
    b = [draw(st.integers(1, 5)) if i in keep else 0 for i in range(n)]
    lb = Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 6)))
    ld = Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 6)))
    return Term(b, lb), Term(d, ld)


@given(nested_pairs())
@settings(max_examples=1000)
def test_pairmove_conserves_and_moves_supports(pair):
    b, d = pair
    nb, nd = pairmove(b, d)
    n = len(b.vector)
    assert realized([nb, nd], n) == realized([b, d], n)
    assert nd.support == d.support
    new_b = nb.support if nb is not None else frozenset()
    assert new_b <= d.support
    assert d.support - b.support <= new_b
    r = min(d.vector[i - 1] / b.vector[i - 1] for i in b.support)
    argmin = {i for i in b.support if d.vector[i - 1] / b.vector[i - 1] == r}
    assert not argmin & new_b


def test_pairmove_examples():
    nb, nd = pairmove(Term((1, 1, 0)), Term((1, 1, 1)))
    assert nb.vector == (0, 0, 1) and nb.weight == Fraction(1, 2)
    assert nd.vector == (2, 2, 1) and nd.weight == Fraction(1, 2)
    nb, nd = pairmove(Term((1, 1)), Term((1, 1)))
    assert nb is None and nd.vector == (2, 2) and nd.weight == Fraction(1, 2)
    with pytest.raises(SupportNotNested):
        pairmove(Term((1, 1)), Term((2, 0)))


@st.composite
def decompositions(draw):
    n = draw(st.integers(1, 5))
    terms = []
    for _ in range(draw(st.integers(1, 7))):
        v = [draw(st.integers(0, 3)) for _ in range(n)]
        if not any(v):
            v[0] = 1
        terms.append(Term(v, Fraction(draw(st.integers(1, 4)), draw(st.integers(1, 3)))))
    return WeightedCpDecomposition(n, tuple(terms))


@given(decompositions())
@settings(max_examples=1000)
def test_distinct_supports_properties(dec):
    out = distinct_supports(dec)
    assert out.realize() == dec.realize()
    sups = out.supports()
    assert len(set(sups)) == len(sups)
    assert len(out.terms) <= len(dec.terms)


def test_distinct_supports_examples():
    dec = WeightedCpDecomposition.of([(1, 1), (1, 2)])
    out = distinct_supports(dec)
    assert out.realize() == dec.realize() and len(out.terms) == 2
    assert sorted(map(len, out.supports())) == [1, 2]
    same = WeightedCpDecomposition.of([(1, 0), (0, 1)])
    assert distinct_supports(same) == same
    four = WeightedCpDecomposition.of([(1, 1, 1)] * 4)
    assert len(distinct_supports(four).terms) == 1


@st.composite
def dd_orbit_matrices(draw):
    """Sums of rank-one terms with support size <= 2 are always in the DD orbit."""
    n = draw(st.integers(1, 6))
    A = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(draw(st.integers(1, 9))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        v = {i: draw(st.integers(1, 3))}
        if j != i:
            v[j] = draw(st.integers(1, 3))
        for p in v:
            for q in v:
                A[p][q] += v[p] * v[q]
    return SymMatrix(A)


@given(dd_orbit_matrices())
@settings(max_examples=1000)
def test_dd_decomposition_realizes_exactly(A):
    d = dd_orbit_witness(A)
    dec = dd_decomposition(A, d)
    assert dec.realize() == A
    assert all(len(s) <= 2 for s in dec.supports())
    edges = sum(1 for i in range(A.n) for j in range(i + 1, A.n) if A[i, j])
    assert len(dec.terms) <= A.n + edges


def test_dd_decomposition_examples():
    dec = dd_decomposition(SymMatrix([[2, 1], [1, 2]]), (1, 1))
    assert len(dec.terms) == 3 and dec.realize() == SymMatrix([[2, 1], [1, 2]])
    assert len(dd_decomposition(SymMatrix.identity(4), (1, 1, 1, 1)).terms) == 4
    assert len(dd_decomposition(SymMatrix.ones(2), (1, 1)).terms) == 1
    with pytest.raises(NotDD):
        dd_decomposition(SymMatrix.ones(3), (1, 1, 1))


def test_closed_form_values():
    k33 = complete_bipartite_graph(3, 3)
    A = SymMatrix([[3 if i == j else (1 if k33.has_edge(i + 1, j + 1) else 0) for j in range(6)] for i in range(6)])
    assert cpr_triangle_free(A) == 9
    assert cpr_triangle_free(SymMatrix.identity(5)) == 5
    C6 = cycle_graph(6)
    A = SymMatrix([[3 if i == j else (1 if C6.has_edge(i + 1, j + 1) else 0) for j in range(6)] for i in range(6)])
    assert cpr_triangle_free(A) == 6
    with pytest.raises(NotTriangleFree):
        cpr_triangle_free(SymMatrix.ones(3))
    assert [cpr_wheel(n) for n in (4, 5, 6, 7)] == [4, 6, 7, 9]


def test_rule_engine_bounds():
    assert cpr_bound_rules(complete_bipartite_graph(1, 5)) == 6
    forest = LabeledGraph.build(range(1, 9), [(1, 2), (2, 3), (5, 6)])
    assert cpr_bound_rules(forest) == 8
    assert cpr_bound_rules(wheel_graph(6)) == 7
    assert cpr_bound_rules(path_graph(5)) == 5
    d = derive_cpr_bound(complete_graph(5))
    assert d.value == 6 and d.rule == "vertex-count" and not d.uses_p6


def test_p6_is_flagged_not_assumed():
    value, flagged = max_cpr_bound(6)
    assert flagged and value > 9
    d = derive_cpr_bound(complete_graph(6))
    assert d.uses_p6 and d.value == value
    assert 6 not in KNOWN_MAX_CPR


def test_factor_through_zeros_horn():
    W = minimal_zeros(horn_matrix())
    cols = list(W.columns)
    B = [[c[i] for c in cols] for i in range(5)]
    X = factor_through_zeros(B, W)
    assert [[int(x) for x in r] for r in X.X] == np.eye(5, dtype=int).tolist()
    b = [1, 2, 1, 0, 0]
    X = factor_through_zeros([[x] for x in b], W)
    assert X.column_supports() == [frozenset({1, 3})]  # columns ordered {1,2},{1,5},{2,3},...
    with pytest.raises(NotInCone):
        factor_through_zeros([[1], [0], [0], [0], [0]], W)


def test_nearly_positive_trivial_and_precondition():
    Y = np.ones((3, 3))
    assert np.array_equal(nearly_positive_witness(Y), np.eye(3))
    with pytest.raises(ValueError):
        nearly_positive_witness(np.eye(3))


def _positive_gram_instances(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        if len(out) % 2:
            a, b = rng.integers(1, 5, size=3), rng.integers(1, 5, size=3)
            Y = np.array([[a[0], 0, b[2]], [b[0], a[1], 0], [0, b[1], a[2]]])
        else:
            Y = rng.integers(0, 4, size=(3, 3)) * (rng.random((3, 3)) < 0.6)
        if (Y @ Y.T > 0).all():
            out.append(Y)
    return out


@pytest.mark.parametrize("Y", _positive_gram_instances(100, 7), ids=lambda _: "")
def test_nearly_positive_witness_random(Y):
    Q = nearly_positive_witness(Y, eps=1e-6)
    assert np.abs(Q @ Q.T - np.eye(3)).max() <= 1e-12
    assert (Y @ Q.T).min() >= 1e-6


def test_witness_not_found_is_an_error():
    assert issubclass(WitnessNotFound, RuntimeError)
