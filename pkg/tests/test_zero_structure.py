import random
from itertools import combinations

import pytest

from cprank.case_engine import case_knowledge, figure_graphs, load_table1, rebuild_pm1_matrix
from cprank.copositive import horn_matrix, is_copositive, spn_connected_test, zero_supports
from cprank.graphs import LabeledGraph, complete_bipartite_graph, complete_graph, cycle_graph, wheel_graph
from cprank.zero_structure import (
    MAX_TF_EDGES,
    InconsistentFamily,
    SupportFamily,
    TooLarge,
    apply_inference_rules,
    forced_signs,
    graph_GM,
    graph_GV_confirmed,
    graph_GV_over,
    irreducibility_prune,
    pairs_covered,
    sign_obstruction,
    tf_exact,
)
from oracles import tf_brute

F = frozenset
TABLE = load_table1()


def fam(n, *sets):
    return SupportFamily.of(n, sets)


def test_family_validation():
    with pytest.raises(ValueError):
        fam(4, {1, 2}, {1, 2})
    with pytest.raises(ValueError):
        fam(4, {1})
    with pytest.raises(ValueError):
        fam(4, {1, 5})


def test_shared_index_pair_rule():
    k = apply_inference_rules(fam(5, {1, 2}, {2, 3}))
    assert k.status(F({1, 2, 3})) == "confirmed"
    assert k.status(F({1, 3})) == "excluded"
    assert "shared-index-pair" in k.excluded[F({1, 3})]


def test_minus_one_pattern_both_ways():
    case1 = case_knowledge(TABLE[0])
    assert case1.status(F({1, 2, 4, 5})) == "excluded"
    case36 = case_knowledge(TABLE[35])
    assert case36.status(F({1, 2, 4, 5})) == "confirmed"


def test_meeting_pairs_and_three_members():
    k = apply_inference_rules(fam(6, {1, 2}, {1, 3}, {1, 4}))
    assert k.status(F({1, 2, 3, 4})) == "confirmed"
    k = apply_inference_rules(fam(6, {1, 2}, {3, 4}, {1, 3, 5}))
    assert k.status(F({1, 2, 3, 4})) == "unknown"
    k = apply_inference_rules(fam(6, {1, 2}, {2, 3}, {3, 4}, {1, 3, 4}))
    assert k.status(F({1, 2, 3, 4})) == "excluded"


def test_horn_family_matches_kernel():
    H = horn_matrix()
    fam_h = fam(5, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5})
    k = apply_inference_rules(fam_h)
    assert set(k.confirmed) == zero_supports(H)
    skip = {F({i, (i + 1) % 5 + 1}) for i in range(1, 6)}
    assert set(k.excluded) == skip
    assert not k.contradictions


def test_no_case_is_inconsistent():
    for e in TABLE:
        k = case_knowledge(e)
        assert not set(k.confirmed) & set(k.excluded)
        assert all(s in k.confirmed for s in e.family.supports)


def test_inconsistent_family_detected():
    with pytest.raises(InconsistentFamily):
        apply_inference_rules(fam(5, {1, 2}, {2, 3}), {F({1, 2, 3}): "test"})


def test_forced_signs_and_sign_obstruction():
    f = fam(6, {1, 2}, {1, 3})
    assert forced_signs(f) == {F({1, 2}): -1, F({1, 3}): -1, F({2, 3}): 1}
    case2 = TABLE[1].family
    assert sign_obstruction(case2, {2, 3, 5, 6}) is not None
    assert sign_obstruction(fam(5, {1, 2}, {2, 3}), {1, 2, 3}) is None
    odd = fam(5, {1, 2}, {2, 3}, {1, 3})
    assert "inconsistent" in sign_obstruction(odd, {1, 2, 3})


def test_graph_chain_for_every_case():
    for e in TABLE:
        k = case_knowledge(e)
        conf, over, gm = graph_GV_confirmed(e.family, k), graph_GV_over(e.family, k), graph_GM(e.family)
        assert conf.is_subgraph_of(over) and over.is_subgraph_of(gm)
        assert gm.order == e.k


def test_gm_sizes():
    assert graph_GM(TABLE[4].family).size == 10
    assert graph_GM(TABLE[42].family).size == 12
    cube = graph_GM(TABLE[43].family)
    assert cube.size == 12 and set(cube.degrees().values()) == {3}
    assert cube.is_triangle_free()
    assert graph_GM(TABLE[34].family).size == 0


def _corpus():
    out = {name: g for name, g in figure_graphs().items() if g.size <= 12}
    for e in TABLE:
        g = graph_GM(e.family)
        if g.size <= 12:
            out[f"gm{e.id}"] = g
    for n in range(3, 6):
        out[f"K{n}"] = complete_graph(n)
    out["W5"], out["W6"], out["C7"] = wheel_graph(5), wheel_graph(6), cycle_graph(7)
    out["K33"] = complete_bipartite_graph(3, 3)
    rng = random.Random(11)
    for i in range(40):
        n = rng.randint(4, 7)
        pairs = list(combinations(range(1, n + 1), 2))
        rng.shuffle(pairs)
        out[f"rand{i}"] = LabeledGraph.build(range(1, n + 1), pairs[: rng.randint(0, min(12, len(pairs)))])
    return out


CORPUS = _corpus()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_tf_exact_matches_enumeration(name):
    g = CORPUS[name]
    value, witness = tf_exact(g)
    assert value == tf_brute(g.edge_list(), g.triangles())
    assert len(witness) == value and g.with_edges(witness).is_triangle_free()


@pytest.mark.parametrize("n", range(3, 8))
def test_mantel(n):
    assert tf_exact(complete_graph(n))[0] == n * n // 4


def test_tf_witness_is_deterministic():
    g = graph_GM(TABLE[36].family)
    assert tf_exact(g) == tf_exact(LabeledGraph.from_json(g.to_json()))


def test_tf_too_large():
    assert MAX_TF_EDGES == 21
    with pytest.raises(TooLarge):
        tf_exact(complete_graph(8))


def test_irreducibility_prune_examples():
    e43 = TABLE[42]
    for sub in e43.prune_subsets:
        assert not pairs_covered(e43.family, sub)
        out = irreducibility_prune(e43.family, sub)
        assert {s for s, _ in out} == {F(c) for c in combinations(sorted(sub), 4)}
    f = fam(6, {1, 2}, {3, 4})
    assert irreducibility_prune(f, {1, 2, 3, 4, 5}) == []
    assert F({1, 3}) in pairs_covered(f, F({1, 2, 3, 4, 5}))
    with pytest.raises(ValueError):
        irreducibility_prune(f, {1, 2, 3})


def test_prune_then_rules_is_idempotent():
    e = TABLE[42]
    extra = {s: why for sub in e.prune_subsets for s, why in irreducibility_prune(e.family, sub)}
    once = apply_inference_rules(e.family, extra)
    twice = apply_inference_rules(e.family, dict(once.excluded))
    assert once.excluded == twice.excluded and once.confirmed == twice.confirmed


def test_case36_rules_agree_with_rebuilt_matrix():
    e = TABLE[35]
    M = rebuild_pm1_matrix(e.family)
    assert M is not None and is_copositive(M) and not spn_connected_test(M)
    zs = zero_supports(M)
    k = case_knowledge(e)
    minimal = {s for s in zs if not any(t < s for t in zs)}
    assert minimal == set(e.family.supports)
    assert set(k.confirmed) <= zs
    assert not set(k.excluded) & zs
