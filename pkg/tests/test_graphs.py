"""Graph model, constructors and structural predicates."""

import json
from fractions import Fraction

import pytest

from insertproc import (WeightedGraph, automorphisms, block_projection,
                        classify_multipartite, complete_graph, cycle_graph,
                        find_kite, graph_from_json_dict, graph_to_json_dict,
                        has_directed_triangle, is_strongly_connected,
                        kite_graph, multipartite_graph, path_graph, regularity,
                        triangles_per_edge, uniform_weight)


def test_complete_graph_weights():
    g = complete_graph(3)
    assert g.weight(0, 1) == 1
    assert g.weight(1, 0) == 1
    assert g.weight(0, 0) == 0
    assert g.vertex_count == 3


def test_complete_graph_single_vertex():
    g = complete_graph(1)
    assert g.vertex_count == 1
    assert g.weight(0, 0) == 0


def test_complete_graph_half_weights():
    g = complete_graph(4, Fraction(1, 2))
    edges = list(g.positive_edges())
    assert len(edges) == 12
    assert all(w == Fraction(1, 2) for _, _, w in edges)


def test_complete_graph_rejects_zero():
    with pytest.raises(ValueError):
        complete_graph(0)


def test_multipartite_structure():
    g = multipartite_graph(3, 2)
    assert g.vertex_count == 6
    for i in range(6):
        assert len(g.out_neighbors(i)) == 4
        for j in range(6):
            expected = 1 if i % 3 != j % 3 else 0
            assert g.weight(i, j) == expected


def test_multipartite_r1_equals_complete():
    for q in (2, 3, 5):
        assert multipartite_graph(q, 1, Fraction(2, 3)) == complete_graph(q, Fraction(2, 3))


def test_multipartite_22_is_four_cycle():
    g = multipartite_graph(2, 2)
    assert g.vertex_count == 4
    assert regularity(g) == 2
    assert triangles_per_edge(g) == 0


def test_multipartite_rejects_zero():
    with pytest.raises(ValueError):
        multipartite_graph(0, 2)
    with pytest.raises(ValueError):
        multipartite_graph(2, 0)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        WeightedGraph([[0, -1], [1, 0]])


def test_uniform_weight_complete():
    report = uniform_weight(complete_graph(3))
    assert report.is_uniform
    assert report.w == 1
    assert report.violations == ()


def test_uniform_weight_asymmetric():
    g = WeightedGraph.from_weights(2, {(0, 1): 1, (1, 0): 2})
    report = uniform_weight(g)
    assert not report.is_uniform
    assert ((0, 1), Fraction(1)) in report.violations


def test_uniform_weight_loop():
    g = WeightedGraph.from_weights(2, {(0, 0): 1, (0, 1): 1, (1, 0): 1})
    report = uniform_weight(g)
    assert not report.is_uniform
    assert ((0, 0), Fraction(1)) in report.violations


def test_uniform_weight_all_zero():
    report = uniform_weight(WeightedGraph.from_weights(3, {}))
    assert not report.is_uniform
    assert report.w is None


def test_uniform_weight_two_values():
    g = WeightedGraph.from_weights(3, {(0, 1): 1, (1, 0): 1, (1, 2): 2, (2, 1): 2})
    assert not uniform_weight(g).is_uniform


def test_directed_triangle_complete():
    witness = has_directed_triangle(complete_graph(3))
    assert witness is not None
    a, b, c = witness
    g = complete_graph(3)
    assert g.weight(a, b) * g.weight(b, c) * g.weight(a, c) > 0


def test_directed_triangle_two_cycle():
    g = WeightedGraph.from_weights(2, {(0, 1): 1, (1, 0): 1})
    assert has_directed_triangle(g) is None


def test_directed_triangle_loop():
    g = WeightedGraph.from_weights(2, {(0, 0): 1})
    assert has_directed_triangle(g) == (0, 0, 0)


def test_directed_triangle_bipartite_free():
    for g in (multipartite_graph(2, 2), multipartite_graph(2, 3), path_graph(5)):
        assert has_directed_triangle(g) is None


def test_strongly_connected():
    assert is_strongly_connected(complete_graph(4))
    assert is_strongly_connected(complete_graph(1))
    two_edges = WeightedGraph.from_weights(
        4, {(0, 1): 1, (1, 0): 1, (2, 3): 1, (3, 2): 1})
    assert not is_strongly_connected(two_edges)
    one_way = WeightedGraph.from_weights(2, {(0, 1): 1})
    assert not is_strongly_connected(one_way)


def test_find_kite_on_kite():
    assert find_kite(kite_graph()) == (0, 1, 2, 3)


def test_find_kite_none_on_complete_and_multipartite():
    assert find_kite(complete_graph(4)) is None
    assert find_kite(multipartite_graph(3, 2)) is None


def test_find_kite_rejects_directed_and_loops():
    with pytest.raises(ValueError):
        find_kite(WeightedGraph.from_weights(2, {(0, 1): 1}))
    with pytest.raises(ValueError):
        find_kite(WeightedGraph.from_weights(2, {(0, 0): 1, (0, 1): 1, (1, 0): 1}))


def _kite_brute(g):
    """Independent induced-kite scan over unordered 4-subsets."""
    from itertools import combinations, permutations
    n = g.vertex_count
    adj = [[g.weight(i, j) > 0 for j in range(n)] for i in range(n)]
    found = []
    for four in combinations(range(n), 4):
        for d in four:
            rest = [v for v in four if v != d]
            for tri in permutations(rest):
                a, b, c = tri
                if (adj[a][b] and adj[b][c] and adj[a][c]
                        and adj[d][a] and not adj[d][b] and not adj[d][c]):
                    found.append(frozenset([(a,), (frozenset([b, c])), (d,)]))
    return bool(found)


def test_find_kite_matches_bruteforce_exhaustive():
    # all symmetric loopless graphs on 5 vertices, sampled densely on 6
    import itertools
    import random
    pairs5 = list(itertools.combinations(range(5), 2))
    rng = random.Random(7)
    masks = rng.sample(range(2 ** len(pairs5)), 200)
    for mask in masks:
        spec = {}
        for b, (i, j) in enumerate(pairs5):
            if mask >> b & 1:
                spec[(i, j)] = 1
                spec[(j, i)] = 1
        g = WeightedGraph.from_weights(5, spec)
        assert (find_kite(g) is not None) == _kite_brute(g)


def test_regularity():
    assert regularity(complete_graph(4)) == 3
    assert regularity(path_graph(3)) is None
    assert regularity(multipartite_graph(3, 2)) == 4
    assert regularity(WeightedGraph.from_weights(2, {})) == 0


def test_triangles_per_edge():
    assert triangles_per_edge(complete_graph(3)) == 1
    assert triangles_per_edge(complete_graph(4)) == 2
    assert triangles_per_edge(cycle_graph(4)) == 0
    assert triangles_per_edge(WeightedGraph.from_weights(3, {})) is None
    assert triangles_per_edge(kite_graph()) is None  # varies between edges


def test_classify_multipartite_fixtures():
    cls = classify_multipartite(multipartite_graph(3, 2))
    assert cls.is_complete_multipartite
    assert cls.q == 3 and cls.r == 2
    assert cls.parts == ((0, 3), (1, 4), (2, 5))

    cls = classify_multipartite(complete_graph(5))
    assert cls.is_complete_multipartite and cls.q == 5 and cls.r == 1

    assert not classify_multipartite(kite_graph()).is_complete_multipartite


def test_classify_multipartite_unequal_parts():
    # path on 3 vertices: non-adjacency classes {0, 2} and {1}
    cls = classify_multipartite(path_graph(3))
    assert cls.is_complete_multipartite
    assert cls.q == 2
    assert cls.r is None
    assert cls.parts == ((0, 2), (1,))


def test_block_projection_values():
    g = multipartite_graph(3, 2)
    cls = classify_multipartite(g)
    assert block_projection(g, cls, (0, 1, 5)) == (0, 1, 2)
    with pytest.raises(ValueError):
        block_projection(g, cls, (0, 9))


@pytest.mark.parametrize("q,r", [(2, 2), (3, 2), (2, 3), (4, 2), (3, 4), (2, 6)])
def test_block_projection_preserves_weights(q, r):
    g = multipartite_graph(q, r, Fraction(3, 4))
    cls = classify_multipartite(g)
    quotient = complete_graph(q, Fraction(3, 4))
    f = {v: block_projection(g, cls, (v,))[0] for v in range(q * r)}
    for i in range(q * r):
        for j in range(q * r):
            assert g.weight(i, j) == quotient.weight(f[i], f[j])


@pytest.mark.parametrize("q,r,w", [(2, 2, 1), (3, 2, 2), (4, 1, 1), (3, 3, 1)])
def test_multipartite_invariants(q, r, w):
    g = multipartite_graph(q, r, w)
    report = uniform_weight(g)
    assert report.is_uniform and report.w == w
    assert regularity(g) == (q - 1) * r
    cls = classify_multipartite(g)
    assert cls.is_complete_multipartite and cls.q == q and cls.r == r


def test_automorphisms_complete():
    auts = automorphisms(complete_graph(3))
    assert len(auts) == 6
    assert tuple(range(3)) in auts


def test_automorphisms_multipartite_count():
    # part permutations times within-part swaps: 3! * 2^3
    assert len(automorphisms(multipartite_graph(3, 2))) == 48


def test_automorphisms_preserve_weights():
    g = kite_graph()
    for p in automorphisms(g):
        for i in range(4):
            for j in range(4):
                assert g.weight(i, j) == g.weight(p[i], p[j])


def test_json_roundtrip():
    g = WeightedGraph.from_weights(3, {(0, 1): Fraction(3, 2), (1, 2): 1})
    doc = graph_to_json_dict(g)
    assert doc["vertices"] == 3
    assert [0, 1, "3/2"] in doc["weights"]
    assert graph_from_json_dict(json.loads(json.dumps(doc))) == g


def test_json_errors():
    with pytest.raises(ValueError):
        graph_from_json_dict({"vertices": 2})
    with pytest.raises(ValueError):
        graph_from_json_dict({"vertices": 0, "weights": []})
    with pytest.raises(ValueError):
        graph_from_json_dict({"vertices": 2, "weights": [[0, 5, "1"]]})
    with pytest.raises(ValueError):
        graph_from_json_dict({"vertices": 2, "weights": [[0, 1, 0.5]]})
    with pytest.raises(ValueError):
        graph_from_json_dict({"vertices": 2, "weights": [[0, 1, "1"], [0, 1, "2"]]})
