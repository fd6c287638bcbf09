from itertools import combinations, permutations
from math import comb

import pytest

from tightpowers.errors import InvalidArgument
from tightpowers.gadgets import (
    AbsorberWitness,
    absorber_gadget,
    absorber_root_degree,
    connector_gadget,
    gadget_text,
    is_absorber,
    link_path_pattern,
    missing_edges_for_absorber,
    path_gadget,
)
from tightpowers.hypergraph import Hypergraph, union
from tightpowers.powers import PowerParams, g, power_path_edges

P32 = PowerParams(3, 2)


def _sorted_edges(*groups):
    return {tuple(sorted(e)) for grp in groups for e in grp}


class TestAbsorber:
    def test_example_edge_set(self):
        A = absorber_gadget(P32)
        # positions: v1 v2 v3 v v4 v5 v6
        pos = {i: i - 1 if i <= 3 else i for i in range(1, 7)}
        v = 3
        tight = [(pos[i], pos[i + 1], pos[i + 2]) for i in range(1, 5)]
        skips = [(pos[i], pos[i + j], pos[i + 3]) for i in range(1, 4) for j in (1, 2)]
        rooted = [(v, pos[i], pos[i + 2]) for i in range(1, 5)]
        assert A.graph.edges == _sorted_edges(tight, skips, rooted)
        assert len(A.graph) == 14
        assert A.roots == (3,) and A.size == 7

    def test_root_degree(self):
        A = absorber_gadget(P32)
        assert sum(3 in e for e in A.graph.edges) == 4 == absorber_root_degree(P32)
        p33 = PowerParams(3, 3)
        A33 = absorber_gadget(p33)
        # 3*C(4,2) - 7; the link is a 2-uniform cube path on 8 vertices minus 7 edges
        assert absorber_root_degree(p33) == 11
        assert sum(A33.roots[0] in e for e in A33.graph.edges) == 11

    @pytest.mark.parametrize("k", [3, 4, 5])
    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_edge_count(self, k, r):
        params = PowerParams(k, r)
        A = absorber_gadget(params)
        h = params.h
        assert len(A.graph) == g(params, 2 * h) + k * comb(h, k - 1) - (k + 2 * r - 2)

    @pytest.mark.parametrize("k,r", [(2, 2), (3, 1)])
    def test_regime(self, k, r):
        with pytest.raises(InvalidArgument):
            absorber_gadget(PowerParams(k, r))

    def test_inside_both_paths(self):
        params = PowerParams(4, 3)
        A = absorber_gadget(params)
        v = A.roots[0]
        outer = tuple(x for x in A.order if x != v)
        assert A.graph.edges <= power_path_edges(params, outer) | power_path_edges(params, A.order)


class TestConnector:
    def test_example_edge_set(self):
        b = 6
        C = connector_gadget(P32, b)

        def pos(i):  # v_{i-3} = w_i, v_{b+4-j} = u_j; positions run w1 w2 w3 v1..v6 u3 u2 u1
            return i + 2

        skips = [(pos(i), pos(i + j), pos(i + 3)) for i in range(-2, b + 1) for j in (1, 2)]
        mid = [(pos(b // 2 - 1), pos(b // 2), pos(b // 2 + 1)), (pos(b // 2), pos(b // 2 + 1), pos(b // 2 + 2))]
        assert C.graph.edges == _sorted_edges(skips, mid)
        assert len(C.graph) == 20 and C.size == 12

    def test_eight_removed(self):
        C = connector_gadget(P32, 6)
        full = power_path_edges(P32, C.order)
        assert len(full) == 28 and len(full - C.graph.edges) == 8

    @pytest.mark.parametrize("k,r,b", [(3, 2, 6), (3, 2, 10), (3, 3, 8), (4, 2, 8), (4, 3, 12)])
    def test_structure(self, k, r, b):
        params = PowerParams(k, r)
        C = connector_gadget(params, b)
        h = params.h
        assert len(C.roots) == 2 * h
        for side in (C.roots[:h], C.roots[h:]):
            assert not any(set(e) <= set(side) for e in C.graph.edges)
        interior = set(C.interior)
        assert len(interior) == b
        assert all(interior & set(e) for e in C.graph.edges)
        assert C.graph.edges <= power_path_edges(params, C.order)

    @pytest.mark.parametrize("b", [5, 4])
    def test_rejects(self, b):
        with pytest.raises(InvalidArgument):
            connector_gadget(P32, b)


class TestIsAbsorber:
    def test_complete_host(self):
        K7 = Hypergraph.complete(7, 3)
        for rest in list(permutations(range(1, 7)))[:50]:
            assert is_absorber(K7, P32, AbsorberWitness(0, rest))

    def test_gadget_self_certification(self):
        A = absorber_gadget(P32)
        outer = tuple(x for x in A.order if x != 3)
        w = AbsorberWitness(3, outer)
        assert not is_absorber(A.graph, P32, w)
        deleted = {tuple(sorted((3,) + s)) for s in link_path_pattern(P32, outer)}
        assert len(deleted) == 3 + 2 * 2 - 2
        assert is_absorber(union(A.graph, Hypergraph(7, 3, frozenset(deleted))), P32, w)

    def test_missing_tuple_edge(self):
        K7 = Hypergraph.complete(7, 3)
        H = Hypergraph(7, 3, K7.edges - {(1, 2, 3)})
        assert not is_absorber(H, P32, AbsorberWitness(0, (1, 2, 3, 4, 5, 6)))

    def test_missing_edges(self):
        w = AbsorberWitness(0, (1, 2, 3, 4, 5, 6))
        assert missing_edges_for_absorber(Hypergraph.complete(7, 3), P32, w) == frozenset()
        forced = power_path_edges(P32, w.tuple) | power_path_edges(P32, w.inserted())
        assert missing_edges_for_absorber(Hypergraph.empty(7, 3), P32, w) == forced
        assert len(forced) == g(P32, 6) + 3 * comb(3, 2)

    def test_missing_from_deterministic_part(self):
        # host supplies the link pattern only; what remains is the gadget itself
        A = absorber_gadget(P32)
        outer = tuple(x for x in A.order if x != 3)
        link_edges = frozenset(tuple(sorted((3,) + s)) for s in link_path_pattern(P32, outer))
        missing = missing_edges_for_absorber(Hypergraph(7, 3, link_edges), P32, AbsorberWitness(3, outer))
        assert missing == A.graph.edges

    def test_witness_validation(self):
        with pytest.raises(InvalidArgument):
            AbsorberWitness(1, (1, 2, 3, 4, 5, 6))


def test_gadget_text_golden():
    assert gadget_text(absorber_gadget(P32)) == (
        "7 3\n0 1 2\n0 1 4\n0 2 3\n0 2 4\n1 2 4\n1 2 5\n1 3 4\n"
        "1 4 5\n2 3 5\n2 4 5\n2 4 6\n2 5 6\n3 4 6\n4 5 6\nroots: 3\n"
    )


def test_path_gadget():
    G = path_gadget(P32, 8)
    assert len(G.graph) == g(P32, 8) and G.roots == ()
    assert set(combinations(range(4), 3)) <= G.graph.edges
