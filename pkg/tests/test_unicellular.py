from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genusrna.diagram import Diagram
from genusrna.fatgraph import matching_to_unicellular
from genusrna.sampling import RandomSource, uniform_unicellular
from genusrna.unicellular import (TYPE_I, TYPE_II, MapError, UnicellularMap,
                                  classify_trisection_type, find_trisections, glue_lambda,
                                  glue_phi, glue_psi, is_trisection, slice_once, slice_xi, tour)
from genusrna.verify import all_maps, exhaustive_bijection, random_bijection

PATH = matching_to_unicellular(Diagram(4, [(1, 4), (2, 3)]))
CROSS = matching_to_unicellular(Diagram(4, [(1, 3), (2, 4)]))


def test_validate_rejects_two_faces():
    with pytest.raises(MapError):
        UnicellularMap([1, 0, 3, 2], [1, 0, 3, 2])


def test_tour_of_crossing_map():
    rank = tour(CROSS)
    assert sorted(rank.tolist()) == [0, 1, 2, 3]
    assert rank[CROSS.root] == 0


def test_trisections_of_small_maps():
    assert find_trisections(PATH) == []
    tris = find_trisections(CROSS)
    assert len(tris) == 2
    assert all(is_trisection(CROSS, t.half_edge) for t in tris)
    # enumerate the predicate over all four half-edges
    assert sum(is_trisection(CROSS, h) for h in range(4)) == 2


def test_phi_on_path_gives_crossing():
    out, t = glue_phi(PATH, *PATH.vertex_mins().tolist())
    assert out.canonical() == CROSS
    assert t.kind == TYPE_I and is_trisection(out, t.half_edge)
    back, freed = slice_xi(out, t)
    assert back == PATH and sorted(freed) == sorted(PATH.vertex_mins().tolist())


def test_phi_bookkeeping_and_min_preservation():
    rng = RandomSource(4)
    for _ in range(50):
        u = uniform_unicellular(12, 2, rng)
        mins = u.vertex_mins().tolist()
        chosen = [mins[i] for i in rng.sample_indices(len(mins), 3)]
        out, t = glue_phi(u, *chosen)
        assert (out.num_vertices, out.genus, out.n_edges) == (u.num_vertices - 2, u.genus + 1, 12)
        assert len(out.order) == 24
        a1 = min(chosen, key=lambda h: u.rank[h])
        assert out.min_mask[a1]
        assert classify_trisection_type(out, t) == TYPE_I


def test_phi_rejects_repeated_vertex():
    v = PATH.vertex_mins().tolist()
    with pytest.raises(MapError):
        glue_phi(PATH, v[0], v[0], v[1])
    with pytest.raises(MapError):
        glue_lambda(PATH, v[:2])


def _psi_candidates(u, t):
    rank = u.rank
    holder = u.vertex_of(t.half_edge)
    mins = [v for v in u.vertex_mins().tolist() if rank[v] < rank[holder]]
    return list(combinations(mins, 2))


def test_phi_then_psi_reaches_genus_two():
    trees = [u for u in all_maps(4) if u.genus == 0]
    hits = 0
    for tree in trees:
        mins = tree.vertex_mins().tolist()
        for triple in combinations(mins, 3):
            g1, t = glue_phi(tree, *triple)
            for v1, v2 in _psi_candidates(g1, t):
                g2, t2 = glue_psi(g1, v1, v2, t)
                assert g2.genus == 2 and t2.kind == TYPE_II and t2.half_edge == t.half_edge
                assert classify_trisection_type(g2, t2) == TYPE_II
                back, _, kind = slice_once(g2, t2)
                assert back == g1 and kind == TYPE_II
                hits += 1
    assert hits > 0


def test_psi_rejects_bad_order():
    g1, t = glue_phi(PATH, *PATH.vertex_mins().tolist())
    with pytest.raises(MapError):
        glue_psi(g1, 0, 0, t)
    tree = next(u for u in all_maps(5) if u.genus == 0 and u.num_vertices == 6)
    mins = tree.vertex_mins().tolist()
    g1, t = glue_phi(tree, *mins[:3])
    late = [v for v in g1.vertex_mins().tolist() if g1.rank[v] > g1.rank[t.vertex]]
    with pytest.raises(MapError):
        glue_psi(g1, late[0], late[1], t)


def test_lambda_counts_four_times_epsilon2_of_4():
    results = set()
    for u in all_maps(4):
        mins = u.vertex_mins().tolist()
        size = {0: 5, 1: 3}.get(u.genus)
        if size is None:
            continue
        for vs in combinations(mins, size):
            out, t = glue_lambda(u, vs)
            results.add((out.canonical(), int(out.rank[t.half_edge])))
    assert len(results) == 84
    assert len({m for m, _ in results}) == 21


def test_trisection_type_tally_n4():
    tally = Counter()
    for u in all_maps(4):
        if u.genus == 2:
            for t in find_trisections(u):
                tally[classify_trisection_type(u, t)] += 1
    # type I comes from 70 genus-1 maps with 3 vertices, type II from 14 trees with 5
    assert tally == {TYPE_I: 70, TYPE_II: 14}


def test_xi_on_crossing_map():
    trees = set()
    for t in find_trisections(CROSS):
        lower, freed = slice_xi(CROSS, t)
        assert (lower.genus, lower.num_vertices, len(freed)) == (0, 3, 2 + 1)
        trees.add(lower.canonical())
    # the two trisections come from the two 2-edge trees, each with its only triple
    assert len(trees) == 2 and PATH in trees


def test_slice_rejects_non_trisection():
    with pytest.raises(MapError):
        slice_xi(PATH, 0)


def test_exhaustive_roundtrips():
    rep = exhaustive_bijection(4)
    assert rep.ok
    assert rep.maps == 1 + 3 + 15 + 105
    # one Lambda/Xi pair per (map, trisection) = sum of 2g * epsilon(g, n)
    assert rep.lambda_xi == 2 + 20 + 140 + 84


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_roundtrips(seed):
    assert random_bijection(20, 50, RandomSource(seed)).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_trisection_law(n, seed):
    rng = RandomSource(seed)
    g = int(rng.generator.integers(0, n // 2 + 1))
    u = uniform_unicellular(n, g, rng)
    assert len(find_trisections(u)) == 2 * g
    assert u.num_vertices == n + 1 - 2 * g


def test_lambda_vertex_bookkeeping():
    rng = RandomSource(9)
    for k in (1, 2, 3):
        u = uniform_unicellular(20, 0, rng)
        mins = u.vertex_mins().tolist()
        chosen = [mins[i] for i in rng.sample_indices(len(mins), 2 * k + 1)]
        out, t = glue_lambda(u, chosen)
        assert out.num_vertices - u.num_vertices == -2 * k
        assert out.genus - u.genus == k
        assert t.kind == (TYPE_I if k == 1 else TYPE_II)
        assert np.array_equal(out.alpha, u.alpha)
