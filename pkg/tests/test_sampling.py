from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from genusrna.counting import InfeasibleError, epsilon
from genusrna.diagram import Diagram
from genusrna.fatgraph import genus_of_diagram, genus_of_matching
from genusrna.sampling import (ExactDistribution, RandomSource, replay_glue_path, sample_exact,
                               select_vertices, uniform_diagram, uniform_matching,
                               uniform_plane_tree, uniform_unicellular)
from genusrna.unicellular import find_trisections

ALPHA = 1e-3


def chi2_p(counts, cells):
    observed = list(counts.values()) + [0] * (cells - len(counts))
    return sps.chisquare(observed).pvalue


def test_random_source_determinism():
    a, b = RandomSource(42), RandomSource(42)
    assert [a.randbelow(10**30) for _ in range(5)] == [b.randbelow(10**30) for _ in range(5)]
    assert RandomSource.for_block(1, 3).random() == RandomSource.for_block(1, 3).random()
    assert RandomSource.for_block(1, 3).random() != RandomSource.for_block(1, 4).random()
    with pytest.raises(ValueError):
        a.randbelow(0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10**40), st.integers(0, 2**32 - 1))
def test_randbelow_in_range(bound, seed):
    assert 0 <= RandomSource(seed).randbelow(bound) < bound


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 80), st.data())
def test_sample_indices(population, data):
    k = data.draw(st.integers(0, population))
    picks = RandomSource(data.draw(st.integers(0, 2**32 - 1))).sample_indices(population, k)
    assert picks == sorted(set(picks)) and len(picks) == k
    assert all(0 <= x < population for x in picks)


def test_sample_indices_uniform():
    rng = RandomSource(8)
    counts = Counter(tuple(rng.sample_indices(5, 3)) for _ in range(20000))
    assert len(counts) == 10 and chi2_p(counts, 10) > ALPHA


def test_sample_exact():
    rng = RandomSource(0)
    assert sample_exact([("x", 1)], rng) == "x"
    n = 100000
    heads = sum(sample_exact([("a", Fraction(1, 2)), ("b", Fraction(1, 2))], rng) == "a"
                for _ in range(n))
    assert abs(heads - n / 2) < 3 * (n / 4) ** 0.5
    with pytest.raises(ValueError):
        ExactDistribution([])
    with pytest.raises(ValueError):
        ExactDistribution([("a", Fraction(1, 3))])


def test_plane_tree_small():
    rng = RandomSource(1)
    assert uniform_plane_tree(0, rng).n_edges == 0
    assert len({uniform_plane_tree(1, rng) for _ in range(20)}) == 1
    counts = Counter(uniform_plane_tree(3, rng) for _ in range(100000))
    assert len(counts) == 5 and chi2_p(counts, 5) > ALPHA


def test_plane_tree_is_genus_zero():
    rng = RandomSource(2)
    for _ in range(20):
        u = uniform_plane_tree(12, rng)
        assert u.genus == 0 and find_trisections(u) == []


def test_select_vertices():
    rng = RandomSource(3)
    tree = uniform_plane_tree(2, rng)
    assert select_vertices(tree, 3, rng) == tree.vertex_mins().tolist()
    tree = uniform_plane_tree(4, rng)
    counts = Counter(tuple(select_vertices(tree, 3, rng)) for _ in range(100000))
    assert len(counts) == 10 and chi2_p(counts, 10) > ALPHA
    with pytest.raises(ValueError):
        select_vertices(tree, 7, rng)


def test_uniform_matching_small_cases():
    rng = RandomSource(7)
    assert {uniform_matching(2, 1, rng) for _ in range(10)} == {Diagram(4, [(1, 3), (2, 4)])}
    counts = Counter(uniform_matching(2, 0, rng) for _ in range(20000))
    assert len(counts) == 2 and chi2_p(counts, 2) > ALPHA
    with pytest.raises(InfeasibleError):
        uniform_matching(3, 2, rng)


@pytest.mark.parametrize("n, g", [(3, 1), (4, 1), (4, 2), (5, 2)])
def test_uniform_matching_chi_square(n, g):
    rng = RandomSource(100 + n + g)
    size = epsilon(g, n)
    counts = Counter(uniform_matching(n, g, rng) for _ in range(100 * size))
    assert len(counts) == size
    assert all(genus_of_matching(m).genus == g for m in counts)
    assert chi2_p(counts, size) > ALPHA


def test_genus_step_mix_n6_g2():
    rng = RandomSource(21)
    paths = Counter(len(uniform_matching(6, 2, rng, trace=True)[1].genus_sequence)
                    for _ in range(20000))
    from genusrna.counting import next_genus_distribution
    p_direct = float(dict(next_genus_distribution(0, 2, 6))[2])
    expected = [20000 * (1 - p_direct), 20000 * p_direct]
    assert sps.chisquare([paths[3], paths[2]], expected).pvalue > ALPHA


def test_uniform_diagram():
    rng = RandomSource(5)
    assert uniform_diagram(4, 1, rng) == Diagram(4, [(1, 3), (2, 4)])
    counts = Counter(uniform_diagram(5, 1, rng) for _ in range(10000))
    assert len(counts) == 5 and chi2_p(counts, 5) > ALPHA
    with pytest.raises(InfeasibleError):
        uniform_diagram(3, 1, rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_samples_have_requested_genus_and_are_deterministic(n, seed):
    g = seed % (n // 2 + 1)
    m = uniform_matching(n, g, RandomSource(seed))
    assert m == uniform_matching(n, g, RandomSource(seed))
    assert genus_of_matching(m).genus == g
    d = uniform_diagram(2 * n + 3, g, RandomSource(seed))
    assert d.length == 2 * n + 3 and genus_of_diagram(d).genus == g


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_glue_path_trace(n, seed):
    g = 1 + seed % (n // 2)
    u, record = uniform_unicellular(n, g, RandomSource(seed), trace=True)
    seq = record.genus_sequence
    assert seq[0] == 0 and seq[-1] == g
    assert all(a < b for a, b in zip(seq, seq[1:]))
    assert [len(v) for v in record.vertex_sets] == [2 * (b - a) + 1 for a, b in zip(seq, seq[1:])]
    assert replay_glue_path(record) == u


def test_large_sample_is_valid():
    m = uniform_matching(5000, 3, RandomSource(1))
    p = m.partner
    assert np.array_equal(p[p], np.arange(10000))
    assert genus_of_matching(m).genus == 3
