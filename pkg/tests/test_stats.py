from genusrna.energy import LoopClass, classify_loops
from genusrna.sampling import RandomSource, uniform_matching
from genusrna.stats import LoopHistogram


def sample_hist(n, g, count, seed):
    rng = RandomSource(seed)
    hist = LoopHistogram()
    matchings = [uniform_matching(n, g, rng) for _ in range(count)]
    for m in matchings:
        hist.add(m)
    return hist, matchings


def test_class_totals_match_vertex_counts():
    hist, matchings = sample_hist(8, 1, 200, 3)
    for cls in LoopClass:
        expected = sum(list(classify_loops(m).values()).count(cls) for m in matchings)
        assert hist.total(cls) == expected
    assert sum(hist.total(c) for c in LoopClass) == sum(8 + 1 - 2 for _ in matchings)


def test_genus_zero_has_no_pseudoknots():
    hist, _ = sample_hist(10, 0, 300, 1)
    assert hist.total(LoopClass.PSEUDOKNOT) == 0
    assert "pseudoknot" not in hist.to_tsv()


def test_unique_genus_one_structure():
    hist, _ = sample_hist(2, 1, 50, 2)
    assert dict(hist.counts[LoopClass.PSEUDOKNOT]) == {4: 50}
    assert hist.to_tsv().splitlines() == ["class\tsize\tcount\tfrequency",
                                          "pseudoknot\t4\t50\t1.000000"]


def test_frequencies_sum_to_one_per_class():
    hist, _ = sample_hist(12, 2, 100, 5)
    sums = {}
    for cls, _, _, freq in hist.rows():
        sums[cls] = sums.get(cls, 0) + freq
    assert all(abs(v - 1) < 1e-12 for v in sums.values())
