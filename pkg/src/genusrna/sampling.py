"""Uniform random matchings and diagrams of fixed genus.

A uniform matching of genus ``g`` with ``n`` arcs is produced in three moves:
draw a uniform plane tree with ``n`` edges, walk a uniformly random glue path
from genus 0 to ``g`` (each step picks the next genus from its exact law and
glues a uniform odd-size set of vertices), and read the matching off the final
unicellular map. Diagrams add a uniformly placed set of unpaired vertices
after drawing the arc count from its exact law.

All discrete laws are exact ``Fraction``s, sampled by drawing a uniform
integer below their common denominator.
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from math import lcm, perm

import numpy as np

from . import kernels
from .counting import InfeasibleError, arcs_distribution, next_genus_distribution
from .diagram import Diagram
from .fatgraph import _map_from_partner, _partner_from_map
from .unicellular import UnicellularMap, _glue_sequence, glue_lambda


_RAW_CHUNK = 64


class RandomSource:
    """Deterministic random stream backed by numpy's counter-based Philox generator.

    Equal seeds give equal streams. Independent child streams come from
    :meth:`spawn` or :meth:`for_block`.
    """

    def __init__(self, seed=None, *, seed_sequence=None):
        if seed_sequence is None:
            seed_sequence = np.random.SeedSequence(seed)
        self.seed_sequence = seed_sequence
        self.generator = np.random.Generator(np.random.Philox(seed_sequence))
        self._words = []
        self._next = 0

    @classmethod
    def for_block(cls, seed, block):
        """Stream number ``block`` derived from ``seed``, independent of how many blocks exist."""
        return cls(seed_sequence=np.random.SeedSequence(seed, spawn_key=(int(block),)))

    def spawn(self, count):
        return [RandomSource(seed_sequence=s) for s in self.seed_sequence.spawn(count)]

    def _word(self):
        if self._next == len(self._words):
            self._words = self.generator.bit_generator.random_raw(_RAW_CHUNK).tolist()
            self._next = 0
        self._next += 1
        return self._words[self._next - 1]

    def randbelow(self, n):
        """Uniform integer in ``[0, n)`` for arbitrarily large ``n``.

        Masked rejection over raw 64-bit words, taken from a small buffer so
        that single draws avoid a numpy call each.
        """
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        bits = (n - 1).bit_length()
        if bits <= 64:
            shift = 64 - bits
            while True:
                x = self._word() >> shift
                if x < n:
                    return x
        words = (bits + 63) // 64
        excess = 64 * words - bits
        while True:
            x = 0
            for _ in range(words):
                x = (x << 64) | self._word()
            x >>= excess
            if x < n:
                return x

    def random(self):
        return float(self.generator.random())

    def sample_indices(self, population, k):
        """Uniform ``k``-subset of ``range(population)``, sorted.

        Small ``k`` uses sequential selection, each step uniform over the
        indices not chosen yet; all steps are decoded from a single exact draw.
        """
        if not 0 <= k <= population:
            raise ValueError(f"cannot choose {k} of {population}")
        if k > 32:
            picks = self.generator.choice(population, size=k, replace=False)
            return sorted(picks.tolist())
        # one uniform draw below population * (population-1) * ... read in mixed radix
        x = self.randbelow(perm(population, k)) if k else 0
        chosen = []
        swapped = {}
        for j in range(k):
            x, off = divmod(x, population - j)
            r = j + off
            chosen.append(swapped.get(r, r))
            swapped[r] = swapped.get(j, j)
        chosen.sort()
        return chosen


class ExactDistribution:
    """A finite law with rational probabilities, sampled without floating point."""

    def __init__(self, pairs):
        pairs = list(pairs)
        if not pairs:
            raise ValueError("empty support")
        self.items = [item for item, _ in pairs]
        probs = [Fraction(p) for _, p in pairs]
        if any(p < 0 for p in probs) or sum(probs) != 1:
            raise ValueError("probabilities must be non-negative and sum to 1")
        self.denominator = lcm(*(p.denominator for p in probs))
        self.cumulative = list(accumulate(p.numerator * (self.denominator // p.denominator)
                                          for p in probs))

    def sample(self, rng):
        x = rng.randbelow(self.denominator)
        return self.items[bisect_right(self.cumulative, x)]


def sample_exact(dist, rng):
    """Draw one item from ``[(item, probability), ...]`` with exact rational weights."""
    return ExactDistribution(dist).sample(rng)


@lru_cache(maxsize=4096)
def _genus_step(current, target, n):
    return ExactDistribution(next_genus_distribution(current, target, n))


@lru_cache(maxsize=1024)
def _arc_count_law(length, g):
    return ExactDistribution(arcs_distribution(length, g))


def _tree_word(n, rng):
    """Uniform step word with ``n`` up-steps and ``n + 1`` down-steps.

    The buffer of raw 32-bit draws covers the expected rejections with a wide
    margin; if it still runs out the word is redrawn, which does not bias the
    result because rejections are independent of the accepted values.
    """
    length = 2 * n + 1
    size = length + 64 + length // 128 + (length * length >> 31)
    while True:
        # each raw 64-bit word supplies two uniform 32-bit draws
        raw = rng.generator.bit_generator.random_raw((size + 1) // 2).view(np.uint32)
        word, _ = kernels.tree_word(n, raw)
        if word is not None:
            return word
        size *= 2


def _tree_partner(n, rng):
    return kernels.plane_tree_partner(_tree_word(n, rng))


def uniform_plane_tree(n, rng):
    """Uniform rooted plane tree with ``n`` edges, as a genus-0 unicellular map.

    The step word is a uniform arrangement of ``n`` up-steps and ``n + 1``
    down-steps, built by exact sequential selection; the cycle lemma picks
    its unique Dyck rotation, so every tree has probability ``1 / Catalan(n)``
    and no rejection is needed.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return UnicellularMap.empty()
    return _map_from_partner(_tree_partner(n, rng))


def select_vertices(u, k, rng):
    """Uniform ``k``-set of vertices of ``u`` (minimum half-edges), sorted by tour order."""
    mins = u.vertex_mins()
    if k > len(mins):
        raise ValueError(f"cannot select {k} of {len(mins)} vertices")
    return mins[rng.sample_indices(len(mins), k)].tolist()


@dataclass
class GluePathTrace:
    """Record of one run: the starting tree, the genus sequence and the glued vertex sets.

    ``vertex_sets[i]`` is expressed in the tour-rank labelling of the map
    reached after ``i`` steps.
    """

    tree: UnicellularMap
    genus_sequence: list = field(default_factory=lambda: [0])
    vertex_sets: list = field(default_factory=list)


def _glue_path(u, target, rng, trace=None):
    n = u.n_edges
    g = 0
    while g < target:
        t = _genus_step(g, target, n).sample(rng)
        chosen = select_vertices(u, 2 * (t - g) + 1, rng)
        sigma = u.sigma.copy()
        _glue_sequence(sigma, chosen)
        u = UnicellularMap(sigma, u.alpha, u.root, check=False).canonical()
        if trace is not None:
            trace.genus_sequence.append(t)
            trace.vertex_sets.append(chosen)
        g = t
    return u


def uniform_unicellular(n, g, rng, trace=False):
    """Uniform rooted unicellular map with ``n`` edges and genus ``g`` (tour-rank labelled)."""
    if n < 0 or g < 0:
        raise ValueError("n and g must be non-negative")
    if 2 * g > n:
        raise InfeasibleError(f"no genus-{g} matching with {n} arcs")
    tree = uniform_plane_tree(n, rng)
    record = GluePathTrace(tree) if trace else None
    u = _glue_path(tree, g, rng, record)
    return (u, record) if trace else u


def uniform_matching(n, g, rng, trace=False):
    """Uniform perfect matching with ``n`` arcs and genus ``g``.

    With ``trace=True`` returns ``(matching, GluePathTrace)``. Without a trace
    the gluing runs on partner arrays inside one kernel call; both paths
    consume the random stream identically and return the same matching.
    """
    if trace:
        u, record = uniform_unicellular(n, g, rng, trace=True)
        return Diagram.from_partner(_partner_from_map(u)), record
    if n < 0 or g < 0:
        raise ValueError("n and g must be non-negative")
    if 2 * g > n:
        raise InfeasibleError(f"no genus-{g} matching with {n} arcs")
    word = _tree_word(n, rng)
    steps = []
    h = 0
    while h < g:
        t = _genus_step(h, g, n).sample(rng)
        steps.append(rng.sample_indices(n + 1 - 2 * h, 2 * (t - h) + 1))
        h = t
    partner = kernels.tree_glue(word, steps)
    return Diagram.from_partner(partner, copy=False)


def replay_glue_path(record):
    """Rebuild the final map of a traced run by applying the recorded gluings."""
    u = record.tree
    for chosen in record.vertex_sets:
        u, _ = glue_lambda(u, chosen)
        u = u.canonical()
    return u


def uniform_diagram(length, g, rng):
    """Uniform diagram of genus ``g`` on ``length`` backbone vertices."""
    if length < 0 or g < 0:
        raise ValueError("length and genus must be non-negative")
    n = _arc_count_law(length, g).sample(rng)
    matching = uniform_matching(n, g, rng)
    unpaired = rng.sample_indices(length, length - 2 * n)
    return matching.insert_unpaired(unpaired, length)
