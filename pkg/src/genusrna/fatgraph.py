"""Permutations, fatgraphs, boundary components and genus of diagrams.

A fatgraph is a pair of permutations on half-edges ``0..2n-1``: ``sigma``
lists the half-edges around each vertex and ``alpha`` pairs the two halves of
every edge. Its boundary components are the cycles of ``gamma = alpha o sigma``
(``sigma`` applied first). With ``v`` vertices, ``e`` edges and ``r``
boundary components the Euler characteristic is ``v - e + r`` and the genus is
``1 - chi / 2``.

A perfect matching on ``2n`` backbone vertices becomes a one-vertex fatgraph
by collapsing the backbone: half-edges are the backbone positions in order,
``sigma`` is the cyclic shift and ``alpha`` pairs arc endpoints. The
"rainbow" arc enclosing everything is added around it for genus computations.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .diagram import Diagram, DiagramError
from .unicellular import UnicellularMap


class Permutation:
    """A bijection on ``0..size-1`` stored as an image array."""

    __slots__ = ("image",)

    def __init__(self, image):
        arr = np.array(image, dtype=np.int64)
        size = len(arr)
        if size and (arr.min() < 0 or arr.max() >= size
                     or np.bincount(arr, minlength=size).max() != 1):
            raise ValueError("image is not a bijection")
        arr.flags.writeable = False
        self.image = arr

    @classmethod
    def from_cycles(cls, size, cycles):
        image = list(range(size))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                image[x] = cyc[(k + 1) % len(cyc)]
        return cls(image)

    @property
    def size(self):
        return len(self.image)

    def __call__(self, x):
        return int(self.image[x])

    def compose(self, first):
        """``self o first``: apply ``first``, then ``self``."""
        return Permutation(self.image[first.image])

    def inverse(self):
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.size)
        return Permutation(inv)

    def cycles(self):
        """Cycles as tuples, each starting at its smallest point, ordered by that point."""
        ids, count = kernels.cycle_ids(self.image)
        out = []
        seen = np.zeros(count, dtype=bool)
        img = self.image.tolist()
        for start in range(self.size):
            c = ids[start]
            if seen[c]:
                continue
            seen[c] = True
            cyc = [start]
            x = img[start]
            while x != start:
                cyc.append(x)
                x = img[x]
            out.append(tuple(cyc))
        return out

    def num_cycles(self):
        return kernels.cycle_ids(self.image)[1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.image, other.image)

    def __hash__(self):
        return hash(self.image.tobytes())

    def __repr__(self):
        return "Permutation(" + "".join(
            "(" + ",".join(map(str, c)) + ")" for c in self.cycles()) + ")"


@dataclass(frozen=True)
class BoundaryDecomposition:
    cycles: tuple
    r: int


@dataclass(frozen=True)
class GenusResult:
    genus: int
    boundary_count: int
    euler: int


class Fatgraph:
    __slots__ = ("sigma", "alpha")

    def __init__(self, sigma, alpha):
        if not isinstance(sigma, Permutation):
            sigma = Permutation(sigma)
        if not isinstance(alpha, Permutation):
            alpha = Permutation(alpha)
        if sigma.size != alpha.size:
            raise ValueError("sigma and alpha act on different sets")
        a = alpha.image
        idx = np.arange(alpha.size)
        if np.any(a == idx) or np.any(a[a] != idx):
            raise ValueError("alpha must be a fixed-point-free involution")
        self.sigma = sigma
        self.alpha = alpha

    @property
    def num_half_edges(self):
        return self.sigma.size

    @property
    def num_edges(self):
        return self.sigma.size // 2

    @property
    def num_vertices(self):
        return self.sigma.num_cycles()

    def gamma(self):
        return self.alpha.compose(self.sigma)

    def genus(self):
        return genus_result(self).genus


def trace_boundaries(fg):
    """Boundary components of ``fg``: the cycles of ``alpha o sigma``."""
    cycles = tuple(fg.gamma().cycles())
    return BoundaryDecomposition(cycles, len(cycles))


def genus_result(fg):
    v = fg.num_vertices
    e = fg.num_edges
    r = fg.gamma().num_cycles()
    chi = v - e + r
    if chi % 2 or chi > 2:
        raise AssertionError(f"impossible Euler characteristic {chi}")
    return GenusResult(1 - chi // 2, r, chi)


def poincare_dual(fg):
    """Swap vertices and boundary components: ``(sigma, alpha) -> (alpha o sigma, alpha)``."""
    return Fatgraph(fg.gamma(), fg.alpha)


def backbone_fatgraph(matching, rainbow=True):
    """One-vertex fatgraph of a perfect matching with its backbone collapsed.

    With ``rainbow`` the half-edges are ``0..2n+1``: ``0`` and ``2n+1`` form
    the rainbow and backbone position ``p`` becomes half-edge ``p + 1``.
    """
    if not matching.is_matching:
        raise DiagramError("backbone_fatgraph needs a perfect matching")
    p = matching.partner
    if rainbow:
        size = len(p) + 2
        alpha = np.empty(size, dtype=np.int64)
        alpha[0], alpha[-1] = size - 1, 0
        alpha[1:-1] = p + 1
    else:
        size = len(p)
        alpha = p.copy()
    sigma = (np.arange(size) + 1) % max(size, 1)
    return Fatgraph(sigma, alpha)


def genus_of_matching(matching):
    """Genus of a perfect matching, via the rainbow-augmented collapsed fatgraph.

    ``boundary_count`` counts boundary components of that fatgraph (rainbow
    included), so it equals ``n + 2 - 2g`` for ``n`` arcs. The arc-free
    matching has no rainbow: one vertex, one boundary, genus 0.
    """
    if not matching.is_matching:
        raise DiagramError("matching has unpaired vertices; use genus_of_diagram")
    if matching.n_arcs == 0:
        return GenusResult(0, 1, 2)
    return genus_result(backbone_fatgraph(matching, rainbow=True))


def genus_of_diagram(diagram):
    """Genus of any diagram: unpaired vertices are dropped first."""
    return genus_of_matching(diagram.strip_unpaired())


def _map_from_partner(partner):
    """Canonical dual map of a matching given as a 0-based partner array.

    Half-edge ``q`` stands for the backbone gap just before position ``q``
    (``q = 0`` being the gap that wraps around, where the rainbow attaches), so
    the tour is ``0, 1, ..., 2n-1``; ``sigma(q) = partner[q] + 1`` and
    ``alpha(q) = partner[q - 1] + 1`` modulo ``2n``.
    """
    size = len(partner)
    if size == 0:
        return UnicellularMap.empty()
    sigma = (partner + 1) % size
    alpha = np.empty_like(partner)
    alpha[1:] = partner[:-1] + 1
    alpha[0] = partner[-1] + 1
    alpha %= size
    u = UnicellularMap(sigma, alpha, 0, check=False)
    u._order = np.arange(size, dtype=np.int64)
    u._rank = u._order
    return u


def _partner_from_map(u):
    """Inverse of :func:`_map_from_partner`, for a map in any labelling."""
    if u.n_edges == 0:
        return np.empty(0, dtype=np.int64)
    c = u.canonical()
    size = len(c.alpha)
    out = np.empty_like(c.alpha)
    out[:-1] = c.alpha[1:] - 1
    out[-1] = c.alpha[0] - 1
    return out % size


def matching_to_unicellular(matching):
    """Rooted unicellular map dual to a perfect matching.

    The backbone is collapsed into one vertex, the Poincare dual turns its
    boundary components into vertices, and the rainbow is replaced by a root
    half-edge in the exterior vertex. The result is labelled by tour rank.
    With ``n`` arcs and genus ``g`` it has ``n`` edges and ``n + 1 - 2g``
    vertices.
    """
    fg = backbone_fatgraph(matching, rainbow=False)
    if fg.num_half_edges == 0:
        return UnicellularMap.empty()
    dual = poincare_dual(fg)
    root = fg.num_half_edges - 1
    u = UnicellularMap(dual.sigma.image, dual.alpha.image, root, check=False)
    return u.canonical()


def unicellular_to_matching(u):
    """Perfect matching whose dual is ``u`` (inverse of :func:`matching_to_unicellular`)."""
    return Diagram.from_partner(_partner_from_map(u))
