"""Rooted unicellular maps and the gluing/slicing bijections between genera.

A map is stored as two permutations on the half-edges ``0..2n-1``: ``sigma``
(the cyclic order of half-edges around each vertex) and ``alpha`` (the
fixed-point-free involution pairing the two halves of an edge). The face
permutation is ``gamma = alpha o sigma``, i.e. ``gamma(h) = alpha[sigma[h]]``;
a map is unicellular when ``gamma`` is a single cycle. The tour order ``<_gamma``
reads that cycle starting at the root half-edge.

Vertices are identified by their *minimum half-edge*, the first half-edge of
the vertex met by the tour. Gluing three vertices with minimum half-edges
``a1 <_gamma a2 <_gamma a3`` replaces their cycles by
``(a1, h2..., a2, h3..., a3, h1...)``, which amounts to rotating the images
``sigma(a1), sigma(a2), sigma(a3)``; slicing undoes the rotation. Both keep the
map unicellular and move the genus by exactly one.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels

TYPE_I = "I"
TYPE_II = "II"


class MapError(ValueError):
    """Raised for structurally invalid maps or illegal glue/slice arguments."""


@dataclass(frozen=True)
class Trisection:
    """A trisection half-edge, the vertex (minimum half-edge) holding it, and its type if known."""

    half_edge: int
    vertex: int
    kind: Optional[str] = None


class UnicellularMap:
    """A rooted map with exactly one face.

    Instances are treated as immutable by the public functions of this module,
    which always return fresh maps. Tour data is computed lazily and cached.
    """

    __slots__ = ("sigma", "alpha", "root", "_order", "_rank", "_min_mask")

    def __init__(self, sigma, alpha, root=0, check=True):
        self.sigma = np.ascontiguousarray(sigma, dtype=np.int64)
        self.alpha = np.ascontiguousarray(alpha, dtype=np.int64)
        self.root = int(root)
        self._order = None
        self._rank = None
        self._min_mask = None
        if check:
            self.validate()

    def validate(self):
        size = len(self.sigma)
        if len(self.alpha) != size or size % 2:
            raise MapError("sigma and alpha must act on the same even-sized set")
        idx = np.arange(size)
        for name, perm in (("sigma", self.sigma), ("alpha", self.alpha)):
            if size and (perm.min() < 0 or perm.max() >= size
                         or np.bincount(perm, minlength=size).max() != 1):
                raise MapError(f"{name} is not a permutation")
        if size and (np.any(self.alpha[self.alpha] != idx) or np.any(self.alpha == idx)):
            raise MapError("alpha must be a fixed-point-free involution")
        if size and not 0 <= self.root < size:
            raise MapError("root out of range")
        if len(self.order) != size:
            raise MapError("map is not unicellular")

    @classmethod
    def empty(cls):
        """The map with no edges: a single vertex, genus 0."""
        return cls(np.empty(0, np.int64), np.empty(0, np.int64), 0, check=False)

    # tour data --------------------------------------------------------

    @property
    def n_edges(self):
        return len(self.sigma) // 2

    @property
    def order(self):
        """Half-edges in tour order, starting at the root."""
        if self._order is None:
            self._order = kernels.tour_order(self.sigma, self.alpha, self.root)
        return self._order

    @property
    def rank(self):
        """``rank[h]`` is the position of ``h`` in the tour (root has rank 0)."""
        if self._rank is None:
            order = self.order
            rank = np.empty(len(order), dtype=np.int64)
            rank[order] = np.arange(len(order))
            self._rank = rank
        return self._rank

    @property
    def min_mask(self):
        """Boolean mask of minimum half-edges."""
        if self._min_mask is None:
            self._min_mask = kernels.cycle_min_mask(self.sigma, self.rank)
        return self._min_mask

    def vertex_mins(self):
        """Minimum half-edges of all vertices, sorted by tour order."""
        order = self.order
        return order[self.min_mask[order]]

    @property
    def num_vertices(self):
        if not len(self.sigma):
            return 1
        return int(np.count_nonzero(self.min_mask))

    @property
    def genus(self):
        return (self.n_edges + 1 - self.num_vertices) // 2

    def vertex_of(self, h):
        """Minimum half-edge of the vertex containing ``h``."""
        rank = self.rank
        best = h = int(h)
        x = int(self.sigma[h])
        while x != h:
            if rank[x] < rank[best]:
                best = x
            x = int(self.sigma[x])
        return best

    def vertex_cycle(self, v):
        """Half-edges of the vertex with minimum half-edge ``v``, in sigma order from ``v``."""
        cyc = [int(v)]
        x = int(self.sigma[v])
        while x != v:
            cyc.append(x)
            x = int(self.sigma[x])
        return cyc

    def vertices(self):
        """All vertex cycles, each starting at its minimum half-edge, in tour order of minima."""
        return [self.vertex_cycle(v) for v in self.vertex_mins().tolist()]

    def degrees(self):
        """Map from vertex (minimum half-edge) to its degree."""
        if not len(self.sigma):
            return {}
        ids, count = kernels.cycle_ids(self.sigma)
        sizes = np.bincount(ids, minlength=count)
        mins = self.vertex_mins()
        return {int(v): int(sizes[ids[v]]) for v in mins}

    # comparison -------------------------------------------------------

    def copy(self):
        return UnicellularMap(self.sigma.copy(), self.alpha.copy(), self.root, check=False)

    def canonical(self):
        """Relabel half-edges by tour rank, so the tour reads ``0, 1, ..., 2n-1``."""
        if not len(self.sigma):
            return self.copy()
        order, rank = self.order, self.rank
        sigma = rank[self.sigma[order]]
        alpha = rank[self.alpha[order]]
        out = UnicellularMap(sigma, alpha, 0, check=False)
        out._order = np.arange(len(order), dtype=np.int64)
        out._rank = out._order
        return out

    def key(self):
        return (self.root, self.sigma.tobytes(), self.alpha.tobytes())

    def __eq__(self, other):
        if not isinstance(other, UnicellularMap):
            return NotImplemented
        return (self.root == other.root and np.array_equal(self.sigma, other.sigma)
                and np.array_equal(self.alpha, other.alpha))

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"UnicellularMap(n={self.n_edges}, genus={self.genus}, "
                f"sigma={self.sigma.tolist()}, alpha={self.alpha.tolist()}, root={self.root})")


def tour(u):
    """Tour ranks of ``u``: ``tour(u)[h]`` is the position of ``h`` along the face from the root."""
    return u.rank


def find_trisections(u):
    """All trisections of ``u``; there are exactly ``2 * genus`` of them.

    A half-edge ``h`` is a trisection when it is a down-step
    (``sigma(h) <=_gamma h``) and ``sigma(h)`` is not the minimum half-edge of
    its vertex.
    """
    if not len(u.sigma):
        return []
    rank, sigma, is_min = u.rank, u.sigma, u.min_mask
    hits = np.flatnonzero((rank[sigma] <= rank) & ~is_min[sigma])
    hits = hits[np.argsort(rank[hits])]
    found = [Trisection(int(h), u.vertex_of(h)) for h in hits]
    if len(found) != 2 * u.genus:
        raise AssertionError(f"found {len(found)} trisections in a genus-{u.genus} map")
    return found


def is_trisection(u, h):
    rank, sigma = u.rank, u.sigma
    s = sigma[h]
    return bool(rank[s] <= rank[h] and not u.min_mask[s])


def _rotate(sigma, a1, a2, a3):
    """In place: sigma(a1), sigma(a2), sigma(a3) <- sigma(a2), sigma(a3), sigma(a1)."""
    s1, s2, s3 = sigma[a1], sigma[a2], sigma[a3]
    sigma[a1], sigma[a2], sigma[a3] = s2, s3, s1


def _unrotate(sigma, a1, a2, a3):
    s1, s2, s3 = sigma[a1], sigma[a2], sigma[a3]
    sigma[a1], sigma[a2], sigma[a3] = s3, s1, s2


def _predecessor(sigma, h):
    x = int(h)
    while sigma[x] != h:
        x = int(sigma[x])
    return x


def _check_vertex_handles(u, handles):
    mask = u.min_mask
    size = len(u.sigma)
    for v in handles:
        if not 0 <= v < size or not mask[v]:
            raise MapError(f"{v} is not the minimum half-edge of a vertex")
    if len(set(handles)) != len(handles):
        raise MapError("vertices must be distinct")


def _glue_sequence(sigma, mins):
    """Glue the vertices with minimum half-edges ``mins`` (sorted by tour order), in place.

    The last three are merged first; each further step merges the next pair to
    the left into the vertex holding the persisting trisection, whose sigma
    image is always the minimum of the last vertex. Returns the trisection.
    """
    last = mins[-1]
    _rotate(sigma, mins[-3], mins[-2], last)
    for i in range(len(mins) - 4, -1, -2):
        _rotate(sigma, mins[i - 1], mins[i], last)
    return _predecessor(sigma, last)


def glue_phi(u, v1, v2, v3):
    """Glue three distinct vertices; returns the genus+1 map and its type-I trisection."""
    return glue_lambda(u, [v1, v2, v3])


def glue_psi(u, v1, v2, t):
    """Glue two vertices into the vertex holding trisection ``t``; ``t`` persists with type II.

    The three gluing half-edges are the minima of ``v1`` and ``v2`` and
    ``sigma(t)``. Both vertices must precede the vertex of ``t`` in tour order;
    exactly then does slicing at ``t`` undo the step.
    """
    h = t.half_edge if isinstance(t, Trisection) else int(t)
    if not is_trisection(u, h):
        raise MapError(f"{h} is not a trisection")
    _check_vertex_handles(u, [v1, v2])
    holder = u.vertex_of(h)
    if holder in (v1, v2):
        raise MapError("glued vertices must differ from the trisection's vertex")
    rank = u.rank
    a1, a2 = sorted((int(v1), int(v2)), key=lambda x: rank[x])
    a3 = int(u.sigma[h])
    if not rank[a2] < rank[holder]:
        raise MapError("both vertices must precede the trisection's vertex in tour order")
    out = u.copy()
    _rotate(out.sigma, a1, a2, a3)
    _assert_unicellular(out, u.genus + 1)
    return out, Trisection(h, out.vertex_of(h), TYPE_II)


def glue_lambda(u, vertices):
    """Glue an odd number ``2k+1 >= 3`` of distinct vertices; the genus grows by ``k``.

    Vertices are given by minimum half-edge and are re-sorted by tour order.
    Returns the new map and the trisection produced by the last gluing step.
    """
    handles = [int(v) for v in vertices]
    if len(handles) < 3 or len(handles) % 2 == 0:
        raise MapError("need an odd number (>= 3) of vertices")
    _check_vertex_handles(u, handles)
    rank = u.rank
    handles.sort(key=lambda x: rank[x])
    out = u.copy()
    tau = _glue_sequence(out.sigma, handles)
    k = (len(handles) - 1) // 2
    _assert_unicellular(out, u.genus + k)
    return out, Trisection(tau, out.vertex_of(tau), TYPE_I if k == 1 else TYPE_II)


def _assert_unicellular(u, genus):
    if len(u.order) != len(u.sigma):
        raise AssertionError("glue/slice broke unicellularity")
    if u.genus != genus:
        raise AssertionError(f"expected genus {genus}, got {u.genus}")


def _slice_points(u, h):
    """The half-edges ``(a1, a2, a3)`` that slicing at trisection ``h`` separates."""
    rank, sigma = u.rank, u.sigma
    a1 = u.vertex_of(h)
    a3 = int(sigma[h])
    r3 = rank[a3]
    a2 = None
    x = int(sigma[a1])
    while x != a3:
        if rank[x] > r3 and (a2 is None or rank[x] < rank[a2]):
            a2 = x
        x = int(sigma[x])
    if a2 is None:
        raise AssertionError("no second slicing half-edge; not a trisection")
    return a1, a2, a3


def slice_once(u, t):
    """Undo one gluing step at trisection ``t``.

    Returns ``(map, (a1, a2, a3), kind)``. The three half-edges head the three
    new vertices; ``kind`` is ``"I"`` when ``a3`` is the minimum of its new
    vertex and ``"II"`` otherwise, in which case ``t`` is still a trisection of
    the returned map.
    """
    h = t.half_edge if isinstance(t, Trisection) else int(t)
    if not 0 <= h < len(u.sigma) or not is_trisection(u, h):
        raise MapError(f"{h} is not a trisection")
    a1, a2, a3 = _slice_points(u, h)
    out = u.copy()
    _unrotate(out.sigma, a1, a2, a3)
    _assert_unicellular(out, u.genus - 1)
    kind = TYPE_I if out.min_mask[a3] else TYPE_II
    return out, (a1, a2, a3), kind


def classify_trisection_type(u, t):
    """Type ``"I"`` or ``"II"`` of a trisection, found by slicing once."""
    return slice_once(u, t)[2]


def slice_xi(u, t):
    """Slice at ``t`` until a type-I step; inverse of :func:`glue_lambda`.

    Returns the lower-genus map and the ``2k+1`` freed vertices (minimum
    half-edges) sorted by its tour order.
    """
    h = t.half_edge if isinstance(t, Trisection) else int(t)
    freed = []
    current = u
    while True:
        current, (a1, a2, a3), kind = slice_once(current, h)
        freed.extend((a1, a2))
        if kind == TYPE_I:
            freed.append(a3)
            break
    rank = current.rank
    freed.sort(key=lambda x: rank[x])
    return current, freed
