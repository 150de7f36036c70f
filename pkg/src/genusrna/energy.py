"""Loop energies and energy-weighted sampling of genus-0 and genus-1 structures.

Loops of a structure are the vertices of its dual unicellular map. A vertex
of degree ``d`` scores ``Lhp`` (``d = 1``), ``Lint`` (``d = 2``) or ``Lmul``
(``d > 2``), where the exterior vertex counts the plant as one more incident
edge; the plant itself scores 0. Every arc adds ``b`` and a genus-1
structure adds ``Lpk1`` once. A vertex holding a trisection always has degree
at least 3 and therefore scores ``Lmul``.

For sampling, a genus-1 structure is sliced at one of its two trisections into
a plane tree with three labelled vertices; labelled vertices score
``(Lpk1 + Lmul) / 3`` each, so the labelled tree has the same energy as the
genus-1 structure it glues back to. Summing ``exp(energy)`` over labelled
trees therefore gives twice the genus-1 partition function, and sampling a
labelled tree by backtracking through the dynamic programme followed by one
gluing step samples genus-1 structures with probability proportional to
``exp(energy)``.

The dynamic programme runs over plane trees in the arc-nesting
decomposition, with a formal variable marking labelled loops; all
polynomials are truncated at degree 3 and stored as logarithms.
"""
import enum
import math
from dataclasses import dataclass, fields
from itertools import combinations

import numpy as np

from .counting import InfeasibleError
from .diagram import Diagram
from .fatgraph import _map_from_partner, _partner_from_map, matching_to_unicellular
from .unicellular import _glue_sequence, find_trisections, UnicellularMap

NEG_INF = -math.inf
MAX_LABELS = 3


class LoopClass(enum.Enum):
    HAIRPIN = "hairpin"
    INTERIOR = "interior"
    MULTI = "multi"
    PSEUDOKNOT = "pseudoknot"
    ROOT = "root"


@dataclass(frozen=True)
class EnergyParams:
    b: float = 0.0
    Lhp: float = 0.0
    Lint: float = 0.0
    Lmul: float = 0.0
    Lpk1: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise ValueError(f"energy parameter {f.name} must be finite")
            object.__setattr__(self, f.name, value)

    @property
    def label(self):
        """Score of one labelled vertex."""
        return (self.Lpk1 + self.Lmul) / 3.0

    def loop(self, planted_degree):
        if planted_degree == 1:
            return self.Lhp
        if planted_degree == 2:
            return self.Lint
        return self.Lmul

    @classmethod
    def from_text(cls, text):
        """Parse ``key=value`` lines; ``#`` starts a comment, missing keys default to 0."""
        known = {f.name for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                raise ValueError(f"line {lineno}: expected key=value")
            if key not in known:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            if key in values:
                raise ValueError(f"line {lineno}: duplicate key {key!r}")
            try:
                values[key] = float(value.strip())
            except ValueError:
                raise ValueError(f"line {lineno}: bad value {value.strip()!r}") from None
        return cls(**values)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        return "".join(f"{f.name}={getattr(self, f.name)!r}\n" for f in fields(self))


ZERO = EnergyParams()
TEST_VECTOR = EnergyParams(b=0.1, Lhp=-0.2, Lint=0.05, Lmul=-0.1, Lpk1=0.3)


# loop classification and direct energies ---------------------------------

def _planted_degrees(u):
    """Vertex (minimum half-edge) -> degree, counting the plant at the root vertex."""
    degrees = u.degrees()
    if degrees:
        degrees[u.vertex_of(u.root)] += 1
    return degrees


def classify_loops(matching):
    """Loop class of every vertex of the dual map of a perfect matching.

    Vertices holding a trisection are pseudoknot loops, the vertex holding the
    root is the exterior loop (``ROOT``), and the rest are classed by degree.
    """
    u = matching_to_unicellular(matching)
    knotted = {t.vertex for t in find_trisections(u)}
    root = u.vertex_of(u.root) if u.n_edges else None
    out = {}
    for v, d in u.degrees().items():
        if v in knotted:
            out[v] = LoopClass.PSEUDOKNOT
        elif v == root:
            out[v] = LoopClass.ROOT
        elif d == 1:
            out[v] = LoopClass.HAIRPIN
        elif d == 2:
            out[v] = LoopClass.INTERIOR
        else:
            out[v] = LoopClass.MULTI
    return out


def loop_sizes(matching):
    """``[(LoopClass, degree), ...]`` over the dual vertices, for loop statistics."""
    u = matching_to_unicellular(matching)
    classes = classify_loops(matching)
    degrees = u.degrees()
    return [(classes[v], degrees[v]) for v in degrees]


def _as_matching(structure):
    return structure if structure.is_matching else structure.strip_unpaired()


def eta_direct(structure, params):
    """Energy of a structure of genus 0 or 1; unpaired vertices contribute nothing."""
    m = _as_matching(structure)
    u = matching_to_unicellular(m)
    g = u.genus
    if g > 1:
        raise ValueError(f"energy is only defined up to genus 1 (got genus {g})")
    total = m.n_arcs * params.b
    for d in _planted_degrees(u).values():
        total += params.loop(d)
    if g == 1:
        total += params.Lpk1
    return total


def eta_labeled(matching, labels, params, expected=MAX_LABELS):
    """Energy of a plane tree with labelled vertices (minimum half-edges of its dual map).

    Labelled vertices score ``(Lpk1 + Lmul) / 3`` instead of their loop score.
    ``expected`` fixes how many labels are required (``None`` accepts any).
    """
    labels = set(int(v) for v in labels)
    if expected is not None and len(labels) != expected:
        raise ValueError(f"expected {expected} distinct labels, got {len(labels)}")
    u = matching_to_unicellular(matching)
    if u.genus != 0:
        raise ValueError("labelled structures must have genus 0")
    planted = _planted_degrees(u)
    if not labels <= planted.keys():
        raise ValueError("labels must be vertices (minimum half-edges) of the dual map")
    total = matching.n_arcs * params.b
    for v, d in planted.items():
        total += params.label if v in labels else params.loop(d)
    return total


# partition functions -----------------------------------------------------

def _logsumexp(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return NEG_INF
    top = values.max()
    if top == NEG_INF:
        return NEG_INF
    return float(top + np.log(np.exp(values - top).sum()))


def _poly_product_sum(left, right):
    """Truncated log-space ``sum_i left[i] * right[i]`` for stacks of degree-3 polynomials."""
    out = np.full(MAX_LABELS + 1, NEG_INF)
    for k in range(MAX_LABELS + 1):
        terms = [left[:, j] + right[:, k - j] for j in range(k + 1)]
        out[k] = _logsumexp(np.concatenate(terms))
    return out


def _vertex_poly(weight, label):
    p = np.full(MAX_LABELS + 1, NEG_INF)
    p[0], p[1] = weight, label
    return p


def _poly_mul(left, right):
    return _poly_product_sum(left[None, :], right[None, :])


def _poly_add(*polys):
    return np.logaddexp.reduce(np.vstack(polys), axis=0)


@dataclass
class PartitionTables:
    """Log partition functions of plane trees with up to three labelled vertices.

    Row ``m`` of each table is indexed by the number of labels ``k``:
    ``closed`` sums over structures enclosed by one outer arc (``m`` arcs in
    total), ``seq`` over sequences of one or more such blocks, ``seq2`` over
    sequences of at least two, and ``theta0`` over whole plane trees.
    """

    params: EnergyParams
    n_max: int
    closed: np.ndarray
    seq: np.ndarray
    seq2: np.ndarray
    theta0: np.ndarray

    def __post_init__(self):
        # plain lists: much faster than numpy scalars inside the backtracking loop
        self._rows = {"T": self.theta0.tolist(), "A": self.closed.tolist(),
                      "S": self.seq.tolist(), "S2": self.seq2.tolist()}

    def log_theta0(self, k, m):
        return float(self.theta0[m, k])

    def log_theta1(self, m):
        return float(self.theta0[m, 3]) - math.log(2.0)

    def theta0_value(self, k, m):
        return math.exp(self.log_theta0(k, m))

    def theta1(self, m):
        """Genus-1 partition function, half the three-label genus-0 one."""
        return math.exp(self.log_theta1(m))

    def log_vartheta1(self, length, n):
        if 2 * n > length:
            return NEG_INF
        value = self.log_theta1(n)
        if value == NEG_INF:
            return NEG_INF
        return math.log(math.comb(length, length - 2 * n)) + value

    def log_vartheta1_total(self, length):
        return _logsumexp([self.log_vartheta1(length, n) for n in range(length // 2 + 1)])


def build_partitions(n, params):
    """Fill the partition tables for ``0..n`` arcs in ``O(n^2)`` time."""
    if n < 0:
        raise ValueError("n must be non-negative")
    p = params
    width = MAX_LABELS + 1
    closed = np.full((n + 1, width), NEG_INF)
    seq = np.full((n + 1, width), NEG_INF)
    seq2 = np.full((n + 1, width), NEG_INF)
    theta0 = np.full((n + 1, width), NEG_INF)
    theta0[0, 0] = 0.0
    hairpin = _vertex_poly(p.Lhp, p.label)
    interior = _vertex_poly(p.Lint, p.label)
    multi = _vertex_poly(p.Lmul, p.label)
    for m in range(1, n + 1):
        if m >= 2:
            seq2[m] = _poly_product_sum(closed[1:m], seq[m - 1:0:-1])
        inner = [hairpin] if m == 1 else [_poly_mul(interior, closed[m - 1])]
        if m >= 3:
            inner.append(_poly_mul(multi, seq2[m - 1]))
        closed[m] = p.b + _poly_add(*inner)
        seq[m] = _poly_add(closed[m], seq2[m])
        theta0[m] = _poly_add(_poly_mul(interior, closed[m]), _poly_mul(multi, seq2[m]))
    return PartitionTables(p, n, closed, seq, seq2, theta0)


# stochastic backtracking ---------------------------------------------------

def _alternating(m):
    """``1, m-1, 2, m-2, ...``: split points ordered from the ends inwards."""
    lo, hi = 1, m - 1
    while lo <= hi:
        yield lo
        if hi != lo:
            yield hi
        lo += 1
        hi -= 1


def _options(tables, task):
    """Decomposition choices for one task: ``(log_weight, subtasks, arc, label)``.

    Tasks are ``(kind, start, m, k)``: structures on ``m`` arcs starting at
    backbone position ``start`` carrying ``k`` labels. ``arc`` is emitted when
    the task closes an arc, ``label`` is the minimum half-edge of a labelled loop.
    """
    kind, start, m, k = task
    p = tables.params
    closed, seq, seq2 = tables._rows["A"], tables._rows["S"], tables._rows["S2"]
    if kind == "T":
        for j in (0, 1):
            if k - j < 0:
                continue
            w = p.label if j else p.Lint
            yield w + closed[m][k - j], [("A", start, m, k - j)], None, 0 if j else None
            w = p.label if j else p.Lmul
            yield w + seq2[m][k - j], [("S2", start, m, k - j)], None, 0 if j else None
    elif kind == "A":
        arc = (start, start + 2 * m - 1)
        loop = start + 1
        for j in (0, 1):
            r = k - j
            if r < 0:
                continue
            if m == 1:
                if r == 0:
                    yield p.b + (p.label if j else p.Lhp), [], arc, loop if j else None
                continue
            w = p.b + (p.label if j else p.Lint)
            yield w + closed[m - 1][r], [("A", start + 1, m - 1, r)], arc, loop if j else None
            if m >= 3:
                w = p.b + (p.label if j else p.Lmul)
                yield (w + seq2[m - 1][r], [("S2", start + 1, m - 1, r)], arc,
                       loop if j else None)
    elif kind == "S":
        yield closed[m][k], [("A", start, m, k)], None, None
        yield seq2[m][k], [("S2", start, m, k)], None, None
    elif kind == "S2":
        for i in _alternating(m):
            for j in range(k + 1):
                w = closed[i][j] + seq[m - i][k - j]
                yield w, [("A", start, i, j), ("S", start + 2 * i, m - i, k - j)], None, None
    else:
        raise AssertionError(kind)


def _task_log_total(tables, task):
    kind, _, m, k = task
    return tables._rows[kind][m][k]


def sample_labeled_tree(tables, n, rng, labels=MAX_LABELS):
    """Plane tree on ``n`` arcs with ``labels`` labelled vertices, drawn proportionally to ``exp(energy)``.

    Returns ``(partner, labels)``: a 0-based partner array and the sorted
    minimum half-edges of the labelled vertices in the tree's dual map.
    """
    if n > tables.n_max:
        raise ValueError("tables too small for this size")
    if tables.theta0[n, labels] == NEG_INF:
        raise InfeasibleError(f"no plane tree on {n} arcs has {labels} labelled vertices")
    partner = np.empty(2 * n, dtype=np.int64)
    chosen = []
    stack = [("T", 0, n, labels)] if n else []
    while stack:
        task = stack.pop()
        total = _task_log_total(tables, task)
        u = rng.random()
        pick = None
        for option in _options(tables, task):
            if option[0] == NEG_INF:
                continue
            pick = option
            u -= math.exp(option[0] - total)
            if u < 0:
                break
        _, subtasks, arc, label = pick
        if arc is not None:
            partner[arc[0]], partner[arc[1]] = arc[1], arc[0]
        if label is not None:
            chosen.append(label)
        stack.extend(subtasks)
    return partner, sorted(chosen)


def enumerate_labeled_traces(tables, n, labels=MAX_LABELS):
    """Every backtracking outcome with the probability the sampler assigns to it.

    Yields ``(partner_tuple, labels_tuple, probability)``; meant for checking
    the sampler on small ``n``.
    """
    def expand(stack, partner, chosen, prob):
        if not stack:
            yield tuple(partner), tuple(sorted(chosen)), prob
            return
        task, rest = stack[-1], stack[:-1]
        total = _task_log_total(tables, task)
        for w, subtasks, arc, label in _options(tables, task):
            if w == NEG_INF:
                continue
            p2 = list(partner)
            if arc is not None:
                p2[arc[0]], p2[arc[1]] = arc[1], arc[0]
            c2 = chosen + ([label] if label is not None else [])
            yield from expand(rest + subtasks, p2, c2, prob * math.exp(w - total))

    if n == 0:
        if labels == 0:
            yield (), (), 1.0
        return
    yield from expand([("T", 0, n, labels)], [-1] * (2 * n), [], 1.0)


def glue_labeled_tree(partner, labels):
    """Glue the three labelled vertices of a plane tree; returns the genus-1 matching."""
    u = _map_from_partner(np.asarray(partner, dtype=np.int64))
    sigma = u.sigma.copy()
    _glue_sequence(sigma, sorted(labels))
    glued = UnicellularMap(sigma, u.alpha, u.root, check=False)
    return Diagram.from_partner(_partner_from_map(glued))


class Genus1Sampler:
    """Energy-weighted sampler for genus-1 diagrams on up to ``max_length`` vertices.

    The tables are built once (``O(n^2)``); each draw then backtracks through
    them and performs a single gluing.
    """

    def __init__(self, params, max_length):
        self.params = params
        self.max_length = int(max_length)
        self.tables = build_partitions(self.max_length // 2, params)
        self._arc_laws = {}

    def _arc_law(self, length):
        law = self._arc_laws.get(length)
        if law is None:
            logs = np.array([self.tables.log_vartheta1(length, n)
                             for n in range(length // 2 + 1)])
            if np.all(logs == NEG_INF):
                raise InfeasibleError(f"no genus-1 diagram on {length} vertices")
            probs = np.exp(logs - logs.max())
            law = np.cumsum(probs / probs.sum())
            self._arc_laws[length] = law
        return law

    def sample_matching(self, n, rng):
        """Genus-1 matching on ``n`` arcs with probability ``exp(energy) / theta1(n)``."""
        if n < 2:
            raise InfeasibleError("genus 1 needs at least two arcs")
        partner, labels = sample_labeled_tree(self.tables, n, rng)
        return glue_labeled_tree(partner, labels)

    def sample(self, length, rng):
        """Genus-1 diagram on ``length`` vertices with probability ``exp(energy) / vartheta1(length)``."""
        if length < 4:
            raise InfeasibleError("genus 1 needs at least four vertices")
        if length > self.max_length:
            raise ValueError(f"sampler was built for length <= {self.max_length}")
        law = self._arc_law(length)
        n = min(int(np.searchsorted(law, rng.random(), side="right")), len(law) - 1)
        matching = self.sample_matching(n, rng)
        unpaired = rng.sample_indices(length, length - 2 * n)
        return matching.insert_unpaired(unpaired, length)


def sample_genus1(length, params, rng):
    """One energy-weighted genus-1 diagram (builds the tables; reuse :class:`Genus1Sampler` for many)."""
    return Genus1Sampler(params, length).sample(length, rng)


# brute-force references ----------------------------------------------------

def plane_trees(n):
    """All non-crossing perfect matchings on ``2n`` points, as partner tuples."""
    if n == 0:
        yield ()
        return
    for inner in range(n):
        for a in plane_trees(inner):
            for c in plane_trees(n - 1 - inner):
                size = 2 * inner + 2
                partner = [0] * (2 * n)
                partner[0], partner[size - 1] = size - 1, 0
                for i, x in enumerate(a):
                    partner[1 + i] = 1 + x
                for i, x in enumerate(c):
                    partner[size + i] = size + x
                yield tuple(partner)


def brute_force_theta0(n, k, params):
    """``sum exp(energy)`` over plane trees on ``n`` arcs with ``k`` labelled vertices, by enumeration."""
    total = 0.0
    for partner in plane_trees(n):
        m = Diagram.from_partner(partner)
        vertices = list(_planted_degrees(matching_to_unicellular(m))) if n else []
        for labels in combinations(vertices, k):
            total += math.exp(eta_labeled(m, labels, params, expected=k))
    return total
