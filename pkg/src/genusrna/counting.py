"""Exact counts of unicellular maps, matchings and diagrams of fixed genus.

``epsilon(g, n)`` is the number of rooted unicellular maps of genus ``g`` with
``n`` edges, equivalently of perfect matchings with ``n`` arcs and genus
``g``. Every map of genus ``g`` carries ``2g`` trisections and gluing
``2k+1`` of the ``n + 1 - 2(g-k)`` vertices of a genus ``g-k`` map hits each
(map, trisection) pair exactly once, hence

    2g * epsilon(g, n) = sum_{k=1..g} C(n + 1 - 2(g-k), 2k+1) * epsilon(g-k, n).

Unrolling the recursion down to plane trees gives ``epsilon(g, n) =
W(0 -> g) * Catalan(n)`` where ``W`` sums over strictly increasing genus
sequences; ``W`` also drives the genus steps of the uniform sampler.

All counts are Python integers and all probabilities ``Fraction``s.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb


class InfeasibleError(ValueError):
    """No structure exists for the requested parameters."""


def catalan(n):
    return comb(2 * n, n) // (n + 1) if n >= 0 else 0


def double_factorial_odd(n):
    """``(2n-1)!!``, the number of perfect matchings on ``2n`` points."""
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out


@lru_cache(maxsize=None)
def epsilon(g, n):
    if g < 0 or n < 0 or 2 * g > n:
        return 0
    if g == 0:
        return catalan(n)
    total = sum(comb(n + 1 - 2 * (g - k), 2 * k + 1) * epsilon(g - k, n)
                for k in range(1, g + 1))
    q, rem = divmod(total, 2 * g)
    if rem:
        raise AssertionError(f"2g does not divide the trisection count for g={g}, n={n}")
    return q


def delta(g, length, n):
    """Diagrams of genus ``g`` on ``length`` vertices with exactly ``n`` arcs."""
    if n < 0 or 2 * n > length:
        raise ValueError(f"{n} arcs do not fit on {length} vertices")
    return comb(length, length - 2 * n) * epsilon(g, n)


def delta_total(g, length):
    """All diagrams of genus ``g`` on ``length`` vertices."""
    return sum(delta(g, length, n) for n in range(length // 2 + 1))


@lru_cache(maxsize=None)
def path_weight(h, g, n):
    """Weighted number of glue paths from genus ``h`` to ``g`` on ``n`` edges.

    ``W(g -> g) = 1`` and ``W(h -> g) = sum_t C(n+1-2h, 2(t-h)+1) / (2t) * W(t -> g)``
    over ``h < t <= g``.
    """
    if h > g:
        raise ValueError("path_weight needs h <= g")
    if h == g:
        return Fraction(1)
    free = n + 1 - 2 * h
    return sum((Fraction(comb(free, 2 * (t - h) + 1), 2 * t) * path_weight(t, g, n)
                for t in range(h + 1, g + 1)), Fraction(0))


def epsilon_from_paths(g, n):
    """``epsilon(g, n)`` recomputed as ``W(0 -> g) * Catalan(n)``."""
    value = path_weight(0, g, n) * catalan(n)
    if value.denominator != 1:
        raise AssertionError("glue-path count times Catalan is not an integer")
    return value.numerator


def next_genus_distribution(current, target, n):
    """Exact law of the next genus on a uniformly chosen glue path towards ``target``.

    Returns ``[(t, P(t)), ...]`` for ``current < t <= target`` (zero-probability
    steps omitted).
    """
    if current >= target:
        raise ValueError("current genus must be below the target")
    total = path_weight(current, target, n)
    if total == 0:
        raise InfeasibleError(f"genus {target} is unreachable with {n} edges")
    free = n + 1 - 2 * current
    out = []
    for t in range(current + 1, target + 1):
        w = Fraction(comb(free, 2 * (t - current) + 1), 2 * t) * path_weight(t, target, n)
        if w:
            out.append((t, w / total))
    return out


def arcs_distribution(length, g):
    """Law of the arc count of a uniform genus-``g`` diagram on ``length`` vertices."""
    if g < 0 or length < 0:
        raise ValueError("genus and length must be non-negative")
    weights = [(n, delta(g, length, n)) for n in range(2 * g, length // 2 + 1)]
    total = sum(w for _, w in weights)
    if total == 0:
        raise InfeasibleError(f"no genus-{g} diagram on {length} vertices")
    return [(n, Fraction(w, total)) for n, w in weights if w]
