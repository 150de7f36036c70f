"""Brute-force oracles and the checks behind ``genusrna verify`` and the acceptance tests."""
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from scipy import stats as sps

from .counting import double_factorial_odd, epsilon
from .diagram import Diagram
from .energy import TEST_VECTOR, ZERO, brute_force_theta0, build_partitions
from .fatgraph import genus_of_matching, matching_to_unicellular
from .sampling import RandomSource, uniform_matching, uniform_unicellular
from .unicellular import find_trisections, glue_lambda, slice_xi

CHI2_ALPHA = 1e-3


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self):
        return f"{self.name}: {'OK' if self.ok else 'FAIL'}" + (f" ({self.detail})" if self.detail else "")


def all_matchings(n):
    """Every perfect matching on ``2n`` points, as a ``Diagram`` ((2n-1)!! of them)."""
    size = 2 * n
    partner = [-1] * size

    def rec():
        try:
            a = partner.index(-1)
        except ValueError:
            yield Diagram.from_partner(partner)
            return
        for b in range(a + 1, size):
            if partner[b] == -1:
                partner[a], partner[b] = b, a
                yield from rec()
                partner[a] = partner[b] = -1

    yield from rec()


def genus_census(n):
    """``Counter`` genus -> number of matchings on ``n`` arcs, by brute force."""
    return Counter(genus_of_matching(m).genus for m in all_matchings(n))


def census_check(n):
    census = genus_census(n)
    counts = [census.get(g, 0) for g in range(n // 2 + 1)]
    expected = [epsilon(g, n) for g in range(n // 2 + 1)]
    total = sum(counts)
    ok = counts == expected and total == double_factorial_odd(n)
    line = (f"n={n}: {' '.join(map(str, counts))} | sum {total} = {2 * n - 1}!! "
            f"{'OK' if ok else 'FAIL'}")
    if counts != expected:
        line += f" (expected {' '.join(map(str, expected))})"
    return ok, line


def all_maps(n):
    """Every rooted unicellular map with ``n`` edges, via the matching bijection."""
    for m in all_matchings(n):
        yield matching_to_unicellular(m)


def odd_vertex_sets(u):
    mins = u.vertex_mins().tolist()
    for size in range(3, len(mins) + 1, 2):
        yield from combinations(mins, size)


def lambda_xi_roundtrip(u, t):
    """``Lambda(Xi(u, t)) == (u, t)``."""
    lower, freed = slice_xi(u, t)
    back, tau = glue_lambda(lower, freed)
    return back == u and tau.half_edge == t.half_edge


def xi_lambda_roundtrip(u, vertices):
    """``Xi(Lambda(u, V)) == (u, V)``."""
    upper, tau = glue_lambda(u, vertices)
    lower, freed = slice_xi(upper, tau)
    return lower == u and sorted(freed) == sorted(vertices)


@dataclass
class BijectionReport:
    maps: int = 0
    lambda_xi: int = 0
    xi_lambda: int = 0
    failures: int = 0
    trisection_failures: int = 0

    @property
    def ok(self):
        return self.failures == 0 and self.trisection_failures == 0


def _trisections_ok(u):
    try:
        return len(find_trisections(u)) == 2 * u.genus
    except AssertionError:
        return False


def exhaustive_bijection(max_n):
    rep = BijectionReport()
    for n in range(1, max_n + 1):
        for u in all_maps(n):
            rep.maps += 1
            if not _trisections_ok(u):
                rep.trisection_failures += 1
                continue
            for t in find_trisections(u):
                rep.lambda_xi += 1
                rep.failures += not lambda_xi_roundtrip(u, t)
            for vs in odd_vertex_sets(u):
                rep.xi_lambda += 1
                rep.failures += not xi_lambda_roundtrip(u, vs)
    return rep


def random_bijection(trials, max_n, rng, max_genus=4):
    """Random (map, trisection) and (map, vertex set) round-trips with ``2 <= n <= max_n``."""
    rep = BijectionReport()
    gen = rng.generator
    for _ in range(trials):
        n = int(gen.integers(2, max_n + 1))
        g = int(gen.integers(1, min(n // 2, max_genus) + 1))
        u = uniform_unicellular(n, g, rng)
        rep.maps += 1
        if not _trisections_ok(u):
            rep.trisection_failures += 1
            continue
        tris = find_trisections(u)
        rep.lambda_xi += 1
        rep.failures += not lambda_xi_roundtrip(u, tris[int(gen.integers(len(tris)))])
        h = int(gen.integers(0, g))
        k = int(gen.integers(1, g - h + 1))
        v = uniform_unicellular(n, h, rng)
        mins = v.vertex_mins().tolist()
        chosen = [mins[i] for i in rng.sample_indices(len(mins), 2 * k + 1)]
        rep.xi_lambda += 1
        rep.failures += not xi_lambda_roundtrip(v, chosen)
    return rep


def theta_oracle(max_n, params):
    """Largest relative error between the DP tables and brute force, over ``k = 0..3``, ``m <= max_n``."""
    tables = build_partitions(max_n, params)
    worst = 0.0
    for m in range(max_n + 1):
        for k in range(4):
            exact = brute_force_theta0(m, k, params)
            got = math.exp(tables.log_theta0(k, m))
            if exact == 0.0:
                if got != 0.0:
                    return math.inf
                continue
            worst = max(worst, abs(got - exact) / exact)
    return worst


def chi_square_uniform(counts, support_size):
    """p-value of the chi-square test of ``counts`` (a Counter) against uniform over ``support_size`` cells."""
    observed = list(counts.values()) + [0] * (support_size - len(counts))
    return float(sps.chisquare(observed).pvalue)


def uniform_matching_frequencies(n, g, samples, rng):
    return Counter(uniform_matching(n, g, rng).partner.tobytes() for _ in range(samples))


def run_verification(max_edges=4, samples=10000, seed=0):
    """All checks; returns ``(ok, lines)``."""
    lines = []
    ok_all = True

    def record(ok, line):
        nonlocal ok_all
        ok_all &= ok
        lines.append(line)

    for n in range(1, max_edges + 1):
        record(*census_check(n))

    rep = exhaustive_bijection(min(max_edges, 4))
    record(rep.trisection_failures == 0,
           CheckResult("2g trisections", rep.trisection_failures == 0,
                       f"2g per map, {rep.maps} maps").line())
    record(rep.failures == 0,
           CheckResult("Lambda/Xi round-trips", rep.failures == 0,
                       f"{rep.lambda_xi} + {rep.xi_lambda} exhaustive").line())

    rng = RandomSource(seed)
    rnd = random_bijection(max(samples // 10, 1), 50, rng)
    record(rnd.ok, CheckResult("random round-trips n<=50", rnd.ok,
                               f"{rnd.lambda_xi} + {rnd.xi_lambda}").line())

    for label, params in (("zero", ZERO), ("test-vector", TEST_VECTOR)):
        err = theta_oracle(min(max_edges, 7), params)
        record(err <= 1e-9, CheckResult(f"theta oracle {label}", err <= 1e-9,
                                        f"max rel err {err:.2e}").line())

    for n, g in ((3, 1), (4, 1), (4, 2)):
        if n > max_edges:
            continue
        size = epsilon(g, n)
        draws = max(samples, 100 * size)
        counts = uniform_matching_frequencies(n, g, draws, rng)
        p = chi_square_uniform(counts, size)
        ok = p > CHI2_ALPHA and len(counts) == size
        record(ok, CheckResult(f"uniform n={n} g={g}", ok,
                               f"{draws} samples, chi-square p={p:.3g}").line())
    return ok_all, lines
