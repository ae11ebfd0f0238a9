"""Extremal constructions, blowups and their closed-form weights."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import kernels
from .errors import TheoremCheckError
from .igraph import BLUE, GREEN, RED, Graph, IGraph, as_rat, check_probability
from .typegraph import TypeGraph

EXACT_DISTANCE_MAX_N = 14
HEURISTIC_RESTARTS = 32


@dataclass(frozen=True)
class PartSizes:
    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s < 0 for s in self.sizes):
            raise ValueError("part sizes must be non-negative")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def deviations(self) -> tuple[Fraction, ...]:
        t = len(self.sizes)
        return tuple(Fraction(s) - Fraction(self.n, t) for s in self.sizes)

    @property
    def balanced(self) -> bool:
        return max(self.sizes) - min(self.sizes) <= 1 if self.sizes else True


def balanced_sizes(n: int, t: int) -> PartSizes:
    """Sizes as equal as possible; the r = n mod t larger parts come first."""
    if t < 1:
        raise ValueError("need at least one part")
    q, r = divmod(n, t)
    return PartSizes(tuple([q + 1] * r + [q] * (t - r)))


def clique_construction(sizes: Sequence[int], inside: int) -> IGraph:
    """Disjoint cliques of colour ``inside`` on consecutive blocks, green across."""
    n = sum(sizes)
    part = []
    for i, s in enumerate(sizes):
        part += [i] * s
    codes = bytearray(n * n)
    for u in range(n):
        for v in range(n):
            if u != v:
                codes[u * n + v] = inside if part[u] == part[v] else GREEN
    return IGraph(n, bytes(codes))


def b_construction(n: int, a: int) -> IGraph:
    """B_a(n): a balanced blue cliques joined by green."""
    if a < 1 or n < 1:
        raise ValueError("need a >= 1 and n >= 1")
    return clique_construction(balanced_sizes(n, a).sizes, BLUE)


def r_construction(n: int, b1: int) -> IGraph:
    """R_{b-1}(n): b-1 balanced red cliques joined by green."""
    if b1 < 1 or n < 1:
        raise ValueError("need b-1 >= 1 and n >= 1")
    return clique_construction(balanced_sizes(n, b1).sizes, RED)


def _class_partition(G: IGraph, inside: int, t: int) -> list[list[int]] | None:
    n = G.n
    part = [-1] * n
    blocks: list[list[int]] = []
    for v in range(n):
        if part[v] >= 0:
            continue
        block = [v] + [u for u in range(v + 1, n) if G.codes[v * n + u] == inside]
        for u in block:
            if part[u] >= 0:
                return None
            part[u] = len(blocks)
        blocks.append(block)
    if len(blocks) > t:
        return None
    for u in range(n):
        for v in range(u + 1, n):
            want = inside if part[u] == part[v] else GREEN
            if G.codes[u * n + v] != want:
                return None
    return blocks + [[] for _ in range(t - len(blocks))]


def is_in_B_class(G: IGraph, a: int) -> list[list[int]] | None:
    """Partition witnessing G as a blue a-clique construction (empty parts allowed), or None."""
    return _class_partition(G, BLUE, a)


def is_in_R_class(G: IGraph, b1: int) -> list[list[int]] | None:
    return _class_partition(G, RED, b1)


def blowup(tau: TypeGraph, sizes: Sequence[int] | PartSizes) -> IGraph:
    """Parts V_u of the given sizes; inside V_u the colour of u, across the colour of uv."""
    sizes = sizes.sizes if isinstance(sizes, PartSizes) else tuple(sizes)
    if len(sizes) != tau.k:
        raise ValueError("one size per type vertex")
    n = sum(sizes)
    part = []
    for u, s in enumerate(sizes):
        part += [u] * s
    k = tau.k
    codes = bytearray(n * n)
    for x in range(n):
        for y in range(n):
            if x != y:
                codes[x * n + y] = tau.codes[part[x] * k + part[y]]
    return IGraph(n, bytes(codes))


def blowup_weight(tau: TypeGraph, sizes: Sequence[int], p) -> Fraction:
    """Weight of a blowup from the type's weight matrix and part sizes alone."""
    p = as_rat(p)
    W = tau.weight_matrix(p)
    total = Fraction(0)
    for u in range(tau.k):
        total += W[u][u] * comb(sizes[u], 2)
        for v in range(u + 1, tau.k):
            total += W[u][v] * sizes[u] * sizes[v]
    return total


# Turan-type arithmetic -----------------------------------------------------

def turan_edge_count(n: int, t: int, sizes: Sequence[int] | None = None) -> int:
    """Edges of the complete t-partite graph with the given part sizes.

    Also checks 2e = (1 - 1/t) n^2 - sum a_i^2 with a_i = |V_i| - n/t exactly,
    raising TheoremCheckError on a mismatch.
    """
    ps = balanced_sizes(n, t) if sizes is None else PartSizes(tuple(sizes))
    if len(ps.sizes) != t or ps.n != n:
        raise ValueError("sizes must be t parts summing to n")
    e = comb(n, 2) - sum(comb(s, 2) for s in ps.sizes)
    rhs = (1 - Fraction(1, t)) * n * n - sum(d * d for d in ps.deviations)
    if 2 * e != rhs:
        raise TheoremCheckError(f"complete {t}-partite edge identity fails for sizes {ps.sizes}")
    return e


def clique_weight_from_sizes(sizes: Sequence[int], inside_weight: Fraction) -> Fraction:
    """Weight of disjoint cliques with per-pair weight ``inside_weight``, green (1) across."""
    n = sum(sizes)
    inner = sum(comb(s, 2) for s in sizes)
    return inside_weight * inner + (comb(n, 2) - inner)


def weight_B(n: int, a: int, p) -> tuple[Fraction, Fraction]:
    """(w_p(B_a(n)), C) from the closed form (1-p/a)C(n,2) + p(1-1/a)n/2 - C."""
    p = as_rat(p)
    check_probability(p)
    r = n % a
    C = p * (r - Fraction(r * r, a)) / 2
    value = (1 - p / a) * comb(n, 2) + p * (1 - Fraction(1, a)) * n / 2 - C
    return value, C


def weight_R(n: int, b: int, p) -> tuple[Fraction, Fraction]:
    """(w_p(R_{b-1}(n)), C') from (1-(1-p)/(b-1))C(n,2) + (1-p)(1-1/(b-1))n/2 - C'."""
    p = as_rat(p)
    check_probability(p)
    t = b - 1
    q = 1 - p
    r = n % t
    C = q * (r - Fraction(r * r, t)) / 2
    value = (1 - q / t) * comb(n, 2) + q * (1 - Fraction(1, t)) * n / 2 - C
    return value, C


def threshold(a: int, b: int) -> Fraction:
    return Fraction(a, a + b - 1)


def predicted_order(a: int, b: int, p) -> str:
    """Which construction is heavier for large n: 'R', 'B' or '='."""
    p = as_rat(p)
    thr = threshold(a, b)
    if p > thr or (p == thr and a < b - 1):
        return "R"
    if p < thr or (p == thr and a > b - 1):
        return "B"
    return "="


@dataclass(frozen=True)
class Comparison:
    n: int
    weight_R: Fraction
    weight_B: Fraction
    order: str  # 'R', 'B' or '='
    predicted: str

    @property
    def matches(self) -> bool:
        return self.order == self.predicted


def compare_extremal(n: int, a: int, b: int, p) -> Comparison:
    p = as_rat(p)
    wr, _ = weight_R(n, b, p)
    wb, _ = weight_B(n, a, p)
    order = "R" if wr > wb else "B" if wb > wr else "="
    return Comparison(n, wr, wb, order, predicted_order(a, b, p))


def smallest_valid_n(a: int, b: int, p, n_max: int, n_min: int = 1) -> int | None:
    """Least n0 >= n_min such that the comparison matches the prediction on [n0, n_max]."""
    n0 = None
    for n in range(n_max, n_min - 1, -1):
        if compare_extremal(n, a, b, p).matches:
            n0 = n
        else:
            break
    return n0


def kappa_value(a: int, b: int, p) -> Fraction:
    p = as_rat(p)
    return max(1 - p / a, 1 - (1 - p) / (b - 1))


def degree_difference_check(a: int, b: int, p, n: int) -> bool:
    """w_p(X(n)) - w_p(X(n-1)) >= kappa_p n - 3 for each construction X whose regime covers p."""
    p = as_rat(p)
    kappa = kappa_value(a, b, p)
    thr = threshold(a, b)
    ok = True
    if p >= thr:
        ok &= weight_R(n, b, p)[0] - weight_R(n - 1, b, p)[0] >= kappa * n - 3
    if p <= thr:
        ok &= weight_B(n, a, p)[0] - weight_B(n - 1, a, p)[0] >= kappa * n - 3
    return bool(ok)


# edit distance to the extremal classes ---------------------------------------

@dataclass(frozen=True)
class DistanceResult:
    edits: int
    partition: tuple[tuple[int, ...], ...]
    exact: bool


def _parts_from_assign(assign: Sequence[int], k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(v for v, a in enumerate(assign) if a == i) for i in range(k))


def _assignment_cost(assign, cost_in, cost_cross) -> int:
    n = len(assign)
    return sum(
        cost_in[u][v] if assign[u] == assign[v] else cost_cross[u][v]
        for u in range(n) for v in range(u + 1, n)
    )


def _local_search(n: int, k: int, cost_in, cost_cross, seed: int, restarts: int):
    rng = random.Random(seed)
    best = None
    for _ in range(restarts):
        order = list(range(n))
        rng.shuffle(order)
        assign = [-1] * n
        for v in order:
            costs = [
                sum(cost_in[v][u] if assign[u] == part else cost_cross[v][u] for u in range(n) if assign[u] >= 0)
                for part in range(k)
            ]
            assign[v] = min(range(k), key=lambda part: costs[part])
        improved = True
        while improved:
            improved = False
            for v in range(n):
                costs = [
                    sum(cost_in[v][u] if assign[u] == part else cost_cross[v][u] for u in range(n) if u != v)
                    for part in range(k)
                ]
                part = min(range(k), key=lambda q: costs[q])
                if costs[part] < costs[assign[v]]:
                    assign[v] = part
                    improved = True
        cost = _assignment_cost(assign, cost_in, cost_cross)
        if best is None or cost < best[0]:
            best = (cost, list(assign))
    return best


def min_partition_cost(n: int, k: int, cost_in, cost_cross, *, exact: bool | None = None,
                       seed: int = 0) -> DistanceResult:
    """Minimise the pair costs over assignments of [n] to k parts.

    Exact branch and bound up to EXACT_DISTANCE_MAX_N vertices (or when
    ``exact`` is forced); otherwise seeded local search, flagged inexact.
    """
    if n == 0:
        return DistanceResult(0, tuple(() for _ in range(k)), True)
    heur_cost, heur_assign = _local_search(n, k, cost_in, cost_cross, seed, HEURISTIC_RESTARTS)
    use_exact = n <= EXACT_DISTANCE_MAX_N if exact is None else exact
    if not use_exact:
        return DistanceResult(heur_cost, _parts_from_assign(heur_assign, k), False)
    cost, assign = kernels.partition_bnb(n, k, cost_in, cost_cross, heur_cost + 1)
    return DistanceResult(cost, _parts_from_assign(assign, k), True)


def distance_to_class(G: IGraph, cls: str, t: int, **kw) -> DistanceResult:
    """Fewest pair recolourings turning G into t cliques of the class colour joined by green.

    ``cls`` is 'B' (blue cliques) or 'R' (red cliques).
    """
    inside = {"B": BLUE, "R": RED}[cls]
    n = G.n
    cost_in = [[0 if u == v or G.codes[u * n + v] == inside else 1 for v in range(n)] for u in range(n)]
    cost_cross = [[0 if u == v or G.codes[u * n + v] == GREEN else 1 for v in range(n)] for u in range(n)]
    return min_partition_cost(n, t, cost_in, cost_cross, **kw)


def distance_to_colorable(G: Graph, k: int, **kw) -> DistanceResult:
    """Fewest edge deletions making G k-partite (edges inside parts)."""
    n = G.n
    cost_in = [[1 if G.adj[u] >> v & 1 else 0 for v in range(n)] for u in range(n)]
    cost_cross = [[0] * n for _ in range(n)]
    return min_partition_cost(n, k, cost_in, cost_cross, **kw)
