"""Binomial random graphs, the conditioned model by rejection, and empirical
checks of the structure of random eye-free graphs.

Randomness comes from numpy's PCG64 seeded through SeedSequence. Pairs are
drawn in row-major upper-triangular order, one 53-bit double per pair, and a
pair is an edge when the double is below p. Batched draws consume the stream
in the same order as single draws, so results depend only on the seed.
Monte Carlo work is split into fixed-size chunks; chunk i uses the substream
SeedSequence(seed, spawn_key=(i,)), independent of how many workers run.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .constructions import b_construction, distance_to_colorable, kappa_value, r_construction
from .errors import BudgetExhausted
from .igraph import Graph, IGraph, as_rat, degrees, entropy_weight
from .pattern import Pattern, eye

CHUNK = 1 << 15
Z95 = 1.959963984540054


def _generator(seed: int, chunk: int | None = None) -> np.random.Generator:
    ss = np.random.SeedSequence(seed) if chunk is None else np.random.SeedSequence(seed, spawn_key=(chunk,))
    return np.random.Generator(np.random.PCG64(ss))


def _pair_index(n: int):
    iu = np.triu_indices(n, 1)
    return iu[0].astype(np.uint64), iu[1].astype(np.uint64)


def adjacency_batch(edges: np.ndarray, n: int) -> np.ndarray:
    """Boolean (m, N) pair indicators in row-major upper order -> (m, n) uint64 masks."""
    m = edges.shape[0]
    rows = np.zeros((m, n), dtype=np.uint64)
    iu, iv = _pair_index(n)
    for k in range(len(iu)):
        col = edges[:, k].astype(np.uint64)
        u, v = int(iu[k]), int(iv[k])
        rows[:, u] |= col << np.uint64(v)
        rows[:, v] |= col << np.uint64(u)
    return rows


def draw_batch(rng: np.random.Generator, n: int, p: float, m: int) -> np.ndarray:
    N = n * (n - 1) // 2
    return adjacency_batch(rng.random((m, N)) < p, n)


def _graph_from_row(n: int, row) -> Graph:
    return Graph(n, [int(x) for x in row])


def sample_gnp(n: int, p, seed: int) -> Graph:
    """One G(n, p) draw, deterministic per seed."""
    pf = float(as_rat(p, allow_float=True))
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    return _graph_from_row(n, draw_batch(_generator(seed), n, pf, 1)[0])


class Sampler:
    """A seeded stream of G(n, p) draws with rejection against a pattern."""

    def __init__(self, n: int, p, seed: int, budget: int = 10**7, batch: int = 4096):
        if budget < 1:
            raise ValueError("budget must be at least 1")
        self.n = n
        self.p = float(as_rat(p, allow_float=True))
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.seed = seed
        self.budget = budget
        self.batch = batch
        self._rng = _generator(seed)
        self._buf = np.zeros((0, n), dtype=np.uint64)
        self._pos = 0
        self._flags: dict[Pattern, list[bool]] = {}

    def _next_row(self):
        if self._pos >= len(self._buf):
            self._buf = draw_batch(self._rng, self.n, self.p, self.batch)
            self._pos = 0
            self._flags = {}
        self._pos += 1
        return self._pos - 1

    def draw(self) -> Graph:
        i = self._next_row()
        return _graph_from_row(self.n, self._buf[i])

    def draw_conditioned(self, H: Pattern) -> tuple[Graph, int]:
        """Next draw that is H-ifree and the number of draws spent, or BudgetExhausted."""
        trials = 0
        while trials < self.budget:
            i = self._next_row()
            trials += 1
            if H.h > self.n:
                return _graph_from_row(self.n, self._buf[i]), trials
            flags = self._flags.get(H)
            if flags is None:
                pr, pb = H.compiled
                flags = self._flags[H] = kernels.scan_ifree(self._buf, self.n, pr, pb)
            if flags[i]:
                return _graph_from_row(self.n, self._buf[i]), trials
        raise BudgetExhausted(self.budget)


def sample_conditioned(n: int, p, H: Pattern, seed: int, budget: int = 10**7) -> tuple[Graph, int]:
    """A draw from G(n, p) conditioned on being H-ifree, with the trials used."""
    return Sampler(n, p, seed, budget).draw_conditioned(H)


def is_ifree(G: Graph, H: Pattern) -> bool:
    pr, pb = H.compiled
    if H.h > G.n:
        return True
    I = G.to_igraph()
    return kernels.find_embedding(I.red, I.blue, (1 << G.n) - 1, -1, pr, pb) is None


# estimation ------------------------------------------------------------------

def wilson_interval(k: int, m: int, z: float = Z95) -> tuple[float, float]:
    if m == 0:
        return 0.0, 1.0
    ph = k / m
    denom = 1 + z * z / m
    centre = (ph + z * z / (2 * m)) / denom
    half = z * math.sqrt(ph * (1 - ph) / m + z * z / (4 * m * m)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class TrialStats:
    samples: int
    acceptances: int
    estimate: float
    interval: tuple[float, float]
    sigma: float
    distances: list[dict] = field(default_factory=list)
    bound: float | None = None  # largest construction probability 2^-H_p
    bound_ok: bool | None = None


def _count_chunk(args):
    n, p, H, seed, chunk, size = args
    rng = _generator(seed, chunk)
    if H.h > n:
        return size
    pr, pb = H.compiled
    return sum(kernels.scan_ifree(draw_batch(rng, n, p, size), n, pr, pb))


def construction_bound(n: int, p, a: int, b: int) -> float:
    """max of 2^-H_p over the two constructions: each fits only eye-ifree graphs."""
    p = as_rat(p, allow_float=True)
    return max(2.0 ** -entropy_weight(b_construction(n, a), p), 2.0 ** -entropy_weight(r_construction(n, b - 1), p))


def ifree_probability(n: int, p, H: Pattern, samples: int, seed: int, threads: int = 1) -> TrialStats:
    """Monte Carlo estimate of P(G(n, p) is H-ifree) with a 95% Wilson interval.

    For eye patterns the construction bound is attached and compared with
    the estimate allowing 3 sigma of sampling slack.
    """
    pf = float(as_rat(p, allow_float=True))
    sizes = [CHUNK] * (samples // CHUNK) + ([samples % CHUNK] if samples % CHUNK else [])
    tasks = [(n, pf, H, seed, i, s) for i, s in enumerate(sizes)]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(threads) as ex:
            hits = sum(ex.map(_count_chunk, tasks))
    else:
        hits = sum(_count_chunk(t) for t in tasks)
    est = hits / samples if samples else 0.0
    sigma = math.sqrt(est * (1 - est) / samples) if samples else 0.0
    stats = TrialStats(samples, hits, est, wilson_interval(hits, samples), sigma)
    if H.eye_params is not None and 0 < pf < 1:
        a, b = H.eye_params
        bound = construction_bound(n, as_rat(p, allow_float=True), a, b)
        slack = 3 * max(sigma, math.sqrt(bound * (1 - bound) / max(samples, 1)))
        stats.bound = bound
        stats.bound_ok = est >= bound - slack
    return stats


def exact_ifree_probability(n: int, p, H: Pattern) -> Fraction:
    """Exact P(G(n, p) is H-ifree) by enumerating all 2^C(n,2) graphs (n <= 8)."""
    if n > 8:
        raise ValueError("exhaustive enumeration supports n <= 8")
    p = as_rat(p)
    N = n * (n - 1) // 2
    if H.h > n:
        return Fraction(1)
    pr, pb = H.compiled
    by_edges = [0] * (N + 1)
    step = 1 << 16
    for start in range(0, 1 << N, step):
        codes = np.arange(start, min(start + step, 1 << N), dtype=np.uint64)
        bits = ((codes[:, None] >> np.arange(N, dtype=np.uint64)) & np.uint64(1)).astype(bool)
        flags = np.asarray(kernels.scan_ifree(adjacency_batch(bits, n), n, pr, pb), dtype=bool)
        ecount = bits.sum(axis=1)
        by_edges_chunk = np.bincount(ecount[flags], minlength=N + 1)
        for e in range(N + 1):
            by_edges[e] += int(by_edges_chunk[e])
    return sum((cnt * p ** e * (1 - p) ** (N - e) for e, cnt in enumerate(by_edges)), Fraction(0))


# structure of conditioned samples ----------------------------------------------------

def structure_distances(G: Graph, a: int, b: int, exact: bool | None = None) -> dict:
    """Edits to an a-partite graph, and to a graph whose complement is (b-1)-partite."""
    dp = distance_to_colorable(G, a, exact=exact)
    dc = distance_to_colorable(G.complement(), b - 1, exact=exact)
    return {"d_partite": dp.edits, "d_copartite": dc.edits, "d_min": min(dp.edits, dc.edits),
            "exact": dp.exact and dc.exact}


def eye_free_structure_stat(n: int, p, a: int, b: int, samples: int, seed: int,
                            budget: int = 10**8) -> TrialStats:
    """Distances of conditioned samples to the two extremal structures."""
    H = eye(a, b)
    sampler = Sampler(n, p, seed, budget)
    rows = []
    trials_total = 0
    for i in range(samples):
        G, trials = sampler.draw_conditioned(H)
        trials_total += trials
        d = structure_distances(G, a, b)
        rows.append({"index": i, "trials": trials, "edges": G.edge_count(), **d,
                     "normalized": d["d_min"] / (n * n)})
    est = samples / trials_total if trials_total else 0.0
    sigma = math.sqrt(est * (1 - est) / trials_total) if trials_total else 0.0
    return TrialStats(trials_total, samples, est, wilson_interval(samples, trials_total), sigma, rows)


# vertex degree implications ----------------------------------------------------------

def colordeg_check(G: IGraph, p, a: int, b: int, C) -> list[tuple[int, str]]:
    """Vertices with d_p(x) >= kappa n - C whose colour degrees break the implied bounds.

    An empty list means the check passed.
    """
    p, C = as_rat(p), as_rat(C)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    n = G.n
    kappa = kappa_value(a, b, p)
    low_r = Fraction(a - 1, a) * n - C / p
    low_b = Fraction(b - 2, b - 1) * n - C / (1 - p)
    bad = []
    for x in range(n):
        dv = degrees(G, x, p)
        if dv.d_p < kappa * n - C:
            continue
        if dv.d_r < low_r:
            bad.append((x, "d_r"))
        if dv.d_b < low_b:
            bad.append((x, "d_b"))
        if p <= Fraction(1, 2) and dv.d_g < low_r:
            bad.append((x, "d_g (p <= 1/2)"))
        if p >= Fraction(1, 2) and dv.d_g < low_b:
            bad.append((x, "d_g (p >= 1/2)"))
    return bad
