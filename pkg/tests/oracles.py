"""Independent brute-force oracles used by the tests.

None of these touch the search kernels; they enumerate directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np

from eyefree.igraph import GREEN, IGraph


def all_injections_embeds(C: IGraph, h: int, red_pairs: set, within=None) -> bool:
    """True iff some injective map sends red pattern pairs into C_r and the rest into C_b."""
    verts = range(C.n) if within is None else sorted(within)
    for img in permutations(verts, h):
        good = True
        for u, v in combinations(range(h), 2):
            need = 1 if (u, v) in red_pairs else 2
            if not C.codes[img[u] * C.n + img[v]] & need:
                good = False
                break
        if good:
            return True
    return False


def brute_copies(C: IGraph, h: int, red_pairs: set) -> int:
    return sum(all_injections_embeds(C, h, red_pairs, S) for S in combinations(range(C.n), h))


def brute_weight(G: IGraph, p: Fraction) -> Fraction:
    total = Fraction(0)
    for u, v in combinations(range(G.n), 2):
        c = G.codes[u * G.n + v]
        total += {0: 0, 1: p, 2: 1 - p, 3: 1}[c]
    return total


def brute_canonical(n: int, codes: bytes) -> bytes:
    """Least column-major code over all n! relabellings, with no invariant pruning."""
    best = None
    for perm in permutations(range(n)):
        out = []
        for j in range(n):
            out.append(codes[perm[j] * n + perm[j]])
            for i in range(j):
                out.append(codes[perm[i] * n + perm[j]])
        b = bytes(out)
        if best is None or b < best:
            best = b
    return best or b""


def set_partitions(n: int, k: int):
    """Assignments of [n] to at most k parts, one per unordered partition."""
    def rec(v, used, assign):
        if v == n:
            yield list(assign)
            return
        for part in range(min(used + 1, k)):
            assign.append(part)
            yield from rec(v + 1, max(used, part + 1), assign)
            assign.pop()
    yield from rec(0, 0, [])


def brute_class_distance(G: IGraph, inside: int, t: int) -> int:
    n = G.n
    best = None
    for assign in set_partitions(n, t):
        cost = 0
        for u, v in combinations(range(n), 2):
            c = G.codes[u * n + v]
            if assign[u] == assign[v]:
                cost += c != inside
            else:
                cost += c != GREEN
        best = cost if best is None else min(best, cost)
    return best


def brute_colorable_distance(adj: list[int], n: int, k: int) -> int:
    best = None
    for assign in set_partitions(n, k):
        cost = sum(1 for u, v in combinations(range(n), 2) if assign[u] == assign[v] and adj[u] >> v & 1)
        best = cost if best is None else min(best, cost)
    return best


def numeric_lambda(W: np.ndarray, restarts: int = 200, iters: int = 400, seed: int = 0) -> float:
    """Replicator-dynamics ascent from random starts and all vertices, polished on the support.

    Entries of W must be positive; the dynamics never decrease x^T W x. The
    polish solves the stationarity system on the numerical support by least
    squares, which also copes with flat faces where the system is singular.
    """
    k = W.shape[0]
    rng = np.random.default_rng(seed)
    X = rng.dirichlet(np.ones(k), size=restarts)
    X = np.vstack([X, np.eye(k)])
    for _ in range(iters):
        Y = X @ W
        val = np.einsum("ij,ij->i", X, Y)
        X = X * Y / val[:, None]
    best = float(np.max(np.einsum("ij,ij->i", X @ W, X)))
    supports = {tuple(np.flatnonzero(x > tol)) for x in X for tol in (1e-2, 1e-4, 1e-7)}
    for S in supports:
        S = np.array(S)
        m = len(S)
        A = np.zeros((m + 1, m + 1))
        A[:m, :m] = W[np.ix_(S, S)]
        A[:m, m] = -1
        A[m, :m] = 1
        rhs = np.zeros(m + 1)
        rhs[m] = 1
        sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        if np.abs(A @ sol - rhs).max() > 1e-10 or np.any(sol[:m] < -1e-12):
            continue
        y = np.zeros(k)
        y[S] = np.clip(sol[:m], 0, None)
        y /= y.sum()
        best = max(best, float(y @ W @ y))
    return best


def brute_describes(vcol: list[int], ecol: dict, h: int, red_pairs: set) -> bool:
    """Try every map V(H) -> V(tau) directly."""
    k = len(vcol)
    for f in product(range(k), repeat=h):
        good = True
        for u, v in combinations(range(h), 2):
            need = 1 if (u, v) in red_pairs else 2
            c = vcol[f[u]] if f[u] == f[v] else ecol[(min(f[u], f[v]), max(f[u], f[v]))]
            if not c & need:
                good = False
                break
        if good:
            return True
    return False


def graph_is_ifree(adj: list[int], n: int, h: int, red_pairs: set) -> bool:
    """Induced-subgraph freeness of a plain graph by enumerating h-subsets and orderings."""
    for img in permutations(range(n), h):
        if all((adj[img[u]] >> img[v] & 1) == ((u, v) in red_pairs) for u, v in combinations(range(h), 2)):
            return False
    return True


def entropy_bits(q: float) -> float:
    return 0.0 if q in (0, 1) else -q * math.log2(q) - (1 - q) * math.log2(1 - q)
