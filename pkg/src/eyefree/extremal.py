"""Exact search for maximum-weight pattern-free igraphs, the (R, B) region and
the fixed-size exponent.

Exhaustive mode builds the pattern-free igraphs on [m] up to isomorphism one
vertex at a time. Being pattern-free is hereditary, so every class on m
vertices extends a class on m - 1 vertices; new copies must use the new
vertex, which is all the freeness test checks. Classes are deduplicated by
canonical form.

Branch-and-bound mode colours pairs one at a time and prunes with the bound
current weight + (remaining pairs) * 1, plus a containment test through the
most recently closed pair.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import kernels
from .constructions import b_construction, r_construction, threshold, weight_B, weight_R
from .errors import TheoremCheckError
from .igraph import BLUE, GREEN, RED, IGraph, as_rat, check_probability, weight
from .pattern import Pattern, eye, is_free

EXHAUSTIVE_MAX_N = 7
BNB_MAX_N = 9


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class SearchReport:
    optimum: Fraction
    extremal: list[IGraph]
    nodes: int
    pruned: int
    wall_time: float
    config: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        return config_hash(self.config)


# level-wise class generation ------------------------------------------------

def _masks(n: int, codes: bytes) -> tuple[list[int], list[int]]:
    red = [0] * n
    blue = [0] * n
    for u in range(n):
        row = u * n
        for v in range(n):
            c = codes[row + v] if u != v else 0
            if c & 1:
                red[u] |= 1 << v
            if c & 2:
                blue[u] |= 1 << v
    return red, blue


def _extensions(base: bytes, m: int, H: Pattern, wts: dict[int, int] | None = None,
                floor: int | None = None):
    """Yield (codes, int_weight_gain) for free one-vertex extensions of ``base`` (m-1 vertices)."""
    k = m - 1
    pr, pb = H.compiled
    red0, blue0 = _masks(k, base)
    rows = [base[u * k:(u + 1) * k] for u in range(k)]
    new = 1 << k
    full = (1 << m) - 1
    check = H.h <= m
    for col in product((GREEN, RED, BLUE), repeat=k):
        gain = 0
        if wts is not None:
            gain = sum(wts[c] for c in col)
            if floor is not None and gain < floor:
                continue
        red = red0 + [0]
        blue = blue0 + [0]
        for u, c in enumerate(col):
            if c & 1:
                red[u] |= new
                red[k] |= 1 << u
            if c & 2:
                blue[u] |= new
                blue[k] |= 1 << u
        if check and kernels.find_embedding(red, blue, full, k, pr, pb) is not None:
            continue
        codes = b"".join(rows[u] + bytes((col[u],)) for u in range(k)) + bytes(col) + b"\x00"
        yield codes, gain


def _extend_level(args):
    bases, m, H = args
    out = {}
    count = 0
    for base in bases:
        for codes, _ in _extensions(base, m, H):
            count += 1
            out.setdefault(kernels.canonical_code(m, codes), codes)
    return out, count


def _canon_to_codes(n: int, canon: bytes) -> bytes:
    codes = bytearray(n * n)
    pos = 0
    for j in range(n):
        pos += 1  # diagonal
        for i in range(j):
            codes[i * n + j] = codes[j * n + i] = canon[pos]
            pos += 1
    return bytes(codes)


def _chunks(seq: Sequence, parts: int) -> list[list]:
    return [list(seq[i::parts]) for i in range(parts)]


def free_classes(H: Pattern, n: int, threads: int = 1) -> dict[bytes, IGraph]:
    """All H-free igraphs on n vertices up to isomorphism, keyed by canonical code."""
    level = {b"": b""} if n >= 0 else {}
    visited = 0
    for m in range(1, n + 1):
        bases = [level[c] for c in sorted(level)]
        merged: dict[bytes, bytes] = {}
        if threads > 1 and len(bases) > 64:
            with ProcessPoolExecutor(threads) as ex:
                for out, cnt in ex.map(_extend_level, [(c, m, H) for c in _chunks(bases, threads)]):
                    visited += cnt
                    for key, val in out.items():
                        merged.setdefault(key, val)
        else:
            out, cnt = _extend_level((bases, m, H))
            visited += cnt
            merged = out
        level = {c: _canon_to_codes(m, c) for c in merged}
    return {c: IGraph(n, level[c]) for c in sorted(level)}


def naive_free_classes(H: Pattern, n: int) -> dict[bytes, IGraph]:
    """Reference: every colouring of every pair, filtered and deduplicated."""
    out = {}
    npairs = n * (n - 1) // 2
    for cols in product((RED, BLUE, GREEN), repeat=npairs):
        G = IGraph.from_upper(n, cols)
        if is_free(G, H):
            out.setdefault(G.canonical(), G)
    return {c: out[c] for c in sorted(out)}


# kex ---------------------------------------------------------------------------

def _int_weights(p: Fraction) -> dict[int, int]:
    d, s = p.denominator, p.numerator
    return {RED: s, BLUE: d - s, GREEN: d}


def _int_weight(G: IGraph, wts: dict[int, int]) -> int:
    return sum(wts[c] for _, _, c in G.pairs())


def _construction_floor(H: Pattern, n: int, p: Fraction) -> Fraction:
    if H.eye_params is None:
        return Fraction(0)
    a, b = H.eye_params
    return max(weight_B(n, a, p)[0], weight_R(n, b, p)[0])


def _exhaustive(H: Pattern, n: int, p: Fraction, threads: int):
    wts = _int_weights(p)
    d = p.denominator
    if n <= 1:
        return Fraction(0), [IGraph(n, bytes(n * n))], 1, 0
    prev = free_classes(H, n - 1, threads)
    # start from a feasible value so the last level prunes early
    best = int(_construction_floor(H, n, p) * d)
    found: dict[bytes, IGraph] = {}
    nodes = pruned = 0
    for base in prev.values():
        bw = _int_weight(base, wts)
        for codes, gain in _extensions(base.codes, n, H, wts, best - bw):
            nodes += 1
            w = bw + gain
            if w < best:
                pruned += 1
                continue
            if w > best:
                best = w
                found = {}
            G = IGraph(n, codes)
            found.setdefault(G.canonical(), G)
    return Fraction(best, d), [found[c] for c in sorted(found)], nodes, pruned


def _bnb_task(args):
    n, pr, pb, wr, wbl, wg, lower, prefix = args
    return kernels.kex_bnb(n, pr, pb, wr, wbl, wg, lower, list(prefix))


def _bnb(H: Pattern, n: int, p: Fraction, threads: int):
    wts = _int_weights(p)
    d = p.denominator
    pr, pb = H.compiled
    lower = int(_construction_floor(H, n, p) * d)
    npairs = n * (n - 1) // 2
    depth = min(2, npairs)
    prefixes = list(product((GREEN, RED, BLUE), repeat=depth))
    tasks = [(n, pr, pb, wts[RED], wts[BLUE], wts[GREEN], lower, pre) for pre in prefixes]
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            results = list(ex.map(_bnb_task, tasks))
    else:
        results = [_bnb_task(t) for t in tasks]
    best = max(r[0] for r in results)
    found: dict[bytes, IGraph] = {}
    nodes = sum(r[2] for r in results)
    pruned = sum(r[3] for r in results)
    for r in results:
        if r[0] != best:
            continue
        for leaf in r[1]:
            G = IGraph.from_colex(n, leaf)
            found.setdefault(G.canonical(), G)
    return Fraction(best, d), [found[c] for c in sorted(found)], nodes, pruned


def kex_bruteforce(H: Pattern, n: int, p, mode: str = "exhaustive", threads: int = 1) -> SearchReport:
    """Maximum p-weight of an H-free igraph on n vertices and all optimal igraphs up to isomorphism."""
    p = as_rat(p)
    check_probability(p)
    limit = {"exhaustive": EXHAUSTIVE_MAX_N, "bnb": BNB_MAX_N}.get(mode)
    if limit is None:
        raise ValueError(f"unknown mode {mode!r}")
    if not 0 <= n <= limit:
        raise ValueError(f"{mode} mode supports n <= {limit}")
    t0 = time.perf_counter()
    run = _exhaustive if mode == "exhaustive" else _bnb
    opt, graphs, nodes, pruned = run(H, n, p, threads)
    elapsed = time.perf_counter() - t0
    for G in graphs:
        if not is_free(G, H) or weight(G, p) != opt:
            raise TheoremCheckError(f"reported extremal igraph fails re-verification: {G!r}")
    config = {"pattern": H.to_text(), "n": n, "p": str(p), "mode": mode}
    return SearchReport(opt, graphs, nodes, pruned, elapsed, config)


# comparison with the predicted extremal graphs ---------------------------------------------

def predicted_extremal(a: int, b: int, p, n: int) -> list[IGraph]:
    p = as_rat(p)
    thr = threshold(a, b)
    out = []
    if p > thr or (p == thr and a <= b - 1):
        out.append(r_construction(n, b - 1))
    if p < thr or (p == thr and a >= b - 1):
        out.append(b_construction(n, a))
    return out


@dataclass
class ExactVerdict:
    a: int
    b: int
    p: Fraction
    n: int
    verdict: str  # matches | value-matches-but-extra-extremal-graphs | differs
    optimum: Fraction
    predicted_weight: Fraction
    extremal_count: int
    report: SearchReport


def exact_check(a: int, b: int, p, n: int, mode: str = "exhaustive", threads: int = 1) -> ExactVerdict:
    p = as_rat(p)
    rep = kex_bruteforce(eye(a, b), n, p, mode, threads)
    pred = predicted_extremal(a, b, p, n)
    pw = max(weight(G, p) for G in pred)
    pred_c = {G.canonical() for G in pred}
    got_c = {G.canonical() for G in rep.extremal}
    if rep.optimum < pw:
        raise TheoremCheckError(f"optimum {rep.optimum} below a feasible construction {pw}")
    if got_c == pred_c:
        verdict = "matches"
    elif rep.optimum == pw and pred_c <= got_c:
        verdict = "value-matches-but-extra-extremal-graphs"
    else:
        verdict = "differs"
    return ExactVerdict(a, b, p, n, verdict, rep.optimum, pw, len(rep.extremal), rep)


def first_matching_n(verdicts: Sequence[ExactVerdict]) -> int | None:
    """Smallest n from which every later verdict in the list is 'matches'."""
    start = None
    for v in sorted(verdicts, key=lambda v: v.n):
        if v.verdict == "matches":
            start = v.n if start is None else start
        else:
            start = None
    return start


# (R, B) region -------------------------------------------------------------------

@dataclass(frozen=True)
class RegionPoint:
    R: Fraction
    B: Fraction
    witness: IGraph


@dataclass
class RegionReport:
    a: int
    b: int
    n: int
    points: list[RegionPoint]
    slack: Fraction  # max over points of (b-1)R + aB - (a+b-2), floored at 0
    slack_swapped: Fraction  # same with the roles of R and B exchanged: aR + (b-1)B


def rb_region(a: int, b: int, n: int, threads: int = 1) -> RegionReport:
    """All (|C_r|/N, |C_b|/N) attained by eye-free igraphs on [n], N = C(n,2)."""
    if not 2 <= n <= 6:
        raise ValueError("rb_region supports 2 <= n <= 6")
    H = eye(a, b)
    N = n * (n - 1) // 2
    pts: dict[tuple[Fraction, Fraction], IGraph] = {}
    for G in free_classes(H, n, threads).values():
        cnt = G.counts()
        r = cnt[RED] + cnt[GREEN]
        bl = cnt[BLUE] + cnt[GREEN]
        key = (Fraction(r, N), Fraction(bl, N))
        pts.setdefault(key, G)
    points = [RegionPoint(R, B, pts[(R, B)]) for R, B in sorted(pts)]
    for pt in points:
        if not (pt.R <= 1 and pt.B <= 1 and pt.R + pt.B >= 1):
            raise TheoremCheckError(f"region point out of the unit box: {pt.R}, {pt.B}")
        if not is_free(pt.witness, H):
            raise TheoremCheckError("region witness contains the eye")
    line = a + b - 2
    slack = max([Fraction(0)] + [(b - 1) * pt.R + a * pt.B - line for pt in points])
    slack_sw = max([Fraction(0)] + [a * pt.R + (b - 1) * pt.B - line for pt in points])
    return RegionReport(a, b, n, points, slack, slack_sw)


# fixed-size model ---------------------------------------------------------------------

def binary_entropy(q: float) -> float:
    if q < 0 or q > 1:
        raise ValueError("entropy argument outside [0, 1]")
    if q in (0, 1):
        return 0.0
    return -q * math.log2(q) - (1 - q) * math.log2(1 - q)


def fixed_size_exponent(x: float, y: float, p: float) -> float:
    """x H((p-y)/x) - H(p): the per-pair log2 probability of fitting the container."""
    if not (0 < x <= 1 and 0 <= y <= p <= 1):
        raise ValueError("need 0 < x <= 1 and 0 <= y <= p <= 1")
    q = (p - y) / x
    if not 0 <= q <= 1:
        raise ValueError("(p - y)/x must lie in [0, 1]")
    return x * binary_entropy(q) - binary_entropy(p)


def log2_binomial(n: int, k: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def fixed_size_exponent_direct(x: float, y: float, p: float, N: int) -> float:
    """N^-1 log2 [C(xN, (p-y)N) / C(N, pN)] with rounded arguments."""
    return (log2_binomial(round(x * N), round((p - y) * N)) - log2_binomial(N, round(p * N))) / N
