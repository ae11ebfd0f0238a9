"""Acceptance criteria 1-15.

Each test checks library output against an oracle written here (direct
counting, brute force or a closed form typed in by hand) at the stated
tolerance. A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from eyefree.constructions import (
    b_construction,
    compare_extremal,
    degree_difference_check,
    r_construction,
    smallest_valid_n,
    turan_edge_count,
    weight_B,
    weight_R,
)
from eyefree.extremal import exact_check, first_matching_n, kex_bruteforce, rb_region
from eyefree.igraph import BLUE, GREEN, RED, IGraph, weight
from eyefree.pattern import Pattern, check_findIa, check_findIb, contains, count_copies, eye, is_embedding
from eyefree.randmodel import Sampler, exact_ifree_probability, ifree_probability, structure_distances
from eyefree.typecalc import core_structure_check, describes, enumerate_types, is_p_core, kappa_search, lambda_p
from eyefree.typegraph import TypeGraph

from .conftest import random_igraph
from .oracles import all_injections_embeds, brute_colorable_distance, brute_copies, brute_describes, graph_is_ifree, numeric_lambda

EYE_GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]


def p_grid(a, b):
    return sorted({Fraction(1, 4), Fraction(1, 3), Fraction(a, a + b - 1), Fraction(2, 3), Fraction(3, 4)})


def kappa_by_hand(a, b, p):
    return max(1 - p / a, 1 - (1 - p) / (b - 1))


def balanced(n, t):
    return [n // t + (i < n % t) for i in range(t)]


def clique_weight(sizes, inside):
    """Pairs inside a part get weight ``inside``, pairs across get 1."""
    n = sum(sizes)
    within = sum(s * (s - 1) // 2 for s in sizes)
    return inside * within + (n * (n - 1) // 2 - within)


def w_B(n, a, p):
    return clique_weight(balanced(n, a), 1 - p)


def w_R(n, b, p):
    return clique_weight(balanced(n, b - 1), p)


@pytest.fixture(scope="module")
def kappa_runs():
    t0 = time.perf_counter()
    runs = {(a, b, p): kappa_search(eye(a, b), p, 5) for a, b in EYE_GRID for p in p_grid(a, b)}
    return runs, time.perf_counter() - t0


# 1 ---------------------------------------------------------------------------

def test_criterion_1_kappa_search_equals_closed_form(kappa_runs, note):
    runs, elapsed = kappa_runs
    bad = [(k, r.value) for k, r in runs.items() if r.value != kappa_by_hand(*k)]
    note(f"{len(runs)} cells, kmax=5, {elapsed:.1f}s, mismatches={bad}")
    assert not bad
    assert elapsed < 300


# 2 ---------------------------------------------------------------------------

def test_criterion_2_maximising_types(kappa_runs, note):
    runs, _ = kappa_runs
    wrong = []
    for (a, b, p), r in runs.items():
        lb, lr = 1 - p / a, 1 - (1 - p) / (b - 1)
        expected = set()
        if lb >= lr:
            expected.add(TypeGraph.tau(0, a).canonical())
        if lr >= lb:
            expected.add(TypeGraph.tau(b - 1, 0).canonical())
        if {t.canonical() for t in r.maximizers} != expected:
            wrong.append((a, b, p, [t.to_text() for t in r.maximizers]))
    note(f"grid cells with unexpected maximisers: {wrong}")
    assert not wrong

    b, p = 3, Fraction(1, 3)
    r = kappa_search(eye(1, b), p, 5)
    rr = TypeGraph.build([RED, RED], [GREEN])
    note(f"(1,3,1/3): value {r.value}; maximisers {[t.to_text() for t in r.maximizers]}")
    assert r.value == 1 - Fraction(1, b) == kappa_by_hand(1, b, p)
    assert rr.canonical() in {t.canonical() for t in r.maximizers}
    assert lambda_p(rr, p).value == 1 - Fraction(1, b)
    assert is_p_core(rr, p)
    assert not brute_describes([RED, RED], {(0, 1): GREEN}, 1 + b, set(eye(1, b).edges))


# 3 ---------------------------------------------------------------------------

def test_criterion_3_construction_weights(note):
    t0 = time.perf_counter()
    ps = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    worst_b = worst_r = Fraction(0)
    for p in ps:
        for t in range(1, 6):
            for n in range(1, 10_001):
                vb, cb = weight_B(n, t, p)
                assert vb == w_B(n, t, p)
                # C as the gap between the main term and the counted weight
                gap_b = (1 - p / t) * Fraction(n * (n - 1), 2) + p * (1 - Fraction(1, t)) * Fraction(n, 2) - w_B(n, t, p)
                assert gap_b == cb and 0 <= gap_b <= Fraction(t, 8)
                worst_b = max(worst_b, gap_b / t)
                if t <= 4:
                    b = t + 1
                    vr, cr = weight_R(n, b, p)
                    assert vr == w_R(n, b, p)
                    gap_r = ((1 - (1 - p) / t) * Fraction(n * (n - 1), 2)
                             + (1 - p) * (1 - Fraction(1, t)) * Fraction(n, 2) - w_R(n, b, p))
                    assert gap_r == cr and 0 <= gap_r <= Fraction(t, 8)
                    worst_r = max(worst_r, gap_r / t)
    # pair-by-pair weights of the actual igraphs
    for p in ps:
        for t in range(1, 6):
            for n in range(1, 41):
                assert weight(b_construction(n, t), p) == weight_B(n, t, p)[0]
                if t <= 4:
                    assert weight(r_construction(n, t), p) == weight_R(n, t + 1, p)[0]
    elapsed = time.perf_counter() - t0
    note(f"n<=10^4, a,b<=5; max C/a = {worst_b}, max C'/(b-1) = {worst_r} (bound 1/8); {elapsed:.1f}s")
    assert elapsed < 60


# 4 ---------------------------------------------------------------------------

def test_criterion_4_turan_identity(note):
    checked = 0
    for t in range(1, 7):
        for n in range(0, 31):
            sizes = balanced(n, t)
            e = sum(x * y for x, y in combinations(sizes, 2))
            assert turan_edge_count(n, t) == e
            # 2e = (1 - 1/t) n^2 - sum (a_i - n/t)^2 with a_i the deviations
            assert Fraction(2 * e) == (1 - Fraction(1, t)) * n * n - sum((s - Fraction(n, t)) ** 2 for s in sizes)
            checked += 1
    rng = random.Random(4)
    for _ in range(1000):
        t = rng.randint(1, 6)
        sizes = [rng.randint(0, 12) for _ in range(t)]
        n = sum(sizes)
        e = sum(x * y for x, y in combinations(sizes, 2))
        assert turan_edge_count(n, t, sizes) == e
        checked += 1
    note(f"{checked} part vectors")


# 5 ---------------------------------------------------------------------------

def test_criterion_5_comparison_trichotomy(note):
    for a, b in EYE_GRID:
        for p in p_grid(a, b):
            thr = Fraction(a, a + b - 1)
            if p == thr == Fraction(1, 2):
                expect = "="
            elif p > thr or (p == thr and a < b - 1):
                expect = "R"
            else:
                expect = "B"
            for n in range(20, 201):
                wb, wr = w_B(n, a, p), w_R(n, b, p)
                got = "=" if wb == wr else ("R" if wr > wb else "B")
                assert got == expect, (a, b, p, n)
                assert compare_extremal(n, a, b, p).order == expect
            note(f"(a,b,p)=({a},{b},{p}): {expect}; smallest valid n = {smallest_valid_n(a, b, p, 200)}")


# 6 ---------------------------------------------------------------------------

def test_criterion_6_increment_bound(note):
    cells = 0
    for a, b in EYE_GRID:
        for p in p_grid(a, b):
            thr = Fraction(a, a + b - 1)
            kappa = kappa_by_hand(a, b, p)
            for n in range(5, 501):
                if p >= thr:
                    assert w_R(n, b, p) - w_R(n - 1, b, p) >= kappa * n - 3
                if p <= thr:
                    assert w_B(n, a, p) - w_B(n - 1, a, p) >= kappa * n - 3
                assert degree_difference_check(a, b, p, n)
            cells += 1
    note(f"{cells} cells, n in [5, 500]")


# 7 ---------------------------------------------------------------------------

def test_criterion_7_lambda_certificates_and_numeric_oracle(note):
    ps = sorted({p for a, b in EYE_GRID for p in p_grid(a, b)})
    worst = 0.0
    count = 0
    for p in ps:
        for k in range(1, 5):
            for tau in enumerate_types(k):
                r = lambda_p(tau, p)
                W = tau.weight_matrix(p)
                x = r.x
                assert all(v >= 0 for v in x) and sum(x) == 1
                # stationarity on the support and KKT off it, in exact arithmetic
                row = [sum(W[u][v] * x[v] for v in range(k)) for u in range(k)]
                val = sum(x[u] * row[u] for u in range(k))
                assert val == r.value
                for u in range(k):
                    if x[u] > 0:
                        assert row[u] == r.value
                    else:
                        assert row[u] <= r.value
                Wf = np.array([[float(v) for v in rw] for rw in W])
                err = abs(numeric_lambda(Wf) - float(r.value))
                worst = max(worst, err)
                count += 1
    note(f"{count} (type, p) instances, k<=4; worst numeric gap {worst:.2e}")
    assert worst < 1e-9


# 8 ---------------------------------------------------------------------------

def _lambda_oracle_is_core(tau, p):
    lam = lambda_p(tau, p).value
    k = tau.k
    for size in range(1, k):
        for keep in combinations(range(k), size):
            if lambda_p(tau.sub(keep), p).value >= lam:
                return False
    return True


def test_criterion_8_core_types(note):
    half = Fraction(1, 2)
    cores = violations = 0
    for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        for k in range(1, 5):
            for tau in enumerate_types(k):
                core = _lambda_oracle_is_core(tau, p)
                assert core == is_p_core(tau, p)
                if not core:
                    continue
                cores += 1
                vcol = [tau.vcolor(u) for u in range(k)]
                for u, v in combinations(range(k), 2):
                    c = tau.ecolor(u, v)
                    ok = (c == GREEN or (c == BLUE and vcol[u] == vcol[v] == RED and p < half)
                          or (c == RED and vcol[u] == vcol[v] == BLUE and p > half))
                    violations += not ok
                for a, b in EYE_GRID:
                    H = eye(a, b)
                    ecol = {(u, v): tau.ecolor(u, v) for u, v in combinations(range(k), 2)}
                    d = brute_describes(vcol, ecol, H.h, set(H.edges))
                    assert d == describes(tau, H)
                    if not d:
                        violations += len(set(vcol)) > 1
                        if BLUE in vcol:
                            violations += k > a
                        if RED in vcol:
                            violations += any(tau.green_degree(u) >= b - 1 for u in range(k))
                    assert core_structure_check(tau, p, (a, b)).ok
    note(f"{cores} p-core (type, p) pairs checked; violations {violations}")
    assert violations == 0


# 9 ---------------------------------------------------------------------------

def test_criterion_9_small_n_extremal_search(note):
    t0 = time.perf_counter()
    for p in (Fraction(1, 2), Fraction(3, 4)):
        verdicts = []
        for n in (4, 5, 6, 7):
            v = exact_check(2, 2, p, n, mode="exhaustive" if n <= 6 else "bnb")
            floor = max(weight(b_construction(n, 2), p), weight(r_construction(n, 1), p))
            assert v.optimum >= floor
            if n <= 5:
                bb = kex_bruteforce(eye(2, 2), n, p, "bnb")
                assert bb.optimum == v.optimum
            verdicts.append(v)
            note(f"p={p} n={n}: optimum {v.optimum}, construction {floor}, "
                 f"{v.extremal_count} extremal class(es), verdict {v.verdict}")
        note(f"p={p}: prediction holds from n = {first_matching_n(verdicts)}")
    elapsed = time.perf_counter() - t0
    note(f"{elapsed:.1f}s")
    assert elapsed < 1800


# 10 --------------------------------------------------------------------------

def test_criterion_10_containment_oracle(note):
    rng = random.Random(10)
    mismatches = 0
    for _ in range(10_000):
        n = rng.randint(1, 7)
        h = rng.randint(1, min(5, n))
        C = random_igraph(rng, n, white=True)
        red = frozenset(e for e in combinations(range(h), 2) if rng.random() < 0.5)
        H = Pattern(h, red)
        emb = contains(C, H)
        if (emb is not None) != all_injections_embeds(C, h, set(red)):
            mismatches += 1
        elif emb is not None and not is_embedding(C, H, emb):
            mismatches += 1
        if count_copies(C, H) != brute_copies(C, h, set(red)):
            mismatches += 1
    note(f"10^4 instances, mismatches {mismatches}")
    assert mismatches == 0


# 11 --------------------------------------------------------------------------

def _free_by_brute_force(n, H):
    """Every eye-free igraph on [n] (no whites), checked by all injections."""
    red = set(H.edges)
    pairs = list(combinations(range(n), 2))
    out = set()
    for cols in np.ndindex(*([3] * len(pairs))):
        G = IGraph.from_upper(n, [c + 1 for c in cols])
        if not all_injections_embeds(G, H.h, red):
            cnt = G.counts()
            N = len(pairs)
            out.add((Fraction(cnt[RED] + cnt[GREEN], N), Fraction(cnt[BLUE] + cnt[GREEN], N)))
    return out


def test_criterion_11_region(note):
    a, b = 2, 2
    slacks = []
    for n in (4, 5):
        rep = rb_region(a, b, n)
        pts = {(pt.R, pt.B) for pt in rep.points}
        if n == 4:
            assert pts == _free_by_brute_force(n, eye(a, b))
        for R, B in pts:
            assert R <= 1 and B <= 1 and R + B >= 1
        s = max(Fraction(0), max((b - 1) * R + a * B - (a + b - 2) for R, B in pts))
        s_sw = max(Fraction(0), max(a * R + (b - 1) * B - (a + b - 2) for R, B in pts))
        assert s == rep.slack
        slacks.append(s)
        note(f"n={n}: {len(pts)} points, slack s(n) = {s}; with R and B exchanged {s_sw}")
    assert slacks[1] < slacks[0]


# 12 --------------------------------------------------------------------------

def _eye22_free_counts(n):
    """Number of eye(2,2)-ifree graphs on [n] by edge count.

    An induced copy is a 4-set spanning exactly 5 edges, so this is a popcount
    over all 2^C(n,2) edge masks.
    """
    pairs = list(combinations(range(n), 2))
    N = len(pairs)
    masks = np.arange(1 << N, dtype=np.uint32)
    free = np.ones(1 << N, dtype=bool)
    for quad in combinations(range(n), 4):
        sub = 0
        for i, (u, v) in enumerate(pairs):
            if u in quad and v in quad:
                sub |= 1 << i
        bits = masks & np.uint32(sub)
        pc = np.zeros_like(bits)
        for i in range(N):
            pc += (bits >> np.uint32(i)) & np.uint32(1)
        free &= pc != 5
    ecount = np.zeros(1 << N, dtype=np.int64)
    for i in range(N):
        ecount += (masks >> np.uint32(i)) & np.uint32(1)
    return np.bincount(ecount[free], minlength=N + 1), N


def test_criterion_12_conditioned_acceptance(note):
    H = eye(2, 2)
    p = Fraction(1, 2)
    counts, N = _eye22_free_counts(7)
    exact = sum(Fraction(int(c)) * p ** e * (1 - p) ** (N - e) for e, c in enumerate(counts))
    assert exact_ifree_probability(7, p, H) == exact

    trials = 10**6
    sampler = Sampler(7, p, seed=12, budget=trials)
    used = accepted = 0
    rp = set(H.edges)
    while True:
        G, t = sampler.draw_conditioned(H)
        if used + t > trials:
            break
        used += t
        accepted += 1
        if accepted <= 200:
            assert graph_is_ifree(G.adj, 7, H.h, rp)
    ph = accepted / used
    z = 3.0
    denom = 1 + z * z / used
    centre = (ph + z * z / (2 * used)) / denom
    half = z * math.sqrt(ph * (1 - ph) / used + z * z / (4 * used * used)) / denom
    note(f"n=7: exact {exact} = {float(exact):.6f}; sampler {accepted}/{used} = {ph:.6f}, "
         f"3-sigma Wilson [{centre - half:.6f}, {centre + half:.6f}]")
    assert centre - half <= float(exact) <= centre + half

    for n in (7, 8):
        st = ifree_probability(n, p, H, samples=10**6, seed=100 + n)
        # at p=1/2 each construction has probability 2^-(non-green pairs)
        green = (n // 2) * (n - n // 2)
        bound = 2.0 ** -(n * (n - 1) // 2 - green)
        assert st.bound == pytest.approx(bound)
        note(f"n={n}: estimate {st.estimate:.6f} (sigma {st.sigma:.1e}) vs construction bound {bound:.6f}")
        assert st.estimate >= bound - 3 * st.sigma and st.bound_ok


# 13 --------------------------------------------------------------------------

def _blowup(rng, nparts, m, inside_bit, extra):
    n = nparts * m + extra
    parts = [list(range(i * m, (i + 1) * m)) for i in range(nparts)]
    inside_cols = (inside_bit, GREEN)
    cols = {}
    for i, P in enumerate(parts):
        for u, v in combinations(P, 2):
            cols[(u, v)] = rng.choice(inside_cols)
        for Q in parts[i + 1:]:
            for u in P:
                for v in Q:
                    cols[(u, v)] = GREEN
    for z in range(nparts * m, n):
        for y in range(z):
            cols[(y, z)] = rng.choice((RED, BLUE, GREEN))
    return cols, parts, n


def _has(rng, bit):
    return rng.choice((bit, GREEN))


def _findIa_instance(rng):
    a, b = rng.choice(EYE_GRID)
    m = rng.randint(b + 1, b + 3)
    kind = rng.choice(("vertex", "edge")) if a >= 2 else "vertex"
    cols, parts, n = _blowup(rng, a, m, BLUE, 1 if kind == "vertex" else 2)
    z = a * m
    j = rng.randrange(a)
    if kind == "vertex":
        for i, P in enumerate(parts):
            for y in rng.sample(P, b if i == j else 1):
                cols[(y, z)] = _has(rng, RED)
    else:
        z2 = z + 1
        cols[(z, z2)] = _has(rng, RED)
        skip = rng.choice([i for i in range(a) if i != j])
        for i, P in enumerate(parts):
            if i == skip:
                continue
            for y in rng.sample(P, b if i == j else 1):
                cols[(y, z)] = _has(rng, RED)
                cols[(y, z2)] = _has(rng, RED)
    return IGraph.from_pairs(n, cols), parts, a, b


def _findIb_instance(rng):
    a, b = rng.choice(EYE_GRID)
    m = rng.randint(a + 2, a + 4)
    kind = rng.choice(("vertex", "edge"))
    cols, parts, n = _blowup(rng, b - 1, m, RED, 1 if kind == "vertex" else 2)
    z = (b - 1) * m
    j = rng.randrange(b - 1)
    if kind == "vertex":
        for i, P in enumerate(parts):
            chosen = rng.sample(P, a + 2 if i == j else 1)
            cols[(chosen[0], z)] = _has(rng, BLUE)
            for y in chosen[1:]:
                cols[(y, z)] = _has(rng, RED)
    else:
        z2 = z + 1
        cols[(z, z2)] = _has(rng, BLUE)
        others = [i for i in range(b - 1) if i != j]
        skip = rng.choice(others) if others else None
        for i, P in enumerate(parts):
            if i == skip:
                continue
            chosen = rng.sample(P, a + 2 if i == j else 1)
            cols[(chosen[0], z)] = _has(rng, BLUE)
            cols[(chosen[0], z2)] = _has(rng, BLUE)
            for y in chosen[1:]:
                cols[(y, z)] = _has(rng, RED)
                cols[(y, z2)] = _has(rng, RED)
    return IGraph.from_pairs(n, cols), parts, a, b


def test_criterion_13_forbidden_configurations(note):
    rng = random.Random(13)
    failures = 0
    for make, check in ((_findIa_instance, check_findIa), (_findIb_instance, check_findIb)):
        for _ in range(1000):
            G, parts, a, b = make(rng)
            H = eye(a, b)
            rep = check(G, parts, a, b)
            emb = contains(G, H)
            if rep.ok or emb is None or not is_embedding(G, H, emb):
                failures += 1
            elif not all(is_embedding(G, H, v.witness) for v in rep.violations):
                failures += 1
    note(f"2 x 10^3 instances, failures {failures}")
    assert failures == 0


# 14 --------------------------------------------------------------------------

def test_criterion_14_structure_of_conditioned_samples(note):
    H = eye(2, 2)
    for n in (8, 10, 12):
        sampler = Sampler(n, Fraction(1, 2), seed=1400 + n)
        ds = []
        for _ in range(25):
            G, _ = sampler.draw_conditioned(H)
            d = structure_distances(G, 2, 2)
            assert d["exact"]
            if n == 8:
                assert d["d_partite"] == brute_colorable_distance(list(G.adj), n, 2)
                assert d["d_copartite"] == brute_colorable_distance(list(G.complement().adj), n, 1)
            ds.append(d["d_min"] / n**2)
        mean = sum(ds) / len(ds)
        assert math.isfinite(mean)
        note(f"n={n}: mean d/n^2 = {mean:.4f} over {len(ds)} samples")


# 15 --------------------------------------------------------------------------

def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def test_criterion_15_deterministic_reports(tmp_path, note):
    texts = []
    for threads in (1, 8):
        out = tmp_path / f"facts_{threads}.json"
        cmd = [sys.executable, "-m", "eyefree", "verify", "--suite", "facts", "--seed", "42",
               "--threads", str(threads), "--out", str(out)]
        res = subprocess.run(cmd, capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        texts.append(json.dumps(_strip_timing(json.loads(out.read_text())), indent=2, sort_keys=True).encode())
    note(f"report size {len(texts[0])} bytes; identical = {texts[0] == texts[1]}")
    assert texts[0] == texts[1]
