"""Verification suites: each check returns a JSON-ready record.

Checks are deterministic given the seed; with several threads they run in a
process pool but the report lists them in a fixed order, so the output does
not depend on the thread count. Timing lives under a separate key.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations

from . import __version__
from .constructions import (
    b_construction,
    balanced_sizes,
    clique_construction,
    clique_weight_from_sizes,
    compare_extremal,
    degree_difference_check,
    predicted_order,
    r_construction,
    smallest_valid_n,
    threshold,
    turan_edge_count,
    weight_B,
    weight_R,
)
from .errors import TheoremCheckError
from .extremal import config_hash, exact_check, first_matching_n, kex_bruteforce, rb_region
from .igraph import BLUE, GREEN, RED, IGraph, degrees, weight
from .pattern import eye
from .randmodel import colordeg_check, exact_ifree_probability, ifree_probability
from .typecalc import core_structure_check, enumerate_types, kappa_formula, kappa_search, lambda_p
from .typegraph import TypeGraph

SUITES = ("facts", "types", "exact", "region", "random")
EYE_GRID = ((2, 2), (2, 3), (3, 2), (3, 3))


def frac(x) -> dict:
    x = Fraction(x)
    return {"exact": f"{x.numerator}/{x.denominator}", "decimal": float(x)}


def p_grid(a: int, b: int) -> list[Fraction]:
    vals = {Fraction(1, 4), Fraction(1, 3), threshold(a, b), Fraction(2, 3), Fraction(3, 4)}
    return sorted(vals)


def _record(name: str, statement: str, passed: bool, **details) -> dict:
    return {"name": name, "statement": statement, "passed": bool(passed), "details": details}


# facts -----------------------------------------------------------------------

def check_turan(seed: int, n_max: int = 30, t_max: int = 6, random_vectors: int = 1000) -> dict:
    rng = random.Random(seed)
    count = 0
    for t in range(1, t_max + 1):
        for n in range(t, n_max + 1):
            turan_edge_count(n, t)
            count += 1
    for _ in range(random_vectors):
        t = rng.randint(1, t_max)
        sizes = [rng.randint(0, n_max // t + 3) for _ in range(t)]
        n = sum(sizes)
        e = turan_edge_count(n, t, sizes)
        direct = sum(x * y for x, y in combinations(sizes, 2))
        if e != direct:
            raise TheoremCheckError(f"edge count {e} differs from direct count {direct} for {sizes}")
        count += 1
    return _record("turan-identity", "2e = (1 - 1/t) n^2 - sum a_i^2 for complete t-partite graphs", True,
                   instances=count)


def check_extremal_weights(n_max: int = 10_000, ab_max: int = 5, direct_n_max: int = 40) -> dict:
    ps = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    worst = Fraction(0)
    count = 0
    for t in range(1, ab_max + 1):
        for p in ps:
            for n in range(1, n_max + 1):
                sizes = balanced_sizes(n, t).sizes
                vb, cb = weight_B(n, t, p)
                vr, cr = weight_R(n, t + 1, p)
                if vb != clique_weight_from_sizes(sizes, 1 - p) or vr != clique_weight_from_sizes(sizes, p):
                    raise TheoremCheckError(f"closed form differs from part-size count at n={n}, t={t}, p={p}")
                if not (0 <= cb <= Fraction(t, 8) and 0 <= cr <= Fraction(t, 8)):
                    raise TheoremCheckError(f"residual outside [0, t/8] at n={n}, t={t}, p={p}")
                worst = max(worst, cb / t * 8 if cb else 0, cr / t * 8 if cr else 0)
                if n <= direct_n_max:
                    if vb != weight(b_construction(n, t), p) or vr != weight(r_construction(n, t), p):
                        raise TheoremCheckError(f"closed form differs from pair count at n={n}, t={t}, p={p}")
                count += 1
    return _record("construction-weights", "closed forms for both constructions with 0 <= C <= (parts)/8", True,
                   instances=count, max_residual_over_bound=frac(worst))


def check_compare(n_lo: int = 20, n_hi: int = 200) -> dict:
    cells = []
    ok = True
    for a, b in EYE_GRID:
        for p in p_grid(a, b):
            bad = [n for n in range(n_lo, n_hi + 1) if not compare_extremal(n, a, b, p).matches]
            n0 = smallest_valid_n(a, b, p, n_hi)
            cells.append({"a": a, "b": b, "p": frac(p), "predicted": predicted_order(a, b, p),
                          "smallest_valid_n": n0, "mismatches": bad})
            ok &= not bad
    return _record("construction-comparison", "heavier construction is decided by p versus a/(a+b-1)", ok,
                   cells=cells)


def check_difference(n_lo: int = 5, n_hi: int = 500) -> dict:
    ok = True
    failures = []
    for a, b in EYE_GRID:
        for p in p_grid(a, b):
            for n in range(n_lo, n_hi + 1):
                if not degree_difference_check(a, b, p, n):
                    ok = False
                    failures.append({"a": a, "b": b, "p": frac(p), "n": n})
    return _record("weight-increment", "w(X(n)) - w(X(n-1)) >= kappa n - 3", ok, failures=failures)


def random_igraph(rng: random.Random, n: int, white: bool = False) -> IGraph:
    cols = (RED, BLUE, GREEN, 0) if white else (RED, BLUE, GREEN)
    return IGraph.from_upper(n, [rng.choice(cols) for _ in range(n * (n - 1) // 2)])


def check_colordeg(seed: int, instances: int = 1000, n: int = 10) -> dict:
    rng = random.Random(seed)
    fails = []
    ps = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4))
    for i in range(instances):
        G = random_igraph(rng, n)
        a, b = rng.choice(EYE_GRID)
        p = rng.choice(ps)
        C = Fraction(rng.randint(0, 4 * n), 2)
        bad = colordeg_check(G, p, a, b, C)
        if bad:
            fails.append({"instance": i, "bad": bad})
    for a, b in EYE_GRID:
        for p in ps:
            if colordeg_check(b_construction(20, a), p, a, b, 0) or colordeg_check(r_construction(20, b - 1), p, a, b, 0):
                fails.append({"construction": [a, b], "p": frac(p)})
    return _record("colour-degrees", "large p-degree forces the four colour-degree lower bounds", not fails,
                   instances=instances, failures=fails)


def check_degree_sums(seed: int, instances: int = 300) -> dict:
    rng = random.Random(seed)
    for _ in range(instances):
        n = rng.randint(1, 12)
        G = random_igraph(rng, n, white=True)
        p = Fraction(rng.randint(0, 8), 8)
        dv = [degrees(G, x, p) for x in range(n)]
        cnt = G.counts()
        cr = cnt[RED] + cnt[GREEN]
        cb = cnt[BLUE] + cnt[GREEN]
        if (sum(d.d_r for d in dv) != 2 * cr or sum(d.d_b for d in dv) != 2 * cb
                or sum(d.d_g for d in dv) != 2 * cnt[GREEN] or sum(d.d_p for d in dv) != 2 * weight(G, p)):
            raise TheoremCheckError(f"degree sum identity fails on {G!r}")
    return _record("degree-sums", "colour degree sums are twice the colour class sizes", True,
                   instances=instances)


# types -----------------------------------------------------------------------

def check_kappa_grid(kmax: int = 5) -> dict:
    cells = []
    ok = True
    for a, b in EYE_GRID:
        for p in p_grid(a, b):
            res = kappa_search(eye(a, b), p, kmax)
            form = kappa_formula(a, b, p)
            expected = set()
            if form.regime in ("B", "both"):
                expected.add(TypeGraph.tau(0, a).canonical())
            if form.regime in ("R", "both"):
                expected.add(TypeGraph.tau(b - 1, 0).canonical())
            got = {t.canonical() for t in res.maximizers}
            cell_ok = res.value == form.value and got == expected
            ok &= cell_ok
            cells.append({"a": a, "b": b, "p": frac(p), "search": frac(res.value), "formula": frac(form.value),
                          "regime": form.regime, "maximizers": [t.to_text() for t in res.maximizers],
                          "passed": cell_ok})
    return _record("kappa-search", "searched kappa equals the two-branch formula; maximisers are the two cliques",
                   ok, cells=cells)


def check_a1_counterexample() -> dict:
    a, b, p = 1, 3, Fraction(1, 3)
    res = kappa_search(eye(a, b), p, 5)
    rr = TypeGraph.build([RED, RED], [GREEN])
    found = rr.canonical() in {t.canonical() for t in res.maximizers}
    ok = found and res.value == 1 - Fraction(1, b) == kappa_formula(a, b, p).value
    return _record("a1-extra-maximiser", "for a=1, p=1/b a red type with green degree b-2 reaches kappa", ok,
                   value=frac(res.value), maximizers=[t.to_text() for t in res.maximizers])


def check_core_structure(kmax: int = 4) -> dict:
    viol = []
    cores = 0
    for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        for k in range(1, kmax + 1):
            for tau in enumerate_types(k):
                for ab in EYE_GRID:
                    rep = core_structure_check(tau, p, ab)
                    if not rep.p_core:
                        break
                    if ab == EYE_GRID[0]:
                        cores += 1
                    if not rep.ok:
                        viol.append({"type": tau.to_text(), "p": frac(p), "eye": ab, "violations": rep.violations})
    return _record("core-structure", "p-core types: edge colours, one vertex colour, size and green-degree bounds",
                   not viol, p_core_types=cores, violations=viol)


def check_lambda_certificates(kmax: int = 4) -> dict:
    bad = []
    count = 0
    for p in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)):
        for k in range(1, kmax + 1):
            for tau in enumerate_types(k):
                res = lambda_p(tau, p)
                count += 1
                if not res.check():
                    bad.append({"type": tau.to_text(), "p": frac(p)})
    return _record("lambda-certificates", "stationary on the support, KKT off it, exactly", not bad,
                   instances=count, failures=bad)


# exact / region / random ---------------------------------------------------------

def check_exact_small(ns=(4, 5, 6)) -> dict:
    rows = []
    ok = True
    for p in (Fraction(1, 2), Fraction(3, 4)):
        verdicts = []
        for n in ns:
            v = exact_check(2, 2, p, n)
            verdicts.append(v)
            feasible = v.optimum >= v.predicted_weight
            ok &= feasible
            rows.append({"p": frac(p), "n": n, "verdict": v.verdict, "optimum": frac(v.optimum),
                         "construction": frac(v.predicted_weight), "extremal_count": v.extremal_count,
                         "nodes": v.report.nodes})
        rows.append({"p": frac(p), "first_matching_n": first_matching_n(verdicts)})
    return _record("exact-small-n", "brute-force optimum is at least the construction weight; verdicts reported",
                   ok, table=rows)


def check_region(ns=(4, 5)) -> dict:
    out = []
    for n in ns:
        rep = rb_region(2, 2, n)
        out.append({"n": n, "points": len(rep.points), "slack": frac(rep.slack),
                    "slack_swapped": frac(rep.slack_swapped)})
    ok = all(out[i]["slack"]["decimal"] > out[i + 1]["slack"]["decimal"] for i in range(len(out) - 1))
    return _record("rb-region", "points lie in the unit box above R+B=1; slack over the line reported", ok,
                   rows=out)


def check_random(seed: int, samples: int = 200_000, threads: int = 1) -> dict:
    H = eye(2, 2)
    exact = exact_ifree_probability(7, Fraction(1, 2), H)
    s7 = ifree_probability(7, Fraction(1, 2), H, samples, seed, threads)
    s8 = ifree_probability(8, Fraction(1, 2), H, samples, seed + 1, threads)
    z = abs(s7.estimate - float(exact)) / s7.sigma if s7.sigma else 0.0
    ok = z <= 3 and s7.bound_ok and s8.bound_ok
    return _record("ifree-probability", "Monte Carlo agrees with enumeration; estimate above construction bound", ok,
                   exact=frac(exact), estimate_n7=s7.estimate, z=z, bound_n7=s7.bound,
                   estimate_n8=s8.estimate, bound_n8=s8.bound)


def _suite_checks(suite: str, seed: int, threads: int):
    if suite == "facts":
        return [(check_turan, (seed,)), (check_extremal_weights, ()), (check_compare, ()),
                (check_difference, ()), (check_colordeg, (seed,)), (check_degree_sums, (seed,))]
    if suite == "types":
        return [(check_kappa_grid, ()), (check_a1_counterexample, ()), (check_core_structure, ()),
                (check_lambda_certificates, ())]
    if suite == "exact":
        return [(check_exact_small, ())]
    if suite == "region":
        return [(check_region, ())]
    if suite == "random":
        return [(check_random, (seed, 200_000, threads))]
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def _run_one(item):
    fn, args = item
    t0 = time.perf_counter()
    try:
        rec = fn(*args)
    except TheoremCheckError as exc:
        rec = _record(fn.__name__, "raised a check failure", False, error=str(exc))
    return rec, time.perf_counter() - t0


def verify_suite(suite: str, seed: int = 0, threads: int = 1) -> dict:
    items = _suite_checks(suite, seed, threads)
    if threads > 1 and len(items) > 1 and suite != "random":
        with ProcessPoolExecutor(min(threads, len(items))) as ex:
            results = list(ex.map(_run_one, items))
    else:
        results = [_run_one(it) for it in items]
    checks = [r for r, _ in results]
    config = {"suite": suite, "seed": seed}
    return {
        "version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "timing": {c["name"]: t for c, (_, t) in zip(checks, results)},
    }
