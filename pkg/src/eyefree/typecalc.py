"""Type calculus: exact p-values, p-cores, describing, type enumeration, kappa.

The p-value of a type is the maximum of x^T W x over the simplex. A global
maximiser x* satisfies (W x*)_u = lambda on its support and <= lambda off it.
If the linear system for a support S (row sums equal, coordinates summing to
one) is singular, there is a zero-sum direction z with W_S z constant; moving
along z keeps the value fixed until a coordinate vanishes, so some smaller
support attains the same value. Enumerating nonsingular supports therefore
finds lambda exactly.

A type is p-core when no proper subtype has the same p-value. Since deleting
vertices can only lower the value, it is enough to test one-vertex deletions.

A type describes a pattern H when H embeds into a blowup with every part of
size h = |V(H)|. An embedding uses at most h vertices per part, so this is the
same as a map f from V(H) to V(tau) where pattern pairs inside one part agree
with that part's vertex colour and pairs across parts lie inside the edge
colour. ``describes`` searches such maps directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import isqrt
from typing import Sequence

from . import kernels
from .constructions import blowup, kappa_value, threshold
from .errors import TheoremCheckError
from .igraph import BLUE, GREEN, RED, IGraph, as_rat, check_probability, degrees, weight
from .pattern import Pattern, contains, eye
from .typegraph import TypeGraph

MAX_LAMBDA_K = 16
MAX_ENUM_K = 5


@dataclass(frozen=True)
class LambdaResult:
    value: Fraction
    x: tuple[Fraction, ...]
    support: tuple[int, ...]
    certificate: tuple[Fraction, ...]  # (W x)_u for every u

    def check(self) -> bool:
        """Stationarity on the support and KKT off it, exactly."""
        if sum(self.x) != 1 or any(v < 0 for v in self.x):
            return False
        on = set(self.support)
        for u, val in enumerate(self.certificate):
            if u in on and val != self.value:
                return False
            if u not in on and val > self.value:
                return False
        return True


def _solve_support(Wint: list[list[int]], S: Sequence[int]) -> tuple[Fraction, list[Fraction]] | None:
    """Solve W_S x = mu 1, sum x = 1 by fraction-free elimination; None if singular."""
    s = len(S)
    m = s + 1
    A = [[Wint[u][v] for v in S] + [-1, 0] for u in S]
    A.append([1] * s + [0, 1])
    prev = 1
    for c in range(m):
        piv = next((r for r in range(c, m) if A[r][c] != 0), None)
        if piv is None:
            return None
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
        rc = A[c]
        for r in range(c + 1, m):
            rr = A[r]
            f = rr[c]
            for j in range(c + 1, m + 1):
                rr[j] = (rr[j] * rc[c] - f * rc[j]) // prev
            rr[c] = 0
        prev = rc[c]
    sol = [Fraction(0)] * m
    for r in range(m - 1, -1, -1):
        acc = Fraction(A[r][m])
        for j in range(r + 1, m):
            if A[r][j]:
                acc -= A[r][j] * sol[j]
        sol[r] = acc / A[r][r]
    return sol[s], sol[:s]


def _int_weights(tau: TypeGraph, p: Fraction) -> tuple[list[list[int]], int]:
    d = p.denominator
    s = p.numerator
    w = {RED: s, BLUE: d - s, GREEN: d}
    k = tau.k
    return [[w[tau.codes[u * k + v]] for v in range(k)] for u in range(k)], d


def lambda_p(tau: TypeGraph, p) -> LambdaResult:
    """Exact p-value of ``tau`` with a maximiser and its stationarity certificate."""
    p = as_rat(p)
    check_probability(p)
    if tau.k > MAX_LAMBDA_K:
        raise ValueError(f"lambda_p supports at most {MAX_LAMBDA_K} type vertices")
    if tau.k == 0:
        raise ValueError("empty type")
    return _lambda_cached(tau.canonical(), tau.codes, tau.k, p)


@lru_cache(maxsize=None)
def _lambda_cached(_canon: bytes, codes: bytes, k: int, p: Fraction) -> LambdaResult:
    tau = TypeGraph(k, codes)
    Wint, d = _int_weights(tau, p)
    best = None
    for size in range(1, k + 1):
        for S in combinations(range(k), size):
            out = _solve_support(Wint, S)
            if out is None:
                continue
            mu, xs = out
            if any(v < 0 for v in xs):
                continue
            if best is None or mu > best[0]:
                best = (mu, S, xs)
    mu, S, xs = best
    x = [Fraction(0)] * k
    for u, v in zip(S, xs):
        x[u] = v
    cert = tuple(sum(Wint[u][v] * x[v] for v in range(k)) / d for u in range(k))
    res = LambdaResult(mu / d, tuple(x), tuple(u for u in S if x[u] != 0), cert)
    if not res.check():
        raise TheoremCheckError(f"lambda certificate fails for {tau.to_text()} at p={p}")
    return res


def quad_value(tau: TypeGraph, p, x: Sequence) -> Fraction:
    p = as_rat(p)
    W = tau.weight_matrix(p)
    k = tau.k
    return sum(W[u][v] * Fraction(x[u]) * Fraction(x[v]) for u in range(k) for v in range(k))


def is_p_core(tau: TypeGraph, p) -> bool:
    """True iff every one-vertex deletion has strictly smaller p-value."""
    if tau.k <= 1:
        return True
    lam = lambda_p(tau, p).value
    return all(lambda_p(tau.delete(v), p).value < lam for v in range(tau.k))


# describing ---------------------------------------------------------------

def describes(tau: TypeGraph, H: Pattern) -> bool:
    return _describes_cached(tau.codes, tau.k, H)


@lru_cache(maxsize=None)
def _describes_cached(codes: bytes, k: int, H: Pattern) -> bool:
    h = H.h
    order = H.order
    f = [0] * h

    def ok(i, t):
        u = order[i]
        for j in range(i):
            v = order[j]
            want = RED if H.is_red(u, v) else BLUE
            c = codes[t * k + t] if f[j] == t else codes[t * k + f[j]]
            if not c & want:
                return False
        return True

    def rec(i):
        if i == h:
            return True
        for t in range(k):
            if ok(i, t):
                f[i] = t
                if rec(i + 1):
                    return True
        return False

    return rec(0)


def describes_by_blowup(tau: TypeGraph, H: Pattern) -> bool:
    """Reference check: containment in the blowup with all parts of size h."""
    return contains(blowup(tau, [H.h] * tau.k), H) is not None


# enumeration ----------------------------------------------------------------

def type_from_canonical(k: int, code: bytes) -> TypeGraph:
    """Rebuild a type from its column-major canonical code."""
    codes = bytearray(k * k)
    pos = 0
    for j in range(k):
        codes[j * k + j] = code[pos]
        pos += 1
        for i in range(j):
            codes[i * k + j] = codes[j * k + i] = code[pos]
            pos += 1
    return TypeGraph(k, bytes(codes))


@lru_cache(maxsize=None)
def _types_of_size(k: int) -> tuple[TypeGraph, ...]:
    if k == 0:
        return (TypeGraph(0, b""),)
    seen: dict[bytes, None] = {}
    for base in _types_of_size(k - 1):
        m = k - 1
        for vc in (RED, BLUE):
            for mask in range(3 ** m):
                codes = bytearray(k * k)
                for u in range(m):
                    codes[u * k: u * k + m] = base.codes[u * m: u * m + m]
                codes[m * k + m] = vc
                e = mask
                for u in range(m):
                    c = e % 3 + 1
                    e //= 3
                    codes[u * k + m] = codes[m * k + u] = c
                seen.setdefault(kernels.canonical_code(k, bytes(codes)), None)
    return tuple(type_from_canonical(k, c) for c in sorted(seen))


def enumerate_types(k: int) -> list[TypeGraph]:
    """All types on k vertices up to colour-preserving isomorphism, canonical and sorted."""
    if not 1 <= k <= MAX_ENUM_K:
        raise ValueError(f"type enumeration supports 1 <= k <= {MAX_ENUM_K}")
    return list(_types_of_size(k))


# kappa ------------------------------------------------------------------------

@dataclass(frozen=True)
class KappaResult:
    value: Fraction
    maximizers: tuple[TypeGraph, ...]
    kmax: int
    at_boundary: bool  # some maximiser uses kmax vertices
    examined: int = field(default=0, compare=False)


def kappa_search(H: Pattern, p, kmax: int) -> KappaResult:
    """Max p-value over p-core types with at most kmax vertices not describing H."""
    p = as_rat(p)
    check_probability(p)
    if not 1 <= kmax <= MAX_ENUM_K:
        raise ValueError(f"kmax must be in 1..{MAX_ENUM_K}")
    best = None
    maxim: list[TypeGraph] = []
    examined = 0
    for k in range(1, kmax + 1):
        for tau in _types_of_size(k):
            if describes(tau, H):
                continue
            examined += 1
            lam = lambda_p(tau, p).value
            if best is not None and lam < best:
                continue
            if not is_p_core(tau, p):
                continue
            if best is None or lam > best:
                best = lam
                maxim = [tau]
            else:
                maxim.append(tau)
    return KappaResult(best, tuple(maxim), kmax, any(t.k == kmax for t in maxim), examined)


@dataclass(frozen=True)
class KappaFormula:
    value: Fraction
    regime: str  # 'B' (blue cliques win), 'R' (red cliques win) or 'both'
    threshold: Fraction
    blue_branch: Fraction
    red_branch: Fraction


def kappa_formula(a: int, b: int, p) -> KappaFormula:
    """max(1 - p/a, 1 - (1-p)/(b-1)) with the regime and the threshold a/(a+b-1)."""
    if a < 1 or b < 2:
        raise ValueError("need a >= 1 and b >= 2")
    p = as_rat(p)
    check_probability(p)
    blue = 1 - p / a
    red = 1 - (1 - p) / (b - 1)
    regime = "B" if blue > red else "R" if red > blue else "both"
    return KappaFormula(kappa_value(a, b, p), regime, threshold(a, b), blue, red)


# structure of p-core types ------------------------------------------------------

@dataclass
class CoreReport:
    p_core: bool
    describes: bool | None
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def core_structure_check(tau: TypeGraph, p, eye_ab: tuple[int, int] | None = None) -> CoreReport:
    """Check the edge structure of a p-core type, and the eye-specific consequences.

    Non-green edges may only be blue between red vertices (p < 1/2) or red
    between blue vertices (p > 1/2). When ``eye_ab`` is given and the type does
    not describe that eye: one vertex colour only; with blue vertices at most
    a vertices; with red vertices every green degree below b-1.
    """
    p = as_rat(p)
    core = is_p_core(tau, p)
    viol: list[str] = []
    desc = None
    if not core:
        return CoreReport(False, None, viol)
    k = tau.k
    half = Fraction(1, 2)
    for u, v in combinations(range(k), 2):
        c = tau.codes[u * k + v]
        if c == GREEN:
            continue
        cu, cv = tau.codes[u * k + u], tau.codes[v * k + v]
        if c == BLUE and cu == RED and cv == RED and p < half:
            continue
        if c == RED and cu == BLUE and cv == BLUE and p > half:
            continue
        viol.append(f"edge {u}{v} coloured {'rb'[c - 1]} between {'rb'[cu - 1]}{'rb'[cv - 1]} vertices")
    if eye_ab is not None:
        a, b = eye_ab
        desc = describes(tau, eye(a, b))
        if not desc:
            vcols = {tau.codes[u * k + u] for u in range(k)}
            if len(vcols) > 1:
                viol.append("mixed vertex colours")
            if BLUE in vcols and k > a:
                viol.append(f"{k} vertices with blue vertices present, more than a={a}")
            if RED in vcols:
                for u in range(k):
                    if tau.green_degree(u) >= b - 1:
                        viol.append(f"vertex {u} has green degree {tau.green_degree(u)} >= b-1={b - 1}")
    return CoreReport(True, desc, viol)


# peeling low-degree vertices -------------------------------------------------------

@dataclass(frozen=True)
class PeelResult:
    removed: tuple[int, ...]
    remainder: IGraph
    precondition: bool  # w_p(G) > (kappa - delta) C(n,2)
    conclusion: bool  # |S| <= sqrt(delta) n and the remainder has large minimum p-degree


def _sqrt_rat(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def peel_min_degree(G: IGraph, p, kappa, delta) -> PeelResult:
    """Delete a minimum p-degree vertex while it has p-degree <= (kappa - sqrt(delta)) i.

    ``i`` is the current vertex count. ``delta`` must be the square of a
    rational so the threshold stays exact.
    """
    p, kappa, delta = as_rat(p), as_rat(kappa), as_rat(delta)
    root = _sqrt_rat(delta)
    if root is None:
        raise ValueError("delta must be the square of a rational")
    n = G.n
    alive = list(range(n))
    removed = []
    while alive:
        H = G.induced(alive)
        i = len(alive)
        dps = [degrees(H, x, p).d_p for x in range(i)]
        j = min(range(i), key=lambda t: (dps[t], t))
        if dps[j] > (kappa - root) * i:
            break
        removed.append(alive.pop(j))
    rem = G.induced(alive)
    pre = weight(G, p) > (kappa - delta) * Fraction(n * (n - 1), 2)
    concl = len(removed) <= root * n
    return PeelResult(tuple(removed), rem, pre, concl)
