"""Forbidden patterns: containment, copy counting and constructive lemmas.

A pattern is a two-coloured complete graph c(H): the pairs listed in ``edges``
are red, all others blue. An igraph contains the pattern when its vertices can
be mapped injectively so that red pattern pairs land in C_r and blue pattern
pairs in C_b. White pairs belong to neither class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .igraph import BLUE, GREEN, RED, WHITE, Graph, IGraph


@dataclass(frozen=True)
class Pattern:
    h: int
    edges: frozenset = frozenset()
    eye_params: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        norm = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        for u, v in norm:
            if u == v or not (0 <= u < self.h and 0 <= v < self.h):
                raise ValueError(f"bad pattern pair {(u, v)}")
        object.__setattr__(self, "edges", norm)

    def is_red(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @cached_property
    def graph(self) -> IGraph:
        return IGraph.from_pairs(
            self.h,
            {(u, v): (RED if self.is_red(u, v) else BLUE) for u, v in combinations(range(self.h), 2)},
        )

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Search order: larger red degree first, ties by index."""
        deg = [sum(self.is_red(u, v) for v in range(self.h) if v != u) for u in range(self.h)]
        return tuple(sorted(range(self.h), key=lambda u: (-deg[u], u)))

    @cached_property
    def compiled(self) -> tuple[list[int], list[int]]:
        order = self.order
        pred_red, pred_blue = [], []
        for i, u in enumerate(order):
            r = b = 0
            for j in range(i):
                if self.is_red(u, order[j]):
                    r |= 1 << j
                else:
                    b |= 1 << j
            pred_red.append(r)
            pred_blue.append(b)
        return pred_red, pred_blue

    def swapped(self) -> "Pattern":
        """Exchange red and blue pattern pairs (the complement graph)."""
        comp = {(u, v) for u, v in combinations(range(self.h), 2)} - set(self.edges)
        return Pattern(self.h, frozenset(comp))

    def to_text(self) -> str:
        return f"h={self.h}\n" + "".join(f"{u} {v}\n" for u, v in sorted(self.edges))

    @classmethod
    def from_text(cls, text: str) -> "Pattern":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("h="):
            raise ValueError("pattern text must start with h=<k>")
        h = int(lines[0][2:])
        edges = []
        for ln in lines[1:]:
            u, v = ln.replace(",", " ").split()
            edges.append((int(u), int(v)))
        return cls(h, frozenset(edges))


def eye(a: int, b: int) -> Pattern:
    """The eye K_{a+b} minus a K_b: vertices a..a+b-1 form the blue b-set."""
    if a < 1 or b < 2:
        raise ValueError(f"eye needs a >= 1 and b >= 2, got ({a}, {b})")
    h = a + b
    edges = {(u, v) for u, v in combinations(range(h), 2) if u < a}
    return Pattern(h, frozenset(edges), (a, b))


def _unorder(H: Pattern, image: Sequence[int]) -> tuple[int, ...]:
    emb = [0] * H.h
    for pos, u in enumerate(H.order):
        emb[u] = image[pos]
    return tuple(emb)


def is_embedding(C: IGraph, H: Pattern, emb: Sequence[int]) -> bool:
    if len(emb) != H.h or len(set(emb)) != H.h:
        return False
    for u, v in combinations(range(H.h), 2):
        c = C.codes[emb[u] * C.n + emb[v]]
        if not c & (1 if H.is_red(u, v) else 2):
            return False
    return True


def contains(C: IGraph, H: Pattern, *, within: Iterable[int] | None = None,
             through: int | None = None) -> tuple[int, ...] | None:
    """A witness embedding (host vertex per pattern vertex) or None.

    ``within`` restricts the image to a vertex subset; ``through`` forces a
    host vertex into the image.
    """
    if H.h > C.n:
        return None
    allowed = ((1 << C.n) - 1) if within is None else sum(1 << v for v in set(within))
    must = -1 if through is None else through
    if must >= 0 and not allowed >> must & 1:
        return None
    pr, pb = H.compiled
    image = kernels.find_embedding(C.red, C.blue, allowed, must, pr, pb)
    return None if image is None else _unorder(H, image)


def is_free(C: IGraph, H: Pattern) -> bool:
    return contains(C, H) is None


def copy_masks(C: IGraph, H: Pattern) -> list[int]:
    """Bitmasks of the vertex subsets that carry a copy of H."""
    if H.h > C.n:
        return []
    pr, pb = H.compiled
    return kernels.copy_subsets(C.red, C.blue, C.n, pr, pb)


def count_copies(C: IGraph, H: Pattern) -> int:
    """Number of h-subsets of V(C) admitting at least one embedding of H."""
    return len(copy_masks(C, H))


def greedy_whiten(C: IGraph, H: Pattern) -> IGraph:
    """Whiten pairs until C is H-free.

    Each round whitens the pair lying inside the most copy subsets (ties go to
    the lexicographically first pair); copies are then recounted. No bound on
    the number of whitened pairs is claimed.
    """
    G = C
    while True:
        masks = copy_masks(G, H)
        if not masks:
            return G
        cover: dict[tuple[int, int], int] = {}
        for mask in masks:
            vs = [v for v in range(G.n) if mask >> v & 1]
            for u, v in combinations(vs, 2):
                if G.codes[u * G.n + v] != WHITE:
                    cover[(u, v)] = cover.get((u, v), 0) + 1
        pair = min(cover, key=lambda e: (-cover[e], e))
        G = G.recolor({pair: WHITE})


# forbidden configurations next to blowups of the extremal types ---------

@dataclass(frozen=True)
class Violation:
    kind: str  # "vertex" or "edge"
    vertices: tuple[int, ...]
    part: int
    witness: tuple[int, ...]  # embedding of eye(a, b) built from the configuration


@dataclass(frozen=True)
class ViolationReport:
    a: int
    b: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _validate_parts(G: IGraph, parts: Sequence[Sequence[int]], inside_bit: int) -> list[int]:
    seen: set[int] = set()
    for P in parts:
        if not P:
            raise ValueError("blowup parts must be nonempty")
        for v in P:
            if v in seen or not 0 <= v < G.n:
                raise ValueError(f"bad or repeated vertex {v} in blowup parts")
            seen.add(v)
    for i, P in enumerate(parts):
        for u, v in combinations(P, 2):
            if not G.codes[u * G.n + v] & inside_bit:
                raise ValueError(f"pair {(u, v)} inside part {i} has the wrong colour")
        for Q in parts[i + 1:]:
            for u in P:
                for v in Q:
                    if G.codes[u * G.n + v] != GREEN:
                        raise ValueError(f"pair {(u, v)} across parts is not green")
    return sorted(seen)


def _nbrs(G: IGraph, z: int, bit: int, part: Sequence[int]) -> list[int]:
    return [y for y in part if G.codes[z * G.n + y] & bit]


def check_findIa(G: IGraph, parts: Sequence[Sequence[int]], a: int, b: int) -> ViolationReport:
    """Configurations next to a blowup of a green-joined blue a-clique that force eye(a, b).

    Parts must be internally blue (in the two-coloured sense) and pairwise
    green. Reports (1) outside vertices z with a red neighbour in every part
    and at least b in some part, and (2) red pairs zz' outside the blowup with
    b common red neighbours in one part and a common red neighbour in all but
    one of the other parts.
    """
    if len(parts) != a:
        raise ValueError(f"expected {a} parts, got {len(parts)}")
    inside = set(_validate_parts(G, parts, 2))
    outside = [z for z in range(G.n) if z not in inside]
    found = []
    for z in outside:
        nb = [_nbrs(G, z, 1, P) for P in parts]
        if not all(nb):
            continue
        for j in range(a):
            if len(nb[j]) >= b:
                hub = [z] + [nb[i][0] for i in range(a) if i != j]
                found.append(Violation("vertex", (z,), j, tuple(hub + nb[j][:b])))
                break
    if a >= 2:
        for z, z2 in combinations(outside, 2):
            if not G.codes[z * G.n + z2] & 1:
                continue
            common = [[y for y in P if G.codes[z * G.n + y] & 1 and G.codes[z2 * G.n + y] & 1] for P in parts]
            for j in range(a):
                others = [i for i in range(a) if i != j and common[i]]
                if len(common[j]) >= b and len(others) >= a - 2:
                    hub = [z, z2] + [common[i][0] for i in others[:a - 2]]
                    found.append(Violation("edge", (z, z2), j, tuple(hub + common[j][:b])))
                    break
    return ViolationReport(a, b, tuple(found))


def check_findIb(G: IGraph, parts: Sequence[Sequence[int]], a: int, b: int) -> ViolationReport:
    """Configurations next to a blowup of a green-joined red (b-1)-clique that force eye(a, b).

    Parts must be internally red and pairwise green. Reports (1) outside
    vertices z with a blue neighbour in every part and at least a+1 red
    neighbours in some part, and (2) blue pairs zz' outside the blowup with a+1
    common red neighbours and a common blue neighbour in one part, and a common
    blue neighbour in all but one of the other parts.
    """
    if len(parts) != b - 1:
        raise ValueError(f"expected {b - 1} parts, got {len(parts)}")
    inside = set(_validate_parts(G, parts, 1))
    outside = [z for z in range(G.n) if z not in inside]
    found = []
    for z in outside:
        bn = [_nbrs(G, z, 2, P) for P in parts]
        if not all(bn):
            continue
        for j in range(b - 1):
            rn = _nbrs(G, z, 1, parts[j])
            if len(rn) >= a + 1:
                yj = bn[j][0]
                bset = [z] + [bn[i][0] for i in range(b - 1)]
                hub = [y for y in rn if y != yj][:a]
                found.append(Violation("vertex", (z,), j, tuple(hub + bset)))
                break
    for z, z2 in combinations(outside, 2):
        if not G.codes[z * G.n + z2] & 2:
            continue

        def common(P, bit):
            return [y for y in P if G.codes[z * G.n + y] & bit and G.codes[z2 * G.n + y] & bit]

        cb = [common(P, 2) for P in parts]
        for j in range(b - 1):
            cr = common(parts[j], 1)
            others = [i for i in range(b - 1) if i != j and cb[i]]
            if len(cr) >= a + 1 and cb[j] and len(others) >= b - 3:
                yj = cb[j][0]
                bset = ([z, z2, yj] + [cb[i][0] for i in others[:max(b - 3, 0)]])[:b]
                hub = [y for y in cr if y != yj][:a]
                found.append(Violation("edge", (z, z2), j, tuple(hub + bset)))
                break
    return ViolationReport(a, b, tuple(found))


# independent transversals ------------------------------------------------

def _independent_transversal(adj: Sequence[int], parts: Sequence[Sequence[int]]) -> list[int] | None:
    chosen: list[int] = []

    def rec(i, blocked):
        if i == len(parts):
            return True
        for v in parts[i]:
            if not blocked >> v & 1:
                chosen.append(v)
                if rec(i + 1, blocked | adj[v] | (1 << v)):
                    return True
                chosen.pop()
        return False

    return list(chosen) if rec(0, 0) else None


def _independent_set(adj: Sequence[int], pool: Sequence[int], t: int) -> list[int] | None:
    for combo in combinations(pool, t):
        if all(not adj[u] >> v & 1 for u, v in combinations(combo, 2)):
            return list(combo)
    return None


def transversal_independent(G: Graph, parts: Sequence[Sequence[int]], t: int = 1) -> list[int] | None:
    """An independent set with t vertices in every part, or None.

    For t = 1 this is an exhaustive search, so it succeeds whenever such a set
    exists (in particular when e(G) < m^2). For t > 1 the parts are first
    covered by disjoint independent t-sets, which become the vertices of an
    auxiliary graph; an independent transversal there gives the answer. This
    succeeds when e(G) < (m/2t)^2 and m > 2t; beyond that it falls back to a
    direct search.
    """
    sizes = {len(P) for P in parts}
    if len(sizes) > 1:
        raise ValueError("parts must have equal sizes")
    if t < 1:
        raise ValueError("t must be positive")
    if t == 1:
        return _independent_transversal(G.adj, parts)

    blocks: list[list[list[int]]] = []
    for P in parts:
        pool = list(P)
        found = []
        while True:
            s = _independent_set(G.adj, pool, t)
            if s is None:
                break
            found.append(s)
            pool = [v for v in pool if v not in s]
        blocks.append(found)
    if all(blocks):
        ids = [(i, k) for i, bl in enumerate(blocks) for k in range(len(bl))]
        index = {key: x for x, key in enumerate(ids)}
        aux = [0] * len(ids)
        for x, (i, k) in enumerate(ids):
            vs = blocks[i][k]
            for y, (i2, k2) in enumerate(ids):
                if i2 != i and any(G.adj[u] >> w & 1 for u in vs for w in blocks[i2][k2]):
                    aux[x] |= 1 << y
        aux_parts = [[index[(i, k)] for k in range(len(bl))] for i, bl in enumerate(blocks)]
        pick = _independent_transversal(aux, aux_parts)
        if pick is not None:
            return [v for x in pick for v in blocks[ids[x][0]][ids[x][1]]]

    chosen: list[int] = []

    def rec(i, blocked):
        if i == len(parts):
            return True
        for combo in combinations([v for v in parts[i] if not blocked >> v & 1], t):
            if any(G.adj[u] >> v & 1 for u, v in combinations(combo, 2)):
                continue
            nb = blocked
            for v in combo:
                nb |= G.adj[v] | (1 << v)
            chosen.extend(combo)
            if rec(i + 1, nb):
                return True
            del chosen[-t:]
        return False

    return list(chosen) if rec(0, 0) else None
